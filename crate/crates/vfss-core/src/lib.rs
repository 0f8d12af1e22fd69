//! vfss-core — weakly-supervised analysis of videofluoroscopic swallowing
//! studies (VFSS).
//!
//! The toolkit detects the pharyngeal phase of a swallow frame-by-frame with
//! a small trainable CNN and then localizes the bolus during that phase by
//! refining the classifier's class activation maps. Training needs only
//! phase-boundary frame labels; no pixel-level supervision is used anywhere.
//!
//! Pipeline stages:
//!
//! 1. **data** – clip manifests, phase annotations, frame labeling,
//!    subject-wise dataset splits.
//! 2. **preprocess** – center crop to 341×341, CLAHE contrast enhancement,
//!    normalization, resize to the network input side.
//! 3. **cnn** – the CNN3/CNN4 binary frame classifiers (built from scratch),
//!    training with Adam and a stepped learning-rate schedule, checkpoints.
//! 4. **decode** – run-based decoding of per-frame P/N sequences into
//!    BPM/UESC event frames.
//! 5. **cam** – Grad-CAM activation maps from the trained classifier.
//! 6. **localize** – activation-map refinement into a bolus mask, centroid
//!    and bounding box (threshold, morphology, darkest-pixel seeding, convex
//!    hull, morphological geodesic active contour).
//! 7. **geometry** – mapping pixel coordinates into the C2–C4 spine frame.
//! 8. **metrics** – frame F1, P3, Pearson r, normalized RMSE, IoU, bounding
//!    box F1 sweeps, Friedman test with mean-rank post-hoc comparisons.
//! 9. **phantom** – synthetic clips with analytically known ground truth,
//!    used as the evaluation oracle.
//! 10. **report** – CSV and text report emission, overlay rendering.

pub mod cam;
pub mod cnn;
pub mod data;
pub mod decode;
pub mod error;
pub mod frame;
pub mod geometry;
pub mod localize;
pub mod metrics;
pub mod morph;
pub mod phantom;
pub mod preprocess;
pub mod report;

pub use error::{Error, Result};
