//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image error at {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("duplicate clip_id `{0}` in manifest")]
    DuplicateClipId(String),

    #[error("unknown consistency `{0}` (expected one of the five IDDSI levels)")]
    UnknownConsistency(String),

    #[error("clip `{clip_id}`: manifest declares {declared} frames but {found} found on disk")]
    FrameCountMismatch {
        clip_id: String,
        declared: usize,
        found: usize,
    },

    #[error("clip `{clip_id}`: annotation indices bpm={bpm} uesc={uesc} invalid for {n_frames} frames")]
    AnnotationOutOfRange {
        clip_id: String,
        bpm: usize,
        uesc: usize,
        n_frames: usize,
    },

    #[error("missing annotation for clip `{0}`")]
    MissingAnnotation(String),

    #[error("split ratios must be three positive values summing to 1 (got {0:?})")]
    BadSplitRatios([f64; 3]),

    #[error("{requested} nonempty partitions requested but only {subjects} subjects available")]
    TooFewSubjects { subjects: usize, requested: usize },

    #[error("frame of size {h}x{w} is smaller than crop size {size}")]
    FrameTooSmall { h: usize, w: usize, size: usize },

    #[error("expected frame shape {expected_h}x{expected_w}, got {h}x{w}")]
    BadFrameShape {
        expected_h: usize,
        expected_w: usize,
        h: usize,
        w: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid network spec: {0}")]
    InvalidSpec(String),

    #[error("training data invalid: {0}")]
    InvalidTrainingData(String),

    #[error("checkpoint error at {path}: {msg}")]
    Checkpoint { path: PathBuf, msg: String },

    #[error("activation map is identically zero; no localization for this frame")]
    EmptyActivation,

    #[error("mask is empty")]
    EmptyMask,

    #[error("C2 and C4 landmarks coincide")]
    CoincidentLandmarks,

    #[error("metric input invalid: {0}")]
    MetricInput(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("post-hoc comparison requires a significant omnibus test (p={p:.4} >= alpha={alpha})")]
    OmnibusNotSignificant { p: f64, alpha: f64 },

    #[error("phantom config invalid: {0}")]
    PhantomConfig(String),

    #[error("video decoding is not built in; supply the clip as a directory of frames: {0}")]
    VideoNotSupported(PathBuf),

    #[error("no classifier plugin registered under `{0}`")]
    UnknownPlugin(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
