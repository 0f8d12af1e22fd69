//! Evaluation metrics: frame-level F1, P3, Pearson r, normalized RMSE,
//! bounding-box IoU and F1 sweeps, the Friedman test, and mean-rank
//! post-hoc comparisons.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::decode::{PhaseLabel, PhaseSequence};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Axis-aligned bounding box in integer pixel coordinates, `min <= max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BBox {
    pub x_min: i64,
    pub y_min: i64,
    pub x_max: i64,
    pub y_max: i64,
}

impl BBox {
    pub fn new(x_min: i64, y_min: i64, x_max: i64, y_max: i64) -> Result<Self> {
        if x_min > x_max || y_min > y_max {
            return Err(Error::MetricInput(format!(
                "malformed box ({x_min},{y_min},{x_max},{y_max})"
            )));
        }
        Ok(BBox {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    fn area(&self) -> f64 {
        (self.x_max - self.x_min) as f64 * (self.y_max - self.y_min) as f64
    }
}

/// F1-score of class P between predicted and ground-truth sequences.
///
/// Returns 0 when precision + recall is 0.
pub fn f1_frames(pred: &PhaseSequence, gt: &PhaseSequence) -> Result<f64> {
    if pred.len() != gt.len() {
        return Err(Error::MetricInput(format!(
            "sequence lengths differ: {} vs {}",
            pred.len(),
            gt.len()
        )));
    }
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    for (p, g) in pred.labels().iter().zip(gt.labels()) {
        match (p, g) {
            (PhaseLabel::P, PhaseLabel::P) => tp += 1,
            (PhaseLabel::P, PhaseLabel::N) => fp += 1,
            (PhaseLabel::N, PhaseLabel::P) => fn_ += 1,
            (PhaseLabel::N, PhaseLabel::N) => {}
        }
    }
    Ok(f1_from_counts(tp, fp, fn_))
}

/// F1 from raw TP/FP/FN counts; 0 when precision + recall is 0.
pub fn f1_from_counts(tp: u64, fp: u64, fn_: u64) -> f64 {
    let precision = if tp + fp == 0 {
        0.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let recall = if tp + fn_ == 0 {
        0.0
    } else {
        tp as f64 / (tp + fn_) as f64
    };
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Percentage of events whose predicted frame lies within `tol` frames of the
/// ground truth. Absent predictions count as failures.
pub fn p3(pred: &[Option<usize>], gt: &[usize], tol: usize) -> Result<f64> {
    if pred.is_empty() || gt.is_empty() {
        return Err(Error::MetricInput("p3 on empty event lists".into()));
    }
    if pred.len() != gt.len() {
        return Err(Error::MetricInput(format!(
            "event list lengths differ: {} vs {}",
            pred.len(),
            gt.len()
        )));
    }
    let hits = pred
        .iter()
        .zip(gt)
        .filter(|(p, g)| p.is_some_and(|p| p.abs_diff(**g) <= tol))
        .count();
    Ok(100.0 * hits as f64 / gt.len() as f64)
}

/// Pearson product-moment correlation coefficient.
pub fn pearson_r(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::MetricInput(format!(
            "series lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::MetricInput(
            "pearson_r needs at least two samples".into(),
        ));
    }
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (x, y) in a.iter().zip(b) {
        let da = x - mean_a;
        let db = y - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::UndefinedCorrelation(
            "at least one series is constant".into(),
        ));
    }
    Ok((cov / (var_a * var_b).sqrt()).clamp(-1.0, 1.0))
}

/// Root mean square Euclidean centroid error, normalized by the C2–C4
/// distance `d`.
pub fn rmse_norm(pred: &[Point], gt: &[Point], d: f64) -> Result<f64> {
    if pred.is_empty() || pred.len() != gt.len() {
        return Err(Error::MetricInput(
            "rmse_norm needs equal nonzero-length point lists".into(),
        ));
    }
    if d <= 0.0 {
        return Err(Error::MetricInput("rmse_norm needs d > 0".into()));
    }
    let mse = pred
        .iter()
        .zip(gt)
        .map(|(p, g)| {
            let dx = p.x - g.x;
            let dy = p.y - g.y;
            dx * dx + dy * dy
        })
        .sum::<f64>()
        / pred.len() as f64;
    Ok(mse.sqrt() / d)
}

/// Per-frame normalized Euclidean centroid errors (for medians/IQRs and the
/// Friedman blocks).
pub fn norm_errors(pred: &[Point], gt: &[Point], d: f64) -> Result<Vec<f64>> {
    if pred.len() != gt.len() {
        return Err(Error::MetricInput("point list lengths differ".into()));
    }
    if d <= 0.0 {
        return Err(Error::MetricInput("norm_errors needs d > 0".into()));
    }
    Ok(pred.iter().zip(gt).map(|(p, g)| p.dist(g) / d).collect())
}

/// Intersection over union of two boxes; 0 for disjoint boxes and for a pair
/// of degenerate zero-area boxes.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let ix = (a.x_max.min(b.x_max) - a.x_min.max(b.x_min)).max(0) as f64;
    let iy = (a.y_max.min(b.y_max) - a.y_min.max(b.y_min)).max(0) as f64;
    let inter = ix * iy;
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        0.0
    } else {
        inter / union
    }
}

/// Inclusive threshold range with a fixed step, e.g. 0.25..=0.75 by 0.05.
pub fn threshold_range(start: f64, end: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let n = ((end - start) / step).round() as usize;
    for i in 0..=n {
        out.push(start + i as f64 * step);
    }
    out
}

/// F1 of bounding-box detection for each IoU threshold.
///
/// At each threshold: TP are frames with IoU >= t; FP are detected frames
/// with IoU < t; FN are frames with no detection or with IoU < t.
pub fn bbox_f1_sweep(
    pred: &[Option<BBox>],
    gt: &[BBox],
    thresholds: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if pred.len() != gt.len() {
        return Err(Error::MetricInput(format!(
            "box list lengths differ: {} vs {}",
            pred.len(),
            gt.len()
        )));
    }
    let ious: Vec<Option<f64>> = pred
        .iter()
        .zip(gt)
        .map(|(p, g)| p.as_ref().map(|p| iou(p, g)))
        .collect();
    let mut curve = Vec::with_capacity(thresholds.len());
    for &t in thresholds {
        if t <= 0.0 || t >= 1.0 {
            return Err(Error::MetricInput(format!(
                "IoU threshold {t} outside (0, 1)"
            )));
        }
        let mut tp = 0u64;
        let mut fp = 0u64;
        let mut fn_ = 0u64;
        for v in &ious {
            match v {
                Some(i) if *i >= t => tp += 1,
                Some(_) => {
                    fp += 1;
                    fn_ += 1;
                }
                None => fn_ += 1,
            }
        }
        curve.push((t, f1_from_counts(tp, fp, fn_)));
    }
    Ok(curve)
}

/// Result of the Friedman rank test over a blocks × treatments matrix.
#[derive(Debug, Clone)]
pub struct FriedmanResult {
    pub chi2: f64,
    pub df: usize,
    pub p_value: f64,
    pub mean_ranks: Vec<f64>,
    pub n_blocks: usize,
}

impl FriedmanResult {
    /// Compact rendering mirroring the conventional report line, e.g.
    /// `X2(4)=583.87, p<.001`.
    pub fn render(&self) -> String {
        if self.p_value < 0.001 {
            format!("X2({})={:.2}, p<.001", self.df, self.chi2)
        } else {
            format!(
                "X2({})={:.2}, p={:.3}",
                self.df,
                self.chi2,
                self.p_value
            )
        }
    }
}

/// Mid-ranks of one block (ties share the average rank), 1-based.
fn mid_ranks(row: &[f64]) -> Vec<f64> {
    let k = row.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| row[i].partial_cmp(&row[j]).expect("no NaN in blocks"));
    let mut ranks = vec![0.0; k];
    let mut i = 0;
    while i < k {
        let mut j = i;
        while j + 1 < k && row[order[j + 1]] == row[order[i]] {
            j += 1;
        }
        // positions i..=j hold equal values; average their 1-based ranks
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Friedman chi-squared test with mid-rank tie correction.
///
/// `matrix` rows are blocks (e.g. frames), columns are treatments (e.g.
/// models). The statistic uses the rank-sum formulation
/// `12/(n k (k+1)) * sum R_j^2 - 3 n (k+1)`, divided by the tie-correction
/// factor `1 - sum(t^3 - t) / (n k (k^2 - 1))`.
pub fn friedman(matrix: &[Vec<f64>]) -> Result<FriedmanResult> {
    let n = matrix.len();
    if n < 2 {
        return Err(Error::MetricInput("friedman needs >= 2 blocks".into()));
    }
    let k = matrix[0].len();
    if k < 2 {
        return Err(Error::MetricInput("friedman needs >= 2 treatments".into()));
    }
    if matrix.iter().any(|row| row.len() != k) {
        return Err(Error::MetricInput("ragged friedman matrix".into()));
    }

    let mut rank_sums = vec![0.0; k];
    let mut tie_term = 0.0;
    for row in matrix {
        let ranks = mid_ranks(row);
        for (s, r) in rank_sums.iter_mut().zip(&ranks) {
            *s += r;
        }
        // tie sizes within this block
        let mut sorted: Vec<f64> = row.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in blocks"));
        let mut i = 0;
        while i < k {
            let mut j = i;
            while j + 1 < k && sorted[j + 1] == sorted[i] {
                j += 1;
            }
            let t = (j - i + 1) as f64;
            tie_term += t * t * t - t;
            i = j + 1;
        }
    }

    let nf = n as f64;
    let kf = k as f64;
    let raw = 12.0 / (nf * kf * (kf + 1.0)) * rank_sums.iter().map(|r| r * r).sum::<f64>()
        - 3.0 * nf * (kf + 1.0);
    let correction = 1.0 - tie_term / (nf * kf * (kf * kf - 1.0));
    let df = k - 1;
    let (chi2, p_value) = if correction <= 0.0 {
        // all blocks fully tied: no evidence of differences
        (0.0, 1.0)
    } else {
        let chi2 = (raw / correction).max(0.0);
        let dist = ChiSquared::new(df as f64).expect("df >= 1");
        (chi2, 1.0 - dist.cdf(chi2))
    };

    Ok(FriedmanResult {
        chi2,
        df,
        p_value,
        mean_ranks: rank_sums.iter().map(|r| r / nf).collect(),
        n_blocks: n,
    })
}

/// Pairwise mean-rank comparison matrix.
#[derive(Debug, Clone)]
pub struct PosthocMatrix {
    pub alpha: f64,
    pub critical_difference: f64,
    /// `significant[i][j]` — treatments i and j differ at level alpha.
    pub significant: Vec<Vec<bool>>,
}

impl PosthocMatrix {
    /// Treatments significantly different from every other treatment.
    pub fn dominant(&self, mean_ranks: &[f64]) -> Vec<usize> {
        (0..mean_ranks.len())
            .filter(|&i| {
                (0..mean_ranks.len()).all(|j| {
                    i == j || (self.significant[i][j] && mean_ranks[i] < mean_ranks[j])
                })
            })
            .collect()
    }
}

/// Critical values q_alpha/sqrt(2) of the studentized range at infinite df,
/// indexed by the number of treatments k = 2..=10 (Nemenyi two-tailed test).
const NEMENYI_Q_05: [f64; 9] = [
    1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164,
];
const NEMENYI_Q_01: [f64; 9] = [
    2.576, 2.913, 3.113, 3.255, 3.364, 3.452, 3.526, 3.590, 3.646,
];

/// Pairwise comparison of treatment mean ranks against an HSD-style critical
/// difference (the mean-rank analogue used by common statistics packages
/// after a Friedman test). Requires a significant omnibus test.
pub fn posthoc_mean_ranks(result: &FriedmanResult, alpha: f64) -> Result<PosthocMatrix> {
    if result.p_value >= alpha {
        return Err(Error::OmnibusNotSignificant {
            p: result.p_value,
            alpha,
        });
    }
    mean_rank_comparison(result, alpha)
}

/// The ungated pairwise comparison (used by `posthoc_mean_ranks` once the
/// omnibus gate has passed).
pub fn mean_rank_comparison(result: &FriedmanResult, alpha: f64) -> Result<PosthocMatrix> {
    let k = result.mean_ranks.len();
    if !(2..=10).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "mean-rank comparison supports 2..=10 treatments, got {k}"
        )));
    }
    let q = if (alpha - 0.05).abs() < 1e-12 {
        NEMENYI_Q_05[k - 2]
    } else if (alpha - 0.01).abs() < 1e-12 {
        NEMENYI_Q_01[k - 2]
    } else {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} unsupported (use 0.05 or 0.01)"
        )));
    };
    let n = result.n_blocks as f64;
    let kf = k as f64;
    let cd = q * (kf * (kf + 1.0) / (6.0 * n)).sqrt();
    let mut significant = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                significant[i][j] =
                    (result.mean_ranks[i] - result.mean_ranks[j]).abs() > cd;
            }
        }
    }
    Ok(PosthocMatrix {
        alpha,
        critical_difference: cd,
        significant,
    })
}

/// Inter-rater agreement on pre-consensus event frames: Pearson r plus P3
/// at the 3-frame tolerance.
pub fn interrater_agreement(rater_a: &[usize], rater_b: &[usize]) -> Result<(f64, f64)> {
    let a_f: Vec<f64> = rater_a.iter().map(|&v| v as f64).collect();
    let b_f: Vec<f64> = rater_b.iter().map(|&v| v as f64).collect();
    let r = pearson_r(&a_f, &b_f)?;
    let a_opt: Vec<Option<usize>> = rater_a.iter().map(|&v| Some(v)).collect();
    let p = p3(&a_opt, rater_b, 3)?;
    Ok((r, p))
}

/// Median and inter-quartile range of a sample (linear interpolation
/// between order statistics).
pub fn median_iqr(values: &[f64]) -> Result<(f64, (f64, f64))> {
    if values.is_empty() {
        return Err(Error::MetricInput("median of empty sample".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let q = |p: f64| -> f64 {
        let idx = p * (sorted.len() - 1) as f64;
        let lo = idx.floor() as usize;
        let hi = idx.ceil() as usize;
        let w = idx - lo as f64;
        sorted[lo] * (1.0 - w) + sorted[hi] * w
    };
    Ok((q(0.5), (q(0.25), q(0.75))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn seq(s: &str) -> PhaseSequence {
        PhaseSequence::parse(s).unwrap()
    }

    #[test]
    fn f1_identities() {
        let gt = seq("NNPPPPNN");
        assert_abs_diff_eq!(f1_frames(&gt, &gt).unwrap(), 1.0);
        assert_abs_diff_eq!(f1_frames(&seq("NNNNNNNN"), &gt).unwrap(), 0.0);
    }

    #[test]
    fn f1_hand_counts() {
        // TP=2, FP=1, FN=2 -> precision 2/3, recall 1/2 -> F1 = 4/7
        let got = f1_frames(&seq("NPPPNNNN"), &seq("NNPPPPNN")).unwrap();
        assert_abs_diff_eq!(got, 4.0 / 7.0, epsilon = 1e-9);
    }

    #[test]
    fn f1_ignores_agreeing_true_negatives() {
        let base = f1_frames(&seq("NPPPNNNN"), &seq("NNPPPPNN")).unwrap();
        let padded = f1_frames(&seq("NPPPNNNNNNN"), &seq("NNPPPPNNNNN")).unwrap();
        assert_abs_diff_eq!(base, padded, epsilon = 1e-12);
    }

    #[test]
    fn f1_length_mismatch_errors() {
        assert!(f1_frames(&seq("NP"), &seq("NPP")).is_err());
    }

    #[test]
    fn p3_rules() {
        let exact = p3(&[Some(5), Some(9)], &[5, 9], 3).unwrap();
        assert_abs_diff_eq!(exact, 100.0);
        // absolute errors [0, 2, 4] at tol 3 -> 2/3
        let got = p3(&[Some(10), Some(12), Some(18)], &[10, 10, 14], 3).unwrap();
        assert_abs_diff_eq!(got, 200.0 / 3.0, epsilon = 1e-9);
        // one absent out of four, rest exact -> 75%
        let got = p3(&[Some(1), None, Some(3), Some(4)], &[1, 2, 3, 4], 3).unwrap();
        assert_abs_diff_eq!(got, 75.0, epsilon = 1e-12);
        assert!(p3(&[], &[], 3).is_err());
    }

    #[test]
    fn p3_shift_invariance() {
        let a = p3(&[Some(5), Some(9), None], &[6, 9, 1], 3).unwrap();
        let b = p3(&[Some(105), Some(109), None], &[106, 109, 101], 3).unwrap();
        assert_abs_diff_eq!(a, b);
    }

    #[test]
    fn pearson_basics() {
        let a = [1.0, 2.0, 3.0, 5.0];
        assert_abs_diff_eq!(pearson_r(&a, &a).unwrap(), 1.0, epsilon = 1e-12);
        let neg: Vec<f64> = a.iter().map(|v| -v).collect();
        assert_abs_diff_eq!(pearson_r(&a, &neg).unwrap(), -1.0, epsilon = 1e-12);
        // a=[1,2,3], b=[1,2,4]: r = 3/sqrt(28/3)
        let r = pearson_r(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap();
        assert_abs_diff_eq!(r, 3.0 / (28.0f64 / 3.0).sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(r, 0.9819805060619659, epsilon = 1e-9);
        assert!(pearson_r(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    }

    proptest! {
        #[test]
        fn pearson_affine_invariance(
            xs in proptest::collection::vec(-100.0..100.0f64, 3..20),
            scale in 0.01..50.0f64,
            shift in -100.0..100.0f64,
        ) {
            let ys: Vec<f64> = xs.iter().enumerate().map(|(i, v)| v * 0.5 + (i as f64)).collect();
            if pearson_r(&xs, &ys).is_err() { return Ok(()); }
            let xs2: Vec<f64> = xs.iter().map(|v| v * scale + shift).collect();
            let r1 = pearson_r(&xs, &ys).unwrap();
            let r2 = pearson_r(&xs2, &ys).unwrap();
            prop_assert!((r1 - r2).abs() < 1e-9);
        }

        #[test]
        fn iou_symmetry(
            ax in 0i64..50, ay in 0i64..50, aw in 1i64..40, ah in 1i64..40,
            bx in 0i64..50, by in 0i64..50, bw in 1i64..40, bh in 1i64..40,
        ) {
            let a = BBox::new(ax, ay, ax + aw, ay + ah).unwrap();
            let b = BBox::new(bx, by, bx + bw, by + bh).unwrap();
            prop_assert!((iou(&a, &b) - iou(&b, &a)).abs() < 1e-15);
            let v = iou(&a, &b);
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn rmse_norm_values() {
        let p = [Point::new(0.0, 0.0), Point::new(1.0, 1.0)];
        assert_abs_diff_eq!(rmse_norm(&p, &p, 5.0).unwrap(), 0.0);
        // every prediction offset by exactly d along one axis -> 1.0
        let off: Vec<Point> = p.iter().map(|q| Point::new(q.x + 5.0, q.y)).collect();
        assert_abs_diff_eq!(rmse_norm(&off, &p, 5.0).unwrap(), 1.0, epsilon = 1e-12);
        // errors 3 px and 4 px with d=5 -> sqrt(12.5)/5
        let pred = [Point::new(3.0, 0.0), Point::new(0.0, 4.0)];
        let gt = [Point::new(0.0, 0.0), Point::new(0.0, 0.0)];
        let got = rmse_norm(&pred, &gt, 5.0).unwrap();
        assert_abs_diff_eq!(got, (12.5f64).sqrt() / 5.0, epsilon = 1e-9);
        assert_abs_diff_eq!(got, 0.7071067811865476, epsilon = 1e-9);
    }

    #[test]
    fn rmse_scales_inversely_with_d() {
        let pred = [Point::new(3.0, 1.0), Point::new(7.0, 4.0)];
        let gt = [Point::new(0.0, 0.0), Point::new(2.0, 2.0)];
        let r1 = rmse_norm(&pred, &gt, 4.0).unwrap();
        let r2 = rmse_norm(&pred, &gt, 8.0).unwrap();
        assert_abs_diff_eq!(r1, 2.0 * r2, epsilon = 1e-12);
    }

    #[test]
    fn iou_values() {
        let a = BBox::new(0, 0, 10, 10).unwrap();
        assert_abs_diff_eq!(iou(&a, &a), 1.0);
        let b = BBox::new(20, 20, 30, 30).unwrap();
        assert_abs_diff_eq!(iou(&a, &b), 0.0);
        let c = BBox::new(5, 0, 15, 10).unwrap();
        assert_abs_diff_eq!(iou(&a, &c), 1.0 / 3.0, epsilon = 1e-12);
        // degenerate pair
        let d = BBox::new(3, 3, 3, 3).unwrap();
        assert_abs_diff_eq!(iou(&d, &d), 0.0);
    }

    #[test]
    fn sweep_hand_counts() {
        let gt =
            vec![BBox::new(0, 0, 10, 10).unwrap(); 4];
        // construct predictions with IoU 0.8, 0.5, 0.3, absent
        // iou([0,0,10,10],[0,0,10,a]) = a/10 for a<=10... use shifted boxes:
        // iou of [0,0,10,10] with [x,0,10+x,10] = (10-x)/(10+x)
        let mk = |x: i64| BBox::new(x, 0, 10 + x, 10).unwrap();
        // x s.t. (10-x)/(10+x): x=1 -> 9/11=0.818; x=3 -> 7/13=0.538; x=5 -> 5/15=0.333
        let pred = vec![Some(mk(1)), Some(mk(3)), Some(mk(5)), None];
        let curve = bbox_f1_sweep(&pred, &gt, &[0.45]).unwrap();
        // TP=2 (0.818, 0.538), FP=1 (0.333), FN=2 (0.333 + absent) -> F1 = 4/7
        assert_abs_diff_eq!(curve[0].1, 4.0 / 7.0, epsilon = 1e-12);
    }

    #[test]
    fn sweep_identities() {
        let gt = vec![BBox::new(0, 0, 8, 8).unwrap(); 3];
        let perfect: Vec<Option<BBox>> = gt.iter().copied().map(Some).collect();
        let thresholds = threshold_range(0.25, 0.75, 0.05);
        assert_eq!(thresholds.len(), 11);
        for (_, f1) in bbox_f1_sweep(&perfect, &gt, &thresholds).unwrap() {
            assert_abs_diff_eq!(f1, 1.0);
        }
        let absent: Vec<Option<BBox>> = vec![None; 3];
        for (_, f1) in bbox_f1_sweep(&absent, &gt, &thresholds).unwrap() {
            assert_abs_diff_eq!(f1, 0.0);
        }
    }

    #[test]
    fn friedman_identical_columns() {
        let matrix = vec![vec![1.0, 1.0, 1.0]; 4];
        let r = friedman(&matrix).unwrap();
        assert_abs_diff_eq!(r.chi2, 0.0);
        assert_abs_diff_eq!(r.p_value, 1.0);
        assert_eq!(r.df, 2);
    }

    #[test]
    fn friedman_hand_formula() {
        // 3 blocks all ranking treatments (1,2,3): chi2 = 6, df = 2
        let matrix = vec![
            vec![0.1, 0.5, 0.9],
            vec![1.0, 2.0, 3.0],
            vec![-5.0, 0.0, 5.0],
        ];
        let r = friedman(&matrix).unwrap();
        assert_abs_diff_eq!(r.chi2, 6.0, epsilon = 1e-9);
        assert_eq!(r.df, 2);
        // p = 1 - chi2cdf(6, 2) = exp(-3)
        assert_abs_diff_eq!(r.p_value, (-3.0f64).exp(), epsilon = 1e-9);
        assert_eq!(r.mean_ranks, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn friedman_monotone_invariance() {
        let matrix = vec![
            vec![0.3, 0.1, 0.7, 0.2],
            vec![0.9, 0.5, 0.6, 0.1],
            vec![0.2, 0.8, 0.4, 0.3],
            vec![0.5, 0.4, 0.9, 0.6],
        ];
        let r1 = friedman(&matrix).unwrap();
        let transformed: Vec<Vec<f64>> = matrix
            .iter()
            .map(|row| row.iter().map(|v| (v * 3.0).exp() + 1.0).collect())
            .collect();
        let r2 = friedman(&transformed).unwrap();
        assert_abs_diff_eq!(r1.chi2, r2.chi2, epsilon = 1e-12);
        assert_abs_diff_eq!(r1.p_value, r2.p_value, epsilon = 1e-12);
    }

    #[test]
    fn friedman_render_formats() {
        let r = FriedmanResult {
            chi2: 583.87,
            df: 4,
            p_value: 0.0001,
            mean_ranks: vec![],
            n_blocks: 0,
        };
        assert_eq!(r.render(), "X2(4)=583.87, p<.001");
    }

    /// Independent mean-rank oracle: rank each block from scratch with a
    /// naive counting method and compare pairwise differences to the
    /// critical difference.
    fn oracle_mean_ranks(matrix: &[Vec<f64>]) -> Vec<f64> {
        let k = matrix[0].len();
        let n = matrix.len() as f64;
        let mut sums = vec![0.0; k];
        for row in matrix {
            for (j, v) in row.iter().enumerate() {
                let less = row.iter().filter(|x| *x < v).count() as f64;
                let equal = row.iter().filter(|x| *x == v).count() as f64;
                sums[j] += less + (equal + 1.0) / 2.0;
            }
        }
        sums.iter().map(|s| s / n).collect()
    }

    #[test]
    fn posthoc_two_treatments_consistent_order() {
        let matrix: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64, i as f64 + 1.0]).collect();
        let r = friedman(&matrix).unwrap();
        assert!(r.p_value < 0.05);
        let post = posthoc_mean_ranks(&r, 0.05).unwrap();
        assert!(post.significant[0][1]);
        // oracle agreement
        let oracle = oracle_mean_ranks(&matrix);
        assert!((oracle[1] - oracle[0]).abs() > post.critical_difference);
    }

    #[test]
    fn posthoc_dominant_column() {
        // k=5, n=30; column 0 always rank 1, others cycle ranks 2..=5
        let mut matrix = Vec::new();
        for i in 0..30 {
            let mut row = vec![0.0; 5];
            for j in 1..5 {
                row[j] = 1.0 + ((j - 1 + i) % 4) as f64;
            }
            matrix.push(row);
        }
        let r = friedman(&matrix).unwrap();
        let post = posthoc_mean_ranks(&r, 0.05).unwrap();
        for j in 1..5 {
            assert!(post.significant[0][j], "column 0 vs {j}");
        }
        assert_eq!(post.dominant(&r.mean_ranks), vec![0]);
        let oracle = oracle_mean_ranks(&matrix);
        for j in 1..5 {
            assert!((oracle[j] - oracle[0]).abs() > post.critical_difference);
        }
    }

    #[test]
    fn posthoc_requires_significance() {
        let matrix = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]];
        let r = friedman(&matrix).unwrap();
        assert!(matches!(
            posthoc_mean_ranks(&r, 0.05),
            Err(Error::OmnibusNotSignificant { .. })
        ));
        // identical columns produce no significant pairs in the ungated
        // comparison either
        let m = mean_rank_comparison(&r, 0.05).unwrap();
        assert!(m.significant.iter().flatten().all(|s| !s));
    }

    #[test]
    fn interrater_cases() {
        let a = [3usize, 10, 20, 31];
        let (r, p) = interrater_agreement(&a, &a).unwrap();
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p, 100.0);
        // constant offset of 5: r stays 1, P3 drops to 0
        let b: Vec<usize> = a.iter().map(|v| v + 5).collect();
        let (r, p) = interrater_agreement(&a, &b).unwrap();
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p, 0.0);
    }

    #[test]
    fn median_iqr_interpolates() {
        let (m, (q1, q3)) = median_iqr(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(m, 2.5);
        assert_abs_diff_eq!(q1, 1.75);
        assert_abs_diff_eq!(q3, 3.25);
    }
}
