//! Run-based decoding of per-frame P/N sequences into BPM and UESC frames.
//!
//! BPM is the first P frame followed by at least 3 consecutive P frames;
//! UESC is the last P frame preceded by at least 3 consecutive P frames.
//! Both rules are applied literally and independently over the whole clip,
//! so the two events may come from different P-runs.

use std::fmt;

/// Frame class: pharyngeal or non-pharyngeal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseLabel {
    N,
    P,
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseLabel::N => write!(f, "N"),
            PhaseLabel::P => write!(f, "P"),
        }
    }
}

/// Per-frame label sequence for one clip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseSequence {
    labels: Vec<PhaseLabel>,
}

impl PhaseSequence {
    pub fn new(labels: Vec<PhaseLabel>) -> Self {
        PhaseSequence { labels }
    }

    /// Parse from a string over the alphabet {P, N}, e.g. "NNPPPPNN".
    pub fn parse(s: &str) -> Option<Self> {
        let labels = s
            .chars()
            .map(|c| match c {
                'P' => Some(PhaseLabel::P),
                'N' => Some(PhaseLabel::N),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(PhaseSequence { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[PhaseLabel] {
        &self.labels
    }

    pub fn count_p(&self) -> usize {
        self.labels.iter().filter(|&&l| l == PhaseLabel::P).count()
    }
}

impl fmt::Display for PhaseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.labels {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Decoded event frames. Absence means no window satisfied the rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PhaseDetection {
    pub bpm: Option<usize>,
    pub uesc: Option<usize>,
}

/// Decode a P/N sequence into BPM/UESC frame indices.
///
/// BPM is the smallest `i` with `labels[i..=i+3]` all P; UESC is the largest
/// `j` with `labels[j-3..=j]` all P. Either may be absent.
pub fn decode(seq: &PhaseSequence) -> PhaseDetection {
    let labels = seq.labels();
    let n = labels.len();
    let all_p = |range: std::ops::RangeInclusive<usize>| {
        range.clone().all(|k| labels[k] == PhaseLabel::P)
    };

    let mut bpm = None;
    if n >= 4 {
        for i in 0..=n - 4 {
            if all_p(i..=i + 3) {
                bpm = Some(i);
                break;
            }
        }
    }

    let mut uesc = None;
    if n >= 4 {
        for j in (3..n).rev() {
            if all_p(j - 3..=j) {
                uesc = Some(j);
                break;
            }
        }
    }

    PhaseDetection { bpm, uesc }
}
