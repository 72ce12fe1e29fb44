//! The augmented LMB recursion.
//!
//! [`predict`] moves every track through its label-dependent dynamics and
//! appends births. [`update`] expands the predicted LMB into association
//! hypotheses, ranks them with Murty's algorithm and collapses the result back
//! into an LMB. [`update_exhaustive`] enumerates every hypothesis and serves as
//! an oracle for small problems.

pub mod assignment;
mod exhaustive;
mod predict;
mod update;

pub use exhaustive::{exhaustive_hypotheses, update_exhaustive, EXHAUSTIVE_LIMIT};
pub use predict::{predict, PredictedLmb};
pub use update::{update, update_with_diagnostics, UpdateOutput};

use crate::rfs::{BernoulliTrack, LmbDensity, ReductionParams};

#[derive(Clone, Debug, PartialEq)]
pub struct FilterParams {
    pub survival_probability: f64,
    /// Hypothesis budget per independent association cluster.
    pub max_hypotheses: usize,
    /// Tracks whose posterior existence falls below this are dropped.
    pub existence_threshold: f64,
    /// Hypotheses whose log-weight is more than this below the best are dropped.
    pub log_weight_floor: f64,
    pub reduction: ReductionParams,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            survival_probability: 0.99,
            max_hypotheses: 1000,
            existence_threshold: 1e-4,
            log_weight_floor: 60.0,
            reduction: ReductionParams::default(),
        }
    }
}

/// How one track is explained by a hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Assoc {
    Absent,
    Missed,
    Detected(usize),
}

impl Assoc {
    /// `theta` value: 0 for a miss, `j + 1` for measurement `j`.
    pub(crate) fn theta(self) -> Option<usize> {
        match self {
            Assoc::Absent => None,
            Assoc::Missed => Some(0),
            Assoc::Detected(j) => Some(j + 1),
        }
    }
}

/// Existence pruning and mixture reduction shared by both update paths.
pub(crate) fn finalize(tracks: Vec<BernoulliTrack>, params: &FilterParams) -> LmbDensity {
    LmbDensity::new(
        tracks
            .into_iter()
            .filter(|t| t.r >= params.existence_threshold && !t.density.is_empty())
            .map(|mut t| {
                t.r = t.r.min(1.0);
                t.density = t.density.reduce(&params.reduction);
                t
            })
            .collect(),
    )
}
