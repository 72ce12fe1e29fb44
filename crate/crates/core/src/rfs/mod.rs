//! Data model for augmented labeled random finite sets.

mod label;
mod lmb;
mod mixture;
mod record;

use nalgebra::{Matrix4, Vector2, Vector4};

pub use label::{AugmentedLabel, TrackLabel};
pub use lmb::{
    cardinality_distribution, set_exponential, BernoulliTrack, GlmbHypothesis, LmbDensity,
    Projected, Projection,
};
pub use mixture::{log_gaussian_pdf, GaussianComponent, GaussianMixture, ReductionParams};
pub use record::{ComponentRecord, TrackRecord};

/// Kinematic state `[px, vx, py, vy]` in m and m/s.
pub type State = Vector4<f64>;
pub type StateCov = Matrix4<f64>;
/// Position measurement `[px, py]` in m.
pub type Measurement = Vector2<f64>;
