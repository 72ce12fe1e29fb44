//! Augmented labeled multi-Bernoulli (LMB) filtering for group target tracking.
//!
//! Every track carries an augmented label `(k, i, g, c)`: birth step, birth
//! index, group id and group center. The filter runs three steps per scan:
//! prediction (members of a group move with the group center), a measurement
//! update through ranked data association, and a group-information update
//! that re-clusters the posterior tracks into proximity groups.
//!
//! Module map:
//! - [`rfs`]: labels, Gaussian mixtures, Bernoulli tracks and LMB densities.
//! - [`models`]: motion, birth and sensor models.
//! - [`filter`]: prediction, update, the exhaustive update oracle and the
//!   ranked-assignment solver.
//! - [`grouping`]: adjacency graphs, connected components and group relabeling.
//! - [`estimate`]: MAP cardinality and target/group extraction.
//! - [`metrics`]: the OSPA distance.
//! - [`sim`]: scenario configuration, ground truth, trials and Monte Carlo.
//! - [`report`]: CSV and JSON output.

pub mod error;
pub mod estimate;
pub mod filter;
pub mod grouping;
pub mod metrics;
pub mod models;
pub mod report;
pub mod rfs;
pub mod sim;

pub use error::{Error, Result};
pub use estimate::{StepEstimate, TargetEstimate};
pub use filter::{FilterParams, PredictedLmb};
pub use models::{BirthModel, MotionModel, Region, SensorModel};
pub use rfs::{
    AugmentedLabel, BernoulliTrack, GaussianComponent, GaussianMixture, LmbDensity, Measurement,
    ReductionParams, State, StateCov, TrackLabel,
};
pub use sim::{Mode, ScenarioConfig};
