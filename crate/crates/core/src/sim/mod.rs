//! Scenario simulation and Monte Carlo evaluation.

mod config;
mod trial;
mod truth;

pub use config::{
    BirthEntry, BirthSection, ConfigIssue, FilterSection, GroupingSection, MotionSection, OspaSection,
    ScenarioConfig, ScenarioSection, SensorSection, TruthGroup, TruthSection, TruthTargetSpec,
};
pub use trial::{
    monte_carlo, run_filter, run_trial, Mode, ModeResults, MonteCarloOutput, Realization, RunOptions,
    StepAggregate, StepRecord, TrialRun, WindowStats,
};
pub use truth::{check_group_proximity, generate_measurements, generate_truth, GroundTruth, TruthStep, TruthTarget};
