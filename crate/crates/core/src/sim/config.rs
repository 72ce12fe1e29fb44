//! Scenario configuration. Every default reproduces the reference two-group
//! experiment; a TOML file only needs the keys it changes.

use serde::{Deserialize, Serialize};

use crate::filter::FilterParams;
use crate::metrics::OspaParams;
use crate::models::{BirthComponent, BirthModel, MotionModel, Region, SensorModel};
use crate::rfs::{ReductionParams, State, StateCov};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioSection,
    pub motion: MotionSection,
    pub birth: BirthSection,
    pub sensor: SensorSection,
    pub filter: FilterSection,
    pub grouping: GroupingSection,
    pub ospa: OspaSection,
    pub truth: TruthSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub steps: usize,
    pub dt: f64,
    pub mc_trials: usize,
    pub base_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotionSection {
    /// Filter process noise, m/s².
    pub process_noise_std: f64,
    pub survival_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BirthEntry {
    pub r: f64,
    pub mean: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BirthSection {
    pub covariance_diagonal: [f64; 4],
    pub components: Vec<BirthEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensorSection {
    pub noise_std: f64,
    pub detection_probability: f64,
    pub clutter_rate: f64,
    pub region: Region,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterSection {
    pub hypotheses: usize,
    pub existence_threshold: f64,
    pub log_weight_floor: f64,
    pub prune_threshold: f64,
    pub merge_distance: f64,
    pub max_components: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GroupingSection {
    pub group_threshold_m: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OspaSection {
    pub order: f64,
    pub cutoff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthGroup {
    pub id: u32,
    /// Group-center velocity `[vx, vy]` at formation, m/s.
    pub velocity: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthTargetSpec {
    /// `[px, vx, py, vy]` at the birth step.
    pub initial: [f64; 4],
    #[serde(default)]
    pub group: Option<u32>,
    /// First step at which the target follows its group center.
    #[serde(default = "one")]
    pub join_step: usize,
    #[serde(default = "one")]
    pub birth_step: usize,
    /// Last step alive; `None` means the whole horizon.
    #[serde(default)]
    pub death_step: Option<usize>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruthSection {
    /// Process noise of the simulated trajectories (group centers and
    /// independent targets), m/s².
    pub process_noise_std: f64,
    /// Gate for the co-group proximity check on the generated truth; falls
    /// back to `grouping.group_threshold_m`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proximity_m: Option<f64>,
    pub groups: Vec<TruthGroup>,
    pub targets: Vec<TruthTargetSpec>,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        Self {
            steps: 100,
            dt: 1.0,
            mc_trials: 100,
            base_seed: 1,
        }
    }
}

impl Default for MotionSection {
    fn default() -> Self {
        Self {
            process_noise_std: 5.0,
            survival_probability: 0.99,
        }
    }
}

impl Default for BirthSection {
    fn default() -> Self {
        let means = [
            [-800.0, 0.0, 600.0, 0.0],
            [-800.0, 0.0, -200.0, 0.0],
            [-850.0, 0.0, -200.0, 0.0],
            [-750.0, 0.0, -200.0, 0.0],
            [-650.0, 0.0, 670.0, 0.0],
            [-750.0, 0.0, 530.0, 0.0],
        ];
        Self {
            covariance_diagonal: [100.0; 4],
            components: means.into_iter().map(|mean| BirthEntry { r: 0.03, mean }).collect(),
        }
    }
}

impl Default for SensorSection {
    fn default() -> Self {
        Self {
            noise_std: 10.0,
            detection_probability: 0.98,
            clutter_rate: 30.0,
            region: Region::square(1000.0),
        }
    }
}

impl Default for FilterSection {
    fn default() -> Self {
        let f = FilterParams::default();
        Self {
            hypotheses: f.max_hypotheses,
            existence_threshold: f.existence_threshold,
            log_weight_floor: f.log_weight_floor,
            prune_threshold: f.reduction.prune_threshold,
            merge_distance: f.reduction.merge_distance,
            max_components: f.reduction.max_components,
        }
    }
}

impl Default for GroupingSection {
    fn default() -> Self {
        Self {
            group_threshold_m: 100.0,
        }
    }
}

impl Default for OspaSection {
    fn default() -> Self {
        let p = OspaParams::default();
        Self {
            order: p.order,
            cutoff: p.cutoff,
        }
    }
}

impl Default for TruthSection {
    fn default() -> Self {
        let target = |initial: [f64; 4], group: u32, join_step: usize| TruthTargetSpec {
            initial,
            group: Some(group),
            join_step,
            birth_step: 1,
            death_step: None,
        };
        Self {
            process_noise_std: 0.0,
            proximity_m: None,
            groups: vec![
                TruthGroup { id: 1, velocity: [10.0, -4.0] },
                TruthGroup { id: 2, velocity: [12.0, -2.0] },
            ],
            targets: vec![
                target([-800.0, 10.0, -200.0, -4.0], 1, 1),
                target([-850.0, 10.0, -200.0, -4.0], 1, 1),
                target([-750.0, 10.0, -200.0, -4.0], 1, 1),
                target([-800.0, 12.0, 600.0, -2.0], 2, 1),
                target([-750.0, 12.0, 530.0, -2.0], 2, 1),
                // closes in from its birth point and settles about 50 m from
                // both other members
                target([-650.0, 6.8, 670.0, -6.5], 2, 21),
            ],
        }
    }
}

/// A field-level configuration problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigIssue {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

struct Checker(Vec<ConfigIssue>);

impl Checker {
    fn check(&mut self, ok: bool, field: impl Into<String>, message: &str) {
        if !ok {
            self.0.push(ConfigIssue {
                field: field.into(),
                message: message.to_string(),
            });
        }
    }

    fn probability(&mut self, value: f64, field: impl Into<String>) {
        self.check((0.0..=1.0).contains(&value), field, "must be a probability in [0, 1]");
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config always serializes")
    }

    pub fn validate(&self) -> Result<(), Vec<ConfigIssue>> {
        let mut c = Checker(Vec::new());
        let s = &self.scenario;
        c.check(s.steps >= 1, "scenario.steps", "must be at least 1");
        c.check(s.dt.is_finite() && s.dt > 0.0, "scenario.dt", "must be positive");
        c.check(s.mc_trials >= 1, "scenario.mc_trials", "must be at least 1");

        c.check(
            self.motion.process_noise_std.is_finite() && self.motion.process_noise_std >= 0.0,
            "motion.process_noise_std",
            "must be nonnegative",
        );
        c.probability(self.motion.survival_probability, "motion.survival_probability");

        c.check(
            self.birth.covariance_diagonal.iter().all(|v| v.is_finite() && *v > 0.0),
            "birth.covariance_diagonal",
            "entries must be positive",
        );
        for (idx, b) in self.birth.components.iter().enumerate() {
            c.probability(b.r, format!("birth.components[{idx}].r"));
            c.check(b.mean.iter().all(|v| v.is_finite()), format!("birth.components[{idx}].mean"), "must be finite");
        }

        let sn = &self.sensor;
        c.check(sn.noise_std.is_finite() && sn.noise_std > 0.0, "sensor.noise_std", "must be positive");
        c.probability(sn.detection_probability, "sensor.detection_probability");
        c.check(sn.clutter_rate.is_finite() && sn.clutter_rate >= 0.0, "sensor.clutter_rate", "must be nonnegative");
        c.check(!sn.region.is_empty(), "sensor.region", "must have positive width and height");

        let f = &self.filter;
        c.check(f.hypotheses >= 1, "filter.hypotheses", "must be at least 1");
        c.probability(f.existence_threshold, "filter.existence_threshold");
        c.check(f.log_weight_floor > 0.0, "filter.log_weight_floor", "must be positive");
        c.check(f.prune_threshold >= 0.0 && f.prune_threshold < 1.0, "filter.prune_threshold", "must lie in [0, 1)");
        c.check(f.merge_distance >= 0.0, "filter.merge_distance", "must be nonnegative");
        c.check(f.max_components >= 1, "filter.max_components", "must be at least 1");

        let eps = self.grouping.group_threshold_m;
        c.check(eps.is_finite() && eps >= 0.0, "grouping.group_threshold_m", "must be nonnegative");
        c.check(self.ospa.order >= 1.0, "ospa.order", "must be at least 1");
        c.check(self.ospa.cutoff > 0.0, "ospa.cutoff", "must be positive");

        let t = &self.truth;
        c.check(
            t.process_noise_std.is_finite() && t.process_noise_std >= 0.0,
            "truth.process_noise_std",
            "must be nonnegative",
        );
        if let Some(p) = t.proximity_m {
            c.check(p.is_finite() && p >= 0.0, "truth.proximity_m", "must be nonnegative");
        }
        let mut ids: Vec<u32> = t.groups.iter().map(|g| g.id).collect();
        c.check(ids.iter().all(|&id| id != 0), "truth.groups", "group id 0 is reserved for ungrouped targets");
        ids.sort_unstable();
        let before = ids.len();
        ids.dedup();
        c.check(ids.len() == before, "truth.groups", "group ids must be distinct");
        for (idx, tg) in t.targets.iter().enumerate() {
            let field = |name: &str| format!("truth.targets[{idx}].{name}");
            let death = tg.death_step.unwrap_or(s.steps);
            c.check(
                (1..=s.steps).contains(&tg.birth_step),
                field("birth_step"),
                "must lie within [1, steps]",
            );
            c.check(
                death >= tg.birth_step && death <= s.steps,
                field("death_step"),
                "must lie within [birth_step, steps]",
            );
            if let Some(g) = tg.group {
                c.check(ids.binary_search(&g).is_ok(), field("group"), "refers to an undefined group");
                c.check(
                    tg.join_step >= tg.birth_step,
                    field("join_step"),
                    "must not precede birth_step",
                );
            }
        }
        if c.0.is_empty() {
            Ok(())
        } else {
            Err(c.0)
        }
    }

    pub fn motion_model(&self) -> MotionModel {
        MotionModel::constant_velocity(self.scenario.dt, self.motion.process_noise_std)
    }

    pub fn truth_motion_model(&self) -> MotionModel {
        MotionModel::constant_velocity(self.scenario.dt, self.truth.process_noise_std)
    }

    pub fn birth_model(&self) -> BirthModel {
        let cov = StateCov::from_diagonal(&State::from(self.birth.covariance_diagonal));
        BirthModel::new(
            self.birth
                .components
                .iter()
                .map(|b| BirthComponent {
                    r: b.r,
                    mean: State::from(b.mean),
                    cov,
                })
                .collect(),
        )
    }

    pub fn sensor_model(&self) -> SensorModel {
        SensorModel {
            noise_std: self.sensor.noise_std,
            detection_probability: self.sensor.detection_probability,
            region: self.sensor.region,
            clutter_rate: self.sensor.clutter_rate,
        }
    }

    pub fn filter_params(&self) -> FilterParams {
        FilterParams {
            survival_probability: self.motion.survival_probability,
            max_hypotheses: self.filter.hypotheses,
            existence_threshold: self.filter.existence_threshold,
            log_weight_floor: self.filter.log_weight_floor,
            reduction: ReductionParams {
                prune_threshold: self.filter.prune_threshold,
                merge_distance: self.filter.merge_distance,
                max_components: self.filter.max_components,
            },
        }
    }

    pub fn ospa_params(&self) -> OspaParams {
        OspaParams {
            order: self.ospa.order,
            cutoff: self.ospa.cutoff,
        }
    }

    pub fn proximity_gate(&self) -> f64 {
        self.truth.proximity_m.unwrap_or(self.grouping.group_threshold_m)
    }

    /// Member index sets (1-based target ids) of each true group.
    pub fn true_groups(&self) -> Vec<(u32, Vec<usize>)> {
        self.truth
            .groups
            .iter()
            .map(|g| {
                let members = self
                    .truth
                    .targets
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t.group == Some(g.id))
                    .map(|(i, _)| i + 1)
                    .collect();
                (g.id, members)
            })
            .collect()
    }
}
