//! Ground-truth trajectories and measurement sets.

use std::collections::BTreeMap;

use nalgebra::Vector2;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::config::ScenarioConfig;
use crate::grouping::{build_adjacency, connected_components, position_distance};
use crate::models::{MotionModel, SensorModel};
use crate::rfs::{Measurement, State};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TruthTarget {
    /// 1-based index into the configured target list.
    pub id: usize,
    pub state: State,
    /// Group the target currently follows, 0 before joining.
    pub group: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruthStep {
    pub step: usize,
    pub targets: Vec<TruthTarget>,
    pub centers: Vec<(u32, State)>,
}

impl TruthStep {
    pub fn positions(&self) -> Vec<Measurement> {
        self.targets.iter().map(|t| SensorModel::observe(&t.state)).collect()
    }

    /// Groups with at least two joined live members.
    pub fn group_count(&self) -> usize {
        let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
        for t in self.targets.iter().filter(|t| t.group != 0) {
            *sizes.entry(t.group).or_default() += 1;
        }
        sizes.values().filter(|&&n| n >= 2).count()
    }

    /// Offsets of joined members from their group center.
    pub fn offsets(&self) -> Vec<(usize, State)> {
        self.targets
            .iter()
            .filter(|t| t.group != 0)
            .filter_map(|t| {
                let c = self.centers.iter().find(|(g, _)| *g == t.group)?;
                Some((t.id, t.state - c.1))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruth {
    pub steps: Vec<TruthStep>,
}

fn noise<R: Rng + ?Sized>(motion: &MotionModel, rng: &mut R) -> State {
    if motion.process_noise_std == 0.0 {
        return State::zeros();
    }
    // Q = s² G Gᵀ, so a scalar per axis suffices
    let dt = motion.dt;
    let s = motion.process_noise_std;
    let ax: f64 = StandardNormal.sample(rng);
    let ay: f64 = StandardNormal.sample(rng);
    State::new(s * ax * dt * dt / 2.0, s * ax * dt, s * ay * dt * dt / 2.0, s * ay * dt)
}

pub fn generate_truth<R: Rng + ?Sized>(config: &ScenarioConfig, rng: &mut R) -> Result<GroundTruth> {
    let motion = config.truth_motion_model();
    let specs = &config.truth.targets;
    let velocity_of = |g: u32| {
        config
            .truth
            .groups
            .iter()
            .find(|tg| tg.id == g)
            .map(|tg| tg.velocity)
            .unwrap_or([0.0, 0.0])
    };

    let mut centers: BTreeMap<u32, State> = BTreeMap::new();
    let mut states: Vec<Option<State>> = vec![None; specs.len()];
    let mut offsets: Vec<Option<State>> = vec![None; specs.len()];
    let mut steps = Vec::with_capacity(config.scenario.steps);

    for step in 1..=config.scenario.steps {
        for c in centers.values_mut() {
            *c = motion.transition * *c + noise(&motion, rng);
        }
        for (idx, spec) in specs.iter().enumerate() {
            let death = spec.death_step.unwrap_or(config.scenario.steps);
            if step < spec.birth_step || step > death {
                states[idx] = None;
                continue;
            }
            states[idx] = Some(match (states[idx], offsets[idx]) {
                (None, _) => State::from(spec.initial),
                (Some(_), Some(off)) => centers[&spec.group.unwrap_or(0)] + off,
                (Some(x), None) => motion.transition * x + noise(&motion, rng),
            });
        }

        let joining: Vec<usize> = specs
            .iter()
            .enumerate()
            .filter(|(idx, s)| s.group.is_some() && offsets[*idx].is_none() && states[*idx].is_some())
            .filter(|(_, s)| step >= s.join_step)
            .map(|(idx, _)| idx)
            .collect();
        let mut by_group: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for idx in joining {
            by_group.entry(specs[idx].group.unwrap_or(0)).or_default().push(idx);
        }
        for (g, members) in by_group {
            let center = *centers.entry(g).or_insert_with(|| {
                let n = members.len() as f64;
                let sum: State = members.iter().map(|&i| states[i].unwrap_or_default()).sum();
                let v = velocity_of(g);
                State::new(sum[0] / n, v[0], sum[2] / n, v[1])
            });
            for idx in members {
                let x = states[idx].unwrap_or_default();
                let off = State::new(x[0] - center[0], 0.0, x[2] - center[2], 0.0);
                offsets[idx] = Some(off);
                states[idx] = Some(center + off);
            }
        }

        let targets: Vec<TruthTarget> = states
            .iter()
            .enumerate()
            .filter_map(|(idx, s)| {
                s.map(|state| TruthTarget {
                    id: idx + 1,
                    state,
                    group: if offsets[idx].is_some() { specs[idx].group.unwrap_or(0) } else { 0 },
                })
            })
            .collect();
        steps.push(TruthStep {
            step,
            targets,
            centers: centers.iter().map(|(g, c)| (*g, *c)).collect(),
        });
    }
    Ok(GroundTruth { steps })
}

/// Every true group must stay a single connected proximity cluster with all
/// members within `epsilon` of the member centroid.
pub fn check_group_proximity(truth: &GroundTruth, epsilon: f64) -> Result<()> {
    for ts in &truth.steps {
        let mut members: BTreeMap<u32, Vec<State>> = BTreeMap::new();
        for t in ts.targets.iter().filter(|t| t.group != 0) {
            members.entry(t.group).or_default().push(t.state);
        }
        for (group, xs) in members.into_iter().filter(|(_, xs)| xs.len() >= 2) {
            let spread = Error::GroupSpread { step: ts.step, group };
            if connected_components(&build_adjacency(&xs, epsilon)).components.len() != 1 {
                return Err(spread);
            }
            let centroid: State = xs.iter().sum::<State>() / xs.len() as f64;
            if xs.iter().any(|x| position_distance(x, &centroid) > epsilon) {
                return Err(spread);
            }
        }
    }
    Ok(())
}

/// Per-step measurement sets: detections then clutter, shuffled.
pub fn generate_measurements<R: Rng + ?Sized>(
    truth: &GroundTruth,
    sensor: &SensorModel,
    rng: &mut R,
) -> Vec<Vec<Measurement>> {
    truth
        .steps
        .iter()
        .map(|ts| {
            let mut z = Vec::new();
            for t in &ts.targets {
                if rng.random_bool(sensor.detection_probability) {
                    let e = Vector2::new(
                        StandardNormal.sample(rng),
                        StandardNormal.sample(rng),
                    ) * sensor.noise_std;
                    z.push(SensorModel::observe(&t.state) + e);
                }
            }
            z.extend(sensor.sample_clutter(rng));
            z.shuffle(rng);
            z
        })
        .collect()
}
