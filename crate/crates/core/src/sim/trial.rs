//! Single filter runs and Monte Carlo aggregation.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use super::truth::{check_group_proximity, generate_measurements, generate_truth, GroundTruth};
use crate::estimate::{estimate_step, StepEstimate};
use crate::filter::{predict, update_with_diagnostics};
use crate::grouping::{update_group_info, GroupIdCounter};
use crate::metrics::ospa;
use crate::rfs::{GlmbHypothesis, LmbDensity, Measurement};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Group-aware prediction with proximity grouping after every update.
    Augmented,
    /// Plain LMB filter: every track moves independently.
    Baseline,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Augmented, Mode::Baseline];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Augmented => "augmented",
            Mode::Baseline => "baseline",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "augmented" => Ok(Mode::Augmented),
            "baseline" => Ok(Mode::Baseline),
            other => Err(format!("unknown mode `{other}` (expected augmented or baseline)")),
        }
    }
}

/// Truth and measurements for one seed, shared by every mode.
#[derive(Clone, Debug)]
pub struct Realization {
    pub seed: u64,
    pub truth: GroundTruth,
    pub measurements: Vec<Vec<Measurement>>,
}

impl Realization {
    pub fn generate(config: &ScenarioConfig, seed: u64) -> Result<Self> {
        let mut truth_rng = ChaCha8Rng::seed_from_u64(seed);
        let mut meas_rng = ChaCha8Rng::seed_from_u64(seed);
        meas_rng.set_stream(1);
        let truth = generate_truth(config, &mut truth_rng)?;
        check_group_proximity(&truth, config.proximity_gate())?;
        let measurements = generate_measurements(&truth, &config.sensor_model(), &mut meas_rng);
        Ok(Self {
            seed,
            truth,
            measurements,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Keep every posterior density.
    pub record_states: bool,
    /// Keep this many top global hypotheses per step.
    pub record_hypotheses: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub estimate: StepEstimate,
    pub ospa: f64,
    pub n_true: usize,
    pub groups_true: usize,
    pub measurements: usize,
}

#[derive(Clone, Debug)]
pub struct TrialRun {
    pub mode: Mode,
    pub seed: u64,
    pub steps: Vec<StepRecord>,
    pub states: Vec<LmbDensity>,
    pub hypotheses: Vec<Vec<GlmbHypothesis>>,
    pub runtime_s: f64,
}

pub fn run_filter(config: &ScenarioConfig, realization: &Realization, mode: Mode, options: RunOptions) -> Result<TrialRun> {
    let started = Instant::now();
    let motion = config.motion_model();
    let birth = config.birth_model();
    let sensor = config.sensor_model();
    let params = config.filter_params();
    let ospa_params = config.ospa_params();
    let epsilon = config.grouping.group_threshold_m;

    let mut posterior = LmbDensity::default();
    let mut counter = GroupIdCounter::default();
    let mut run = TrialRun {
        mode,
        seed: realization.seed,
        steps: Vec::with_capacity(realization.truth.steps.len()),
        states: Vec::new(),
        hypotheses: Vec::new(),
        runtime_s: 0.0,
    };
    for (ts, z) in realization.truth.steps.iter().zip(&realization.measurements) {
        let step = ts.step;
        let time = u32::try_from(step).map_err(|_| Error::Config("scenario.steps exceeds u32".into()))?;
        let predicted = predict(&posterior, &motion, &birth, params.survival_probability, time)
            .map_err(|e| e.at_step(step))?;
        let out = update_with_diagnostics(&predicted, z, &sensor, &params, options.record_hypotheses)
            .map_err(|e| e.at_step(step))?;
        posterior = out.posterior;
        if mode == Mode::Augmented {
            let grouped = update_group_info(&posterior, epsilon, counter);
            posterior = grouped.density;
            counter = grouped.counter;
        }
        let estimate = estimate_step(&posterior).map_err(|e| e.at_step(step))?;
        let est_positions: Vec<Measurement> = estimate
            .targets
            .iter()
            .map(|t| Measurement::new(t.state[0], t.state[2]))
            .collect();
        run.steps.push(StepRecord {
            step,
            ospa: ospa(&ts.positions(), &est_positions, ospa_params),
            n_true: ts.targets.len(),
            groups_true: ts.group_count(),
            measurements: z.len(),
            estimate,
        });
        if options.record_states {
            run.states.push(posterior.clone());
        }
        if options.record_hypotheses > 0 {
            run.hypotheses.push(out.top_hypotheses);
        }
    }
    run.runtime_s = started.elapsed().as_secs_f64();
    Ok(run)
}

/// Generate the realization for `seed` and filter it once in `mode`.
pub fn run_trial(config: &ScenarioConfig, seed: u64, mode: Mode) -> Result<TrialRun> {
    let realization = Realization::generate(config, seed)?;
    run_filter(config, &realization, mode, RunOptions::default())
}

/// Across-trial means for one step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepAggregate {
    pub step: usize,
    pub ospa: f64,
    pub n_true: f64,
    pub n_hat: f64,
    pub groups_true: f64,
    pub groups_hat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowStats {
    pub first_step: usize,
    pub last_step: usize,
    pub mean_ospa: f64,
    pub mean_abs_cardinality_error: f64,
    /// Fraction of (trial, step) pairs with the exact cardinality.
    pub exact_cardinality_rate: f64,
    /// Fraction of (trial, step) pairs with the exact group count.
    pub exact_group_rate: f64,
    pub mean_groups_hat: f64,
    pub max_groups_hat: usize,
}

#[derive(Clone, Debug)]
pub struct ModeResults {
    pub mode: Mode,
    pub trials: Vec<TrialRun>,
}

impl ModeResults {
    pub fn per_step(&self) -> Vec<StepAggregate> {
        let Some(first) = self.trials.first() else {
            return Vec::new();
        };
        let n = self.trials.len() as f64;
        (0..first.steps.len())
            .map(|s| {
                let mut agg = StepAggregate {
                    step: first.steps[s].step,
                    ospa: 0.0,
                    n_true: 0.0,
                    n_hat: 0.0,
                    groups_true: 0.0,
                    groups_hat: 0.0,
                };
                for t in &self.trials {
                    let r = &t.steps[s];
                    agg.ospa += r.ospa;
                    agg.n_true += r.n_true as f64;
                    agg.n_hat += r.estimate.n_hat as f64;
                    agg.groups_true += r.groups_true as f64;
                    agg.groups_hat += r.estimate.group_count as f64;
                }
                agg.ospa /= n;
                agg.n_true /= n;
                agg.n_hat /= n;
                agg.groups_true /= n;
                agg.groups_hat /= n;
                agg
            })
            .collect()
    }

    /// Pooled statistics over steps `first..=last` of every trial.
    pub fn window(&self, first: usize, last: usize) -> WindowStats {
        let mut count = 0usize;
        let mut stats = WindowStats {
            first_step: first,
            last_step: last,
            mean_ospa: 0.0,
            mean_abs_cardinality_error: 0.0,
            exact_cardinality_rate: 0.0,
            exact_group_rate: 0.0,
            mean_groups_hat: 0.0,
            max_groups_hat: 0,
        };
        for r in self
            .trials
            .iter()
            .flat_map(|t| &t.steps)
            .filter(|r| (first..=last).contains(&r.step))
        {
            count += 1;
            let err = r.estimate.n_hat.abs_diff(r.n_true);
            stats.mean_ospa += r.ospa;
            stats.mean_abs_cardinality_error += err as f64;
            stats.exact_cardinality_rate += f64::from(u8::from(err == 0));
            stats.exact_group_rate += f64::from(u8::from(r.estimate.group_count == r.groups_true));
            stats.mean_groups_hat += r.estimate.group_count as f64;
            stats.max_groups_hat = stats.max_groups_hat.max(r.estimate.group_count);
        }
        if count > 0 {
            let c = count as f64;
            stats.mean_ospa /= c;
            stats.mean_abs_cardinality_error /= c;
            stats.exact_cardinality_rate /= c;
            stats.exact_group_rate /= c;
            stats.mean_groups_hat /= c;
        }
        stats
    }
}

#[derive(Clone, Debug)]
pub struct MonteCarloOutput {
    pub seeds: Vec<u64>,
    pub modes: Vec<ModeResults>,
    /// Truth and measurements of the first trial, for plotting.
    pub first_realization: Option<Realization>,
}

impl MonteCarloOutput {
    pub fn mode(&self, mode: Mode) -> Option<&ModeResults> {
        self.modes.iter().find(|m| m.mode == mode)
    }
}

/// Run `config.scenario.mc_trials` seeded trials (seeds `base_seed..`) in
/// every requested mode. Each trial's measurements are shared across modes.
/// `options` applies to the first trial only.
pub fn monte_carlo(config: &ScenarioConfig, modes: &[Mode], options: RunOptions) -> Result<MonteCarloOutput> {
    let seeds: Vec<u64> = (0..config.scenario.mc_trials as u64)
        .map(|t| config.scenario.base_seed.wrapping_add(t))
        .collect();
    let per_trial: Vec<(Realization, Vec<TrialRun>)> = seeds
        .par_iter()
        .enumerate()
        .map(|(trial, &seed)| {
            let wrap = |e: Error| Error::AtTrial {
                trial,
                seed,
                source: Box::new(e),
            };
            let realization = Realization::generate(config, seed).map_err(wrap)?;
            let opts = if trial == 0 { options } else { RunOptions::default() };
            let runs = modes
                .iter()
                .map(|&mode| run_filter(config, &realization, mode, opts).map_err(wrap))
                .collect::<Result<Vec<_>>>()?;
            Ok((realization, runs))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = MonteCarloOutput {
        seeds,
        modes: modes.iter().map(|&mode| ModeResults { mode, trials: Vec::new() }).collect(),
        first_realization: None,
    };
    for (idx, (realization, runs)) in per_trial.into_iter().enumerate() {
        if idx == 0 {
            out.first_realization = Some(realization);
        }
        for (slot, run) in out.modes.iter_mut().zip(runs) {
            slot.trials.push(run);
        }
    }
    Ok(out)
}
