//! CSV, JSON and JSONL serialization of run results, plus tidy plot series.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::rfs::{GlmbHypothesis, LmbDensity, Measurement, TrackRecord};
use crate::sim::{GroundTruth, Mode, MonteCarloOutput, TrialRun, WindowStats};
use crate::{Error, Result};

pub const STEPS_HEADER: &str = "step,mode,ospa,n_true,n_hat,groups_true,groups_hat";

/// Across-trial means per step and mode.
pub fn steps_csv(mc: &MonteCarloOutput) -> String {
    let mut out = String::from(STEPS_HEADER);
    out.push('\n');
    for m in &mc.modes {
        for a in m.per_step() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                a.step, m.mode, a.ospa, a.n_true, a.n_hat, a.groups_true, a.groups_hat
            );
        }
    }
    out
}

/// One row per trial, mode and step.
pub fn trials_csv(mc: &MonteCarloOutput) -> String {
    let mut out = String::from("trial,seed,step,mode,ospa,n_true,n_hat,groups_true,groups_hat,measurements\n");
    for m in &mc.modes {
        for (trial, run) in m.trials.iter().enumerate() {
            for r in &run.steps {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    trial,
                    run.seed,
                    r.step,
                    m.mode,
                    r.ospa,
                    r.n_true,
                    r.estimate.n_hat,
                    r.groups_true,
                    r.estimate.group_count,
                    r.measurements
                );
            }
        }
    }
    out
}

pub fn truth_csv(truth: &GroundTruth) -> String {
    let mut out = String::from("step,target,group,px,vx,py,vy\n");
    for ts in &truth.steps {
        for t in &ts.targets {
            let x = &t.state;
            let _ = writeln!(out, "{},{},{},{},{},{},{}", ts.step, t.id, t.group, x[0], x[1], x[2], x[3]);
        }
    }
    out
}

pub fn measurements_csv(measurements: &[Vec<Measurement>]) -> String {
    let mut out = String::from("step,px,py\n");
    for (idx, z) in measurements.iter().enumerate() {
        for p in z {
            let _ = writeln!(out, "{},{},{}", idx + 1, p[0], p[1]);
        }
    }
    out
}

/// Extracted targets of the given runs, one row per target and step.
pub fn estimates_csv<'a>(runs: impl IntoIterator<Item = &'a TrialRun>) -> String {
    let mut out = String::from("step,mode,k,i,g,r,px,vx,py,vy\n");
    for run in runs {
        for r in &run.steps {
            for t in &r.estimate.targets {
                let x = &t.state;
                let l = &t.label;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.step, run.mode, l.track.k, l.track.i, l.group, t.r, x[0], x[1], x[2], x[3]
                );
            }
        }
    }
    out
}

/// Estimated groups of the given runs; members are `k:i` joined by `;`.
pub fn groups_csv<'a>(runs: impl IntoIterator<Item = &'a TrialRun>) -> String {
    let mut out = String::from("step,mode,group,members,cx,cy\n");
    for run in runs {
        for r in &run.steps {
            for g in &r.estimate.groups {
                let members: Vec<String> = g.members.iter().map(|l| format!("{}:{}", l.k, l.i)).collect();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.step,
                    run.mode,
                    g.id,
                    members.join(";"),
                    g.center[0],
                    g.center[2]
                );
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateLine {
    pub step: usize,
    #[serde(flatten)]
    pub track: TrackRecord,
}

/// Posterior densities as JSONL, one track per line tagged with its step.
pub fn states_jsonl(states: &[LmbDensity]) -> Result<String> {
    let mut out = String::new();
    for (idx, density) in states.iter().enumerate() {
        for track in density.to_records() {
            out.push_str(&serde_json::to_string(&StateLine { step: idx + 1, track })?);
            out.push('\n');
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypothesisLine {
    pub step: usize,
    pub rank: usize,
    pub log_weight: f64,
    /// `[k, i]` per included track.
    pub labels: Vec<[u32; 2]>,
    /// 0 for a missed detection, otherwise the 1-based measurement index.
    pub theta: Vec<usize>,
}

pub fn hypotheses_jsonl(per_step: &[Vec<GlmbHypothesis>]) -> Result<String> {
    let mut out = String::new();
    for (idx, hyps) in per_step.iter().enumerate() {
        for (rank, h) in hyps.iter().enumerate() {
            let line = HypothesisLine {
                step: idx + 1,
                rank,
                log_weight: h.log_weight,
                labels: h.labels.iter().map(|l| [l.k, l.i]).collect(),
                theta: h.theta.clone(),
            };
            out.push_str(&serde_json::to_string(&line)?);
            out.push('\n');
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ModeSummary {
    pub mode: Mode,
    pub overall: WindowStats,
    pub after_burn_in: WindowStats,
    pub mean_trial_runtime_s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub first_seed: Option<u64>,
    pub modes: Vec<ModeSummary>,
}

/// Pooled statistics for the whole horizon and for steps after `burn_in`.
pub fn summary(mc: &MonteCarloOutput, steps: usize, burn_in: usize) -> Summary {
    Summary {
        trials: mc.seeds.len(),
        first_seed: mc.seeds.first().copied(),
        modes: mc
            .modes
            .iter()
            .map(|m| ModeSummary {
                mode: m.mode,
                overall: m.window(1, steps),
                after_burn_in: m.window(burn_in + 1, steps),
                mean_trial_runtime_s: m.trials.iter().map(|t| t.runtime_s).sum::<f64>() / m.trials.len().max(1) as f64,
            })
            .collect(),
    }
}

/// Minimal reader for the comma-separated files written above.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Config(format!("{name} is empty")))?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (idx, line) in lines.enumerate() {
            let row: Vec<String> = line.split(',').map(str::to_string).collect();
            if row.len() != header.len() {
                return Err(Error::Config(format!(
                    "{name} line {}: expected {} fields, found {}",
                    idx + 2,
                    header.len(),
                    row.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("missing column `{name}`")))
    }

    fn select(&self, names: &[&str]) -> Result<Vec<Vec<&str>>> {
        let idx = names.iter().map(|n| self.column(n)).collect::<Result<Vec<_>>>()?;
        Ok(self
            .rows
            .iter()
            .map(|r| idx.iter().map(|&i| r[i].as_str()).collect())
            .collect())
    }
}

/// Inputs for [`plot_series`], as written by a `run`.
pub struct PlotInputs<'a> {
    pub steps: &'a str,
    pub truth: &'a str,
    pub estimates: &'a str,
    pub measurements: &'a str,
}

/// Tidy long-format series keyed by output file name.
pub fn plot_series(inputs: &PlotInputs<'_>) -> Result<BTreeMap<&'static str, String>> {
    let steps = Table::parse("steps.csv", inputs.steps)?;
    let mut cardinality = String::from("step,series,value\n");
    let mut ospa = String::from("step,series,value\n");
    let mut groups = String::from("step,series,value\n");
    let mut truth_written: BTreeMap<String, ()> = BTreeMap::new();
    for row in steps.select(&["step", "mode", "ospa", "n_true", "n_hat", "groups_true", "groups_hat"])? {
        let (step, mode) = (row[0], row[1]);
        if truth_written.insert(step.to_string(), ()).is_none() {
            let _ = writeln!(cardinality, "{step},truth,{}", row[3]);
            let _ = writeln!(groups, "{step},truth,{}", row[5]);
        }
        let _ = writeln!(cardinality, "{step},{mode},{}", row[4]);
        let _ = writeln!(ospa, "{step},{mode},{}", row[2]);
        let _ = writeln!(groups, "{step},{mode},{}", row[6]);
    }

    let mut tracks = String::from("series,step,id,px,py\n");
    for row in Table::parse("truth.csv", inputs.truth)?.select(&["step", "target", "px", "py"])? {
        let _ = writeln!(tracks, "truth,{},{},{},{}", row[0], row[1], row[2], row[3]);
    }
    for row in Table::parse("estimates.csv", inputs.estimates)?.select(&["step", "mode", "k", "i", "px", "py"])? {
        let _ = writeln!(tracks, "{},{},{}:{},{},{}", row[1], row[0], row[2], row[3], row[4], row[5]);
    }
    for row in Table::parse("measurements.csv", inputs.measurements)?.select(&["step", "px", "py"])? {
        let _ = writeln!(tracks, "measurement,{},,{},{}", row[0], row[1], row[2]);
    }

    Ok(BTreeMap::from([
        ("plot_cardinality.csv", cardinality),
        ("plot_groups.csv", groups),
        ("plot_ospa.csv", ospa),
        ("plot_tracks.csv", tracks),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rejects_ragged_rows() {
        assert!(Table::parse("x", "a,b\n1\n").is_err());
        assert!(Table::parse("x", "").is_err());
    }

    #[test]
    fn plot_series_reshapes_steps() {
        let inputs = PlotInputs {
            steps: "step,mode,ospa,n_true,n_hat,groups_true,groups_hat\n1,augmented,5,6,5,2,1\n1,baseline,7,6,4,2,0\n",
            truth: "step,target,group,px,vx,py,vy\n1,1,1,0,1,2,3\n",
            estimates: "step,mode,k,i,g,r,px,vx,py,vy\n1,augmented,1,2,0,0.9,4,0,5,0\n",
            measurements: "step,px,py\n1,7,8\n",
        };
        let out = plot_series(&inputs).unwrap();
        assert_eq!(
            out["plot_cardinality.csv"],
            "step,series,value\n1,truth,6\n1,augmented,5\n1,baseline,4\n"
        );
        assert_eq!(out["plot_ospa.csv"], "step,series,value\n1,augmented,5\n1,baseline,7\n");
        assert_eq!(
            out["plot_tracks.csv"],
            "series,step,id,px,py\ntruth,1,1,0,2\naugmented,1,1:2,4,5\nmeasurement,1,,7,8\n"
        );
    }
}
