//! Brute-force update: every label subset and every injective association,
//! weighted directly by `ω+(I+) [η_Z^θ]^{I+}` with clutter written as
//! `κ^{|Z| - #detections}` rather than as a per-detection divisor.

use crate::filter::update::{marginal_track, per_track_updates};
use crate::filter::{finalize, Assoc, FilterParams, PredictedLmb};
use crate::models::{log_sum_exp, MeasurementUpdate, SensorModel};
use crate::rfs::{BernoulliTrack, GlmbHypothesis, LmbDensity, Measurement};
use crate::{Error, Result};

/// Largest track count and measurement count accepted by the oracle.
pub const EXHAUSTIVE_LIMIT: usize = 8;

struct Enumeration {
    hypotheses: Vec<(Vec<Assoc>, f64)>,
    kalman: Vec<Vec<MeasurementUpdate>>,
}

fn enumerate(predicted: &PredictedLmb, measurements: &[Measurement], sensor: &SensorModel) -> Result<Enumeration> {
    let tracks = predicted.tracks();
    let (n, m) = (tracks.len(), measurements.len());
    if n > EXHAUSTIVE_LIMIT || m > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            tracks: n,
            measurements: m,
        });
    }
    let kalman = per_track_updates(tracks, measurements, sensor)?;
    let pd = sensor.detection_probability;
    let ln_kappa = sensor.clutter_intensity().ln();

    let mut hypotheses = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; m];
    recurse(tracks, &kalman, pd, &mut current, &mut used, &mut hypotheses);

    for (assoc, lw) in &mut hypotheses {
        let detections = assoc.iter().filter(|a| matches!(a, Assoc::Detected(_))).count();
        let clutter = (m - detections) as f64;
        if clutter > 0.0 {
            *lw += clutter * ln_kappa;
        }
    }
    Ok(Enumeration { hypotheses, kalman })
}

fn recurse(
    tracks: &[BernoulliTrack],
    kalman: &[Vec<MeasurementUpdate>],
    pd: f64,
    current: &mut Vec<Assoc>,
    used: &mut [bool],
    out: &mut Vec<(Vec<Assoc>, f64)>,
) {
    let i = current.len();
    if i == tracks.len() {
        let lw = current
            .iter()
            .enumerate()
            .map(|(t, &a)| {
                let r = tracks[t].r;
                match a {
                    Assoc::Absent => (1.0 - r).ln(),
                    Assoc::Missed => (r * (1.0 - pd)).ln(),
                    Assoc::Detected(j) => (r * pd).ln() + kalman[t][j].log_likelihood,
                }
            })
            .sum();
        out.push((current.clone(), lw));
        return;
    }
    for option in [Assoc::Absent, Assoc::Missed] {
        current.push(option);
        recurse(tracks, kalman, pd, current, used, out);
        current.pop();
    }
    for j in 0..used.len() {
        if !used[j] {
            used[j] = true;
            current.push(Assoc::Detected(j));
            recurse(tracks, kalman, pd, current, used, out);
            current.pop();
            used[j] = false;
        }
    }
}

/// Every `(I+, θ)` hypothesis with its normalized log-weight, including
/// zero-weight ones (log-weight `-inf`).
pub fn exhaustive_hypotheses(
    predicted: &PredictedLmb,
    measurements: &[Measurement],
    sensor: &SensorModel,
) -> Result<Vec<GlmbHypothesis>> {
    let e = enumerate(predicted, measurements, sensor)?;
    let lse = log_sum_exp(&e.hypotheses.iter().map(|h| h.1).collect::<Vec<_>>());
    let tracks = predicted.tracks();
    Ok(e.hypotheses
        .into_iter()
        .map(|(assoc, lw)| {
            let (labels, theta) = assoc
                .iter()
                .enumerate()
                .filter_map(|(i, a)| a.theta().map(|t| (tracks[i].label.track, t)))
                .unzip();
            GlmbHypothesis {
                labels,
                theta,
                log_weight: lw - lse,
            }
        })
        .collect())
}

/// Exact LMB update without any hypothesis truncation.
pub fn update_exhaustive(
    predicted: &PredictedLmb,
    measurements: &[Measurement],
    sensor: &SensorModel,
    params: &FilterParams,
) -> Result<LmbDensity> {
    let e = enumerate(predicted, measurements, sensor)?;
    let lse = log_sum_exp(&e.hypotheses.iter().map(|h| h.1).collect::<Vec<_>>());
    if !lse.is_finite() {
        return Err(Error::DegenerateUpdate);
    }
    let tracks = predicted.tracks();
    let marginals = tracks
        .iter()
        .enumerate()
        .map(|(i, t)| {
            marginal_track(
                t,
                &e.kalman[i],
                e.hypotheses.iter().map(|(assoc, lw)| (assoc[i], (lw - lse).exp())),
            )
        })
        .collect();
    Ok(finalize(marginals, params))
}
