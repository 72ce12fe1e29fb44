//! Measurement update through ranked association hypotheses.
//!
//! Each predicted track has `|Z| + 2` options: detected by measurement `j`,
//! missed (exists, undetected) or absent. These become one rectangular cost
//! matrix `n x (|Z| + 2n)` with private miss/absent columns per row, so every
//! full row assignment is one `(I+, θ)` hypothesis and its cost is the
//! negative log of `ω+(I+) [η_Z^θ]^{I+}` up to a constant.
//!
//! The optimal assignment's dual potentials bound how much worse any
//! hypothesis using a given pairing must be. Pairings whose bound exceeds the
//! log-weight floor are dropped; the remaining pairings split the tracks into
//! clusters that share no measurement, and each cluster is ranked separately.
//! Because hypothesis weights factor across clusters, the LMB marginals are
//! unchanged by the split.

use crate::filter::assignment::{ranked_assignments_within, solve, CostMatrix};
use crate::filter::{finalize, Assoc, FilterParams, PredictedLmb};
use crate::grouping::DisjointSets;
use crate::models::{log_sum_exp, MeasurementUpdate, SensorModel};
use crate::rfs::{BernoulliTrack, GaussianComponent, GaussianMixture, GlmbHypothesis, LmbDensity, Measurement};
use crate::{Error, Result};

/// Without clutter every measurement must be explained by a track. Shifting
/// detection costs by this offset makes any hypothesis that leaves a
/// measurement unexplained fall far below the log-weight floor.
const NO_CLUTTER_OFFSET: f64 = 1e8;

#[derive(Clone, Debug)]
pub struct UpdateOutput {
    pub posterior: LmbDensity,
    /// Highest-weight global hypotheses, normalized log-weights, descending.
    pub top_hypotheses: Vec<GlmbHypothesis>,
}

pub fn update(
    predicted: &PredictedLmb,
    measurements: &[Measurement],
    sensor: &SensorModel,
    params: &FilterParams,
) -> Result<LmbDensity> {
    Ok(update_with_diagnostics(predicted, measurements, sensor, params, 0)?.posterior)
}

pub fn update_with_diagnostics(
    predicted: &PredictedLmb,
    measurements: &[Measurement],
    sensor: &SensorModel,
    params: &FilterParams,
    top: usize,
) -> Result<UpdateOutput> {
    let tracks = predicted.tracks();
    let n = tracks.len();
    let m = measurements.len();
    if n == 0 {
        if m > 0 && sensor.clutter_intensity() <= 0.0 {
            return Err(Error::DegenerateUpdate);
        }
        return Ok(UpdateOutput {
            posterior: LmbDensity::default(),
            top_hypotheses: vec![GlmbHypothesis {
                labels: vec![],
                theta: vec![],
                log_weight: 0.0,
            }],
        });
    }

    let kalman = per_track_updates(tracks, measurements, sensor)?;
    let table = LogWeights::new(tracks, &kalman, sensor);
    let cost = table.cost_matrix();

    let root = solve(&cost).ok_or(Error::DegenerateUpdate)?;
    if table.no_clutter {
        let explained = root.assignment.cols.iter().filter(|&&c| c < m).count();
        if explained < m {
            return Err(Error::DegenerateUpdate);
        }
    }

    let floor = params.log_weight_floor;
    let allowed = |i: usize, j: usize| {
        cost.get(i, j).is_finite() && root.reduced_cost(&cost, i, j) <= floor
    };

    let mut sets = DisjointSets::new(n);
    for j in 0..m {
        let mut first = None;
        for i in 0..n {
            if allowed(i, j) {
                match first {
                    None => first = Some(i),
                    Some(f) => {
                        sets.union(f, i);
                    }
                }
            }
        }
    }

    let mut posterior_tracks: Vec<Option<BernoulliTrack>> = vec![None; n];
    let mut cluster_hypotheses = Vec::new();
    for rows in sets.groups() {
        let cols: Vec<usize> = (0..m).filter(|&j| rows.iter().any(|&i| allowed(i, j))).collect();
        let local = Cluster::new(&rows, &cols, &table, &allowed);
        let ranked = ranked_assignments_within(&local.cost, params.max_hypotheses, floor);
        let hyps: Vec<(Vec<Assoc>, f64)> = ranked
            .iter()
            .map(|a| {
                let assoc: Vec<Assoc> = a
                    .cols
                    .iter()
                    .map(|&c| local.decode(c))
                    .collect();
                let lw = assoc
                    .iter()
                    .zip(&rows)
                    .map(|(&a, &i)| table.log_weight(i, a))
                    .sum::<f64>();
                (assoc, lw)
            })
            .filter(|(_, lw)| lw.is_finite())
            .collect();
        if hyps.is_empty() {
            return Err(Error::DegenerateUpdate);
        }
        let lse = log_sum_exp(&hyps.iter().map(|h| h.1).collect::<Vec<_>>());

        for (slot, &i) in rows.iter().enumerate() {
            posterior_tracks[i] = Some(marginal_track(&tracks[i], &kalman[i], hyps.iter().map(|(assoc, lw)| (assoc[slot], (lw - lse).exp()))));
        }
        if top > 0 {
            let mut normalized: Vec<Partial> = hyps
                .into_iter()
                .map(|(assoc, lw)| (rows.iter().copied().zip(assoc).collect(), lw - lse))
                .collect();
            normalized.sort_by(|a, b| b.1.total_cmp(&a.1));
            normalized.truncate(top);
            cluster_hypotheses.push(normalized);
        }
    }

    let top_hypotheses = if top > 0 {
        combine_top(cluster_hypotheses, top, tracks)
    } else {
        Vec::new()
    };
    let posterior = finalize(posterior_tracks.into_iter().flatten().collect(), params);
    Ok(UpdateOutput {
        posterior,
        top_hypotheses,
    })
}

pub(crate) fn per_track_updates(
    tracks: &[BernoulliTrack],
    measurements: &[Measurement],
    sensor: &SensorModel,
) -> Result<Vec<Vec<MeasurementUpdate>>> {
    tracks
        .iter()
        .map(|t| {
            measurements
                .iter()
                .map(|z| sensor.measurement_update(z, &t.density))
                .collect()
        })
        .collect()
}

/// Combine per-track branch weights into the marginal Bernoulli component.
pub(crate) fn marginal_track(
    track: &BernoulliTrack,
    kalman: &[MeasurementUpdate],
    branches: impl Iterator<Item = (Assoc, f64)>,
) -> BernoulliTrack {
    let mut miss = 0.0;
    let mut detect = vec![0.0; kalman.len()];
    for (assoc, w) in branches {
        match assoc {
            Assoc::Absent => {}
            Assoc::Missed => miss += w,
            Assoc::Detected(j) => detect[j] += w,
        }
    }
    let r = miss + detect.iter().sum::<f64>();
    let mut comps = Vec::new();
    if r > 0.0 {
        if miss > 0.0 {
            comps.extend(track.density.components().iter().map(|c| GaussianComponent::new(c.weight * miss / r, c.mean, c.cov)));
        }
        for (j, &w) in detect.iter().enumerate() {
            if w > 0.0 {
                comps.extend(kalman[j].posterior.components().iter().map(|c| GaussianComponent::new(c.weight * w / r, c.mean, c.cov)));
            }
        }
    }
    BernoulliTrack::new(r, GaussianMixture::from_components(comps).normalized(), track.label)
}

/// Per-track log-weights of each option, `κ`-normalized for detections.
struct LogWeights {
    n: usize,
    m: usize,
    detect: Vec<f64>,
    missed: Vec<f64>,
    absent: Vec<f64>,
    no_clutter: bool,
}

impl LogWeights {
    fn new(tracks: &[BernoulliTrack], kalman: &[Vec<MeasurementUpdate>], sensor: &SensorModel) -> Self {
        let n = tracks.len();
        let m = kalman.first().map_or(0, Vec::len);
        let pd = sensor.detection_probability;
        let kappa = sensor.clutter_intensity();
        let no_clutter = kappa <= 0.0;
        let ln_kappa = if no_clutter { 0.0 } else { kappa.ln() };
        let mut detect = Vec::with_capacity(n * m);
        for (t, row) in tracks.iter().zip(kalman) {
            for up in row {
                detect.push(t.r.ln() + pd.ln() + up.log_likelihood - ln_kappa);
            }
        }
        Self {
            n,
            m,
            detect,
            missed: tracks.iter().map(|t| t.r.ln() + (1.0 - pd).ln()).collect(),
            absent: tracks.iter().map(|t| (1.0 - t.r).ln()).collect(),
            no_clutter,
        }
    }

    fn log_weight(&self, track: usize, assoc: Assoc) -> f64 {
        match assoc {
            Assoc::Absent => self.absent[track],
            Assoc::Missed => self.missed[track],
            Assoc::Detected(j) => self.detect[track * self.m + j],
        }
    }

    fn detect_cost(&self, track: usize, j: usize) -> f64 {
        let c = -self.detect[track * self.m + j];
        if self.no_clutter {
            c - NO_CLUTTER_OFFSET
        } else {
            c
        }
    }

    fn cost_matrix(&self) -> CostMatrix {
        let (n, m) = (self.n, self.m);
        let mut cost = CostMatrix::new(n, m + 2 * n, f64::INFINITY);
        for i in 0..n {
            for j in 0..m {
                cost.set(i, j, nan_to_inf(self.detect_cost(i, j)));
            }
            cost.set(i, m + i, nan_to_inf(-self.missed[i]));
            cost.set(i, m + n + i, nan_to_inf(-self.absent[i]));
        }
        cost
    }
}

fn nan_to_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

/// Cost matrix restricted to one cluster of tracks and its measurements.
struct Cluster {
    cost: CostMatrix,
    cols: Vec<usize>,
    rows: usize,
}

impl Cluster {
    fn new(
        rows: &[usize],
        cols: &[usize],
        table: &LogWeights,
        allowed: &impl Fn(usize, usize) -> bool,
    ) -> Self {
        let (nr, nc) = (rows.len(), cols.len());
        let mut cost = CostMatrix::new(nr, nc + 2 * nr, f64::INFINITY);
        for (li, &i) in rows.iter().enumerate() {
            for (lj, &j) in cols.iter().enumerate() {
                if allowed(i, j) {
                    cost.set(li, lj, table.detect_cost(i, j));
                }
            }
            let (miss_col, absent_col) = (table.m + i, table.m + table.n + i);
            if allowed(i, miss_col) {
                cost.set(li, nc + li, -table.missed[i]);
            }
            if allowed(i, absent_col) {
                cost.set(li, nc + nr + li, -table.absent[i]);
            }
        }
        Self {
            cost,
            cols: cols.to_vec(),
            rows: nr,
        }
    }

    fn decode(&self, col: usize) -> Assoc {
        let nc = self.cols.len();
        if col < nc {
            Assoc::Detected(self.cols[col])
        } else if col < nc + self.rows {
            Assoc::Missed
        } else {
            Assoc::Absent
        }
    }
}

/// Track-indexed associations with their log-weight.
type Partial = (Vec<(usize, Assoc)>, f64);

/// Top-`k` global hypotheses from per-cluster top-`k` lists. Truncating each
/// pairwise product to `k` is exact for the global top `k`.
fn combine_top(
    clusters: Vec<Vec<Partial>>,
    k: usize,
    tracks: &[BernoulliTrack],
) -> Vec<GlmbHypothesis> {
    let mut acc: Vec<Partial> = vec![(Vec::new(), 0.0)];
    for cluster in clusters {
        let mut next = Vec::with_capacity(acc.len() * cluster.len());
        for (a, wa) in &acc {
            for (b, wb) in &cluster {
                let mut joined = a.clone();
                joined.extend_from_slice(b);
                next.push((joined, wa + wb));
            }
        }
        next.sort_by(|x, y| y.1.total_cmp(&x.1));
        next.truncate(k);
        acc = next;
    }
    acc.into_iter()
        .map(|(mut assoc, log_weight)| {
            assoc.sort_by_key(|(i, _)| *i);
            let (labels, theta) = assoc
                .into_iter()
                .filter_map(|(i, a)| a.theta().map(|t| (tracks[i].label.track, t)))
                .unzip();
            GlmbHypothesis {
                labels,
                theta,
                log_weight,
            }
        })
        .collect()
}
