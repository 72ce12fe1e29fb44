#![allow(dead_code)]

use grouptrack::filter::PredictedLmb;
use grouptrack::{
    AugmentedLabel, BernoulliTrack, GaussianComponent, GaussianMixture, LmbDensity, Measurement, Region,
    SensorModel, State, StateCov,
};
use rand::Rng;

pub fn random_cov<R: Rng>(rng: &mut R) -> StateCov {
    let a = StateCov::from_fn(|_, _| rng.random_range(-3.0..3.0));
    a * a.transpose() + StateCov::identity() * rng.random_range(5.0..60.0)
}

pub fn random_state<R: Rng>(rng: &mut R, spread: f64) -> State {
    State::new(
        rng.random_range(-spread..spread),
        rng.random_range(-5.0..5.0),
        rng.random_range(-spread..spread),
        rng.random_range(-5.0..5.0),
    )
}

pub fn random_mixture<R: Rng>(rng: &mut R, center: State) -> GaussianMixture {
    let n = rng.random_range(1..=2);
    let comps = (0..n)
        .map(|_| {
            let offset = random_state(rng, 8.0);
            GaussianComponent::new(rng.random_range(0.2..1.0), center + offset, random_cov(rng))
        })
        .collect();
    GaussianMixture::from_components(comps).normalized()
}

/// Small update problem: up to `max_tracks` tracks and `max_meas`
/// measurements scattered near them, random clutter rate and p_D.
pub fn random_problem<R: Rng>(
    rng: &mut R,
    max_tracks: usize,
    max_meas: usize,
) -> (PredictedLmb, Vec<Measurement>, SensorModel) {
    let n = rng.random_range(1..=max_tracks);
    let m = rng.random_range(0..=max_meas);
    let tracks: Vec<BernoulliTrack> = (0..n)
        .map(|i| {
            let center = random_state(rng, 40.0);
            BernoulliTrack::new(
                rng.random_range(0.05..0.95),
                random_mixture(rng, center),
                AugmentedLabel::ungrouped(1, i as u32 + 1),
            )
        })
        .collect();
    let z = (0..m)
        .map(|_| Measurement::new(rng.random_range(-60.0..60.0), rng.random_range(-60.0..60.0)))
        .collect();
    let sensor = SensorModel {
        noise_std: rng.random_range(5.0..15.0),
        detection_probability: rng.random_range(0.5..0.99),
        region: Region::square(200.0),
        clutter_rate: rng.random_range(0.5..30.0),
    };
    let predicted = PredictedLmb::from_density(LmbDensity::new(tracks)).expect("distinct labels");
    (predicted, z, sensor)
}

/// Total variation over per-label existence, treating absent labels as r = 0.
pub fn existence_tv(a: &LmbDensity, b: &LmbDensity) -> f64 {
    let mut labels: Vec<_> = a.labels().chain(b.labels()).collect();
    labels.sort();
    labels.dedup();
    let r = |d: &LmbDensity, l| d.find(l).map_or(0.0, |t| t.r);
    0.5 * labels.iter().map(|&l| (r(a, l) - r(b, l)).abs()).sum::<f64>()
}

/// Largest posterior-mean position distance over labels present in both.
pub fn max_mean_distance(a: &LmbDensity, b: &LmbDensity) -> f64 {
    a.tracks
        .iter()
        .filter_map(|t| {
            let u = b.find(t.track_label())?;
            let d = t.mean() - u.mean();
            Some(d.norm())
        })
        .fold(0.0, f64::max)
}

pub fn ospa_brute_force(x: &[Measurement], y: &[Measurement], p: f64, c: f64) -> f64 {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let n = large.len();
    if n == 0 {
        return 0.0;
    }
    let best = all_permutations(n)
        .iter()
        .map(|perm| {
            small
                .iter()
                .zip(perm)
                .map(|(a, &j)| (a - large[j]).norm().min(c).powf(p))
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    let penalty = c.powf(p) * (n - small.len()) as f64;
    ((best + penalty) / n as f64).powf(1.0 / p)
}

/// Partition from the transitive closure of an adjacency relation, each
/// block sorted, blocks ordered by smallest member.
pub fn closure_partition(adj: &[Vec<u8>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut reach: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i == j || adj[i][j] != 0).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let block: Vec<usize> = (0..n).filter(|&j| reach[i][j]).collect();
        for &j in &block {
            seen[j] = true;
        }
        out.push(block);
    }
    out
}

/// The adjacency matrix of the six-target grouping example.
pub fn example_adjacency() -> Vec<Vec<u8>> {
    vec![
        vec![0, 1, 1, 0, 0, 0],
        vec![1, 0, 1, 0, 0, 0],
        vec![1, 1, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 0],
        vec![0, 0, 0, 1, 0, 0],
        vec![0, 0, 0, 0, 0, 0],
    ]
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}
