mod common;

use grouptrack::filter::assignment::{ranked_assignments, CostMatrix};
use grouptrack::filter::{
    exhaustive_hypotheses, predict, update, update_exhaustive, update_with_diagnostics, PredictedLmb,
};
use grouptrack::{
    AugmentedLabel, BernoulliTrack, BirthModel, Error, FilterParams, GaussianMixture, LmbDensity, Measurement,
    MotionModel, Region, SensorModel, State, StateCov,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn oracle_params() -> FilterParams {
    FilterParams {
        max_hypotheses: 1_000_000,
        ..FilterParams::default()
    }
}

fn one_track(r: f64) -> PredictedLmb {
    PredictedLmb::from_density(LmbDensity::new(vec![BernoulliTrack::new(
        r,
        GaussianMixture::single(State::zeros(), StateCov::identity() * 100.0),
        AugmentedLabel::ungrouped(1, 1),
    )]))
    .unwrap()
}

fn sensor(pd: f64, clutter_rate: f64) -> SensorModel {
    SensorModel {
        noise_std: 10.0,
        detection_probability: pd,
        region: Region::square(1000.0),
        clutter_rate,
    }
}

#[test]
fn ranked_update_matches_exhaustive_on_seeded_instances() {
    let params = oracle_params();
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (predicted, z, sm) = common::random_problem(&mut rng, 3, 3);
        let fast = update(&predicted, &z, &sm, &params).unwrap();
        let exact = update_exhaustive(&predicted, &z, &sm, &params).unwrap();
        let tv = common::existence_tv(&fast, &exact);
        assert!(tv <= 1e-9, "seed {seed}: existence TV {tv:e}");
        let dist = common::max_mean_distance(&fast, &exact);
        assert!(dist <= 1e-6, "seed {seed}: mean distance {dist:e}");
    }
}

#[test]
fn larger_instances_agree_too() {
    let params = oracle_params();
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let (predicted, z, sm) = common::random_problem(&mut rng, 6, 6);
        let fast = update(&predicted, &z, &sm, &params).unwrap();
        let exact = update_exhaustive(&predicted, &z, &sm, &params).unwrap();
        assert!(common::existence_tv(&fast, &exact) <= 1e-9, "seed {seed}");
        assert!(common::max_mean_distance(&fast, &exact) <= 1e-6, "seed {seed}");
    }
}

#[test]
fn missed_detection_closed_form() {
    let post = update(&one_track(0.5), &[], &sensor(0.98, 30.0), &FilterParams::default()).unwrap();
    assert!((post.tracks[0].r - 0.01 / 0.51).abs() < 1e-12);
    for (r, pd) in [(0.2, 0.9), (0.9, 0.5), (0.7, 0.98)] {
        let post = update(&one_track(r), &[], &sensor(pd, 30.0), &FilterParams::default()).unwrap();
        let expected = r * (1.0 - pd) / (1.0 - r * pd);
        assert!((post.tracks[0].r - expected).abs() < 1e-12);
    }
}

#[test]
fn detection_drives_existence_to_one_as_clutter_vanishes() {
    let z = [Measurement::new(3.0, -2.0)];
    let mut last = 0.0;
    for lambda in [30.0, 1.0, 1e-3, 1e-6, 1e-9] {
        let post = update(&one_track(0.3), &z, &sensor(0.98, lambda), &FilterParams::default()).unwrap();
        let r = post.tracks[0].r;
        assert!(r >= last);
        last = r;
    }
    assert!(last > 1.0 - 1e-6);
}

#[test]
fn clutter_free_update_assigns_the_only_measurement() {
    let z = [Measurement::new(3.0, -2.0)];
    let post = update(&one_track(0.3), &z, &sensor(0.98, 0.0), &FilterParams::default()).unwrap();
    assert_eq!(post.tracks[0].r, 1.0);
    let exact = update_exhaustive(&one_track(0.3), &z, &sensor(0.98, 0.0), &FilterParams::default()).unwrap();
    assert!((post.tracks[0].mean() - exact.tracks[0].mean()).norm() < 1e-9);
}

#[test]
fn unexplainable_measurements_without_clutter_are_degenerate() {
    let z = [Measurement::new(3.0, -2.0), Measurement::new(40.0, 9.0)];
    let res = update(&one_track(0.3), &z, &sensor(0.98, 0.0), &FilterParams::default());
    assert!(matches!(res, Err(Error::DegenerateUpdate)));
    let res = update_exhaustive(&one_track(0.3), &z, &sensor(0.98, 0.0), &FilterParams::default());
    assert!(matches!(res, Err(Error::DegenerateUpdate)));
}

#[test]
fn hypothesis_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 0..=4 {
        let tracks = (0..n)
            .map(|i| {
                BernoulliTrack::new(
                    0.5,
                    common::random_mixture(&mut rng, State::zeros()),
                    AugmentedLabel::ungrouped(1, i + 1),
                )
            })
            .collect();
        let p = PredictedLmb::from_density(LmbDensity::new(tracks)).unwrap();
        assert_eq!(exhaustive_hypotheses(&p, &[], &sensor(0.9, 10.0)).unwrap().len(), 1 << n);
    }
    let hyps = exhaustive_hypotheses(&one_track(0.5), &[Measurement::new(1.0, 1.0)], &sensor(0.9, 10.0)).unwrap();
    assert_eq!(hyps.len(), 3);
    for h in &hyps {
        assert!(h.is_valid());
    }
}

#[test]
fn exhaustive_refuses_large_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (p, _, sm) = common::random_problem(&mut rng, 1, 0);
    let z: Vec<Measurement> = (0..9).map(|i| Measurement::new(i as f64, 0.0)).collect();
    assert!(matches!(
        update_exhaustive(&p, &z, &sm, &FilterParams::default()),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn hypothesis_weights_are_normalized_on_both_paths() {
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + seed);
        let (p, z, sm) = common::random_problem(&mut rng, 3, 3);
        let exact = exhaustive_hypotheses(&p, &z, &sm).unwrap();
        let total: f64 = exact.iter().map(|h| h.log_weight.exp()).sum();
        assert!((total - 1.0).abs() < 1e-9);
        let out = update_with_diagnostics(&p, &z, &sm, &oracle_params(), 100_000).unwrap();
        let total: f64 = out.top_hypotheses.iter().map(|h| h.log_weight.exp()).sum();
        assert!((total - 1.0).abs() < 1e-9, "seed {seed}: {total}");
        let best_exact = exact.iter().map(|h| h.log_weight).fold(f64::NEG_INFINITY, f64::max);
        assert!((out.top_hypotheses[0].log_weight - best_exact).abs() < 1e-9);
        for w in out.top_hypotheses.windows(2) {
            assert!(w[0].log_weight >= w[1].log_weight);
        }
    }
}

#[test]
fn update_preserves_labels_and_bounds() {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
        let (p, z, sm) = common::random_problem(&mut rng, 5, 6);
        let post = update(&p, &z, &sm, &FilterParams::default()).unwrap();
        let prior: Vec<_> = p.density().labels().collect();
        for t in &post.tracks {
            assert!(prior.contains(&t.track_label()));
            assert!((0.0..=1.0).contains(&t.r));
            assert!((t.density.total_weight() - 1.0).abs() < 1e-9);
            for c in t.density.components() {
                assert!(c.cov.symmetric_eigenvalues().min() > 0.0);
            }
        }
    }
}

#[test]
fn update_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (p, z, sm) = common::random_problem(&mut rng, 6, 6);
    let a = update(&p, &z, &sm, &FilterParams::default()).unwrap();
    let b = update(&p, &z, &sm, &FilterParams::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn predict_scales_linearly_in_existence() {
    let motion = MotionModel::constant_velocity(1.0, 5.0);
    let birth = BirthModel::new(Vec::new());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let r: f64 = rng.random_range(0.01..0.5);
        let alpha: f64 = rng.random_range(0.1..2.0);
        let mk = |r| {
            LmbDensity::new(vec![BernoulliTrack::new(
                r,
                GaussianMixture::single(State::zeros(), StateCov::identity()),
                AugmentedLabel::ungrouped(0, 1),
            )])
        };
        let a = predict(&mk(r), &motion, &birth, 0.99, 1).unwrap();
        let b = predict(&mk(alpha * r), &motion, &birth, 0.99, 1).unwrap();
        assert!((b.tracks()[0].r - alpha * a.tracks()[0].r).abs() < 1e-15);
    }
}

fn brute_force_costs(cost: &[Vec<f64>]) -> Vec<(f64, Vec<usize>)> {
    let mut out: Vec<(f64, Vec<usize>)> = common::all_permutations(cost.len())
        .into_iter()
        .map(|p| (p.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<f64>(), p))
        .filter(|(c, _)| c.is_finite())
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

proptest! {
    #[test]
    fn ranked_assignment_matches_permutation_enumeration(
        entries in prop::collection::vec(prop_oneof![9 => 0.0f64..20.0, 1 => Just(f64::INFINITY)], 9),
    ) {
        let rows: Vec<Vec<f64>> = entries.chunks(3).map(<[f64]>::to_vec).collect();
        let ranked = ranked_assignments(&CostMatrix::from_rows(&rows), 10);
        let brute = brute_force_costs(&rows);
        prop_assert_eq!(ranked.len(), brute.len());
        for (a, (c, _)) in ranked.iter().zip(&brute) {
            prop_assert!((a.cost - c).abs() < 1e-9);
        }
        let mut got: Vec<Vec<usize>> = ranked.iter().map(|a| a.cols.clone()).collect();
        let mut want: Vec<Vec<usize>> = brute.into_iter().map(|(_, p)| p).collect();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }
}
