use grouptrack::models::MotionModel;
use grouptrack::{GaussianComponent, GaussianMixture, Measurement, Region, SensorModel, State, StateCov};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sensor() -> SensorModel {
    SensorModel {
        noise_std: 10.0,
        detection_probability: 0.98,
        region: Region::square(1000.0),
        clutter_rate: 30.0,
    }
}

#[test]
fn likelihood_matches_grid_quadrature() {
    let cov_a = StateCov::new(
        80.0, 5.0, 10.0, 0.0, //
        5.0, 30.0, 0.0, 2.0, //
        10.0, 0.0, 60.0, -4.0, //
        0.0, 2.0, -4.0, 25.0,
    );
    let cov_b = StateCov::from_diagonal(&State::new(40.0, 10.0, 120.0, 10.0));
    let gm = GaussianMixture::from_components(vec![
        GaussianComponent::new(0.3, State::new(0.0, 1.0, 0.0, -1.0), cov_a),
        GaussianComponent::new(0.7, State::new(25.0, 0.0, -10.0, 3.0), cov_b),
    ]);
    let sm = sensor();
    let z = Measurement::new(12.0, -3.0);
    let eta = sm.measurement_update(&z, &gm).unwrap().log_likelihood.exp();

    // the likelihood only involves position, so integrate over the position
    // marginal of each component
    let gauss2 = |x: f64, y: f64, mx: f64, my: f64, sxx: f64, sxy: f64, syy: f64| {
        let det = sxx * syy - sxy * sxy;
        let (dx, dy) = (x - mx, y - my);
        let q = (syy * dx * dx - 2.0 * sxy * dx * dy + sxx * dy * dy) / det;
        (-0.5 * q).exp() / (2.0 * std::f64::consts::PI * det.sqrt())
    };
    let h = 0.25;
    let mut integral = 0.0;
    let mut x = -120.0;
    while x <= 160.0 {
        let mut y = -150.0;
        while y <= 140.0 {
            let prior: f64 = gm
                .components()
                .iter()
                .map(|c| c.weight * gauss2(x, y, c.mean[0], c.mean[2], c.cov[(0, 0)], c.cov[(0, 2)], c.cov[(2, 2)]))
                .sum();
            integral += prior * gauss2(z[0], z[1], x, y, 100.0, 0.0, 100.0) * h * h;
            y += h;
        }
        x += h;
    }
    assert!(((integral - eta) / eta).abs() < 1e-6, "{integral} vs {eta}");
}

#[test]
fn kalman_update_matches_textbook_equations() {
    let prior_cov = StateCov::from_diagonal(&State::new(50.0, 20.0, 70.0, 15.0));
    let mean = State::new(5.0, 1.0, -3.0, 2.0);
    let gm = GaussianMixture::single(mean, prior_cov);
    let z = Measurement::new(9.0, -8.0);
    let out = sensor().measurement_update(&z, &gm).unwrap();
    let hm = SensorModel::observation_matrix();
    let s = hm * prior_cov * hm.transpose() + nalgebra::Matrix2::identity() * 100.0;
    let k = prior_cov * hm.transpose() * s.try_inverse().unwrap();
    let post_mean = mean + k * (z - hm * mean);
    let post_cov = (StateCov::identity() - k * hm) * prior_cov;
    let c = &out.posterior.components()[0];
    assert!((c.mean - post_mean).norm() < 1e-10);
    assert!((c.cov - post_cov).norm() < 1e-10);
}

#[test]
fn clutter_counts_pass_chi_square_against_poisson() {
    let sm = sensor();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let draws = 10_000;
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..draws {
        let pts = sm.sample_clutter(&mut rng);
        assert!(pts.iter().all(|p| sm.region.contains(p)));
        *counts.entry(pts.len()).or_insert(0usize) += 1;
    }
    // bins [0,19], 20..=40 individually, [41,inf)
    let lambda: f64 = 30.0;
    let pmf = |k: usize| {
        let lg: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
        (k as f64 * lambda.ln() - lambda - lg).exp()
    };
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let observed = |lo: usize, hi: usize| counts.range(lo..=hi).map(|(_, &c)| c as f64).sum::<f64>();
    bins.push((observed(0, 19), (0..=19).map(pmf).sum()));
    for k in 20..=40 {
        bins.push((observed(k, k), pmf(k)));
    }
    bins.push((observed(41, usize::MAX), 1.0 - (0..=40).map(pmf).sum::<f64>()));
    let stat: f64 = bins
        .iter()
        .map(|&(o, p)| {
            let e = p * draws as f64;
            (o - e).powi(2) / e
        })
        .sum();
    // upper 1% point of chi-square with 22 degrees of freedom
    assert!(stat < 40.29, "chi-square statistic {stat}");
}

#[test]
fn no_clutter_rate_means_no_clutter() {
    let sm = SensorModel {
        clutter_rate: 0.0,
        ..sensor()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!((0..100).all(|_| sm.sample_clutter(&mut rng).is_empty()));
}

#[test]
fn in_group_prediction_with_own_mean_equals_independent() {
    let mm = MotionModel::constant_velocity(1.0, 5.0);
    let x = State::new(-800.0, 5.0, 600.0, -5.0);
    let gm = GaussianMixture::single(x, StateCov::identity() * 10.0);
    let a = mm.predict_in_group(&gm, &x).mean();
    let b = mm.predict_independent(&gm).mean();
    assert!((a - b).norm() < 1e-12);
    assert_eq!(mm.predict_group_center(&x), State::new(-795.0, 5.0, 595.0, -5.0));
}
