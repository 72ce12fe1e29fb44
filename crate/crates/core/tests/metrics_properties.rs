mod common;

use grouptrack::metrics::{ospa, OspaParams};
use grouptrack::Measurement;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn points<R: Rng>(rng: &mut R, n: usize) -> Vec<Measurement> {
    (0..n)
        .map(|_| Measurement::new(rng.random_range(-150.0..150.0), rng.random_range(-150.0..150.0)))
        .collect()
}

#[test]
fn matches_brute_force_on_seeded_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let (nx, ny) = (rng.random_range(0..=6), rng.random_range(0..=6));
        let x = points(&mut rng, nx);
        let y = points(&mut rng, ny);
        for p in [1.0, 2.0] {
            let params = OspaParams { order: p, cutoff: 100.0 };
            let got = ospa(&x, &y, params);
            let want = common::ospa_brute_force(&x, &y, p, 100.0);
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }
}

#[test]
fn hand_cases() {
    let p = OspaParams::default();
    let a = Measurement::new(0.0, 0.0);
    assert_eq!(ospa(&[a], &[a], p), 0.0);
    assert_eq!(ospa(&[], &[], p), 0.0);
    assert_eq!(ospa(&[a], &[], p), 100.0);
    let y = [Measurement::new(30.0, 0.0), Measurement::new(500.0, 500.0)];
    assert_eq!(ospa(&[a], &y, p), 65.0);
}

proptest! {
    #[test]
    fn symmetric_bounded_and_triangular(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nx = rng.random_range(0..=5);
        let ny = rng.random_range(0..=5);
        let nz = rng.random_range(0..=5);
        let (x, y, z) = (points(&mut rng, nx), points(&mut rng, ny), points(&mut rng, nz));
        let p = OspaParams::default();
        let dxy = ospa(&x, &y, p);
        prop_assert!((dxy - ospa(&y, &x, p)).abs() < 1e-12);
        prop_assert!((0.0..=100.0 + 1e-12).contains(&dxy));
        prop_assert!(ospa(&x, &x, p) < 1e-12);
        prop_assert!(dxy <= ospa(&x, &z, p) + ospa(&z, &y, p) + 1e-9);
    }
}
