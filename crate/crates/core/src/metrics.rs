//! Optimal subpattern assignment (OSPA) distance.

use crate::filter::assignment::{solve, CostMatrix};
use crate::rfs::Measurement;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OspaParams {
    pub order: f64,
    pub cutoff: f64,
}

impl Default for OspaParams {
    fn default() -> Self {
        Self {
            order: 1.0,
            cutoff: 100.0,
        }
    }
}

/// OSPA distance between two planar point sets. Two empty sets are at
/// distance zero.
pub fn ospa(x: &[Measurement], y: &[Measurement], params: OspaParams) -> f64 {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let (m, n) = (small.len(), large.len());
    if n == 0 {
        return 0.0;
    }
    let p = params.order;
    let c = params.cutoff;
    let mut cost = CostMatrix::new(m, n, 0.0);
    for (i, a) in small.iter().enumerate() {
        for (j, b) in large.iter().enumerate() {
            cost.set(i, j, (a - b).norm().min(c).powf(p));
        }
    }
    let localization = solve(&cost).expect("dense finite costs are always assignable").assignment.cost;
    let cardinality = c.powf(p) * (n - m) as f64;
    ((localization + cardinality) / n as f64).powf(1.0 / p)
}
