use nalgebra::{SMatrix, SVector};

use super::{State, StateCov};

/// Log-density of `N(x; mean, cov)`. `None` if `cov` is not positive definite.
pub fn log_gaussian_pdf<const D: usize>(
    x: &SVector<f64, D>,
    mean: &SVector<f64, D>,
    cov: &SMatrix<f64, D, D>,
) -> Option<f64> {
    let chol = cov.cholesky()?;
    let l = chol.l();
    let diff = x - mean;
    let y = l.solve_lower_triangular(&diff)?;
    let log_det: f64 = 2.0 * (0..D).map(|i| l[(i, i)].ln()).sum::<f64>();
    let d = D as f64;
    Some(-0.5 * (d * (2.0 * std::f64::consts::PI).ln() + log_det + y.norm_squared()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianComponent {
    pub weight: f64,
    pub mean: State,
    pub cov: StateCov,
}

impl GaussianComponent {
    pub fn new(weight: f64, mean: State, cov: StateCov) -> Self {
        Self { weight, mean, cov }
    }
}

/// Mixture-reduction housekeeping parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReductionParams {
    /// Components lighter than this are dropped.
    pub prune_threshold: f64,
    /// Squared Mahalanobis distance below which components are merged.
    pub merge_distance: f64,
    pub max_components: usize,
}

impl Default for ReductionParams {
    fn default() -> Self {
        Self {
            prune_threshold: 1e-5,
            merge_distance: 4.0,
            max_components: 100,
        }
    }
}

/// Weighted sum of Gaussians over the kinematic state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GaussianMixture {
    components: Vec<GaussianComponent>,
}

impl GaussianMixture {
    pub fn single(mean: State, cov: StateCov) -> Self {
        Self {
            components: vec![GaussianComponent::new(1.0, mean, cov)],
        }
    }

    pub fn from_components(components: Vec<GaussianComponent>) -> Self {
        Self { components }
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    pub fn into_components(self) -> Vec<GaussianComponent> {
        self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    pub fn normalize(&mut self) {
        let total = self.total_weight();
        if total > 0.0 {
            for c in &mut self.components {
                c.weight /= total;
            }
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// First moment, `∫ x p(x) dx`.
    pub fn mean(&self) -> State {
        let total = self.total_weight();
        if total <= 0.0 {
            return State::zeros();
        }
        self.components
            .iter()
            .fold(State::zeros(), |acc, c| acc + c.mean * c.weight)
            / total
    }

    pub fn pdf(&self, x: &State) -> f64 {
        self.components
            .iter()
            .filter_map(|c| log_gaussian_pdf(x, &c.mean, &c.cov).map(|l| c.weight * l.exp()))
            .sum()
    }

    pub fn map_components(&self, f: impl Fn(&GaussianComponent) -> GaussianComponent) -> Self {
        Self {
            components: self.components.iter().map(f).collect(),
        }
    }

    /// Prune, merge, cap and renormalize.
    pub fn reduce(&self, params: &ReductionParams) -> Self {
        if self.components.len() <= 1 {
            return self.clone().normalized();
        }

        let mut kept: Vec<GaussianComponent> = self
            .components
            .iter()
            .filter(|c| c.weight >= params.prune_threshold)
            .cloned()
            .collect();
        if kept.is_empty() {
            let heaviest = self
                .components
                .iter()
                .max_by(|a, b| a.weight.total_cmp(&b.weight))
                .cloned()
                .expect("non-empty mixture");
            kept.push(heaviest);
        }
        // stable: equal weights keep their input order
        kept.sort_by(|a, b| b.weight.total_cmp(&a.weight));

        let mut merged = Vec::new();
        let mut remaining = kept;
        while !remaining.is_empty() {
            let lead = remaining.remove(0);
            let Some(lead_chol) = lead.cov.cholesky() else {
                merged.push(lead);
                continue;
            };
            let (close, far): (Vec<_>, Vec<_>) = remaining.into_iter().partition(|c| {
                let d = c.mean - lead.mean;
                d.dot(&lead_chol.solve(&d)) < params.merge_distance
            });
            remaining = far;
            if close.is_empty() {
                merged.push(lead);
                continue;
            }
            let members: Vec<GaussianComponent> = std::iter::once(lead).chain(close).collect();
            merged.push(moment_match(&members));
        }

        merged.sort_by(|a, b| b.weight.total_cmp(&a.weight));
        merged.truncate(params.max_components.max(1));
        Self { components: merged }.normalized()
    }
}

fn moment_match(members: &[GaussianComponent]) -> GaussianComponent {
    let weight: f64 = members.iter().map(|c| c.weight).sum();
    let mean = members
        .iter()
        .fold(State::zeros(), |acc, c| acc + c.mean * c.weight)
        / weight;
    let cov = members.iter().fold(StateCov::zeros(), |acc, c| {
        let d = c.mean - mean;
        acc + (c.cov + d * d.transpose()) * c.weight
    }) / weight;
    GaussianComponent::new(weight, mean, 0.5 * (cov + cov.transpose()))
}
