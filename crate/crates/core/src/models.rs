//! Motion, birth, sensor and clutter models.
//!
//! All models are linear-Gaussian over the state `[px, vx, py, vy]`.

use nalgebra::{Matrix2, Matrix2x4, Matrix4x2};
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::rfs::{
    log_gaussian_pdf, AugmentedLabel, BernoulliTrack, GaussianComponent, GaussianMixture,
    Measurement, State, StateCov,
};
use crate::{Error, Result};

/// Nearly-constant-velocity motion with white acceleration noise.
#[derive(Clone, Debug, PartialEq)]
pub struct MotionModel {
    pub dt: f64,
    /// Acceleration noise standard deviation (m/s²).
    pub process_noise_std: f64,
    pub transition: StateCov,
    pub process_noise: StateCov,
}

impl MotionModel {
    pub fn constant_velocity(dt: f64, process_noise_std: f64) -> Self {
        #[rustfmt::skip]
        let transition = StateCov::new(
            1.0, dt,  0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 1.0, dt,
            0.0, 0.0, 0.0, 1.0,
        );
        let h = dt * dt / 2.0;
        #[rustfmt::skip]
        let gain = Matrix4x2::new(
            h,   0.0,
            dt,  0.0,
            0.0, h,
            0.0, dt,
        );
        let process_noise = gain * gain.transpose() * process_noise_std.powi(2);
        Self {
            dt,
            process_noise_std,
            transition,
            process_noise,
        }
    }

    /// Independent target: `x+ ~ N(F x, Q)`.
    pub fn predict_independent(&self, density: &GaussianMixture) -> GaussianMixture {
        let f = &self.transition;
        density.map_components(|c| {
            GaussianComponent::new(
                c.weight,
                f * c.mean,
                symmetrize(f * c.cov * f.transpose() + self.process_noise),
            )
        })
    }

    /// Group member under the leader-follower model:
    /// `x+ ~ N(x + (F - I) c, Q)` where `c` is the group center.
    pub fn predict_in_group(&self, density: &GaussianMixture, center: &State) -> GaussianMixture {
        let shift = self.center_displacement(center);
        density.map_components(|c| {
            GaussianComponent::new(
                c.weight,
                c.mean + shift,
                symmetrize(c.cov + self.process_noise),
            )
        })
    }

    /// `(F - I) c`: how far the group center moves in one step.
    pub fn center_displacement(&self, center: &State) -> State {
        self.transition * center - center
    }

    /// Mean propagation of the group center, `F c`.
    pub fn predict_group_center(&self, center: &State) -> State {
        self.transition * center
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BirthComponent {
    pub r: f64,
    pub mean: State,
    pub cov: StateCov,
}

/// Labeled multi-Bernoulli birth model with single-Gaussian components.
#[derive(Clone, Debug, PartialEq)]
pub struct BirthModel {
    pub components: Vec<BirthComponent>,
}

impl BirthModel {
    pub fn new(components: Vec<BirthComponent>) -> Self {
        Self { components }
    }

    /// Newborn tracks for step `time`, labeled `(time, 1..=n)` and ungrouped.
    pub fn birth_tracks(&self, time: u32) -> Vec<BernoulliTrack> {
        self.components
            .iter()
            .enumerate()
            .map(|(idx, b)| {
                BernoulliTrack::new(
                    b.r,
                    GaussianMixture::single(b.mean, b.cov),
                    AugmentedLabel::ungrouped(time, idx as u32 + 1),
                )
            })
            .collect()
    }
}

/// Axis-aligned surveillance rectangle (m).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Region {
    pub fn square(half_width: f64) -> Self {
        Self {
            x_min: -half_width,
            x_max: half_width,
            y_min: -half_width,
            y_max: half_width,
        }
    }

    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }

    pub fn is_empty(&self) -> bool {
        !(self.x_max > self.x_min && self.y_max > self.y_min)
    }

    pub fn contains(&self, p: &Measurement) -> bool {
        (self.x_min..=self.x_max).contains(&p[0]) && (self.y_min..=self.y_max).contains(&p[1])
    }
}

/// Linear position sensor with Poisson clutter uniform over `region`.
#[derive(Clone, Debug, PartialEq)]
pub struct SensorModel {
    /// Per-axis measurement noise standard deviation (m).
    pub noise_std: f64,
    pub detection_probability: f64,
    pub region: Region,
    /// Mean number of clutter returns per scan.
    pub clutter_rate: f64,
}

/// Output of a Gaussian-mixture Kalman measurement update.
#[derive(Clone, Debug)]
pub struct MeasurementUpdate {
    /// `ln ∫ p(x) g(z | x) dx`.
    pub log_likelihood: f64,
    pub posterior: GaussianMixture,
}

impl SensorModel {
    pub fn observation_matrix() -> Matrix2x4<f64> {
        #[rustfmt::skip]
        let h = Matrix2x4::new(
            1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 1.0, 0.0,
        );
        h
    }

    pub fn noise_cov(&self) -> Matrix2<f64> {
        Matrix2::identity() * self.noise_std.powi(2)
    }

    /// Clutter intensity `κ(z) = λ / V` inside the region.
    pub fn clutter_intensity(&self) -> f64 {
        self.clutter_rate / self.region.area()
    }

    pub fn observe(state: &State) -> Measurement {
        Measurement::new(state[0], state[2])
    }

    /// Per-component Kalman update of `density` with measurement `z`.
    ///
    /// Fails with [`Error::SingularInnovation`] if some innovation covariance
    /// is not positive definite.
    pub fn measurement_update(
        &self,
        z: &Measurement,
        density: &GaussianMixture,
    ) -> Result<MeasurementUpdate> {
        let h = Self::observation_matrix();
        let r = self.noise_cov();
        let mut log_terms = Vec::with_capacity(density.len());
        let mut comps = Vec::with_capacity(density.len());
        for c in density.components() {
            let predicted = h * c.mean;
            let s = symmetrize2(h * c.cov * h.transpose() + r);
            let chol = s.cholesky().ok_or(Error::SingularInnovation)?;
            let log_lik = log_gaussian_pdf(z, &predicted, &s).ok_or(Error::SingularInnovation)?;
            let pht = c.cov * h.transpose();
            let gain = chol.solve(&pht.transpose()).transpose();
            let mean = c.mean + gain * (z - predicted);
            // Joseph form keeps the covariance PSD
            let a = StateCov::identity() - gain * h;
            let cov = symmetrize(a * c.cov * a.transpose() + gain * r * gain.transpose());
            log_terms.push(c.weight.ln() + log_lik);
            comps.push(GaussianComponent::new(0.0, mean, cov));
        }
        let log_likelihood = log_sum_exp(&log_terms);
        if log_likelihood.is_finite() {
            for (c, lt) in comps.iter_mut().zip(&log_terms) {
                c.weight = (lt - log_likelihood).exp();
            }
        }
        Ok(MeasurementUpdate {
            log_likelihood,
            posterior: GaussianMixture::from_components(comps),
        })
    }

    /// Poisson number of uniform clutter points on the region.
    pub fn sample_clutter<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Measurement> {
        if self.clutter_rate <= 0.0 {
            return Vec::new();
        }
        let count = Poisson::new(self.clutter_rate)
            .expect("positive clutter rate")
            .sample(rng) as usize;
        let reg = self.region;
        (0..count)
            .map(|_| {
                Measurement::new(
                    rng.random_range(reg.x_min..=reg.x_max),
                    rng.random_range(reg.y_min..=reg.y_max),
                )
            })
            .collect()
    }
}

pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

fn symmetrize(m: StateCov) -> StateCov {
    0.5 * (m + m.transpose())
}

fn symmetrize2(m: Matrix2<f64>) -> Matrix2<f64> {
    0.5 * (m + m.transpose())
}
