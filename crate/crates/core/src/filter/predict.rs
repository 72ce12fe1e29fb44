use crate::models::{BirthModel, MotionModel};
use crate::rfs::{BernoulliTrack, LmbDensity};
use crate::{Error, Result};

/// Predicted LMB: surviving tracks followed by births, all labels distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictedLmb {
    density: LmbDensity,
}

impl PredictedLmb {
    pub fn from_density(density: LmbDensity) -> Result<Self> {
        match density.duplicate_label() {
            Some(l) => Err(Error::DuplicateLabel(l)),
            None => Ok(Self { density }),
        }
    }

    pub fn density(&self) -> &LmbDensity {
        &self.density
    }

    pub fn tracks(&self) -> &[BernoulliTrack] {
        &self.density.tracks
    }

    pub fn into_density(self) -> LmbDensity {
        self.density
    }
}

/// Survival-weighted prediction with group-aware dynamics, plus births.
///
/// Ungrouped tracks follow `N(F x, Q)`. Grouped tracks follow the
/// leader-follower model `N(x + (F - I) c, Q)` using the group center from the
/// previous step; the center carried in the label moves to `F c`.
pub fn predict(
    posterior: &LmbDensity,
    motion: &MotionModel,
    birth: &BirthModel,
    survival_probability: f64,
    time: u32,
) -> Result<PredictedLmb> {
    let mut tracks: Vec<BernoulliTrack> = posterior
        .tracks
        .iter()
        .map(|t| {
            let mut label = t.label;
            let density = if label.is_grouped() {
                let moved = motion.predict_in_group(&t.density, &label.center);
                label.center = motion.predict_group_center(&label.center);
                moved
            } else {
                motion.predict_independent(&t.density)
            };
            BernoulliTrack::new(survival_probability * t.r, density, label)
        })
        .collect();
    tracks.extend(birth.birth_tracks(time));
    PredictedLmb::from_density(LmbDensity::new(tracks))
}
