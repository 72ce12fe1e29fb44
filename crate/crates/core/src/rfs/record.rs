//! Line-oriented JSON records for LMB state dumps.
//!
//! One track per line:
//!
//! ```json
//! {"r":0.98,"k":1,"i":2,"g":0,"c":[0,0,0,0],
//!  "components":[{"weight":1.0,"mean":[..4],"cov":[[..4],[..4],[..4],[..4]]}]}
//! ```

use serde::{Deserialize, Serialize};

use super::{
    AugmentedLabel, BernoulliTrack, GaussianComponent, GaussianMixture, LmbDensity, State,
    StateCov, TrackLabel,
};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub weight: f64,
    pub mean: [f64; 4],
    /// Row-major.
    pub cov: [[f64; 4]; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackRecord {
    pub r: f64,
    pub k: u32,
    pub i: u32,
    pub g: u32,
    pub c: [f64; 4],
    pub components: Vec<ComponentRecord>,
}

impl From<&BernoulliTrack> for TrackRecord {
    fn from(t: &BernoulliTrack) -> Self {
        TrackRecord {
            r: t.r,
            k: t.label.track.k,
            i: t.label.track.i,
            g: t.label.group,
            c: t.label.center.into(),
            components: t
                .density
                .components()
                .iter()
                .map(|c| ComponentRecord {
                    weight: c.weight,
                    mean: c.mean.into(),
                    cov: std::array::from_fn(|row| std::array::from_fn(|col| c.cov[(row, col)])),
                })
                .collect(),
        }
    }
}

impl From<TrackRecord> for BernoulliTrack {
    fn from(rec: TrackRecord) -> Self {
        let components = rec
            .components
            .into_iter()
            .map(|c| {
                GaussianComponent::new(
                    c.weight,
                    State::from(c.mean),
                    StateCov::from_fn(|row, col| c.cov[row][col]),
                )
            })
            .collect();
        BernoulliTrack::new(
            rec.r,
            GaussianMixture::from_components(components),
            AugmentedLabel {
                track: TrackLabel::new(rec.k, rec.i),
                group: rec.g,
                center: State::from(rec.c),
            },
        )
    }
}

impl LmbDensity {
    pub fn to_records(&self) -> Vec<TrackRecord> {
        self.tracks.iter().map(TrackRecord::from).collect()
    }

    pub fn from_records(records: Vec<TrackRecord>) -> Self {
        LmbDensity::new(records.into_iter().map(BernoulliTrack::from).collect())
    }

    /// One JSON object per track, newline-terminated.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for rec in self.to_records() {
            out.push_str(&serde_json::to_string(&rec).expect("track record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_json_lines(text: &str) -> Result<Self> {
        let records = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str::<TrackRecord>)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_records(records))
    }
}
