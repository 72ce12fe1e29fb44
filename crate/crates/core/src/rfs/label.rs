use std::fmt;

use super::State;

/// Track identity `(k, i)`: birth step and birth index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrackLabel {
    pub k: u32,
    pub i: u32,
}

impl TrackLabel {
    pub fn new(k: u32, i: u32) -> Self {
        Self { k, i }
    }
}

impl fmt::Display for TrackLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.i)
    }
}

/// Track label extended with group information.
///
/// `group == 0` means the track belongs to no group; its `center` is then the
/// all-zeros sentinel and is never read by the dynamics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AugmentedLabel {
    pub track: TrackLabel,
    pub group: u32,
    pub center: State,
}

impl AugmentedLabel {
    pub fn ungrouped(k: u32, i: u32) -> Self {
        Self {
            track: TrackLabel::new(k, i),
            group: 0,
            center: State::zeros(),
        }
    }

    pub fn grouped(track: TrackLabel, group: u32, center: State) -> Self {
        debug_assert!(group != 0);
        Self {
            track,
            group,
            center,
        }
    }

    pub fn is_grouped(&self) -> bool {
        self.group != 0
    }

    /// Same track identity, group fields reset to the ungrouped sentinel.
    pub fn without_group(&self) -> Self {
        Self {
            track: self.track,
            group: 0,
            center: State::zeros(),
        }
    }
}
