use std::collections::HashSet;

use super::{AugmentedLabel, GaussianMixture, State, TrackLabel};

/// A labeled Bernoulli component: exists with probability `r`, and if it
/// exists its state is distributed as `density`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernoulliTrack {
    pub r: f64,
    pub density: GaussianMixture,
    pub label: AugmentedLabel,
}

impl BernoulliTrack {
    pub fn new(r: f64, density: GaussianMixture, label: AugmentedLabel) -> Self {
        Self { r, density, label }
    }

    pub fn track_label(&self) -> TrackLabel {
        self.label.track
    }

    pub fn mean(&self) -> State {
        self.density.mean()
    }

    /// Set density of the Bernoulli RFS at `realization` (empty set or a
    /// single state): `1 - r` or `r * p(x)`.
    pub fn set_pdf(&self, realization: Option<&State>) -> f64 {
        match realization {
            None => 1.0 - self.r,
            Some(x) => self.r * self.density.pdf(x),
        }
    }
}

/// Labeled multi-Bernoulli density: independent Bernoulli tracks with
/// pairwise-distinct `(k, i)` labels.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LmbDensity {
    pub tracks: Vec<BernoulliTrack>,
}

/// Label/state projection selectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Full augmented label `(k, i, g, c)`.
    Label,
    /// Track label `(k, i)`.
    TrackLabel,
    /// Group id `g`.
    Group,
    /// Group center `c`.
    Center,
    /// Kinematic state (the track's posterior mean).
    State,
    /// State paired with `(k, i)`.
    StateTrackLabel,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Projected {
    Label(AugmentedLabel),
    TrackLabel(TrackLabel),
    Group(u32),
    Center(State),
    State(State),
    StateTrackLabel(State, TrackLabel),
}

impl LmbDensity {
    pub fn new(tracks: Vec<BernoulliTrack>) -> Self {
        Self { tracks }
    }

    pub fn len(&self) -> usize {
        self.tracks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tracks.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = TrackLabel> + '_ {
        self.tracks.iter().map(|t| t.label.track)
    }

    pub fn find(&self, label: TrackLabel) -> Option<&BernoulliTrack> {
        self.tracks.iter().find(|t| t.label.track == label)
    }

    pub fn has_distinct_labels(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.tracks.len());
        self.labels().all(|l| seen.insert(l))
    }

    /// First repeated `(k, i)` label, if any.
    pub fn duplicate_label(&self) -> Option<TrackLabel> {
        let mut seen = HashSet::with_capacity(self.tracks.len());
        self.labels().find(|l| !seen.insert(*l))
    }

    pub fn project(&self, selector: Projection) -> Vec<Projected> {
        self.tracks
            .iter()
            .map(|t| match selector {
                Projection::Label => Projected::Label(t.label),
                Projection::TrackLabel => Projected::TrackLabel(t.label.track),
                Projection::Group => Projected::Group(t.label.group),
                Projection::Center => Projected::Center(t.label.center),
                Projection::State => Projected::State(t.mean()),
                Projection::StateTrackLabel => Projected::StateTrackLabel(t.mean(), t.label.track),
            })
            .collect()
    }

    pub fn cardinality_distribution(&self) -> Vec<f64> {
        cardinality_distribution(self.tracks.iter().map(|t| t.r))
    }

    pub fn expected_cardinality(&self) -> f64 {
        self.tracks.iter().map(|t| t.r).sum()
    }
}

/// Poisson-binomial pmf of the number of existing components: entry `n` is
/// the coefficient of `z^n` in `prod_j (1 - r_j + r_j z)`.
pub fn cardinality_distribution(existence: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pmf = vec![1.0];
    for r in existence {
        let mut next = vec![0.0; pmf.len() + 1];
        for (n, p) in pmf.iter().enumerate() {
            next[n] += p * (1.0 - r);
            next[n + 1] += p * r;
        }
        pmf = next;
    }
    pmf
}

/// Set exponential `h^X = prod_{x in X} h(x)`, with `h^{} = 1`.
pub fn set_exponential<T>(h: impl Fn(&T) -> f64, set: &[T]) -> f64 {
    set.iter().map(h).product()
}

/// One term of the update-time GLMB expansion: the existing labels, their
/// measurement assignment (`0` is a missed detection, `j > 0` is the j-th
/// measurement) and the hypothesis log-weight.
#[derive(Clone, Debug, PartialEq)]
pub struct GlmbHypothesis {
    pub labels: Vec<TrackLabel>,
    pub theta: Vec<usize>,
    pub log_weight: f64,
}

impl GlmbHypothesis {
    /// `theta(i) == theta(i') > 0` implies `i == i'`.
    pub fn is_valid(&self) -> bool {
        let mut used = HashSet::new();
        self.labels.len() == self.theta.len()
            && self.theta.iter().filter(|&&j| j > 0).all(|j| used.insert(*j))
    }
}
