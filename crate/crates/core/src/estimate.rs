//! Point estimates from an LMB posterior.

use std::collections::BTreeMap;

use crate::rfs::{AugmentedLabel, LmbDensity, State, TrackLabel};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TargetEstimate {
    pub state: State,
    pub label: AugmentedLabel,
    pub r: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupSummary {
    pub id: u32,
    pub members: Vec<TrackLabel>,
    pub center: State,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepEstimate {
    pub n_hat: usize,
    pub targets: Vec<TargetEstimate>,
    pub group_count: usize,
    pub groups: Vec<GroupSummary>,
}

/// Mode of the cardinality distribution; ties go to the smaller count.
pub fn map_cardinality(density: &LmbDensity) -> usize {
    let pmf = density.cardinality_distribution();
    let mut best = 0;
    for (n, &p) in pmf.iter().enumerate() {
        if p > pmf[best] {
            best = n;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub targets: Vec<TargetEstimate>,
    /// Set when more targets were requested than there are tracks.
    pub clamped: bool,
}

/// The `n` tracks with the largest existence probability (ties by `(k, i)`),
/// each with its posterior mean.
pub fn extract_targets(density: &LmbDensity, n: usize) -> Extraction {
    let mut order: Vec<usize> = (0..density.len()).collect();
    order.sort_by(|&a, &b| {
        let (ta, tb) = (&density.tracks[a], &density.tracks[b]);
        tb.r.total_cmp(&ta.r).then(ta.label.track.cmp(&tb.label.track))
    });
    let clamped = n > order.len();
    let targets = order
        .into_iter()
        .take(n)
        .map(|i| {
            let t = &density.tracks[i];
            TargetEstimate {
                state: t.mean(),
                label: t.label,
                r: t.r,
            }
        })
        .collect();
    Extraction { targets, clamped }
}

/// Count distinct nonzero group ids among `targets` and list their members.
pub fn summarize_groups(targets: &[TargetEstimate]) -> Result<(usize, Vec<GroupSummary>)> {
    let mut groups: BTreeMap<u32, GroupSummary> = BTreeMap::new();
    for t in targets.iter().filter(|t| t.label.is_grouped()) {
        let entry = groups.entry(t.label.group).or_insert_with(|| GroupSummary {
            id: t.label.group,
            members: Vec::new(),
            center: t.label.center,
        });
        if (entry.center - t.label.center).abs().max() > 1e-6 {
            return Err(Error::InconsistentGroup { group: t.label.group });
        }
        entry.members.push(t.label.track);
    }
    let groups: Vec<GroupSummary> = groups.into_values().collect();
    Ok((groups.len(), groups))
}

pub fn estimate_step(density: &LmbDensity) -> Result<StepEstimate> {
    let n_hat = map_cardinality(density);
    let targets = extract_targets(density, n_hat).targets;
    let (group_count, groups) = summarize_groups(&targets)?;
    Ok(StepEstimate {
        n_hat,
        targets,
        group_count,
        groups,
    })
}
