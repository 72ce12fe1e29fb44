//! Group-information update: proximity graph over posterior track means,
//! connected components, and reassignment of `(g, c)` in every label.

use crate::rfs::{AugmentedLabel, LmbDensity, State, TrackLabel};

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// All sets, each sorted ascending, ordered by smallest member.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Option<usize>> = vec![None; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let root = self.find(x);
            match by_root[root] {
                Some(idx) => out[idx].push(x),
                None => {
                    by_root[root] = Some(out.len());
                    out.push(vec![x]);
                }
            }
        }
        out
    }
}

/// Symmetric 0/1 proximity matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl AdjacencyMatrix {
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "adjacency must be square");
        Self {
            n,
            cells: rows.iter().flatten().map(|&v| v != 0).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| !self.get(i, i) && (0..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).filter(move |&j| self.get(i, j)).map(move |j| (i, j)))
    }
}

/// Disjoint index sets covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPartition {
    pub components: Vec<Vec<usize>>,
}

impl GroupPartition {
    /// Whether track `idx` is alone in its component.
    pub fn is_singleton(&self, idx: usize) -> bool {
        self.components.iter().any(|c| c.as_slice() == [idx])
    }
}

/// Position-only distance between two states.
pub fn position_distance(a: &State, b: &State) -> f64 {
    (a[0] - b[0]).hypot(a[2] - b[2])
}

/// `a(i, j) = 1` iff `i != j` and the position distance is `<= epsilon`.
pub fn build_adjacency(means: &[State], epsilon: f64) -> AdjacencyMatrix {
    let n = means.len();
    let mut cells = vec![false; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let linked = position_distance(&means[i], &means[j]) <= epsilon;
            cells[i * n + j] = linked;
            cells[j * n + i] = linked;
        }
    }
    AdjacencyMatrix { n, cells }
}

/// Connected components, sorted by smallest member.
pub fn connected_components(adjacency: &AdjacencyMatrix) -> GroupPartition {
    let mut sets = DisjointSets::new(adjacency.len());
    for (i, j) in adjacency.edges() {
        sets.union(i, j);
    }
    GroupPartition {
        components: sets.groups(),
    }
}

/// Source of fresh group ids. Ids start at 1 and are never reused.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupIdCounter(u32);

impl Default for GroupIdCounter {
    fn default() -> Self {
        GroupIdCounter(1)
    }
}

impl GroupIdCounter {
    pub fn peek(&self) -> u32 {
        self.0
    }

    pub fn allocate(&mut self) -> u32 {
        let id = self.0;
        self.0 += 1;
        id
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupInfo {
    pub id: u32,
    pub members: Vec<TrackLabel>,
    pub center: State,
    /// Proximity-graph edges inside the group.
    pub edges: Vec<(TrackLabel, TrackLabel)>,
}

#[derive(Clone, Debug)]
pub struct GroupingOutcome {
    pub density: LmbDensity,
    pub counter: GroupIdCounter,
    pub groups: Vec<GroupInfo>,
}

/// Re-cluster every track of `density` into proximity groups.
///
/// With at most one track nothing changes. Otherwise each connected component
/// with two or more members gets a fresh id and the centroid of its members'
/// posterior means as its center; singletons become ungrouped.
pub fn update_group_info(density: &LmbDensity, epsilon: f64, counter: GroupIdCounter) -> GroupingOutcome {
    if density.len() <= 1 {
        return GroupingOutcome {
            density: density.clone(),
            counter,
            groups: Vec::new(),
        };
    }
    let mut counter = counter;
    let means: Vec<State> = density.tracks.iter().map(|t| t.mean()).collect();
    let adjacency = build_adjacency(&means, epsilon);
    let partition = connected_components(&adjacency);

    let mut out = density.clone();
    let mut groups = Vec::new();
    for members in &partition.components {
        if members.len() == 1 {
            let t = &mut out.tracks[members[0]];
            t.label = t.label.without_group();
            continue;
        }
        let id = counter.allocate();
        let center = members.iter().map(|&i| means[i]).sum::<State>() / members.len() as f64;
        for &i in members {
            let t = &mut out.tracks[i];
            t.label = AugmentedLabel::grouped(t.label.track, id, center);
        }
        let label = |i: usize| density.tracks[i].label.track;
        let edges = adjacency
            .edges()
            .filter(|(i, _)| members.binary_search(i).is_ok())
            .map(|(i, j)| (label(i), label(j)))
            .collect();
        groups.push(GroupInfo {
            id,
            members: members.iter().map(|&i| label(i)).collect(),
            center,
            edges,
        });
    }
    GroupingOutcome {
        density: out,
        counter,
        groups,
    }
}
