//! Rectangular linear assignment (shortest augmenting path Hungarian method)
//! and Murty's ranked enumeration of the K best assignments.
//!
//! Costs are `f64`; `f64::INFINITY` marks a forbidden pairing. Every row must
//! be assigned to a distinct column, so `rows <= cols`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize, fill: f64) -> Self {
        Self {
            rows,
            cols,
            data: vec![fill; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged cost matrix");
        Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    fn force(&mut self, row: usize, col: usize) {
        for c in 0..self.cols {
            if c != col {
                self.set(row, c, f64::INFINITY);
            }
        }
        for r in 0..self.rows {
            if r != row {
                self.set(r, col, f64::INFINITY);
            }
        }
    }
}

/// Row-to-column assignment and its total cost.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    pub cols: Vec<usize>,
    pub cost: f64,
}

/// Optimal assignment with the dual potentials that certify it.
///
/// `cost(i, j) - row_duals[i] - col_duals[j] >= 0` for every entry, with
/// equality on the assigned pairs; column duals are `<= 0` and zero on
/// unassigned columns. Any assignment using entry `(i, j)` therefore costs at
/// least `optimum + reduced_cost(i, j)`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub assignment: Assignment,
    pub row_duals: Vec<f64>,
    pub col_duals: Vec<f64>,
}

impl Solution {
    pub fn reduced_cost(&self, cost: &CostMatrix, row: usize, col: usize) -> f64 {
        cost.get(row, col) - self.row_duals[row] - self.col_duals[col]
    }
}

/// Minimum-cost assignment of every row, or `None` if no finite-cost
/// assignment exists.
pub fn solve(cost: &CostMatrix) -> Option<Solution> {
    let n = cost.rows;
    let m = cost.cols;
    if n == 0 {
        return Some(Solution {
            assignment: Assignment {
                cols: Vec::new(),
                cost: 0.0,
            },
            row_duals: Vec::new(),
            col_duals: vec![0.0; m],
        });
    }
    if n > m {
        return None;
    }

    // 1-based potentials; index 0 is the virtual source column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    let mut minv = vec![0.0; m + 1];
    let mut used = vec![false; m + 1];

    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            let row = cost.row(i0 - 1);
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = row[j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if j1 == 0 || !delta.is_finite() {
                return None;
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut cols = vec![0usize; n];
    for j in 1..=m {
        if owner[j] != 0 {
            cols[owner[j] - 1] = j - 1;
        }
    }
    let total = cols.iter().enumerate().map(|(r, &c)| cost.get(r, c)).sum();
    Some(Solution {
        assignment: Assignment { cols, cost: total },
        row_duals: u[1..].to_vec(),
        col_duals: v[1..].to_vec(),
    })
}

/// Up to `k` lowest-cost assignments in nondecreasing cost order.
pub fn ranked_assignments(cost: &CostMatrix, k: usize) -> Vec<Assignment> {
    ranked_assignments_within(cost, k, f64::INFINITY)
}

/// Like [`ranked_assignments`], but stops once the next assignment would cost
/// more than `best + max_gap`.
pub fn ranked_assignments_within(cost: &CostMatrix, k: usize, max_gap: f64) -> Vec<Assignment> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let Some(root) = solve(cost) else {
        return out;
    };
    let best = root.assignment.cost;
    let mut seq = 0u64;
    let mut heap = BinaryHeap::new();
    heap.push(Node {
        assignment: root.assignment,
        matrix: cost.clone(),
        fixed: 0,
        seq,
    });

    while let Some(node) = heap.pop() {
        if node.assignment.cost > best + max_gap {
            break;
        }
        let mut partition = node.matrix;
        for t in node.fixed..cost.rows {
            let col = node.assignment.cols[t];
            let mut child = partition.clone();
            child.set(t, col, f64::INFINITY);
            if let Some(sol) = solve(&child) {
                seq += 1;
                // re-sum against the original matrix
                let total = sol
                    .assignment
                    .cols
                    .iter()
                    .enumerate()
                    .map(|(r, &c)| cost.get(r, c))
                    .sum();
                heap.push(Node {
                    assignment: Assignment {
                        cols: sol.assignment.cols,
                        cost: total,
                    },
                    matrix: child,
                    fixed: t,
                    seq,
                });
            }
            partition.force(t, col);
        }
        out.push(node.assignment);
        if out.len() >= k {
            break;
        }
    }
    out
}

struct Node {
    assignment: Assignment,
    matrix: CostMatrix,
    fixed: usize,
    seq: u64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // reversed: BinaryHeap is a max-heap and we want the cheapest first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .assignment
            .cost
            .total_cmp(&self.assignment.cost)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}
