//! Exact solver for the square linear assignment problem.
//!
//! Shortest augmenting path formulation of the Hungarian method (the
//! Jonker-Volgenant / Kuhn-Munkres family) with row and column dual
//! potentials, O(n³) in the worst case. Rows that are bit-for-bit identical
//! share a class; within one Dijkstra phase a row is only relaxed if it can
//! improve on an identical row already relaxed. Cost matrices built from
//! cluster slots have only `k` distinct rows, so this keeps large clustering
//! problems tractable.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BinaryHeap, HashMap};
use std::hash::{Hash, Hasher};

use ndarray::Array2;

use crate::error::{Error, Result};

/// Largest problem [`brute_force_solve`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 10;

/// Square matrix of finite, nonnegative assignment costs. Rows are the
/// "slots" side, columns the "points" side.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    entries: Array2<f64>,
}

impl CostMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::invalid(format!(
                "cost matrix must be square, got {rows}x{cols}"
            )));
        }
        if rows == 0 {
            return Err(Error::invalid("cost matrix is empty"));
        }
        if let Some(((i, j), v)) = entries
            .indexed_iter()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::invalid(format!(
                "cost entry ({i}, {j}) = {v} is not a finite nonnegative number"
            )));
        }
        Ok(CostMatrix { entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::invalid(format!(
                "cost matrix must be square: row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        let flat = rows.iter().flatten().copied().collect();
        Self::new(Array2::from_shape_vec((n, n), flat).map_err(|e| Error::invalid(e.to_string()))?)
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[(row, col)]
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.entries
    }

    /// Sum of the entries picked by `assignment` (row `i` takes column
    /// `assignment[i]`).
    pub fn cost_of(&self, assignment: &[usize]) -> f64 {
        assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| self.entries[(i, j)])
            .sum()
    }
}

/// A bijection from rows to columns together with its total cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// `assignment[row] = column`.
    pub assignment: Vec<usize>,
    pub total_cost: f64,
}

impl Matching {
    fn from_assignment(costs: &CostMatrix, assignment: Vec<usize>) -> Self {
        let total_cost = costs.cost_of(&assignment);
        Matching {
            assignment,
            total_cost,
        }
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.assignment.len()];
        self.assignment
            .iter()
            .all(|&j| j < seen.len() && !std::mem::replace(&mut seen[j], true))
    }
}

/// How the Dijkstra phase picks the next column to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Frontier {
    /// Linear scan over all unscanned columns; best when every row differs.
    Scan,
    /// Binary heap with lazy deletion; best when few row classes exist.
    Heap,
}

/// Solves the assignment problem exactly, returning a minimum-cost matching.
///
/// Ties are broken deterministically: rows are augmented in ascending order
/// and equal-distance columns are scanned lowest index first.
pub fn solve(costs: &CostMatrix) -> Matching {
    let classes = RowClasses::of(costs);
    let frontier = if classes.count * 8 <= costs.n() {
        Frontier::Heap
    } else {
        Frontier::Scan
    };
    solve_with(costs, &classes, frontier)
}

#[cfg(test)]
pub(crate) fn solve_with_frontier(costs: &CostMatrix, frontier: Frontier) -> Matching {
    solve_with(costs, &RowClasses::of(costs), frontier)
}

/// Exhaustive search over all `n!` permutations. Only for tiny problems.
pub fn brute_force_solve(costs: &CostMatrix) -> Result<Matching> {
    let n = costs.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit(format!(
            "brute force assignment needs n <= {BRUTE_FORCE_LIMIT}, got {n}"
        )));
    }

    struct Search<'a> {
        costs: &'a CostMatrix,
        used: Vec<bool>,
        current: Vec<usize>,
        best: Option<(f64, Vec<usize>)>,
    }

    impl Search<'_> {
        fn go(&mut self, row: usize, acc: f64) {
            let n = self.used.len();
            if row == n {
                if self.best.as_ref().is_none_or(|(b, _)| acc < *b) {
                    self.best = Some((acc, self.current.clone()));
                }
                return;
            }
            for col in 0..n {
                if !self.used[col] {
                    self.used[col] = true;
                    self.current.push(col);
                    self.go(row + 1, acc + self.costs.get(row, col));
                    self.current.pop();
                    self.used[col] = false;
                }
            }
        }
    }

    let mut search = Search {
        costs,
        used: vec![false; n],
        current: Vec::with_capacity(n),
        best: None,
    };
    search.go(0, 0.0);
    let (_, assignment) = search.best.expect("n >= 1 has at least one permutation");
    Ok(Matching::from_assignment(costs, assignment))
}

struct RowClasses {
    of_row: Vec<usize>,
    count: usize,
}

impl RowClasses {
    fn of(costs: &CostMatrix) -> Self {
        let m = &costs.entries;
        let mut buckets: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
        let mut of_row = Vec::with_capacity(m.nrows());
        let mut count = 0;
        for (i, row) in m.outer_iter().enumerate() {
            let mut h = DefaultHasher::new();
            row.iter().for_each(|x| x.to_bits().hash(&mut h));
            let bucket = buckets.entry(h.finish()).or_default();
            let found = bucket
                .iter()
                .find(|&&(rep, _)| {
                    m.row(rep)
                        .iter()
                        .zip(row.iter())
                        .all(|(a, b)| a.to_bits() == b.to_bits())
                })
                .map(|&(_, class)| class);
            let class = found.unwrap_or_else(|| {
                bucket.push((i, count));
                count += 1;
                count - 1
            });
            of_row.push(class);
        }
        RowClasses { of_row, count }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    dist: f64,
    col: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    // Reversed so that `BinaryHeap` pops the smallest distance, then the
    // smallest column index.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.col.cmp(&self.col))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Relative slack when comparing keys of identical rows. Their potentials
/// drift apart by rounding only; without slack every such drift triggers a
/// redundant O(n) relaxation.
const CLASS_SLACK: f64 = 1e-14;

const NONE: usize = usize::MAX;

struct Solver<'a> {
    costs: &'a Array2<f64>,
    class_of: &'a [usize],
    frontier: Frontier,
    n: usize,
    slack: f64,
    u: Vec<f64>,
    v: Vec<f64>,
    col_of_row: Vec<usize>,
    row_of_col: Vec<usize>,
    // Per-phase scratch.
    dist: Vec<f64>,
    pred: Vec<usize>,
    scanned: Vec<bool>,
    scanned_cols: Vec<usize>,
    class_key: Vec<f64>,
    touched_classes: Vec<usize>,
    heap: BinaryHeap<Candidate>,
}

fn solve_with(costs: &CostMatrix, classes: &RowClasses, frontier: Frontier) -> Matching {
    let n = costs.n();
    let mut solver = Solver {
        costs: &costs.entries,
        class_of: &classes.of_row,
        frontier,
        n,
        slack: CLASS_SLACK * costs.entries.fold(0.0f64, |m, &x| m.max(x)),
        u: vec![0.0; n],
        v: vec![f64::INFINITY; n],
        col_of_row: vec![NONE; n],
        row_of_col: vec![NONE; n],
        dist: vec![f64::INFINITY; n],
        pred: vec![NONE; n],
        scanned: vec![false; n],
        scanned_cols: Vec::with_capacity(n),
        class_key: vec![f64::INFINITY; classes.count],
        touched_classes: Vec::new(),
        heap: BinaryHeap::new(),
    };
    solver.column_reduction();
    for row in 0..n {
        if solver.col_of_row[row] == NONE {
            solver.augment(row);
        }
    }
    Matching::from_assignment(costs, solver.col_of_row)
}

impl Solver<'_> {
    /// Sets each column potential to its column minimum and greedily matches
    /// columns to the first free row attaining it. Leaves all matched pairs
    /// tight and every reduced cost nonnegative.
    fn column_reduction(&mut self) {
        for row in self.costs.outer_iter() {
            for (v, &c) in self.v.iter_mut().zip(row.iter()) {
                if c < *v {
                    *v = c;
                }
            }
        }
        for col in 0..self.n {
            let target = self.v[col];
            let free_tight = (0..self.n)
                .find(|&row| self.col_of_row[row] == NONE && self.costs[(row, col)] == target);
            if let Some(row) = free_tight {
                self.col_of_row[row] = col;
                self.row_of_col[col] = row;
            }
        }
    }

    /// Relaxes all unscanned columns through `row`, entered at distance
    /// `base`. Skipped when an identical row was already relaxed with a key
    /// at least as good.
    fn relax(&mut self, row: usize, base: f64) {
        let key = base - self.u[row];
        let class = self.class_of[row];
        if key >= self.class_key[class] - self.slack {
            return;
        }
        if self.class_key[class] == f64::INFINITY {
            self.touched_classes.push(class);
        }
        self.class_key[class] = key;

        let costs = self.costs.row(row);
        let shift = base - self.u[row];
        for col in 0..self.n {
            if self.scanned[col] {
                continue;
            }
            let cand = shift + costs[col] - self.v[col];
            if cand < self.dist[col] {
                self.dist[col] = cand;
                self.pred[col] = row;
                if self.frontier == Frontier::Heap {
                    self.heap.push(Candidate { dist: cand, col });
                }
            }
        }
    }

    fn next_column(&mut self) -> usize {
        match self.frontier {
            Frontier::Scan => {
                let mut best = NONE;
                let mut best_dist = f64::INFINITY;
                for col in 0..self.n {
                    if !self.scanned[col] && (best == NONE || self.dist[col] < best_dist) {
                        best = col;
                        best_dist = self.dist[col];
                    }
                }
                best
            }
            Frontier::Heap => loop {
                let c = self
                    .heap
                    .pop()
                    .expect("a free column is always reachable in a square problem");
                if !self.scanned[c.col] && c.dist == self.dist[c.col] {
                    break c.col;
                }
            },
        }
    }

    /// One Dijkstra phase from the free `root` row, followed by the dual
    /// update and the augmentation along the shortest path found.
    fn augment(&mut self, root: usize) {
        self.dist.fill(f64::INFINITY);
        self.pred.fill(NONE);
        self.heap.clear();
        for &c in &self.touched_classes {
            self.class_key[c] = f64::INFINITY;
        }
        self.touched_classes.clear();
        for &c in &self.scanned_cols {
            self.scanned[c] = false;
        }
        self.scanned_cols.clear();

        self.relax(root, 0.0);
        let (sink, sink_dist) = loop {
            let col = self.next_column();
            let d = self.dist[col];
            let owner = self.row_of_col[col];
            if owner == NONE {
                break (col, d);
            }
            self.scanned[col] = true;
            self.scanned_cols.push(col);
            self.relax(owner, d);
        };

        for &col in &self.scanned_cols {
            let delta = sink_dist - self.dist[col];
            self.v[col] -= delta;
            self.u[self.row_of_col[col]] += delta;
        }
        self.u[root] += sink_dist;

        let mut col = sink;
        loop {
            let row = self.pred[col];
            let previous = self.col_of_row[row];
            self.row_of_col[col] = row;
            self.col_of_row[row] = col;
            if row == root {
                break;
            }
            col = previous;
        }
    }
}
