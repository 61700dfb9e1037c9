//! Fixed-size k-means.
//!
//! `n` slots are laid out cluster by cluster according to the requested
//! sizes. The assignment step matches points to slots with the Hungarian
//! solver, weighting each (slot, point) pair by the squared distance from
//! the point to the centroid of the slot's cluster. The update step moves
//! each centroid to the mean of its members. Both steps never increase the
//! mean squared error, so the iteration settles on a local optimum in which
//! every cluster has exactly its requested size.

use ndarray::{Array2, ArrayView1};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hungarian::{self, CostMatrix};
use crate::points::{PointSet, SizeSpec};

pub const DEFAULT_SEED: u64 = 0x5EED_F1CE_D0C5_2015;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_RESTARTS: usize = 10;

/// Relative slack under which an assignment does not count as an improvement.
const IMPROVEMENT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
    /// Run restarts on the rayon pool.
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            restarts: DEFAULT_RESTARTS,
            max_iter: DEFAULT_MAX_ITER,
            parallel: true,
        }
    }
}

impl RunConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        if self.restarts == 0 {
            return Err(Error::invalid("restarts must be at least 1"));
        }
        Ok(())
    }
}

/// Maps the `n` slots onto clusters: slots `c(j-1)..c(j)` belong to cluster
/// `j`, where `c` is the running sum of the cluster sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotLayout {
    cumulative: Vec<usize>,
    slot_to_cluster: Vec<usize>,
}

impl SlotLayout {
    /// Running sums of the sizes; the last entry is `n`.
    pub fn cumulative(&self) -> &[usize] {
        &self.cumulative
    }

    /// Cluster owning `slot` (both zero-based): the first `j` with
    /// `cumulative[j] > slot`.
    pub fn cluster_of_slot(&self, slot: usize) -> usize {
        self.slot_to_cluster[slot]
    }

    pub fn slot_to_cluster(&self) -> &[usize] {
        &self.slot_to_cluster
    }

    pub fn n(&self) -> usize {
        self.slot_to_cluster.len()
    }

    pub fn k(&self) -> usize {
        self.cumulative.len()
    }
}

pub fn build_layout(sizes: &SizeSpec) -> SlotLayout {
    let cumulative: Vec<usize> = sizes
        .sizes()
        .iter()
        .scan(0, |acc, &s| {
            *acc += s;
            Some(*acc)
        })
        .collect();
    let n = *cumulative.last().expect("SizeSpec is never empty");
    let slot_to_cluster = (0..n)
        .map(|slot| cumulative.partition_point(|&c| c <= slot))
        .collect();
    SlotLayout {
        cumulative,
        slot_to_cluster,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Centroids {
    locations: Array2<f64>,
    iteration: usize,
}

impl Centroids {
    pub fn new(locations: Array2<f64>, iteration: usize) -> Result<Self> {
        if locations.nrows() == 0 || locations.ncols() == 0 {
            return Err(Error::invalid("centroids must be a non-empty k x d array"));
        }
        Ok(Centroids {
            locations,
            iteration,
        })
    }

    /// Centroids placed on the points with the given indices, in order.
    pub fn from_points(points: &PointSet, indices: &[usize]) -> Result<Self> {
        if let Some(&i) = indices.iter().find(|&&i| i >= points.len()) {
            return Err(Error::invalid(format!(
                "initial centroid index {i} out of range for {} points",
                points.len()
            )));
        }
        Self::new(points.as_array().select(ndarray::Axis(0), indices), 0)
    }

    pub fn k(&self) -> usize {
        self.locations.nrows()
    }

    pub fn dim(&self) -> usize {
        self.locations.ncols()
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn location(&self, j: usize) -> ArrayView1<'_, f64> {
        self.locations.row(j)
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.locations
    }
}

/// A slot-to-point bijection and the partition it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `point_of_slot[slot] = point`.
    pub point_of_slot: Vec<usize>,
    /// `partition[point] = cluster`.
    pub partition: Vec<usize>,
    /// Total squared distance of the matching.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    /// `partition[point] = cluster`, clusters numbered in size-spec order.
    pub partition: Vec<usize>,
    pub centroids: Centroids,
    pub mse: f64,
    /// Number of update steps performed in the returned run.
    pub iterations: usize,
    pub restarts_used: usize,
    /// Index of the restart that produced this result.
    pub best_restart: usize,
    /// `false` if the run stopped on `max_iter` rather than a stable partition.
    pub converged: bool,
    /// MSE after every update step of the returned run.
    pub mse_history: Vec<f64>,
    pub seed: u64,
}

impl ClusteringResult {
    pub fn cluster_sizes(&self, k: usize) -> Vec<usize> {
        cluster_counts(&self.partition, k)
    }

    /// Point indices of cluster `j`, ascending.
    pub fn members(&self, j: usize) -> Vec<usize> {
        (0..self.partition.len())
            .filter(|&i| self.partition[i] == j)
            .collect()
    }
}

pub(crate) fn cluster_counts(partition: &[usize], k: usize) -> Vec<usize> {
    let mut counts = vec![0; k];
    for &j in partition {
        counts[j] += 1;
    }
    counts
}

pub(crate) fn squared_distance(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn check_dims(points: &PointSet, centroids: &Centroids) -> Result<()> {
    if points.dim() != centroids.dim() {
        return Err(Error::invalid(format!(
            "points have dimension {} but centroids have dimension {}",
            points.dim(),
            centroids.dim()
        )));
    }
    Ok(())
}

fn check_partition(partition: &[usize], n: usize, k: usize) -> Result<()> {
    if partition.len() != n {
        return Err(Error::invalid(format!(
            "partition covers {} points, expected {n}",
            partition.len()
        )));
    }
    if let Some((i, &j)) = partition.iter().enumerate().find(|(_, &j)| j >= k) {
        return Err(Error::invalid(format!(
            "point {i} assigned to cluster {j}, but only {k} clusters exist"
        )));
    }
    Ok(())
}

fn total_squared_error(points: &PointSet, partition: &[usize], centroids: &Centroids) -> f64 {
    partition
        .iter()
        .enumerate()
        .map(|(i, &j)| squared_distance(points.point(i), centroids.location(j)))
        .sum()
}

/// Mean squared distance from each point to the centroid of its cluster.
pub fn compute_mse(points: &PointSet, partition: &[usize], centroids: &Centroids) -> Result<f64> {
    check_dims(points, centroids)?;
    check_partition(partition, points.len(), centroids.k())?;
    Ok(total_squared_error(points, partition, centroids) / points.len() as f64)
}

/// Slot-by-point cost matrix: entry `(a, i)` is the squared distance from
/// point `i` to the centroid of the cluster owning slot `a`.
pub fn compute_weights(
    points: &PointSet,
    centroids: &Centroids,
    layout: &SlotLayout,
) -> Result<CostMatrix> {
    check_dims(points, centroids)?;
    let n = points.len();
    if layout.n() != n {
        return Err(Error::invalid(format!(
            "slot layout has {} slots for {n} points",
            layout.n()
        )));
    }
    if layout.k() != centroids.k() {
        return Err(Error::invalid(format!(
            "slot layout has {} clusters but {} centroids were given",
            layout.k(),
            centroids.k()
        )));
    }
    // One distance row per cluster; slots of a cluster share it bit for bit.
    let per_cluster = Array2::from_shape_fn((centroids.k(), n), |(j, i)| {
        squared_distance(points.point(i), centroids.location(j))
    });
    let mut weights = Array2::zeros((n, n));
    for (slot, mut row) in weights.outer_iter_mut().enumerate() {
        row.assign(&per_cluster.row(layout.cluster_of_slot(slot)));
    }
    CostMatrix::new(weights)
}

/// Optimal size-respecting assignment of points to clusters for fixed
/// centroids.
pub fn assignment_step(
    points: &PointSet,
    centroids: &Centroids,
    layout: &SlotLayout,
) -> Result<Assignment> {
    let weights = compute_weights(points, centroids, layout)?;
    let matching = hungarian::solve(&weights);
    let mut partition = vec![0; points.len()];
    for (slot, &point) in matching.assignment.iter().enumerate() {
        partition[point] = layout.cluster_of_slot(slot);
    }
    Ok(Assignment {
        point_of_slot: matching.assignment,
        partition,
        cost: matching.total_cost,
    })
}

/// Moves every centroid to the mean of the points assigned to it.
pub fn update_step(points: &PointSet, partition: &[usize], k: usize) -> Result<Centroids> {
    check_partition(partition, points.len(), k)?;
    let mut sums = Array2::<f64>::zeros((k, points.dim()));
    let mut counts = vec![0usize; k];
    for (i, &j) in partition.iter().enumerate() {
        let mut row = sums.row_mut(j);
        row += &points.point(i);
        counts[j] += 1;
    }
    if let Some(j) = counts.iter().position(|&c| c == 0) {
        return Err(Error::invalid(format!("cluster {j} has no points")));
    }
    for (mut row, &c) in sums.outer_iter_mut().zip(&counts) {
        row /= c as f64;
    }
    Centroids::new(sums, 0)
}

fn validate_problem(points: &PointSet, sizes: &SizeSpec) -> Result<()> {
    if sizes.k() > points.len() {
        return Err(Error::invalid(format!(
            "{} clusters requested for {} points",
            sizes.k(),
            points.len()
        )));
    }
    sizes.check_total(points.len())
}

/// Runs fixed-size k-means from centroids placed on the given points.
pub fn cluster_with_init(
    points: &PointSet,
    sizes: &SizeSpec,
    init: &[usize],
    max_iter: usize,
) -> Result<ClusteringResult> {
    validate_problem(points, sizes)?;
    if init.len() != sizes.k() {
        return Err(Error::invalid(format!(
            "{} initial centroids given for {} clusters",
            init.len(),
            sizes.k()
        )));
    }
    if max_iter == 0 {
        return Err(Error::invalid("max_iter must be at least 1"));
    }
    let n = points.len() as f64;
    let k = sizes.k();
    let layout = build_layout(sizes);
    let mut centroids = Centroids::from_points(points, init)?;
    let mut partition = assignment_step(points, &centroids, &layout)?.partition;
    let mut history = Vec::new();
    let mut converged = false;

    loop {
        let iteration = history.len() + 1;
        centroids = update_step(points, &partition, k)?;
        centroids.iteration = iteration;
        let current = total_squared_error(points, &partition, &centroids);
        history.push(current / n);

        let next = assignment_step(points, &centroids, &layout)?;
        if next.partition == partition || current - next.cost <= IMPROVEMENT_EPS * current {
            converged = true;
            break;
        }
        if iteration >= max_iter {
            break;
        }
        partition = next.partition;
    }

    debug_assert_eq!(cluster_counts(&partition, k), sizes.sizes());
    Ok(ClusteringResult {
        mse: *history.last().expect("at least one update step"),
        iterations: history.len(),
        partition,
        centroids,
        restarts_used: 1,
        best_restart: 0,
        converged,
        mse_history: history,
        seed: 0,
    })
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn run_restart(
    points: &PointSet,
    sizes: &SizeSpec,
    config: &RunConfig,
    restart: usize,
) -> Result<ClusteringResult> {
    let mut rng = restart_rng(config.seed, restart);
    let init = index::sample(&mut rng, points.len(), sizes.k()).into_vec();
    let mut result = cluster_with_init(points, sizes, &init, config.max_iter)?;
    result.best_restart = restart;
    result.seed = config.seed;
    Ok(result)
}

/// A single run from `k` distinct data points drawn with `config.seed`.
/// `config.restarts` is ignored.
pub fn cluster(
    points: &PointSet,
    sizes: &SizeSpec,
    config: &RunConfig,
) -> Result<ClusteringResult> {
    config.validate()?;
    validate_problem(points, sizes)?;
    run_restart(points, sizes, config, 0)
}

/// Best of `config.restarts` independently seeded runs by MSE; ties go to
/// the lowest restart index. Restart 0 is identical to [`cluster`].
pub fn cluster_multi_restart(
    points: &PointSet,
    sizes: &SizeSpec,
    config: &RunConfig,
) -> Result<ClusteringResult> {
    config.validate()?;
    validate_problem(points, sizes)?;
    let runs: Vec<Result<ClusteringResult>> = if config.parallel {
        (0..config.restarts)
            .into_par_iter()
            .map(|r| run_restart(points, sizes, config, r))
            .collect()
    } else {
        (0..config.restarts)
            .map(|r| run_restart(points, sizes, config, r))
            .collect()
    };
    let mut best: Option<ClusteringResult> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.mse < b.mse) {
            best = Some(run);
        }
    }
    let mut best = best.expect("restarts >= 1");
    best.restarts_used = config.restarts;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::Rng;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::from_rows(&xs.iter().map(|&x| vec![x]).collect::<Vec<_>>()).unwrap()
    }

    fn random_points(n: usize, d: usize, seed: u64) -> PointSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PointSet::new(Array2::from_shape_fn((n, d), |_| rng.gen_range(-5.0..5.0))).unwrap()
    }

    #[test]
    fn layout_for_seating_sizes() {
        let layout = build_layout(&SizeSpec::new(vec![4, 4, 5, 6, 3]).unwrap());
        assert_eq!(layout.cumulative(), &[4, 8, 13, 19, 22]);
        // Slot 5 and slot 22 in one-based numbering.
        assert_eq!(layout.cluster_of_slot(4) + 1, 2);
        assert_eq!(layout.cluster_of_slot(21) + 1, 5);
        for j in 0..5 {
            let owned = layout.slot_to_cluster().iter().filter(|&&c| c == j).count();
            assert_eq!(owned, [4, 4, 5, 6, 3][j]);
        }
    }

    #[test]
    fn layout_edge_cases() {
        let single = build_layout(&SizeSpec::new(vec![6]).unwrap());
        assert!(single.slot_to_cluster().iter().all(|&c| c == 0));
        let singletons = build_layout(&SizeSpec::new(vec![1; 6]).unwrap());
        assert_eq!(singletons.slot_to_cluster(), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn layout_matches_argmin_definition() {
        let sizes = SizeSpec::new(vec![3, 1, 2, 5]).unwrap();
        let layout = build_layout(&sizes);
        for a in 1..=11 {
            let by_definition = (1..=4).find(|&j| layout.cumulative()[j - 1] >= a).unwrap();
            assert_eq!(layout.cluster_of_slot(a - 1) + 1, by_definition);
        }
    }

    #[test]
    fn mse_examples() {
        let pts = line(&[0.0, 2.0]);
        let c = Centroids::new(array![[1.0]], 0).unwrap();
        assert_eq!(compute_mse(&pts, &[0, 0], &c).unwrap(), 1.0);

        let c = Centroids::new(array![[0.0], [2.0]], 0).unwrap();
        assert_eq!(compute_mse(&pts, &[0, 1], &c).unwrap(), 0.0);
        assert!(compute_mse(&pts, &[0, 2], &c).is_err());
        assert!(compute_mse(&pts, &[0], &c).is_err());
    }

    #[test]
    fn mse_matches_double_loop() {
        let pts = random_points(20, 2, 3);
        let partition: Vec<usize> = (0..20).map(|i| i % 4).collect();
        let c = update_step(&pts, &partition, 4).unwrap();
        let mut oracle = 0.0;
        for j in 0..4 {
            for i in 0..20 {
                if partition[i] == j {
                    for t in 0..2 {
                        let diff = pts.as_array()[(i, t)] - c.as_array()[(j, t)];
                        oracle += diff * diff;
                    }
                }
            }
        }
        oracle /= 20.0;
        let mse = compute_mse(&pts, &partition, &c).unwrap();
        assert!((mse - oracle).abs() <= 1e-12 * oracle.max(1.0));
    }

    #[test]
    fn weights_examples() {
        let pts = random_points(5, 2, 9);
        let c = Centroids::new(array![[0.5, -1.0], [2.0, 3.0]], 0).unwrap();
        let layout = build_layout(&SizeSpec::new(vec![2, 3]).unwrap());
        let w = compute_weights(&pts, &c, &layout).unwrap();
        for a in 0..5 {
            let j = if a < 2 { 0 } else { 1 };
            for i in 0..5 {
                let dx = pts.as_array()[(i, 0)] - c.as_array()[(j, 0)];
                let dy = pts.as_array()[(i, 1)] - c.as_array()[(j, 1)];
                assert!((w.get(a, i) - (dx * dx + dy * dy)).abs() < 1e-12);
            }
        }

        let single = Centroids::from_points(&pts, &[2]).unwrap();
        let w = compute_weights(
            &pts,
            &single,
            &build_layout(&SizeSpec::new(vec![5]).unwrap()),
        )
        .unwrap();
        assert_eq!(w.get(0, 2), 0.0);
        for a in 1..5 {
            assert_eq!(w.as_array().row(a), w.as_array().row(0));
        }
    }

    #[test]
    fn assignment_separated_pairs() {
        let pts = PointSet::from_rows(&[
            vec![0.0, 0.0],
            vec![10.0, 0.0],
            vec![0.0, 1.0],
            vec![10.0, 1.0],
        ])
        .unwrap();
        let c = Centroids::new(array![[10.0, 0.5], [0.0, 0.5]], 0).unwrap();
        let layout = build_layout(&SizeSpec::new(vec![2, 2]).unwrap());
        let a = assignment_step(&pts, &c, &layout).unwrap();
        assert_eq!(a.partition, vec![1, 0, 1, 0]);
        assert!((a.cost - 1.0).abs() < 1e-12);
    }

    #[test]
    fn assignment_singletons_recover_permutation() {
        let pts = random_points(6, 3, 4);
        let perm = [3, 0, 5, 1, 4, 2];
        let c = Centroids::from_points(&pts, &perm).unwrap();
        let layout = build_layout(&SizeSpec::new(vec![1; 6]).unwrap());
        let a = assignment_step(&pts, &c, &layout).unwrap();
        assert_eq!(a.cost, 0.0);
        for (j, &p) in perm.iter().enumerate() {
            assert_eq!(a.partition[p], j);
        }
    }

    #[test]
    fn update_examples() {
        let pts = PointSet::from_rows(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![5.0, 5.0]]).unwrap();
        let c = update_step(&pts, &[0, 0, 1], 2).unwrap();
        assert_eq!(c.as_array(), &array![[1.0, 0.0], [5.0, 5.0]]);
        assert!(update_step(&pts, &[0, 0, 0], 2).is_err());
    }

    #[test]
    fn update_matches_accumulation() {
        let pts = random_points(12, 3, 21);
        let partition = vec![2, 0, 1, 2, 1, 0, 0, 2, 1, 1, 0, 2];
        let c = update_step(&pts, &partition, 3).unwrap();
        for j in 0..3 {
            for t in 0..3 {
                let mut s = 0.0;
                let mut m = 0;
                for i in 0..12 {
                    if partition[i] == j {
                        s += pts.as_array()[(i, t)];
                        m += 1;
                    }
                }
                assert!((c.as_array()[(j, t)] - s / m as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mean_minimizes_cluster_error() {
        let pts = random_points(10, 2, 8);
        let partition = vec![0, 1, 0, 1, 0, 1, 0, 1, 0, 1];
        let c = update_step(&pts, &partition, 2).unwrap();
        let base = compute_mse(&pts, &partition, &c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let mut moved = c.as_array().clone();
            let j = rng.gen_range(0..2);
            moved[(j, 0)] += rng.gen_range(-1.0..1.0);
            moved[(j, 1)] += rng.gen_range(-1.0..1.0);
            let moved = Centroids::new(moved, 0).unwrap();
            assert!(compute_mse(&pts, &partition, &moved).unwrap() >= base);
        }
    }

    #[test]
    fn single_cluster_is_global_mean() {
        let pts = random_points(9, 2, 2);
        let r = cluster(
            &pts,
            &SizeSpec::new(vec![9]).unwrap(),
            &RunConfig::default(),
        )
        .unwrap();
        assert_eq!(r.iterations, 1);
        assert!(r.converged);
        let mean = pts.as_array().mean_axis(ndarray::Axis(0)).unwrap();
        for t in 0..2 {
            assert!((r.centroids.as_array()[(0, t)] - mean[t]).abs() < 1e-12);
        }
        let var: f64 = (0..9)
            .map(|i| squared_distance(pts.point(i), mean.view()))
            .sum::<f64>()
            / 9.0;
        assert!((r.mse - var).abs() < 1e-12);
    }

    #[test]
    fn singleton_clusters_have_zero_error() {
        let pts = random_points(7, 2, 6);
        let r = cluster(
            &pts,
            &SizeSpec::new(vec![1; 7]).unwrap(),
            &RunConfig::default(),
        )
        .unwrap();
        assert_eq!(r.cluster_sizes(7), vec![1; 7]);
        assert_eq!(r.mse, 0.0);
    }

    #[test]
    fn rejects_bad_problems() {
        let pts = random_points(5, 2, 1);
        let cfg = RunConfig::default();
        assert_eq!(
            cluster(&pts, &SizeSpec::new(vec![2, 2]).unwrap(), &cfg).unwrap_err(),
            Error::SizeMismatch { sum: 4, n: 5 }
        );
        assert!(matches!(
            cluster(&pts, &SizeSpec::new(vec![1; 6]).unwrap(), &cfg),
            Err(Error::InvalidInput(_))
        ));
        let zero_iter = cfg.clone().with_max_iter(0);
        assert!(cluster(&pts, &SizeSpec::new(vec![5]).unwrap(), &zero_iter).is_err());
        let zero_restarts = RunConfig::default().with_restarts(0);
        assert!(
            cluster_multi_restart(&pts, &SizeSpec::new(vec![5]).unwrap(), &zero_restarts).is_err()
        );
    }

    #[test]
    fn one_restart_equals_single_run() {
        let pts = random_points(30, 2, 12);
        let sizes = SizeSpec::new(vec![10, 12, 8]).unwrap();
        let cfg = RunConfig::default().with_seed(99).with_restarts(1);
        let single = cluster(&pts, &sizes, &cfg).unwrap();
        let multi = cluster_multi_restart(&pts, &sizes, &cfg).unwrap();
        assert_eq!(single, multi);
    }

    #[test]
    fn more_restarts_never_hurt() {
        let pts = random_points(24, 2, 13);
        let sizes = SizeSpec::new(vec![4, 4, 5, 6, 5]).unwrap();
        let mut last = f64::INFINITY;
        for r in [1, 2, 5, 10, 20] {
            let cfg = RunConfig::default().with_seed(5).with_restarts(r);
            let res = cluster_multi_restart(&pts, &sizes, &cfg).unwrap();
            assert!(res.mse <= last);
            assert_eq!(res.restarts_used, r);
            last = res.mse;
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let pts = random_points(40, 3, 14);
        let sizes = SizeSpec::balanced(40, 4).unwrap();
        let cfg = RunConfig::default().with_restarts(6);
        let par = cluster_multi_restart(&pts, &sizes, &cfg).unwrap();
        let seq = cluster_multi_restart(
            &pts,
            &sizes,
            &RunConfig {
                parallel: false,
                ..cfg
            },
        )
        .unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn max_iter_cap_is_reported() {
        let pts = random_points(60, 2, 15);
        let sizes = SizeSpec::balanced(60, 6).unwrap();
        let r = cluster(&pts, &sizes, &RunConfig::default().with_max_iter(1)).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.cluster_sizes(6), sizes.sizes());
        let mse = compute_mse(&pts, &r.partition, &r.centroids).unwrap();
        assert!((mse - r.mse).abs() <= 1e-9 * mse.max(1.0));
    }
}
