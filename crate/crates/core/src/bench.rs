//! Synthetic Gaussian-mixture data and timing of the clustering loop.

use std::time::Instant;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::kmeans::{assignment_step, build_layout, cluster_multi_restart, Centroids, RunConfig};
use crate::points::{PointSet, SizeSpec};

/// `n` points drawn from `components` isotropic unit-variance Gaussians whose
/// means are uniform in `[-10, 10]^dim`. Point `i` comes from component
/// `i % components`.
pub fn gaussian_mixture(n: usize, dim: usize, components: usize, seed: u64) -> Result<PointSet> {
    if n == 0 || dim == 0 || components == 0 {
        return Err(Error::invalid("n, dim and components must all be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let means = Array2::from_shape_fn((components, dim), |_| rng.gen_range(-10.0..10.0));
    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let data = Array2::from_shape_fn((n, dim), |(i, t)| {
        means[(i % components, t)] + noise.sample(&mut rng)
    });
    PointSet::new(data)
}

/// Least-squares slope of `ln(time)` against `ln(n)`. Needs at least two
/// distinct sizes with positive times.
pub fn fit_growth_exponent(samples: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(n, t)| n > 0 && t > 0.0)
        .map(|&(n, t)| ((n as f64).ln(), t.ln()))
        .collect();
    let m = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if pts.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Some(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub dim: usize,
    /// Clusters per run, capped at `n`.
    pub clusters: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Restarts of the timed full run.
    pub restarts: usize,
    /// Timed repetitions of the assignment step; the fastest is reported.
    pub repeats: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![100, 200, 400, 800],
            dim: 2,
            clusters: 10,
            seed: crate::kmeans::DEFAULT_SEED,
            max_iter: crate::kmeans::DEFAULT_MAX_ITER,
            restarts: 1,
            repeats: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    pub iterations: usize,
    pub mse: f64,
    /// One assignment step (weights plus Hungarian solve), seconds.
    pub assignment_secs: f64,
    /// Mean seconds per iteration of the full run (all restarts).
    pub iteration_secs: f64,
    pub total_secs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Fitted exponent of assignment-step time in `n`.
    pub exponent: Option<f64>,
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.sizes.is_empty() || config.sizes.contains(&0) {
        return Err(Error::invalid("benchmark sizes must be positive"));
    }
    let mut rows = Vec::with_capacity(config.sizes.len());
    for &n in &config.sizes {
        let k = config.clusters.clamp(1, n);
        let points = gaussian_mixture(n, config.dim, k, config.seed)?;
        let sizes = SizeSpec::balanced(n, k)?;
        let layout = build_layout(&sizes);
        let init = Centroids::from_points(&points, &(0..k).collect::<Vec<_>>())?;

        let mut assignment_secs = f64::INFINITY;
        for _ in 0..config.repeats.max(1) {
            let start = Instant::now();
            assignment_step(&points, &init, &layout)?;
            assignment_secs = assignment_secs.min(start.elapsed().as_secs_f64());
        }

        let run_config = RunConfig::default()
            .with_seed(config.seed)
            .with_max_iter(config.max_iter)
            .with_restarts(config.restarts);
        let start = Instant::now();
        let result = cluster_multi_restart(&points, &sizes, &run_config)?;
        let total_secs = start.elapsed().as_secs_f64();
        rows.push(BenchRow {
            n,
            k,
            iterations: result.iterations,
            mse: result.mse,
            assignment_secs,
            iteration_secs: total_secs / (result.iterations * config.restarts.max(1)) as f64,
            total_secs,
        });
    }
    let exponent = fit_growth_exponent(
        &rows
            .iter()
            .map(|r| (r.n, r.assignment_secs))
            .collect::<Vec<_>>(),
    );
    Ok(BenchReport { rows, exponent })
}
