//! Serialized forms of results. Field order is the key order on disk.

use std::fmt::Write as _;

use fixed_kmeans::bench::BenchReport;
use fixed_kmeans::{ClusteringResult, SeatingPlan, SizeSpec};
use serde::Serialize;

#[derive(Serialize)]
pub struct ClusterSummary<'a> {
    pub input: &'a str,
    pub n: usize,
    pub dim: usize,
    pub k: usize,
    pub sizes: &'a [usize],
    pub mse: f64,
    pub iterations: usize,
    pub converged: bool,
    pub restarts: usize,
    pub best_restart: usize,
    pub seed: u64,
}

impl<'a> ClusterSummary<'a> {
    pub fn new(input: &'a str, dim: usize, sizes: &'a SizeSpec, r: &ClusteringResult) -> Self {
        ClusterSummary {
            input,
            n: r.partition.len(),
            dim,
            k: sizes.k(),
            sizes: sizes.sizes(),
            mse: r.mse,
            iterations: r.iterations,
            converged: r.converged,
            restarts: r.restarts_used,
            best_restart: r.best_restart,
            seed: r.seed,
        }
    }
}

pub fn partition_csv(r: &ClusteringResult) -> String {
    let mut out = String::from("point,cluster\n");
    for (i, j) in r.partition.iter().enumerate() {
        writeln!(out, "{i},{j}").unwrap();
    }
    out
}

pub fn centroids_csv(r: &ClusteringResult) -> String {
    let c = r.centroids.as_array();
    let mut out = String::from("cluster");
    for t in 0..c.ncols() {
        write!(out, ",x{t}").unwrap();
    }
    out.push('\n');
    for (j, row) in c.outer_iter().enumerate() {
        write!(out, "{j}").unwrap();
        for x in row {
            write!(out, ",{x}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
pub struct TableOut<'a> {
    pub table: usize,
    pub size: usize,
    pub guests: &'a [String],
}

#[derive(Serialize)]
pub struct PlanOut<'a> {
    pub input: &'a str,
    pub guests: usize,
    pub sizes: &'a [usize],
    pub embedding_dim: usize,
    pub discarded_negative: f64,
    pub mse: f64,
    pub restarts: usize,
    pub seed: u64,
    pub tables: Vec<TableOut<'a>>,
}

impl<'a> PlanOut<'a> {
    pub fn new(input: &'a str, sizes: &'a SizeSpec, p: &'a SeatingPlan) -> Self {
        PlanOut {
            input,
            guests: p.table_of.len(),
            sizes: sizes.sizes(),
            embedding_dim: p.embedding_dim,
            discarded_negative: p.discarded_negative,
            mse: p.mse,
            restarts: p.restarts,
            seed: p.seed,
            tables: p
                .tables
                .iter()
                .enumerate()
                .map(|(j, t)| TableOut {
                    table: j + 1,
                    size: t.len(),
                    guests: t,
                })
                .collect(),
        }
    }
}

pub fn plan_text(p: &SeatingPlan) -> String {
    let mut out = String::new();
    for (j, t) in p.tables.iter().enumerate() {
        writeln!(out, "Table {}, size {}", j + 1, t.len()).unwrap();
        for g in t {
            writeln!(out, "  {g}").unwrap();
        }
        out.push('\n');
    }
    writeln!(
        out,
        "mse {} | embedding dimension {} | restarts {} | seed {}",
        p.mse, p.embedding_dim, p.restarts, p.seed
    )
    .unwrap();
    out
}

#[derive(Serialize)]
pub struct BenchRowOut {
    pub n: usize,
    pub k: usize,
    pub iterations: usize,
    pub mse: f64,
    pub assignment_secs: f64,
    pub iteration_secs: f64,
    pub total_secs: f64,
}

#[derive(Serialize)]
pub struct BenchOut {
    pub dim: usize,
    pub seed: u64,
    pub rows: Vec<BenchRowOut>,
    pub assignment_exponent: Option<f64>,
}

impl BenchOut {
    pub fn new(dim: usize, seed: u64, report: &BenchReport) -> Self {
        BenchOut {
            dim,
            seed,
            rows: report
                .rows
                .iter()
                .map(|r| BenchRowOut {
                    n: r.n,
                    k: r.k,
                    iterations: r.iterations,
                    mse: r.mse,
                    assignment_secs: r.assignment_secs,
                    iteration_secs: r.iteration_secs,
                    total_secs: r.total_secs,
                })
                .collect(),
            assignment_exponent: report.exponent,
        }
    }
}

pub fn bench_table(report: &BenchReport) -> String {
    let mut out = format!(
        "{:>7} {:>5} {:>6} {:>14} {:>14} {:>12}\n",
        "n", "k", "iters", "assign_s", "iter_s", "total_s"
    );
    for r in &report.rows {
        writeln!(
            out,
            "{:>7} {:>5} {:>6} {:>14.6} {:>14.6} {:>12.4}",
            r.n, r.k, r.iterations, r.assignment_secs, r.iteration_secs, r.total_secs
        )
        .unwrap();
    }
    match report.exponent {
        Some(e) => writeln!(out, "assignment-step growth exponent: {e:.3}").unwrap(),
        None => writeln!(out, "assignment-step growth exponent: n/a (need two sizes)").unwrap(),
    }
    out
}
