//! Seating plans: dissimilarities between guests are embedded with classical
//! MDS and the embedded guests are clustered into tables of fixed sizes.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::kmeans::{cluster_multi_restart, RunConfig};
use crate::mds::{self, DissimilarityMatrix};
use crate::points::SizeSpec;

pub const DEFAULT_RESTARTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuestList {
    names: Vec<String>,
}

impl GuestList {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names
            .into_iter()
            .map(|s| s.as_ref().trim().to_string())
            .collect();
        let mut seen = HashSet::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::invalid(format!("guest {i} has an empty name")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::invalid(format!("duplicate guest name '{name}'")));
            }
        }
        Ok(GuestList { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanConfig {
    pub run: RunConfig,
    pub mds_tol: f64,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig {
            run: RunConfig::default().with_restarts(DEFAULT_RESTARTS),
            mds_tol: mds::DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeatingPlan {
    /// Table `j` seats `sizes[j]` guests, listed alphabetically.
    pub tables: Vec<Vec<String>>,
    /// `table_of[guest] = table`, guests in input order.
    pub table_of: Vec<usize>,
    pub mse: f64,
    pub restarts: usize,
    pub seed: u64,
    pub embedding_dim: usize,
    /// Negative spectral mass MDS had to drop (zero for Euclidean input).
    pub discarded_negative: f64,
}

impl SeatingPlan {
    pub fn seated_together(&self, a: usize, b: usize) -> bool {
        self.table_of[a] == self.table_of[b]
    }
}

pub fn plan(
    d: &DissimilarityMatrix,
    guests: &GuestList,
    sizes: &SizeSpec,
    config: &PlanConfig,
) -> Result<SeatingPlan> {
    if guests.len() != d.n() {
        return Err(Error::invalid(format!(
            "{} guests but the matrix is {}x{}",
            guests.len(),
            d.n(),
            d.n()
        )));
    }
    sizes.check_total(d.n())?;
    let embedding = mds::embed(d, config.mds_tol)?;
    let result = cluster_multi_restart(&embedding.points, sizes, &config.run)?;

    let mut tables = vec![Vec::new(); sizes.k()];
    for (guest, &table) in result.partition.iter().enumerate() {
        tables[table].push(guests.names()[guest].clone());
    }
    for t in &mut tables {
        t.sort();
    }
    Ok(SeatingPlan {
        tables,
        table_of: result.partition,
        mse: result.mse,
        restarts: result.restarts_used,
        seed: config.run.seed,
        embedding_dim: embedding.dim(),
        discarded_negative: embedding.discarded_negative,
    })
}
