//! Classical (Torgerson) multidimensional scaling.
//!
//! Squared dissimilarities are double-centred into a Gram matrix
//! `B = -1/2 J D² J`; coordinates are the eigenvectors of `B` scaled by the
//! square roots of their eigenvalues. Components whose eigenvalue does not
//! exceed `tol * λ_max` are dropped, which also discards the negative part of
//! the spectrum of non-Euclidean inputs.

use ndarray::Array2;

use crate::eigen::symmetric_eigendecompose;
use crate::error::{Error, Result};
use crate::points::PointSet;

pub const DEFAULT_TOL: f64 = 1e-9;
const SYMMETRY_TOL: f64 = 1e-9;

/// Symmetric, nonnegative, zero-diagonal matrix of pairwise dissimilarities.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    entries: Array2<f64>,
}

impl DissimilarityMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let (n, m) = entries.dim();
        if n != m {
            return Err(Error::invalid(format!(
                "dissimilarity matrix must be square, got {n}x{m}"
            )));
        }
        if n == 0 {
            return Err(Error::invalid("dissimilarity matrix is empty"));
        }
        if let Some(((i, j), v)) = entries
            .indexed_iter()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::invalid(format!(
                "entry ({i}, {j}) = {v} is not a finite nonnegative number"
            )));
        }
        if let Some(i) = (0..n).find(|&i| entries[(i, i)] != 0.0) {
            return Err(Error::invalid(format!(
                "diagonal entry ({i}, {i}) = {} is not zero",
                entries[(i, i)]
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (entries[(i, j)], entries[(j, i)]);
                if (a - b).abs() > SYMMETRY_TOL * a.max(b).max(1.0) {
                    return Err(Error::Asymmetric {
                        row: i,
                        col: j,
                        value: a,
                        mirrored: b,
                    });
                }
            }
        }
        Ok(DissimilarityMatrix { entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::invalid(format!(
                "dissimilarity matrix must be square: row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        let flat = rows.iter().flatten().copied().collect();
        Self::new(Array2::from_shape_vec((n, n), flat).map_err(|e| Error::invalid(e.to_string()))?)
    }

    /// Euclidean distances between the given points.
    pub fn from_points(points: &PointSet) -> Self {
        let n = points.len();
        let entries = Array2::from_shape_fn((n, n), |(i, j)| {
            crate::kmeans::squared_distance(points.point(i), points.point(j)).sqrt()
        });
        DissimilarityMatrix { entries }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.entries
    }

    /// The same dissimilarities with items reordered so that new item `i` is
    /// old item `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.n();
        if order.len() != n {
            return Err(Error::invalid(
                "permutation length does not match matrix size",
            ));
        }
        Self::new(Array2::from_shape_fn((n, n), |(i, j)| {
            self.entries[(order[i], order[j])]
        }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// `n` points of dimension `m = eigenvalues.len()`.
    pub points: PointSet,
    /// Retained eigenvalues of the Gram matrix, descending.
    pub eigenvalues: Vec<f64>,
    /// Sum of the magnitudes of negative eigenvalues below `-tol * λ_max`;
    /// zero for Euclidean inputs.
    pub discarded_negative: f64,
}

impl Embedding {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Double-centred Gram matrix `-1/2 J D² J`.
pub fn gram_matrix(d: &DissimilarityMatrix) -> Array2<f64> {
    let n = d.n();
    let sq = d.entries.mapv(|x| x * x);
    let row_means: Vec<f64> = sq.rows().into_iter().map(|r| r.sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    // D² is symmetric, so column means equal row means.
    Array2::from_shape_fn((n, n), |(i, j)| {
        -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand)
    })
}

pub fn embed(d: &DissimilarityMatrix, tol: f64) -> Result<Embedding> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid(format!(
            "MDS tolerance must be positive, got {tol}"
        )));
    }
    let n = d.n();
    let eig = symmetric_eigendecompose(&gram_matrix(d))?;
    let lambda_max = eig.values[0];
    if lambda_max <= 0.0 {
        return Err(Error::DegenerateEmbedding);
    }
    let threshold = tol * lambda_max;
    let keep = eig
        .values
        .iter()
        .take_while(|&&l| l > threshold)
        .count()
        .min(n.saturating_sub(1).max(1));
    let discarded_negative = eig
        .values
        .iter()
        .filter(|&&l| l < -threshold)
        .fold(0.0, |acc, l| acc - l);
    let coords = Array2::from_shape_fn((n, keep), |(i, c)| {
        eig.vectors[(i, c)] * eig.values[c].sqrt()
    });
    Ok(Embedding {
        points: PointSet::new(coords)?,
        eigenvalues: eig.values[..keep].to_vec(),
        discarded_negative,
    })
}
