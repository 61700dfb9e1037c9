use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};

/// `n` points in `d`-dimensional Euclidean space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    data: Array2<f64>,
}

impl PointSet {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        let (n, d) = data.dim();
        if n == 0 {
            return Err(Error::invalid("point set is empty"));
        }
        if d == 0 {
            return Err(Error::invalid("points have dimension 0"));
        }
        if let Some(((i, j), v)) = data.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "coordinate {j} of point {i} is not finite ({v})"
            )));
        }
        Ok(PointSet { data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(Error::invalid(format!(
                "point {i} has dimension {} but point 0 has dimension {d}",
                r.len()
            )));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let data = Array2::from_shape_vec((rows.len(), d), flat)
            .map_err(|e| Error::invalid(e.to_string()))?;
        Self::new(data)
    }

    pub fn len(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.data.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn point(&self, i: usize) -> ArrayView1<'_, f64> {
        self.data.row(i)
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.data
    }

    /// Returns a new point set with rows reordered so that row `i` is the
    /// old row `order[i]`.
    pub fn select(&self, order: &[usize]) -> Result<Self> {
        Self::new(self.data.select(ndarray::Axis(0), order))
    }
}

/// Ordered cluster sizes `n_1..n_k`. Cluster `j` of every result corresponds
/// to `sizes[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeSpec {
    sizes: Vec<usize>,
}

impl SizeSpec {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::invalid("at least one cluster size is required"));
        }
        if let Some(j) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::invalid(format!("cluster {j} has size 0")));
        }
        Ok(SizeSpec { sizes })
    }

    /// Splits `n` into `k` sizes differing by at most one, larger ones first.
    pub fn balanced(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::invalid(format!(
                "cannot split {n} points into {k} non-empty clusters"
            )));
        }
        let (base, extra) = (n / k, n % k);
        Self::new((0..k).map(|j| base + usize::from(j < extra)).collect())
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Checks that the sizes cover exactly `n` points.
    pub fn check_total(&self, n: usize) -> Result<()> {
        let sum = self.total();
        if sum != n {
            return Err(Error::SizeMismatch { sum, n });
        }
        Ok(())
    }
}

impl std::str::FromStr for SizeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad cluster size '{}'", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sizes)
    }
}
