//! Symmetric eigendecomposition by cyclic Jacobi rotations.

use ndarray::Array2;

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-9;
const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Column `i` is the unit eigenvector for `values[i]`, with its first
    /// non-negligible component positive.
    pub vectors: Array2<f64>,
}

/// Full spectral decomposition of a real symmetric matrix.
pub fn symmetric_eigendecompose(matrix: &Array2<f64>) -> Result<SymmetricEigen> {
    let (n, m) = matrix.dim();
    if n != m {
        return Err(Error::invalid(format!(
            "matrix must be square, got {n}x{m}"
        )));
    }
    if let Some(((i, j), v)) = matrix.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::invalid(format!(
            "entry ({i}, {j}) = {v} is not finite"
        )));
    }
    let scale = matrix.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (matrix[(i, j)], matrix[(j, i)]);
            if (a - b).abs() > SYMMETRY_TOL * scale {
                return Err(Error::Asymmetric {
                    row: i,
                    col: j,
                    value: a,
                    mirrored: b,
                });
            }
        }
    }

    let mut a = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (matrix[(i, j)] + matrix[(j, i)]));
    let mut v = Array2::<f64>::eye(n);
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();

    for _ in 0..MAX_SWEEPS {
        let off = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .fold(0.0f64, |acc, (p, q)| acc.max(a[(p, q)].abs()));
        if off <= OFF_DIAGONAL_TOL * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = v.select(ndarray::Axis(1), &order);
    for mut col in vectors.columns_mut() {
        if let Some(&lead) = col.iter().find(|x| x.abs() > 1e-10) {
            if lead < 0.0 {
                col.mapv_inplace(|x| -x);
            }
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Applies `A <- Jᵀ A J` and `V <- V J` for the rotation in the (p, q) plane.
fn rotate(a: &mut Array2<f64>, v: &mut Array2<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = a.nrows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frobenius(m: &Array2<f64>) -> f64 {
        m.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn identity() {
        let e = symmetric_eigendecompose(&Array2::eye(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_sorted_with_axis_vectors() {
        let e =
            symmetric_eigendecompose(&array![[3.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]])
                .unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        assert_eq!(
            e.vectors,
            array![[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]
        );
    }

    #[test]
    fn two_by_two_closed_form() {
        let e = symmetric_eigendecompose(&array![[2.0, 1.0], [1.0, 2.0]]).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let r = 0.5f64.sqrt();
        assert!((e.vectors[(0, 0)] - r).abs() < 1e-14 && (e.vectors[(1, 0)] - r).abs() < 1e-14);
        assert!(e.vectors[(0, 1)] > 0.0);
    }

    #[test]
    fn rejects_asymmetric() {
        let err = symmetric_eigendecompose(&array![[0.0, 1.0], [2.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::Asymmetric { row: 0, col: 1, .. }));
        assert!(symmetric_eigendecompose(&Array2::zeros((2, 3))).is_err());
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for n in [1, 2, 5, 15, 30] {
            let r = Array2::from_shape_fn((n, n), |_| rng.gen_range(-1.0..1.0));
            let b = &r + &r.t();
            let e = symmetric_eigendecompose(&b).unwrap();
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            let lambda = Array2::from_diag(&ndarray::Array1::from(e.values.clone()));
            let rebuilt = e.vectors.dot(&lambda).dot(&e.vectors.t());
            assert!(frobenius(&(&rebuilt - &b)) <= 1e-8 * frobenius(&b));
            let gram = e.vectors.t().dot(&e.vectors);
            assert!(frobenius(&(&gram - &Array2::<f64>::eye(n))) < 1e-8);
            for (i, &l) in e.values.iter().enumerate() {
                let col = e.vectors.column(i);
                let residual = b.dot(&col) - &col * l;
                assert!(residual.iter().map(|x| x * x).sum::<f64>().sqrt() <= 1e-8 * frobenius(&b));
            }
        }
    }
}
