//! Exhaustive references for tiny instances. Slow by construction; used to
//! check the solver and the clustering loop.

use crate::error::{Error, Result};
use crate::kmeans::{
    compute_mse, squared_distance, update_step, Assignment, Centroids, ClusteringResult,
};
use crate::points::{PointSet, SizeSpec};

/// Upper bound on the number of partitions an oracle will enumerate.
pub const ENUMERATION_BUDGET: u128 = 1_000_000;

/// `n! / (n_1! ... n_k!)`, or `None` on overflow.
pub fn multinomial(sizes: &[usize]) -> Option<u128> {
    let mut total: u128 = 1;
    let mut placed = 0u128;
    for &s in sizes {
        for i in 1..=s as u128 {
            placed += 1;
            // C(placed, i) built incrementally stays integral.
            total = total.checked_mul(placed)? / i;
        }
    }
    Some(total)
}

fn check_budget(sizes: &SizeSpec) -> Result<()> {
    match multinomial(sizes.sizes()) {
        Some(c) if c <= ENUMERATION_BUDGET => Ok(()),
        _ => Err(Error::SizeLimit(format!(
            "partition count for sizes {:?} exceeds {ENUMERATION_BUDGET}",
            sizes.sizes()
        ))),
    }
}

/// Calls `visit` with every labelling `partition[point] = cluster` in which
/// cluster `j` has `sizes[j]` members. Clusters are filled in order, each
/// taking its members as the lexicographically next combination of the
/// points still free. With `canonical`, labellings that differ only by
/// swapping equal-size clusters are produced once.
pub fn for_each_partition(sizes: &[usize], canonical: bool, mut visit: impl FnMut(&[usize])) {
    let n: usize = sizes.iter().sum();
    let mut labels = vec![usize::MAX; n];
    // For each cluster, the previous cluster of the same size.
    let twin: Vec<Option<usize>> = (0..sizes.len())
        .map(|j| (0..j).rev().find(|&p| sizes[p] == sizes[j]))
        .collect();
    let mut first = vec![0usize; sizes.len()];
    fill(
        sizes,
        canonical,
        &twin,
        &mut first,
        &mut labels,
        0,
        0,
        0,
        &mut visit,
    );
}

#[allow(clippy::too_many_arguments)]
fn fill(
    sizes: &[usize],
    canonical: bool,
    twin: &[Option<usize>],
    first: &mut [usize],
    labels: &mut [usize],
    cluster: usize,
    taken: usize,
    start: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if cluster == sizes.len() {
        visit(labels);
        return;
    }
    if taken == sizes[cluster] {
        fill(
            sizes,
            canonical,
            twin,
            first,
            labels,
            cluster + 1,
            0,
            0,
            visit,
        );
        return;
    }
    for p in start..labels.len() {
        if labels[p] != usize::MAX {
            continue;
        }
        if taken == 0 {
            if let (true, Some(t)) = (canonical, twin[cluster]) {
                if p < first[t] {
                    continue;
                }
            }
            first[cluster] = p;
        }
        labels[p] = cluster;
        fill(
            sizes,
            canonical,
            twin,
            first,
            labels,
            cluster,
            taken + 1,
            p + 1,
            visit,
        );
        labels[p] = usize::MAX;
    }
}

/// Globally optimal size-respecting partition, centroids at cluster means.
pub fn best_balanced_partition(points: &PointSet, sizes: &SizeSpec) -> Result<ClusteringResult> {
    sizes.check_total(points.len())?;
    check_budget(sizes)?;
    let k = sizes.k();
    let mut best: Option<(f64, Vec<usize>, Centroids)> = None;
    let mut failure = None;
    for_each_partition(sizes.sizes(), true, |labels| {
        if failure.is_some() {
            return;
        }
        let eval = update_step(points, labels, k)
            .and_then(|c| compute_mse(points, labels, &c).map(|m| (m, c)));
        match eval {
            Ok((mse, c)) => {
                if best.as_ref().is_none_or(|(b, _, _)| mse < *b) {
                    best = Some((mse, labels.to_vec(), c));
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let (mse, partition, centroids) = best.expect("at least one partition exists");
    Ok(ClusteringResult {
        partition,
        centroids,
        mse,
        iterations: 0,
        restarts_used: 0,
        best_restart: 0,
        converged: true,
        mse_history: vec![mse],
        seed: 0,
    })
}

/// Cheapest size-respecting assignment of points to the given (fixed)
/// centroids, by enumeration.
pub fn best_fixed_centroid_assignment(
    points: &PointSet,
    centroids: &Centroids,
    sizes: &SizeSpec,
) -> Result<Assignment> {
    sizes.check_total(points.len())?;
    if centroids.k() != sizes.k() || centroids.dim() != points.dim() {
        return Err(Error::invalid(
            "centroids do not match sizes or point dimension",
        ));
    }
    check_budget(sizes)?;
    let dist: Vec<Vec<f64>> = (0..centroids.k())
        .map(|j| {
            (0..points.len())
                .map(|i| squared_distance(points.point(i), centroids.location(j)))
                .collect()
        })
        .collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for_each_partition(sizes.sizes(), false, |labels| {
        let cost: f64 = labels.iter().enumerate().map(|(i, &j)| dist[j][i]).sum();
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, labels.to_vec()));
        }
    });
    let (cost, partition) = best.expect("at least one partition exists");
    let labels = &partition;
    let point_of_slot = (0..sizes.k())
        .flat_map(|j| (0..labels.len()).filter(move |&i| labels[i] == j))
        .collect();
    Ok(Assignment {
        point_of_slot,
        partition,
        cost,
    })
}

/// Optimal k-clustering with no size constraint (every cluster non-empty),
/// by enumerating set partitions into exactly `k` blocks.
pub fn best_unconstrained_partition(points: &PointSet, k: usize) -> Result<(f64, Vec<usize>)> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "cannot form {k} clusters from {n} points"
        )));
    }
    let budget_ok = (k as u128)
        .checked_pow(n as u32)
        .is_some_and(|c| c <= ENUMERATION_BUDGET);
    if !budget_ok {
        return Err(Error::SizeLimit(format!(
            "{k}^{n} labellings exceed the budget"
        )));
    }
    // Restricted growth strings: labels[i] <= 1 + max(labels[..i]).
    fn go(
        points: &PointSet,
        k: usize,
        labels: &mut Vec<usize>,
        used: usize,
        best: &mut Option<(f64, Vec<usize>)>,
    ) {
        let n = points.len();
        if labels.len() == n {
            if used == k {
                let c = update_step(points, labels, k).expect("all clusters non-empty");
                let mse = compute_mse(points, labels, &c).expect("valid partition");
                if best.as_ref().is_none_or(|(b, _)| mse < *b) {
                    *best = Some((mse, labels.clone()));
                }
            }
            return;
        }
        if k - used > n - labels.len() {
            return;
        }
        for j in 0..=used.min(k - 1) {
            labels.push(j);
            go(points, k, labels, used.max(j + 1), best);
            labels.pop();
        }
    }
    let mut best = None;
    go(points, k, &mut Vec::with_capacity(n), 0, &mut best);
    Ok(best.expect("k <= n admits a partition"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square() -> PointSet {
        PointSet::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[2, 2]), Some(6));
        assert_eq!(multinomial(&[3, 3]), Some(20));
        assert_eq!(multinomial(&[4, 4, 5, 6, 3]), Some(3_764_255_695_200));
        assert_eq!(multinomial(&[1; 5]), Some(120));
    }

    #[test]
    fn enumeration_counts() {
        let count = |sizes: &[usize], canonical| {
            let mut c = 0u128;
            for_each_partition(sizes, canonical, |_| c += 1);
            c
        };
        assert_eq!(count(&[2, 2], false), 6);
        assert_eq!(count(&[2, 2], true), 3);
        assert_eq!(count(&[3, 3], true), 10);
        assert_eq!(count(&[2, 1, 2, 1], true), 180 / 4);
        assert_eq!(count(&[1, 2, 3], true), 60);
        let mut seen = Vec::new();
        for_each_partition(&[1, 2], false, |l| seen.push(l.to_vec()));
        assert_eq!(seen, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn square_split() {
        // Edge-pair splits: each point is 0.5 from its mean, so MSE 0.25.
        // The diagonal split has both means at the centre: MSE 0.5.
        let best = best_balanced_partition(&square(), &SizeSpec::new(vec![2, 2]).unwrap()).unwrap();
        assert!((best.mse - 0.25).abs() < 1e-15);
        let p = &best.partition;
        assert!(p[0] != p[2] && p[1] != p[3]);
    }

    #[test]
    fn trivial_sizes() {
        let pts = square();
        let one = best_balanced_partition(&pts, &SizeSpec::new(vec![4]).unwrap()).unwrap();
        assert!((one.mse - 0.5).abs() < 1e-15);
        let singles = best_balanced_partition(&pts, &SizeSpec::new(vec![1; 4]).unwrap()).unwrap();
        assert_eq!(singles.mse, 0.0);
    }

    #[test]
    fn budget_guard() {
        let pts = PointSet::new(Array2::zeros((22, 1))).unwrap();
        let sizes = SizeSpec::new(vec![4, 4, 5, 6, 3]).unwrap();
        assert!(matches!(
            best_balanced_partition(&pts, &sizes),
            Err(Error::SizeLimit(_))
        ));
    }

    #[test]
    fn fixed_centroid_examples() {
        let pts = PointSet::from_rows(&[vec![0.0], vec![5.0]]).unwrap();
        let c = Centroids::new(array![[5.0], [0.0]], 0).unwrap();
        let a =
            best_fixed_centroid_assignment(&pts, &c, &SizeSpec::new(vec![1, 1]).unwrap()).unwrap();
        assert_eq!(a.partition, vec![1, 0]);
        assert_eq!(a.cost, 0.0);

        let c = Centroids::new(array![[1.0]], 0).unwrap();
        let a = best_fixed_centroid_assignment(&pts, &c, &SizeSpec::new(vec![2]).unwrap()).unwrap();
        assert_eq!(a.cost, 1.0 + 16.0);
    }

    #[test]
    fn unconstrained_never_worse_than_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let pts =
                PointSet::new(Array2::from_shape_fn((7, 2), |_| rng.gen_range(0.0..1.0))).unwrap();
            let (free, _) = best_unconstrained_partition(&pts, 2).unwrap();
            let fixed = best_balanced_partition(&pts, &SizeSpec::new(vec![3, 4]).unwrap()).unwrap();
            assert!(free <= fixed.mse + 1e-15);
        }
    }
}
