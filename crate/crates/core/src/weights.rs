//! k-nearest-neighbour Gaussian weights and their lift into the `2n x 2n`
//! coefficient matrices of the distance-matrix model.
//!
//! Indices `0..n` of the lifted matrices refer to the data points `a_i`,
//! indices `n..2n` to the cluster centres `x_i`.

use nalgebra::DMatrix;

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::geometry::SymMatrix;

/// Symmetric fusion weights `omega_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightGraph {
    omega: DMatrix<f64>,
    knn_k: usize,
    phi: f64,
}

impl WeightGraph {
    pub fn omega(&self) -> &DMatrix<f64> {
        &self.omega
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.omega[(i, j)]
    }

    pub fn knn_k(&self) -> usize {
        self.knn_k
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn n(&self) -> usize {
        self.omega.nrows()
    }

    /// Number of pairs `i < j` with a positive weight.
    pub fn edge_count(&self) -> usize {
        let n = self.n();
        (0..n)
            .flat_map(|j| (0..j).map(move |i| (i, j)))
            .filter(|&(i, j)| self.omega[(i, j)] > 0.0)
            .count()
    }
}

/// `omega_ij = exp(-phi ||a_i - a_j||^2)` when `j` is among the `k` nearest
/// neighbours of `i` or the other way round, zero otherwise.
///
/// Equidistant neighbours are ranked by smaller sample index. Pairs that
/// qualify from either side are kept, so the result is symmetric. A pair of
/// coincident points gets weight 1.
pub fn build_knn_weights(data: &DataMatrix, k: usize, phi: f64) -> Result<WeightGraph> {
    let n = data.n();
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "knn k = {k} must satisfy 1 <= k <= n - 1 = {}",
            n - 1
        )));
    }
    if !(phi.is_finite() && phi > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "phi = {phi} must be positive"
        )));
    }
    let dist = data.squared_distances();
    let mut neighbour = vec![false; n * n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        order.clear();
        order.extend((0..n).filter(|&j| j != i));
        order.sort_by(|&a, &b| dist[(i, a)].total_cmp(&dist[(i, b)]).then(a.cmp(&b)));
        for &j in &order[..k] {
            neighbour[i * n + j] = true;
            neighbour[j * n + i] = true;
        }
    }
    let omega = DMatrix::from_fn(n, n, |i, j| {
        if i != j && neighbour[i * n + j] {
            (-phi * dist[(i, j)]).exp()
        } else {
            0.0
        }
    });
    Ok(WeightGraph {
        omega,
        knn_k: k,
        phi,
    })
}

/// The lifted coefficients `H`, `W` and the pinned top-left block.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedCoefficients {
    n: usize,
    h: SymMatrix,
    w: SymMatrix,
    fixed_block: DMatrix<f64>,
}

impl LiftedCoefficients {
    /// Number of data points; the lifted matrices have order `2n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `1/4` at `(i, n+i)` and `(n+i, i)`, zero elsewhere.
    pub fn h(&self) -> &SymMatrix {
        &self.h
    }

    /// `omega_ij / 2` at `(n+i, n+j)`, zero elsewhere.
    pub fn w(&self) -> &SymMatrix {
        &self.w
    }

    /// `||a_i - a_j||^2` for `i, j < n`.
    pub fn fixed_block(&self) -> &DMatrix<f64> {
        &self.fixed_block
    }
}

pub fn build_lifted(data: &DataMatrix, graph: &WeightGraph) -> Result<LiftedCoefficients> {
    let n = data.n();
    if graph.n() != n {
        return Err(Error::InvalidInput(format!(
            "weight graph has {} nodes but data has {n} samples",
            graph.n()
        )));
    }
    let m = 2 * n;
    let mut h = SymMatrix::zeros(m);
    for i in 0..n {
        h.set(i, n + i, 0.25);
    }
    let mut w = SymMatrix::zeros(m);
    for j in 0..n {
        for i in 0..j {
            let v = graph.weight(i, j);
            if v != 0.0 {
                w.set(n + i, n + j, 0.5 * v);
            }
        }
    }
    Ok(LiftedCoefficients {
        n,
        h,
        w,
        fixed_block: data.squared_distances(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(xs: &[f64]) -> DataMatrix {
        DataMatrix::from_rows(&xs.iter().map(|&x| vec![x]).collect::<Vec<_>>(), None).unwrap()
    }

    #[test]
    fn identical_points_get_unit_weight() {
        let g = build_knn_weights(&line(&[2.0, 2.0]), 1, 7.0).unwrap();
        assert_eq!(g.weight(0, 1), 1.0);
        assert_eq!(g.weight(1, 0), 1.0);
        assert_eq!(g.weight(0, 0), 0.0);
    }

    #[test]
    fn collinear_points_symmetrized_by_union() {
        // 0 and 1 are mutual nearest neighbours; 1 is the nearest of 10.
        let g = build_knn_weights(&line(&[0.0, 1.0, 10.0]), 1, 1.0).unwrap();
        assert_abs_diff_eq!(g.weight(0, 1), (-1.0f64).exp(), epsilon = 1e-15);
        assert_eq!(g.weight(0, 2), 0.0);
        assert_abs_diff_eq!(g.weight(1, 2), (-81.0f64).exp(), epsilon = 1e-40);
        assert_eq!(g.weight(2, 1), g.weight(1, 2));
    }

    #[test]
    fn ties_break_by_index() {
        // Point 1 is equidistant from 0 and 2; with k = 1 it picks 0.
        let g = build_knn_weights(&line(&[0.0, 1.0, 2.0, 50.0]), 1, 0.1).unwrap();
        assert!(g.weight(1, 0) > 0.0);
        // 2 picks 1 as its own nearest, so (1,2) is still present by union.
        assert!(g.weight(1, 2) > 0.0);
    }

    #[test]
    fn rejects_bad_k_and_phi() {
        let d = line(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            build_knn_weights(&d, 3, 1.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(build_knn_weights(&d, 0, 1.0).is_err());
        assert!(build_knn_weights(&d, 1, 0.0).is_err());
        assert!(build_knn_weights(&d, 1, f64::NAN).is_err());
    }

    #[test]
    fn well_separated_blobs_have_no_cross_edges() {
        let mut rows = Vec::new();
        for c in [0.0, 10.0, 20.0] {
            for k in 0..5 {
                rows.push(vec![c + 0.1 * k as f64, 0.05 * k as f64]);
            }
        }
        let data = DataMatrix::from_rows(&rows, None).unwrap();
        let g = build_knn_weights(&data, 3, 0.5).unwrap();
        for i in 0..15 {
            for j in 0..15 {
                if i / 5 != j / 5 {
                    assert_eq!(g.weight(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn edge_count_bounded_by_nk() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..3).map(|_| rng.random_range(0.0..1.0)).collect())
            .collect();
        let data = DataMatrix::from_rows(&rows, None).unwrap();
        for k in [1, 3, 7] {
            let g = build_knn_weights(&data, k, 1.0).unwrap();
            assert!(g.edge_count() <= 30 * k);
            assert!(g.omega().iter().all(|&w| (0.0..=1.0).contains(&w)));
            assert_eq!(g.omega(), &g.omega().transpose());
        }
    }

    #[test]
    fn permutation_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|_| (0..2).map(|_| rng.random_range(0.0..1.0)).collect())
            .collect();
        let base = build_knn_weights(&DataMatrix::from_rows(&rows, None).unwrap(), 3, 2.0).unwrap();
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..12).collect();
            perm.shuffle(&mut rng);
            let permuted: Vec<Vec<f64>> = perm.iter().map(|&p| rows[p].clone()).collect();
            let g = build_knn_weights(&DataMatrix::from_rows(&permuted, None).unwrap(), 3, 2.0)
                .unwrap();
            for i in 0..12 {
                for j in 0..12 {
                    assert_eq!(g.weight(i, j), base.weight(perm[i], perm[j]));
                }
            }
        }
    }

    #[test]
    fn lifted_h_support_for_two_points() {
        let data = line(&[0.0, 1.0]);
        let g = build_knn_weights(&data, 1, 1.0).unwrap();
        let lifted = build_lifted(&data, &g).unwrap();
        let h = lifted.h().as_matrix();
        let nonzero: Vec<(usize, usize)> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| h[(i, j)] != 0.0)
            .collect();
        assert_eq!(nonzero, vec![(0, 2), (1, 3), (2, 0), (3, 1)]);
        assert!(nonzero.iter().all(|&(i, j)| h[(i, j)] == 0.25));
        assert_eq!(lifted.w().get(2, 3), 0.5 * g.weight(0, 1));
        assert_eq!(lifted.w().get(0, 1), 0.0);
        assert_eq!(lifted.fixed_block()[(0, 1)], 1.0);
    }

    #[test]
    fn h_inner_product_counts_pair_once_per_triangle() {
        let data = line(&[0.0, 1.0, 3.0]);
        let g = build_knn_weights(&data, 1, 1.0).unwrap();
        let lifted = build_lifted(&data, &g).unwrap();
        let mut d = SymMatrix::zeros(6);
        d.set(0, 3, 6.0);
        assert_abs_diff_eq!(lifted.h().inner(&d), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn w_inner_sqrt_matches_direct_fusion_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let rows: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..2).map(|_| rng.random_range(0.0..1.0)).collect())
            .collect();
        let data = DataMatrix::from_rows(&rows, None).unwrap();
        let g = build_knn_weights(&data, 2, 1.5).unwrap();
        let lifted = build_lifted(&data, &g).unwrap();
        let centres: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..2).map(|_| rng.random_range(0.0..1.0)).collect())
            .collect();
        let all: Vec<&Vec<f64>> = rows.iter().chain(centres.iter()).collect();
        let sq = |p: &Vec<f64>, q: &Vec<f64>| -> f64 {
            p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
        };
        let d = SymMatrix::from_upper_fn(10, |i, j| sq(all[i], all[j]));
        let sqrt_d = SymMatrix::from_upper_fn(10, |i, j| d.get(i, j).sqrt());
        let mut direct = 0.0;
        for i in 0..5 {
            for j in (i + 1)..5 {
                direct += g.weight(i, j) * sq(&centres[i], &centres[j]).sqrt();
            }
        }
        assert_abs_diff_eq!(lifted.w().inner(&sqrt_d), direct, epsilon = 1e-10);
    }

    #[test]
    fn lifted_rejects_mismatched_graph() {
        let g = build_knn_weights(&line(&[0.0, 1.0, 2.0]), 1, 1.0).unwrap();
        assert!(build_lifted(&line(&[0.0, 1.0]), &g).is_err());
    }
}
