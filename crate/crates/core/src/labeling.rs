//! Cluster labels from the centre-distance block of a solved iterate.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::solver::DistanceState;

/// Lower bound for the default zero tolerance.
pub const ZERO_TOL_FLOOR: f64 = 1e-10;
/// Default tolerance relative to the median positive centre distance.
pub const ZERO_TOL_RELATIVE: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterLabeling {
    /// Cluster id of each point, consecutive from 1.
    pub labels: Vec<usize>,
    pub num_clusters: usize,
    pub zero_tol: f64,
}

/// `1e-4` times the median of the positive off-diagonal entries of `t`, but
/// never below `1e-10`.
pub fn default_zero_tol(t: &DMatrix<f64>) -> f64 {
    let n = t.nrows();
    let mut positive: Vec<f64> = (0..n)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .map(|(i, j)| t[(i, j)])
        .filter(|&v| v > 0.0)
        .collect();
    if positive.is_empty() {
        return ZERO_TOL_FLOOR;
    }
    positive.sort_by(f64::total_cmp);
    let mid = positive.len() / 2;
    let median = if positive.len().is_multiple_of(2) {
        0.5 * (positive[mid - 1] + positive[mid])
    } else {
        positive[mid]
    };
    (ZERO_TOL_RELATIVE * median).max(ZERO_TOL_FLOOR)
}

/// Labels points from the centre block of `state`. Uses
/// [`default_zero_tol`] when `zero_tol` is `None`.
pub fn extract_labels(state: &DistanceState, zero_tol: Option<f64>) -> ClusterLabeling {
    let t = state.centre_block();
    let tol = zero_tol.unwrap_or_else(|| default_zero_tol(&t));
    label_block(&t, tol)
}

/// Scans points in index order. An unlabelled point opens a new cluster and
/// pulls in every point whose centre distance to it is at most `zero_tol`,
/// overwriting earlier assignments. Ids are compacted afterwards, since a
/// later scan can absorb an entire earlier cluster.
pub fn label_block(t: &DMatrix<f64>, zero_tol: f64) -> ClusterLabeling {
    let n = t.nrows();
    let mut labels = vec![0usize; n];
    let mut next = 1;
    for i in 0..n {
        if labels[i] != 0 {
            continue;
        }
        labels[i] = next;
        for j in 0..n {
            if t[(i, j)] <= zero_tol {
                labels[j] = next;
            }
        }
        next += 1;
    }

    let mut remap = vec![0usize; next];
    let mut count = 0;
    for label in labels.iter_mut() {
        if remap[*label] == 0 {
            count += 1;
            remap[*label] = count;
        }
        *label = remap[*label];
    }
    ClusterLabeling {
        labels,
        num_clusters: count,
        zero_tol,
    }
}
