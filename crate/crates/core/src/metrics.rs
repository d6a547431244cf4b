//! Rand index and normalized mutual information between two labelings.
//!
//! Logarithms are natural; NMI is a ratio of logarithms, so the base does not
//! matter.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Joint counts of two labelings, with class ids compacted to `0..K` and
/// `0..L` in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

fn compact(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut ids = HashMap::new();
    let mapped = labels
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(*l).or_insert(next)
        })
        .collect();
    (mapped, ids.len())
}

impl ContingencyTable {
    /// Rows follow `left`, columns follow `right`.
    pub fn new(left: &[usize], right: &[usize]) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::InvalidInput(format!(
                "label lengths differ: {} vs {}",
                left.len(),
                right.len()
            )));
        }
        let (l, k) = compact(left);
        let (r, m) = compact(right);
        let mut counts = vec![vec![0u64; m]; k];
        for (&a, &b) in l.iter().zip(&r) {
            counts[a][b] += 1;
        }
        let row_sums: Vec<u64> = counts.iter().map(|row| row.iter().sum()).collect();
        let col_sums: Vec<u64> = (0..m)
            .map(|j| counts.iter().map(|row| row[j]).sum())
            .collect();
        Ok(Self {
            counts,
            row_sums,
            col_sums,
            total: left.len() as u64,
        })
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

fn pairs(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// `(TP + TN) / (all pairs)` over the `n(n-1)/2` unordered pairs.
pub fn rand_index(true_labels: &[usize], pred_labels: &[usize]) -> Result<f64> {
    let table = ContingencyTable::new(true_labels, pred_labels)?;
    let n = table.total();
    if n < 2 {
        return Err(Error::InvalidInput(
            "rand index needs at least 2 samples".into(),
        ));
    }
    let total = pairs(n);
    let same_both: u64 = table.counts.iter().flatten().map(|&c| pairs(c)).sum();
    let same_true: u64 = table.row_sums.iter().map(|&c| pairs(c)).sum();
    let same_pred: u64 = table.col_sums.iter().map(|&c| pairs(c)).sum();
    // TN = total - TP - FP - FN, with FP = same_pred - TP and FN = same_true - TP.
    let agree = total + 2 * same_both - same_true - same_pred;
    Ok(agree as f64 / total as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NmiScore {
    pub value: f64,
    /// Set when either labeling has a single class, where the normalizer is 0.
    /// The value is then 1 for identical partitions and 0 otherwise.
    pub degenerate: bool,
}

/// Mutual information over the geometric mean of the two entropies.
pub fn nmi_score(true_labels: &[usize], pred_labels: &[usize]) -> Result<NmiScore> {
    let table = ContingencyTable::new(true_labels, pred_labels)?;
    if table.total() == 0 {
        return Err(Error::InvalidInput("nmi needs at least 1 sample".into()));
    }
    if table.row_sums.len() == 1 || table.col_sums.len() == 1 {
        let identical = table.row_sums.len() == table.col_sums.len();
        return Ok(NmiScore {
            value: if identical { 1.0 } else { 0.0 },
            degenerate: true,
        });
    }
    let n = table.total() as f64;
    let entropy = |counts: &mut dyn Iterator<Item = u64>| -> f64 {
        -counts
            .filter(|&c| c > 0)
            .map(|c| {
                let p = c as f64 / n;
                p * p.ln()
            })
            .sum::<f64>()
    };
    let h_true = entropy(&mut table.row_sums.iter().copied());
    let h_pred = entropy(&mut table.col_sums.iter().copied());
    let h_joint = entropy(&mut table.counts.iter().flatten().copied());
    // For identical partitions h_joint == h_true == h_pred bit for bit, so the
    // ratio below is exactly 1.
    let mutual = h_true + h_pred - h_joint;
    let value = if mutual <= f64::EPSILON * h_joint.max(1.0) {
        0.0
    } else {
        (mutual / (h_true * h_pred).sqrt()).clamp(0.0, 1.0)
    };
    Ok(NmiScore {
        value,
        degenerate: false,
    })
}

pub fn nmi(true_labels: &[usize], pred_labels: &[usize]) -> Result<f64> {
    nmi_score(true_labels, pred_labels).map(|s| s.value)
}
