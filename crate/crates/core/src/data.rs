use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// `n` observations of `d` features, stored column-wise (`d x n`).
#[derive(Clone, Debug, PartialEq)]
pub struct DataMatrix {
    values: DMatrix<f64>,
    true_labels: Option<Vec<usize>>,
    label_names: Option<Vec<String>>,
}

impl DataMatrix {
    /// `values` holds one sample per column. Requires at least two samples and
    /// finite entries.
    pub fn new(values: DMatrix<f64>, true_labels: Option<Vec<usize>>) -> Result<Self> {
        if values.ncols() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 samples, got {}",
                values.ncols()
            )));
        }
        if values.nrows() == 0 {
            return Err(Error::InvalidInput("samples have no features".into()));
        }
        if let Some((idx, _)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite value for sample {} feature {}",
                idx / values.nrows(),
                idx % values.nrows()
            )));
        }
        if let Some(labels) = &true_labels {
            if labels.len() != values.ncols() {
                return Err(Error::InvalidInput(format!(
                    "{} labels for {} samples",
                    labels.len(),
                    values.ncols()
                )));
            }
        }
        Ok(Self {
            values,
            true_labels,
            label_names: None,
        })
    }

    /// Builds from row-major samples (`rows[i]` is sample `i`).
    pub fn from_rows(rows: &[Vec<f64>], true_labels: Option<Vec<usize>>) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != d) {
            return Err(Error::InvalidInput(format!(
                "sample {i} has {} features, expected {d}",
                rows[i].len()
            )));
        }
        let values = DMatrix::from_fn(d, rows.len(), |f, s| rows[s][f]);
        Self::new(values, true_labels)
    }

    pub fn with_label_names(mut self, names: Vec<String>) -> Self {
        self.label_names = Some(names);
        self
    }

    pub fn n(&self) -> usize {
        self.values.ncols()
    }

    pub fn d(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn sample(&self, i: usize) -> nalgebra::DVectorView<'_, f64> {
        self.values.column(i)
    }

    pub fn true_labels(&self) -> Option<&[usize]> {
        self.true_labels.as_deref()
    }

    pub fn label_names(&self) -> Option<&[String]> {
        self.label_names.as_deref()
    }

    /// Same labels and names, new feature values.
    pub(crate) fn with_values(&self, values: DMatrix<f64>) -> Self {
        Self {
            values,
            true_labels: self.true_labels.clone(),
            label_names: self.label_names.clone(),
        }
    }

    /// `||a_i - a_j||^2`.
    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        (self.values.column(i) - self.values.column(j)).norm_squared()
    }

    pub fn squared_distances(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut out = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..j {
                let v = self.squared_distance(i, j);
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        out
    }
}
