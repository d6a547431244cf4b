use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;

/// Per-feature rescaling applied before building the weight graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Affine map of each feature onto `[0, 1]`.
    #[default]
    MinMax,
    /// Zero mean, unit population standard deviation.
    ZScore,
    None,
}

impl FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "minmax" => Ok(Self::MinMax),
            "zscore" => Ok(Self::ZScore),
            "none" => Ok(Self::None),
            other => Err(format!(
                "unknown normalization '{other}' (minmax, zscore, none)"
            )),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::MinMax => "minmax",
            Self::ZScore => "zscore",
            Self::None => "none",
        })
    }
}

/// Rescales every feature independently. Constant features map to 0 under
/// both `MinMax` and `ZScore`.
pub fn normalize(data: &DataMatrix, mode: Normalization) -> DataMatrix {
    let mut values = data.values().clone();
    let n = values.ncols() as f64;
    match mode {
        Normalization::None => {}
        Normalization::MinMax => {
            for mut row in values.row_iter_mut() {
                let lo = row.min();
                let span = row.max() - lo;
                row.apply(|v| *v = if span > 0.0 { (*v - lo) / span } else { 0.0 });
            }
        }
        Normalization::ZScore => {
            for mut row in values.row_iter_mut() {
                let mean = row.sum() / n;
                let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
                let std = var.sqrt();
                row.apply(|v| *v = if std > 0.0 { (*v - mean) / std } else { 0.0 });
            }
        }
    }
    data.with_values(values)
}
