use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};

/// Isotropic Gaussian clusters in the plane.
///
/// Sampling uses `ChaCha8Rng` seeded with `seed`, so output is identical
/// across platforms and runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlobSpec {
    pub centers: Vec<[f64; 2]>,
    pub points_per_cluster: usize,
    /// Per-coordinate variance.
    pub variance: f64,
    pub seed: u64,
}

impl BlobSpec {
    /// Five clusters of 50 points with variance 0.1 around
    /// (1.5, 2), (2.5, 3), (1.5, 3), (2, 2.5), (3, 2).
    pub fn five_clusters(seed: u64) -> Self {
        Self {
            centers: vec![[1.5, 2.0], [2.5, 3.0], [1.5, 3.0], [2.0, 2.5], [3.0, 2.0]],
            points_per_cluster: 50,
            variance: 0.1,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.centers.is_empty() {
            return Err(Error::InvalidParameter(
                "blob spec needs at least one center".into(),
            ));
        }
        if !(self.variance.is_finite() && self.variance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "blob variance {} must be positive",
                self.variance
            )));
        }
        if self.points_per_cluster == 0 {
            return Err(Error::InvalidParameter(
                "points_per_cluster must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Samples the clusters in center order; the true label of a point is the
/// 1-based index of its center.
pub fn generate_blobs(spec: &BlobSpec) -> Result<DataMatrix> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let std = spec.variance.sqrt();
    let n = spec.centers.len() * spec.points_per_cluster;
    let mut values = DMatrix::zeros(2, n);
    let mut labels = Vec::with_capacity(n);
    for (c, center) in spec.centers.iter().enumerate() {
        for k in 0..spec.points_per_cluster {
            let s = c * spec.points_per_cluster + k;
            for (f, mu) in center.iter().enumerate() {
                let z: f64 = StandardNormal.sample(&mut rng);
                values[(f, s)] = mu + std * z;
            }
            labels.push(c + 1);
        }
    }
    DataMatrix::new(values, Some(labels))
}
