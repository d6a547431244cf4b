//! Convex clustering through a Euclidean distance matrix model.
//!
//! The sum-of-norms clustering objective is rewritten over the squared
//! distance matrix of the `2n` points `[a_1..a_n, x_1..x_n]` (data and cluster
//! centres). The rank-constrained EDM condition is handled by a penalty on the
//! distance to a conditionally positive semidefinite cone, and each
//! majorization step reduces to independent scalar problems with a
//! closed-form solution.
//!
//! ```
//! use edm_cluster::{generate_blobs, run, extract_labels, rand_index, BlobSpec, SolverConfig};
//!
//! let spec = BlobSpec {
//!     centers: vec![[0.0, 0.0], [5.0, 5.0]],
//!     points_per_cluster: 6,
//!     variance: 0.01,
//!     seed: 1,
//! };
//! let data = generate_blobs(&spec).unwrap();
//! let state = run(&data, &SolverConfig::new(1.0, 5.0, 2, 5, 0.5)).unwrap();
//! let labels = extract_labels(&state, None);
//! assert_eq!(labels.num_clusters, 2);
//! assert_eq!(rand_index(data.true_labels().unwrap(), &labels.labels).unwrap(), 1.0);
//! ```

pub mod data;
pub mod error;
pub mod geometry;
pub mod io;
pub mod labeling;
pub mod metrics;
pub mod pipeline;
pub mod solver;
pub mod weights;

#[cfg(test)]
#[path = "../tests/common/oracles.rs"]
mod oracles;

pub use data::DataMatrix;
pub use error::{Error, Result};
pub use geometry::{
    cmds_embed, cone_distance_sq, double_center, edm_from_points, pca_truncate, project_cone,
    top_eigenpairs, PointConfiguration, SpectralTruncation, SymMatrix,
};
pub use io::{generate_blobs, load_csv, load_idx, normalize, BlobSpec, LabelColumn, Normalization};
pub use labeling::{default_zero_tol, extract_labels, label_block, ClusterLabeling};
pub use metrics::{nmi, nmi_score, rand_index, ContingencyTable, NmiScore};
pub use pipeline::{run_pipeline, InputSource, PipelineArgs, PipelineError, RunReport, Stage};
pub use solver::{
    majorant_coefficient, majorization_bound, objective_f, penalized_objective, run,
    run_with_coefficients, scalar_min, solve_subproblem, DistanceState, ScalarProblem,
    SolverConfig,
};
pub use weights::{build_knn_weights, build_lifted, LiftedCoefficients, WeightGraph};
