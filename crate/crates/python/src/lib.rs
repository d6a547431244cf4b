//! Python bindings. Matrices cross the boundary as lists of rows.

use edm_cluster::io::{generate_blobs as gen_blobs, load_csv as read_csv, BlobSpec, LabelColumn};
use edm_cluster::pipeline::{run_pipeline, InputSource, PipelineArgs};
use edm_cluster::{self as core, DataMatrix, Error, Normalization, PointConfiguration, SymMatrix};
use nalgebra::DMatrix;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        Error::EigenNonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn dense(rows: &[Vec<f64>]) -> PyResult<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn symmetric(rows: &[Vec<f64>]) -> PyResult<SymMatrix> {
    SymMatrix::new(dense(rows)?).map_err(to_py)
}

/// Points as rows, with labels when the source has them.
type Sample = (Vec<Vec<f64>>, Option<Vec<usize>>);

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn parse_normalization(name: &str) -> PyResult<Normalization> {
    name.parse().map_err(PyValueError::new_err)
}

/// Parameters of the solver.
#[pyclass(name = "SolverConfig", module = "edm_cluster", from_py_object)]
#[derive(Clone)]
struct PySolverConfig {
    inner: core::SolverConfig,
}

#[pymethods]
impl PySolverConfig {
    #[new]
    #[pyo3(signature = (gamma, rho, rank, knn, phi, tol = core::solver::DEFAULT_TOL, max_iter = core::solver::DEFAULT_MAX_ITER))]
    fn new(
        gamma: f64,
        rho: f64,
        rank: usize,
        knn: usize,
        phi: f64,
        tol: f64,
        max_iter: usize,
    ) -> Self {
        Self {
            inner: core::SolverConfig::new(gamma, rho, rank, knn, phi)
                .with_tol(tol)
                .with_max_iter(max_iter),
        }
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank
    }

    #[getter]
    fn knn(&self) -> usize {
        self.inner.knn_k
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.phi
    }

    #[getter]
    fn tol(&self) -> f64 {
        self.inner.tol
    }

    #[getter]
    fn max_iter(&self) -> usize {
        self.inner.max_iter
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "SolverConfig(gamma={}, rho={}, rank={}, knn={}, phi={}, tol={}, max_iter={})",
            c.gamma, c.rho, c.rank, c.knn_k, c.phi, c.tol, c.max_iter
        )
    }
}

/// Global minimiser of `1/2 (x - a)^2 + b sqrt(x)` over `x >= 0`.
#[pyfunction]
fn scalar_min(a: f64, b: f64) -> PyResult<f64> {
    Ok(core::scalar_min(
        core::ScalarProblem::new(a, b).map_err(to_py)?,
    ))
}

/// `J A J` with `J` the centering matrix.
#[pyfunction]
fn double_center(matrix: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    let out = core::double_center(&symmetric(&matrix)?).map_err(to_py)?;
    Ok(rows_of(out.as_matrix()))
}

/// Projection onto the rank-`rank` conditionally positive semidefinite cone.
#[pyfunction]
fn project_cone(matrix: Vec<Vec<f64>>, rank: usize) -> PyResult<Vec<Vec<f64>>> {
    let out = core::project_cone(&symmetric(&matrix)?, rank).map_err(to_py)?;
    Ok(rows_of(out.as_matrix()))
}

/// Squared distance matrix of the given points (one point per row).
#[pyfunction]
fn edm_from_points(points: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    let config = PointConfiguration::new(dense(&points)?.transpose()).map_err(to_py)?;
    Ok(rows_of(core::edm_from_points(&config).as_matrix()))
}

/// Points in `dim` dimensions (one per row) realizing a squared distance matrix.
#[pyfunction]
fn cmds_embed(matrix: Vec<Vec<f64>>, dim: usize) -> PyResult<Vec<Vec<f64>>> {
    let config = core::cmds_embed(&symmetric(&matrix)?, dim).map_err(to_py)?;
    Ok(rows_of(&config.points().transpose()))
}

#[pyfunction]
fn rand_index(true_labels: Vec<usize>, pred_labels: Vec<usize>) -> PyResult<f64> {
    core::rand_index(&true_labels, &pred_labels).map_err(to_py)
}

#[pyfunction]
fn nmi(true_labels: Vec<usize>, pred_labels: Vec<usize>) -> PyResult<f64> {
    core::nmi(&true_labels, &pred_labels).map_err(to_py)
}

/// Labels from a matrix of squared centre distances.
#[pyfunction]
fn label_block(centre_distances: Vec<Vec<f64>>, zero_tol: f64) -> PyResult<Vec<usize>> {
    Ok(core::label_block(&dense(&centre_distances)?, zero_tol).labels)
}

/// The five-cluster Gaussian sample. Returns `(points, labels)`.
#[pyfunction]
#[pyo3(signature = (seed = 0))]
fn generate_blobs(seed: u64) -> PyResult<(Vec<Vec<f64>>, Vec<usize>)> {
    let data = gen_blobs(&BlobSpec::five_clusters(seed)).map_err(to_py)?;
    let labels = data
        .true_labels()
        .map(<[usize]>::to_vec)
        .unwrap_or_default();
    Ok((rows_of(&data.values().transpose()), labels))
}

/// Reads a delimited file. Returns `(points, labels)`; labels are `None` when
/// no label column is given.
#[pyfunction]
#[pyo3(signature = (path, label_column = None))]
fn load_csv(path: &str, label_column: Option<String>) -> PyResult<Sample> {
    let column = label_column.map(|c| c.parse::<LabelColumn>().unwrap_or(LabelColumn::Name(c)));
    let data = read_csv(path, column.as_ref()).map_err(to_py)?;
    Ok((
        rows_of(&data.values().transpose()),
        data.true_labels().map(<[usize]>::to_vec),
    ))
}

/// Normalizes, solves, labels and, when `labels` are given, scores.
/// Returns the run report as a dict.
#[pyfunction]
#[pyo3(signature = (points, config, labels = None, normalize = "minmax", zero_tol = None))]
fn cluster<'py>(
    py: Python<'py>,
    points: Vec<Vec<f64>>,
    config: PySolverConfig,
    labels: Option<Vec<usize>>,
    normalize: &str,
    zero_tol: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let data = DataMatrix::new(dense(&points)?.transpose(), labels).map_err(to_py)?;
    let args = PipelineArgs {
        source: InputSource::Memory(data),
        config: config.inner,
        normalize: parse_normalization(normalize)?,
        zero_tol,
        score_external: None,
    };
    let report = py
        .detach(|| run_pipeline(&args))
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let text = report
        .to_json()
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pymodule]
#[pyo3(name = "edm_cluster")]
fn edm_cluster_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySolverConfig>()?;
    m.add_function(wrap_pyfunction!(scalar_min, m)?)?;
    m.add_function(wrap_pyfunction!(double_center, m)?)?;
    m.add_function(wrap_pyfunction!(project_cone, m)?)?;
    m.add_function(wrap_pyfunction!(edm_from_points, m)?)?;
    m.add_function(wrap_pyfunction!(cmds_embed, m)?)?;
    m.add_function(wrap_pyfunction!(rand_index, m)?)?;
    m.add_function(wrap_pyfunction!(nmi, m)?)?;
    m.add_function(wrap_pyfunction!(label_block, m)?)?;
    m.add_function(wrap_pyfunction!(generate_blobs, m)?)?;
    m.add_function(wrap_pyfunction!(load_csv, m)?)?;
    m.add_function(wrap_pyfunction!(cluster, m)?)?;
    Ok(())
}
