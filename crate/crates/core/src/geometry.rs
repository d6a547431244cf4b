//! Symmetric-matrix kernels for Euclidean distance matrices.
//!
//! Everything here works on dense symmetric matrices: double centering with
//! `J = I - ee^T/m`, rank-truncated spectral clipping, projection onto the
//! conditionally positive semidefinite cone with a rank cut on `JXJ`, and
//! classical multidimensional scaling.
//!
//! The projection onto the rank-cut cone is set-valued when eigenvalues tie at
//! position `r`. The first `r` pairs in descending order are kept; any element
//! of the projection set is an equally valid answer, so callers should compare
//! distances rather than projector entries.

use std::ops::{Add, Mul, Neg, Sub};

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Eigenvalues below this magnitude are treated as numerically zero when
/// clipping spectra of floating-point EDMs.
pub const NEGLIGIBLE_EIGENVALUE: f64 = 1e-10;

const SYMMETRY_TOL: f64 = 1e-10;

/// A dense real symmetric matrix.
///
/// Both triangles are stored and kept bit-identical.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    /// Wraps a square matrix after checking it is finite and symmetric up to a
    /// small relative tolerance. The stored matrix is exactly symmetrized.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidInput(format!(
                "matrix is {}x{}, expected square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let scale = matrix.amax().max(1.0);
        let m = matrix.nrows();
        for j in 0..m {
            for i in (j + 1)..m {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidInput(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self::symmetrized(matrix))
    }

    pub fn zeros(order: usize) -> Self {
        Self(DMatrix::zeros(order, order))
    }

    pub fn identity(order: usize) -> Self {
        Self(DMatrix::identity(order, order))
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle
    /// (`i <= j`) and mirrored.
    pub fn from_upper_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(order, order);
        for j in 0..order {
            for i in 0..=j {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self(m)
    }

    /// Diagonal matrix with the given entries.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    /// Averages the two triangles without validation.
    pub(crate) fn symmetrized(mut matrix: DMatrix<f64>) -> Self {
        let m = matrix.nrows();
        for j in 0..m {
            for i in (j + 1)..m {
                let v = 0.5 * (matrix[(i, j)] + matrix[(j, i)]);
                matrix[(i, j)] = v;
                matrix[(j, i)] = v;
            }
        }
        Self(matrix)
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Writes `value` at `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.0[(i, j)] = value;
        self.0[(j, i)] = value;
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Frobenius inner product `<A, B> = trace(A^T B)`.
    pub fn inner(&self, other: &SymMatrix) -> f64 {
        self.0.dot(&other.0)
    }

    /// Principal submatrix on rows/columns `start..start + len`.
    pub fn block(&self, start: usize, len: usize) -> SymMatrix {
        SymMatrix(self.0.view((start, start), (len, len)).into_owned())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &SymMatrix {
    type Output = SymMatrix;
    fn neg(self) -> SymMatrix {
        SymMatrix(-&self.0)
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: f64) -> SymMatrix {
        SymMatrix(&self.0 * rhs)
    }
}

/// The leading `r` eigenpairs of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SpectralTruncation {
    /// Eigenvalues in descending order.
    pub eigenvalues: DVector<f64>,
    /// Orthonormal eigenvectors, one column per eigenvalue.
    pub eigenvectors: DMatrix<f64>,
    pub r_requested: usize,
}

impl SpectralTruncation {
    pub fn kept(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Drops pairs with negative eigenvalues and zeroes negligible ones, so that
    /// every retained eigenvalue is nonnegative.
    pub fn clip_negative(self) -> SpectralTruncation {
        let keep: Vec<usize> = (0..self.kept())
            .filter(|&i| self.eigenvalues[i] >= -NEGLIGIBLE_EIGENVALUE)
            .collect();
        let eigenvalues = DVector::from_iterator(
            keep.len(),
            keep.iter().map(|&i| self.eigenvalues[i].max(0.0)),
        );
        let eigenvectors = self.eigenvectors.select_columns(keep.iter());
        SpectralTruncation {
            eigenvalues,
            eigenvectors,
            r_requested: self.r_requested,
        }
    }
}

/// Points stored as the columns of a `dim x m` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfiguration {
    points: DMatrix<f64>,
}

impl PointConfiguration {
    pub fn new(points: DMatrix<f64>) -> Result<Self> {
        if points.nrows() == 0 || points.ncols() == 0 {
            return Err(Error::InvalidInput("point configuration is empty".into()));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "point coordinates must be finite".into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn dim(&self) -> usize {
        self.points.nrows()
    }

    pub fn len(&self) -> usize {
        self.points.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.points.ncols() == 0
    }

    pub fn points(&self) -> &DMatrix<f64> {
        &self.points
    }
}

/// Returns `JAJ` with `J = I - ee^T/m`.
///
/// Computed from row, column and grand means instead of two matrix products.
pub fn double_center(a: &SymMatrix) -> Result<SymMatrix> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let m = a.order();
    if m == 0 {
        return Ok(a.clone());
    }
    let inv = 1.0 / m as f64;
    let mat = a.as_matrix();
    let means: Vec<f64> = (0..m).map(|j| mat.column(j).sum() * inv).collect();
    let grand = means.iter().sum::<f64>() * inv;
    // A is symmetric, so row means equal column means.
    Ok(SymMatrix::from_upper_fn(m, |i, j| {
        mat[(i, j)] - means[i] - means[j] + grand
    }))
}

/// The `r` algebraically largest eigenpairs of `a`.
pub fn top_eigenpairs(a: &SymMatrix, r: usize) -> Result<SpectralTruncation> {
    let m = a.order();
    if r == 0 || r > m {
        return Err(Error::InvalidParameter(format!(
            "requested {r} eigenpairs of a matrix of order {m}"
        )));
    }
    let src = a.as_matrix();
    let eig = Mat::<f64>::from_fn(m, m, |i, j| src[(i, j)])
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::EigenNonConvergence {
            order: m,
            detail: format!("{e:?}"),
        })?;
    // Eigenvalues come back in nondecreasing order; walk them from the top.
    let values = eig.S().column_vector();
    let vectors = eig.U();
    let order: Vec<usize> = (0..m).rev().take(r).collect();

    Ok(SpectralTruncation {
        eigenvalues: DVector::from_iterator(r, order.iter().map(|&i| values[i])),
        eigenvectors: DMatrix::from_fn(m, r, |row, k| vectors[(row, order[k])]),
        r_requested: r,
    })
}

fn outer_sum(spectrum: &SpectralTruncation, order: usize) -> SymMatrix {
    if spectrum.kept() == 0 {
        return SymMatrix::zeros(order);
    }
    let p = &spectrum.eigenvectors;
    let mut scaled = p.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= spectrum.eigenvalues[k];
    }
    SymMatrix::symmetrized(scaled * p.transpose())
}

/// `sum_{i<=r} max(0, lambda_i) p_i p_i^T` over the `r` largest eigenpairs.
pub fn pca_truncate(a: &SymMatrix, r: usize) -> Result<SymMatrix> {
    let r = r.min(a.order());
    let spectrum = top_eigenpairs(a, r)?;
    let positive: Vec<usize> = (0..spectrum.kept())
        .filter(|&i| spectrum.eigenvalues[i] > 0.0)
        .collect();
    let clipped = SpectralTruncation {
        eigenvalues: DVector::from_iterator(
            positive.len(),
            positive.iter().map(|&i| spectrum.eigenvalues[i]),
        ),
        eigenvectors: spectrum.eigenvectors.select_columns(positive.iter()),
        r_requested: r,
    };
    Ok(outer_sum(&clipped, a.order()))
}

/// One element of the projection of `a` onto the cone of conditionally
/// positive semidefinite matrices `X` with `rank(JXJ) <= r`:
/// `PCA_r^+(JAJ) + (A - JAJ)`.
pub fn project_cone(a: &SymMatrix, r: usize) -> Result<SymMatrix> {
    if r == 0 {
        return Err(Error::InvalidParameter("cone rank must be positive".into()));
    }
    let centered = double_center(a)?;
    let head = pca_truncate(&centered, r)?;
    let tail = a - &centered;
    Ok(&head + &tail)
}

/// `g(D) = 1/2 dist^2(-D, cone(r))`; zero exactly when `-D` lies in the cone.
pub fn cone_distance_sq(d: &SymMatrix, r: usize) -> Result<f64> {
    let neg = -d;
    let proj = project_cone(&neg, r)?;
    Ok(distance_sq_to(&neg, &proj))
}

/// `1/2 ||a - proj||^2`.
pub(crate) fn distance_sq_to(a: &SymMatrix, proj: &SymMatrix) -> f64 {
    0.5 * (a.as_matrix() - proj.as_matrix()).norm_squared()
}

/// Classical MDS: coordinates `Diag(sqrt(lambda)) P_1^T` from the top `r`
/// eigenpairs of `-1/2 JDJ`. Negative eigenvalues are clipped to zero, which
/// zeroes the matching coordinate row.
pub fn cmds_embed(d: &SymMatrix, r: usize) -> Result<PointConfiguration> {
    let m = d.order();
    if r == 0 || r > m {
        return Err(Error::InvalidParameter(format!(
            "embedding dimension {r} out of range for {m} points"
        )));
    }
    let gram = &double_center(d)? * -0.5;
    let spectrum = top_eigenpairs(&gram, r)?;
    let mut points = DMatrix::zeros(r, m);
    for k in 0..r {
        let lambda = spectrum.eigenvalues[k];
        if lambda <= 0.0 {
            continue;
        }
        let scale = lambda.sqrt();
        for i in 0..m {
            points[(k, i)] = scale * spectrum.eigenvectors[(i, k)];
        }
    }
    PointConfiguration::new(points)
}

/// Squared Euclidean distance matrix of the configuration's points.
pub fn edm_from_points(p: &PointConfiguration) -> SymMatrix {
    let pts = p.points();
    let m = pts.ncols();
    SymMatrix::from_upper_fn(m, |i, j| {
        if i == j {
            0.0
        } else {
            (pts.column(i) - pts.column(j)).norm_squared()
        }
    })
}
