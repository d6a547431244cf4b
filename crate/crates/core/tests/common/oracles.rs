//! Independent reference computations used only by tests.
//!
//! Nothing here calls into the library's numerical paths: eigenpairs come from
//! a cyclic Jacobi sweep, products from explicit loops.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;

pub fn random_symmetric<R: Rng>(rng: &mut R, m: usize, scale: f64) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(m, m);
    for j in 0..m {
        for i in 0..=j {
            let v = rng.random_range(-scale..scale);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

pub fn naive_matmul(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut c = DMatrix::zeros(a.nrows(), b.ncols());
    for i in 0..a.nrows() {
        for j in 0..b.ncols() {
            let mut s = 0.0;
            for k in 0..a.ncols() {
                s += a[(i, k)] * b[(k, j)];
            }
            c[(i, j)] = s;
        }
    }
    c
}

pub fn centering(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            1.0 - 1.0 / m as f64
        } else {
            -1.0 / m as f64
        }
    })
}

pub fn naive_double_center(a: &DMatrix<f64>) -> DMatrix<f64> {
    let j = centering(a.nrows());
    naive_matmul(&naive_matmul(&j, a), &j)
}

/// Cyclic Jacobi eigendecomposition. Returns eigenvalues in descending order
/// with matching eigenvector columns.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut m = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() < 1e-15 * m.norm().max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * m[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let vals = idx.iter().map(|&i| m[(i, i)]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| v[(r, idx[c])]);
    (vals, vecs)
}

/// Largest principal angle between the column spans of two orthonormal blocks.
pub fn subspace_angle(u: &DMatrix<f64>, w: &DMatrix<f64>) -> f64 {
    let proj = naive_matmul(&u.transpose(), w);
    let (vals, _) = jacobi_eigen(&naive_matmul(&proj.transpose(), &proj));
    let smallest = vals.last().copied().unwrap_or(1.0).clamp(0.0, 1.0);
    smallest.sqrt().acos()
}

pub fn pca_truncate(a: &DMatrix<f64>, r: usize) -> DMatrix<f64> {
    let (vals, vecs) = jacobi_eigen(a);
    let n = a.nrows();
    let mut out = DMatrix::zeros(n, n);
    for k in 0..r.min(n) {
        let lam = vals[k].max(0.0);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += lam * vecs[(i, k)] * vecs[(j, k)];
            }
        }
    }
    out
}

pub fn project_cone(a: &DMatrix<f64>, r: usize) -> DMatrix<f64> {
    let c = naive_double_center(a);
    pca_truncate(&c, r) + (a - &c)
}

/// A random element of the rank-`r` conditionally PSD cone: `J Q Q^T J`
/// plus a term `u e^T + e u^T` that `J . J` annihilates. The tail is drawn
/// around `A - JAJ` so that the comparison with the projection is not vacuous.
pub fn random_cone_member<R: Rng>(rng: &mut R, a: &DMatrix<f64>, r: usize) -> DMatrix<f64> {
    let n = a.nrows();
    let cols = rng.random_range(1..=r);
    let q = DMatrix::from_fn(n, cols, |_, _| rng.random_range(-1.5..1.5));
    let head = naive_double_center(&naive_matmul(&q, &q.transpose()));
    let base_tail = a - naive_double_center(a);
    let spread = if rng.random_bool(0.5) { 0.0 } else { 0.3 };
    let u: Vec<f64> = (0..n).map(|_| rng.random_range(-spread..=spread)).collect();
    let tail = DMatrix::from_fn(n, n, |i, j| base_tail[(i, j)] + u[i] + u[j]);
    head + tail
}

/// `1/2 (alpha - a)^2 + b sqrt(alpha)`.
pub fn scalar_objective(a: f64, b: f64, alpha: f64) -> f64 {
    0.5 * (alpha - a) * (alpha - a) + b * alpha.sqrt()
}

/// Exhaustive grid search of the scalar objective on `[0, hi]`.
pub fn grid_min(a: f64, b: f64, hi: f64, step: f64) -> (f64, f64) {
    let steps = (hi / step).ceil() as usize;
    let mut best = (0.0, scalar_objective(a, b, 0.0));
    for k in 1..=steps {
        let alpha = (k as f64 * step).min(hi);
        let v = scalar_objective(a, b, alpha);
        if v < best.1 {
            best = (alpha, v);
        }
    }
    best
}

/// Rand index by enumerating every unordered pair.
pub fn brute_force_rand_index(truth: &[usize], pred: &[usize]) -> f64 {
    let n = truth.len();
    let mut agree = 0u64;
    let mut total = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            total += 1;
            if (truth[i] == truth[j]) == (pred[i] == pred[j]) {
                agree += 1;
            }
        }
    }
    agree as f64 / total as f64
}

/// Connected components of the relation `t[i][j] <= tol`, labelled by the
/// smallest member index.
pub fn union_find_partition(t: &DMatrix<f64>, tol: f64) -> Vec<usize> {
    let n = t.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if t[(i, j)] <= tol {
                let a = find(&mut parent, i);
                let b = find(&mut parent, j);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// True when two labelings induce the same partition.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}
