//! Majorization penalty method for the distance-matrix clustering model.
//!
//! The variable is a symmetric `2n x 2n` matrix `D` whose top-left block is
//! pinned to the data distances and whose diagonal is zero. Each outer step
//! replaces the cone-distance penalty `g` by the majorant
//!
//! ```text
//! g_m(D, A) = 1/2 ||D||^2 - 1/2 ||P||^2 + <P, D - A>,   P = Proj(-A)
//! ```
//!
//! which decouples the subproblem into independent scalar problems
//! `min_{alpha >= 0} 1/2 (alpha - a)^2 + b sqrt(alpha)`, solved in closed form.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::geometry::{distance_sq_to, project_cone, SymMatrix};
use crate::weights::{build_knn_weights, build_lifted, LiftedCoefficients};

pub const DEFAULT_TOL: f64 = 1e-5;
pub const DEFAULT_MAX_ITER: usize = 1000;

/// Parameters of one solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Fusion strength.
    pub gamma: f64,
    /// Penalty weight on the cone distance.
    pub rho: f64,
    /// Embedding dimension of the cone constraint.
    pub rank: usize,
    /// Relative Frobenius change below which the iteration stops.
    pub tol: f64,
    pub max_iter: usize,
    pub knn_k: usize,
    /// Gaussian decay of the neighbour weights.
    pub phi: f64,
}

impl SolverConfig {
    pub fn new(gamma: f64, rho: f64, rank: usize, knn_k: usize, phi: f64) -> Self {
        Self {
            gamma,
            rho,
            rank,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            knn_k,
            phi,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    /// Checks the parameters against a problem with `n` samples.
    pub fn validate(&self, n: usize) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be positive"
                )))
            }
        };
        positive("gamma", self.gamma)?;
        positive("rho", self.rho)?;
        positive("tol", self.tol)?;
        positive("phi", self.phi)?;
        if self.rank == 0 || self.rank > 2 * n - 1 {
            return Err(Error::InvalidParameter(format!(
                "rank = {} must lie in 1..={}",
                self.rank,
                2 * n - 1
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        if self.knn_k == 0 || self.knn_k >= n {
            return Err(Error::InvalidParameter(format!(
                "knn k = {} must satisfy 1 <= k <= {}",
                self.knn_k,
                n - 1
            )));
        }
        Ok(())
    }
}

/// The iterate together with its history.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceState {
    pub d: SymMatrix,
    /// Number of subproblems solved so far.
    pub iteration: usize,
    /// `F_rho(D^k)` for `k = 0..=iteration`.
    pub objective_trace: Vec<f64>,
    /// `g(D^k)` for `k = 0..=iteration`.
    pub feasibility_trace: Vec<f64>,
    pub converged: bool,
}

impl DistanceState {
    /// Number of data points.
    pub fn n(&self) -> usize {
        self.d.order() / 2
    }

    /// Squared distances between the cluster centres.
    pub fn centre_block(&self) -> DMatrix<f64> {
        let n = self.n();
        self.d.as_matrix().view((n, n), (n, n)).into_owned()
    }

    pub fn final_objective(&self) -> f64 {
        self.objective_trace.last().copied().unwrap_or(f64::NAN)
    }

    pub fn final_feasibility(&self) -> f64 {
        self.feasibility_trace.last().copied().unwrap_or(f64::NAN)
    }
}

/// `min_{alpha >= 0} 1/2 (alpha - a)^2 + b sqrt(alpha)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarProblem {
    a: f64,
    b: f64,
}

impl ScalarProblem {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || b < 0.0 {
            return Err(Error::InvalidInput(format!(
                "scalar problem needs finite a and b >= 0, got a = {a}, b = {b}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn objective(&self, alpha: f64) -> f64 {
        0.5 * (alpha - self.a) * (alpha - self.a) + self.b * alpha.sqrt()
    }
}

/// Global minimiser of the scalar problem.
///
/// With `t = sqrt(alpha)` the stationarity condition is the depressed cubic
/// `2t^3 - 2at + b = 0`. If `a <= 0`, or `b >= 4/(3 sqrt 3) a^{3/2}`, the
/// objective is increasing on `(0, inf)` and the answer is 0. Otherwise the
/// cubic has three real roots; the largest one `t_max` from the trigonometric
/// formula gives the only interior local minimum `t_max^2`, which is compared
/// against the boundary value at 0.
pub fn scalar_min(p: ScalarProblem) -> f64 {
    let ScalarProblem { a, b } = p;
    if a <= 0.0 {
        return 0.0;
    }
    if b == 0.0 {
        return a;
    }
    let third = a / 3.0;
    let root_third = third.sqrt();
    // 4/(3 sqrt 3) a^{3/2} == 4 (a/3)^{3/2}
    let r = third * root_third;
    if b >= 4.0 * r {
        return 0.0;
    }
    // xi lies in [0, pi/3], so the k = 0 branch of the trigonometric formula
    // is the largest of the three roots.
    let xi = (-b / (4.0 * r)).clamp(-1.0, 1.0).acos() / 3.0;
    let t_max = 2.0 * root_third * xi.cos();
    let candidate = t_max * t_max;
    if p.objective(candidate) < p.objective(0.0) {
        candidate
    } else {
        0.0
    }
}

fn check_order(d: &SymMatrix, coeffs: &LiftedCoefficients) -> Result<()> {
    if d.order() != 2 * coeffs.n() {
        return Err(Error::InvalidInput(format!(
            "distance matrix has order {}, expected {}",
            d.order(),
            2 * coeffs.n()
        )));
    }
    Ok(())
}

/// `f(D) = <H, D> + gamma <W, sqrt(D)>` with the square root taken entrywise.
pub fn objective_f(d: &SymMatrix, coeffs: &LiftedCoefficients, gamma: f64) -> Result<f64> {
    check_order(d, coeffs)?;
    if let Some(v) = d.as_matrix().iter().find(|v| **v < 0.0) {
        return Err(Error::InvalidInput(format!(
            "objective needs a nonnegative matrix, found {v}"
        )));
    }
    let dm = d.as_matrix();
    let hm = coeffs.h().as_matrix();
    let wm = coeffs.w().as_matrix();
    let mut fidelity = 0.0;
    let mut fusion = 0.0;
    for (idx, &v) in dm.iter().enumerate() {
        fidelity += hm[idx] * v;
        if wm[idx] != 0.0 {
            fusion += wm[idx] * v.sqrt();
        }
    }
    Ok(fidelity + gamma * fusion)
}

/// `F_rho(D) = f(D) + rho g(D)`.
pub fn penalized_objective(
    d: &SymMatrix,
    coeffs: &LiftedCoefficients,
    gamma: f64,
    rho: f64,
    rank: usize,
) -> Result<f64> {
    let f = objective_f(d, coeffs, gamma)?;
    Ok(f + rho * crate::geometry::cone_distance_sq(d, rank)?)
}

/// `H + rho Proj(-D^k)`, the linear coefficient of the majorized subproblem.
pub fn majorant_coefficient(
    dk: &SymMatrix,
    coeffs: &LiftedCoefficients,
    rho: f64,
    rank: usize,
) -> Result<SymMatrix> {
    check_order(dk, coeffs)?;
    let proj = project_cone(&-dk, rank)?;
    Ok(coeffs.h() + &(&proj * rho))
}

/// The majorant `g_m(D, A)` of the cone-distance penalty at `A`.
pub fn majorization_bound(d: &SymMatrix, a: &SymMatrix, rank: usize) -> Result<f64> {
    let proj = project_cone(&-a, rank)?;
    Ok(majorant_with_projection(d, a, &proj))
}

fn majorant_with_projection(d: &SymMatrix, a: &SymMatrix, proj: &SymMatrix) -> f64 {
    0.5 * d.as_matrix().norm_squared() - 0.5 * proj.as_matrix().norm_squared()
        + proj.inner(&(d - a))
}

/// Minimises the separable subproblem for a given linear coefficient.
fn minimise_majorant(
    dhat: &SymMatrix,
    coeffs: &LiftedCoefficients,
    gamma: f64,
    rho: f64,
) -> SymMatrix {
    let n = coeffs.n();
    let fixed = coeffs.fixed_block();
    let w = coeffs.w();
    let scale = gamma / rho;
    SymMatrix::from_upper_fn(2 * n, |i, j| {
        if i == j {
            0.0
        } else if j < n {
            fixed[(i, j)]
        } else {
            // a is finite and b = scale * W >= 0, so the problem is valid.
            scalar_min(ScalarProblem {
                a: -dhat.get(i, j) / rho,
                b: scale * w.get(i, j),
            })
        }
    })
}

/// One majorization step from `state`, returning the next state with its
/// trace entries appended.
pub fn solve_subproblem(
    state: &DistanceState,
    coeffs: &LiftedCoefficients,
    config: &SolverConfig,
) -> Result<DistanceState> {
    let dhat = majorant_coefficient(&state.d, coeffs, config.rho, config.rank)?;
    let next = minimise_majorant(&dhat, coeffs, config.gamma, config.rho);
    let eval = Evaluated::new(next, coeffs, config)?;
    let mut objective_trace = state.objective_trace.clone();
    let mut feasibility_trace = state.feasibility_trace.clone();
    objective_trace.push(eval.objective);
    feasibility_trace.push(eval.feasibility);
    Ok(DistanceState {
        d: eval.d,
        iteration: state.iteration + 1,
        objective_trace,
        feasibility_trace,
        converged: false,
    })
}

/// `D^0`: the distance matrix of `[a_1..a_n, a_1..a_n]`, i.e. every centre
/// starts on its own data point.
pub fn initial_state(coeffs: &LiftedCoefficients) -> SymMatrix {
    let n = coeffs.n();
    let fixed = coeffs.fixed_block();
    SymMatrix::from_upper_fn(2 * n, |i, j| fixed[(i % n, j % n)])
}

/// An iterate with its cone projection and objective values.
struct Evaluated {
    d: SymMatrix,
    proj_neg: SymMatrix,
    objective: f64,
    feasibility: f64,
}

impl Evaluated {
    fn new(d: SymMatrix, coeffs: &LiftedCoefficients, config: &SolverConfig) -> Result<Self> {
        let neg = -&d;
        let proj_neg = project_cone(&neg, config.rank)?;
        let feasibility = distance_sq_to(&neg, &proj_neg);
        let objective = objective_f(&d, coeffs, config.gamma)? + config.rho * feasibility;
        Ok(Self {
            d,
            proj_neg,
            objective,
            feasibility,
        })
    }
}

/// Runs the method on `data`, building the weights from the configuration.
pub fn run(data: &DataMatrix, config: &SolverConfig) -> Result<DistanceState> {
    config.validate(data.n())?;
    let graph = build_knn_weights(data, config.knn_k, config.phi)?;
    let coeffs = build_lifted(data, &graph)?;
    run_with_coefficients(&coeffs, config)
}

/// Runs the method from `D^0` on precomputed coefficients.
///
/// Stops when `||D^{k+1} - D^k||_F / max(1, ||D^k||_F) <= tol`. Hitting
/// `max_iter` is not an error; the returned state then has `converged == false`.
pub fn run_with_coefficients(
    coeffs: &LiftedCoefficients,
    config: &SolverConfig,
) -> Result<DistanceState> {
    let n = coeffs.n();
    if config.rank == 0 || config.rank > 2 * n - 1 {
        return Err(Error::InvalidParameter(format!(
            "rank = {} must lie in 1..={}",
            config.rank,
            2 * n - 1
        )));
    }
    let mut current = Evaluated::new(initial_state(coeffs), coeffs, config)?;
    let mut objective_trace = vec![current.objective];
    let mut feasibility_trace = vec![current.feasibility];
    let mut iteration = 0;
    let mut converged = false;

    while iteration < config.max_iter {
        let dhat = coeffs.h() + &(&current.proj_neg * config.rho);
        let next_d = minimise_majorant(&dhat, coeffs, config.gamma, config.rho);
        let change = (next_d.as_matrix() - current.d.as_matrix()).norm()
            / current.d.frobenius_norm().max(1.0);
        current = Evaluated::new(next_d, coeffs, config)?;
        objective_trace.push(current.objective);
        feasibility_trace.push(current.feasibility);
        iteration += 1;
        if change <= config.tol {
            converged = true;
            break;
        }
    }

    Ok(DistanceState {
        d: current.d,
        iteration,
        objective_trace,
        feasibility_trace,
        converged,
    })
}
