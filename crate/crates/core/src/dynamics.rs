//! The matrix-weighted update `x_i[k+1] = Σ_j w_ij·A_ij·x_j[k] + y_i` and
//! the equilibria it converges to.

use serde::{Deserialize, Serialize};

use crate::economy::{EconomyNetwork, LiftedSystem};
use crate::error::{Error, Result};
use crate::matrix::{
    power_iteration, solve_linear, Matrix, SpectralResult, Vector, POWER_MAX_ITER, POWER_TOL,
};

/// Spectral radius estimates at or above `1 − SPECTRAL_MARGIN` are
/// treated as one.
pub const SPECTRAL_MARGIN: f64 = 1e-9;
/// Entries above `−NONNEGATIVE_TOL` count as nonnegative.
pub const NONNEGATIVE_TOL: f64 = 1e-9;
/// Power-iteration residual for Perron vectors used as limit predictions.
/// The prediction scales the eigenvector by the initial mass, so it needs
/// more accuracy than a bare spectral estimate.
pub const LIMIT_TOL: f64 = 1e-13;
/// Upper bound on `states.len() × dn` for a recorded trace.
pub const MAX_TRACE_VALUES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationOptions {
    pub max_steps: usize,
    /// Stop once `‖x[k+1] − x[k]‖∞` falls to this value.
    pub convergence_tol: f64,
    pub record_every: usize,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            max_steps: 100_000,
            convergence_tol: 1e-12,
            record_every: 1,
        }
    }
}

impl SimulationOptions {
    fn check(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::InvalidOptions("max_steps must be at least 1"));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidOptions("convergence_tol must be positive"));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidOptions("record_every must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub steps: Vec<usize>,
    pub states: Vec<Vector>,
    pub converged: bool,
    pub final_step: usize,
    pub final_delta: f64,
}

impl SimulationTrace {
    pub fn final_state(&self) -> &Vector {
        self.states.last().expect("a trace holds at least x[0]")
    }
}

/// One application of the update law: `Ā·x + y`.
pub fn step(sys: &LiftedSystem, x: &[f64]) -> Result<Vector> {
    let mut next = sys.a_bar.mul_vec(x)?;
    for (v, y) in next.iter_mut().zip(sys.y.iter()) {
        *v += y;
    }
    Ok(next)
}

fn check_state(sys: &LiftedSystem, x0: &[f64]) -> Result<()> {
    if x0.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            context: "initial state".into(),
            expected: sys.dim(),
            found: x0.len(),
        });
    }
    Ok(())
}

/// Iterates [`step`] from `x0` until the successive-iterate delta drops to
/// `convergence_tol` or `max_steps` is reached. Records every
/// `record_every`-th state plus the final one.
pub fn simulate(
    sys: &LiftedSystem,
    x0: &Vector,
    opts: &SimulationOptions,
) -> Result<SimulationTrace> {
    opts.check()?;
    check_state(sys, x0)?;
    let dim = sys.dim();
    let mut trace = SimulationTrace {
        steps: vec![0],
        states: vec![x0.clone()],
        converged: false,
        final_step: 0,
        final_delta: f64::INFINITY,
    };
    let mut x = x0.clone();
    for k in 1..=opts.max_steps {
        let next = step(sys, &x)?;
        trace.final_delta = next.dist_inf(&x);
        trace.final_step = k;
        x = next;
        trace.converged = trace.final_delta <= opts.convergence_tol;
        if k % opts.record_every == 0 || trace.converged || k == opts.max_steps {
            if (trace.states.len() + 1) * dim > MAX_TRACE_VALUES {
                return Err(Error::TraceTooLarge((trace.states.len() + 1) * dim));
            }
            trace.steps.push(k);
            trace.states.push(x.clone());
        }
        if trace.converged {
            break;
        }
    }
    Ok(trace)
}

/// Closed-model limit `γ̄·(1ᵀx0)` with `γ̄` the 1-normalized Perron vector
/// of `Ā`.
pub fn closed_equilibrium_predict(sys: &LiftedSystem, x0: &Vector) -> Result<Vector> {
    check_state(sys, x0)?;
    let mass = require_mass(x0)?;
    let perron = power_iteration(&sys.a_bar, LIMIT_TOL, POWER_MAX_ITER)?;
    Ok(perron.eigenvector.scaled(mass))
}

/// Closed-model limit when every edge carries the same matrix `A`:
/// `(ω ⊗ γ)·(1ᵀx0)` with `ω`, `γ` the Perron vectors of `W` and `A`.
pub fn kron_equilibrium(w: &Matrix, a: &Matrix, x0: &Vector) -> Result<Vector> {
    w.require_square()?;
    a.require_square()?;
    let dim = w.rows() * a.rows();
    if x0.len() != dim {
        return Err(Error::DimensionMismatch {
            context: "initial state".into(),
            expected: dim,
            found: x0.len(),
        });
    }
    let mass = require_mass(x0)?;
    let omega = power_iteration(w, LIMIT_TOL, POWER_MAX_ITER)?.eigenvector;
    let gamma = power_iteration(a, LIMIT_TOL, POWER_MAX_ITER)?.eigenvector;
    Ok(omega.kron(&gamma).scaled(mass))
}

fn require_mass(x0: &Vector) -> Result<f64> {
    if x0.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidOptions("initial state must be nonnegative"));
    }
    let mass = x0.sum();
    if mass == 0.0 {
        return Err(Error::InvalidOptions("initial state must be nonzero"));
    }
    Ok(mass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquilibriumMethod {
    Direct,
    Iterative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub x_star: Vector,
    pub method: EquilibriumMethod,
    pub spectral_radius_estimate: f64,
    pub nonnegative: bool,
    /// `‖(I − Ā)·x* − y‖∞`.
    pub residual: f64,
    /// Update steps taken; zero for the direct solve.
    pub steps: usize,
}

/// Dominant eigenpair of a nonnegative matrix. Falls back to the shifted
/// matrix `M + I`, which has the same Perron vector and no periodicity, when
/// plain power iteration does not settle.
pub fn dominant_eigenpair(m: &Matrix) -> Result<SpectralResult> {
    match power_iteration(m, POWER_TOL, POWER_MAX_ITER) {
        Err(Error::NoConvergence { .. }) => {
            let shifted = m.axpby(1.0, &Matrix::identity(m.rows()), 1.0);
            let mut r = power_iteration(&shifted, POWER_TOL, POWER_MAX_ITER)?;
            r.eigenvalue -= 1.0;
            Ok(r)
        }
        other => other,
    }
}

pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    Ok(dominant_eigenpair(m)?.eigenvalue)
}

/// Open-model equilibrium `x* = (I − Ā)⁻¹·y`, either by a direct solve or by
/// running the update from `x[0] = 0`. Refuses systems whose spectral radius
/// is not below one.
pub fn open_equilibrium(
    sys: &LiftedSystem,
    method: EquilibriumMethod,
    opts: &SimulationOptions,
) -> Result<EquilibriumResult> {
    opts.check()?;
    let rho = spectral_radius(&sys.a_bar)?;
    if rho >= 1.0 - SPECTRAL_MARGIN {
        return Err(Error::SpectralRadiusNotLessThanOne(rho));
    }
    let (x_star, steps) = match method {
        EquilibriumMethod::Direct => (solve_linear(&sys.a_bar.identity_minus()?, &sys.y)?, 0),
        EquilibriumMethod::Iterative => {
            let mut x = Vector::zeros(sys.dim());
            let mut delta = f64::INFINITY;
            let mut steps = 0;
            while steps < opts.max_steps {
                let next = step(sys, &x)?;
                delta = next.dist_inf(&x);
                x = next;
                steps += 1;
                if delta <= opts.convergence_tol {
                    break;
                }
            }
            if delta > opts.convergence_tol {
                return Err(Error::NoConvergence {
                    iterations: steps,
                    residual: delta,
                });
            }
            (x, steps)
        }
    };
    let residual = fixed_point_residual(sys, &x_star)?;
    Ok(EquilibriumResult {
        nonnegative: x_star.iter().all(|&v| v >= -NONNEGATIVE_TOL),
        x_star,
        method,
        spectral_radius_estimate: rho,
        residual,
        steps,
    })
}

/// `‖x − Ā·x − y‖∞`.
pub fn fixed_point_residual(sys: &LiftedSystem, x: &Vector) -> Result<f64> {
    Ok(step(sys, x)?.dist_inf(x))
}

/// Split of one agent's next state by interaction type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerContribution {
    /// `w_ii·A_ii·x_i`: the agent's own input-output coupling.
    pub interlayer: Vector,
    /// Same-industry imports, `Σ_{j≠i} w_ij·a^{p,p}_{ij}·x_{j,p}`.
    pub intralayer: Vector,
    /// Cross-industry imports, `Σ_{j≠i} Σ_{q≠p} w_ij·a^{p,q}_{ij}·x_{j,q}`.
    pub crosslayer: Vector,
    pub demand: Vector,
}

impl LayerContribution {
    pub fn total(&self) -> Vector {
        let v = (0..self.demand.len())
            .map(|p| self.interlayer[p] + self.intralayer[p] + self.crosslayer[p] + self.demand[p])
            .collect();
        Vector::new(v).expect("sum of finite parts")
    }
}

pub fn layer_decomposition(
    net: &EconomyNetwork,
    agent: usize,
    x: &[f64],
) -> Result<LayerContribution> {
    if agent >= net.agents() {
        return Err(Error::DimensionMismatch {
            context: "agent index".into(),
            expected: net.agents(),
            found: agent + 1,
        });
    }
    if x.len() != net.dim() {
        return Err(Error::DimensionMismatch {
            context: "state".into(),
            expected: net.dim(),
            found: x.len(),
        });
    }
    let d = net.industries();
    let mut inter = vec![0.0; d];
    let mut intra = vec![0.0; d];
    let mut cross = vec![0.0; d];
    for e in net.edges().iter().filter(|e| e.importer == agent) {
        let xj = &x[e.supplier * d..(e.supplier + 1) * d];
        for p in 0..d {
            for q in 0..d {
                let term = e.weight * e.matrix[(p, q)] * xj[q];
                if e.supplier == agent {
                    inter[p] += term;
                } else if p == q {
                    intra[p] += term;
                } else {
                    cross[p] += term;
                }
            }
        }
    }
    let demand = net.demand()[agent * d..(agent + 1) * d].to_vec();
    Ok(LayerContribution {
        interlayer: Vector::new(inter)?,
        intralayer: Vector::new(intra)?,
        crosslayer: Vector::new(cross)?,
        demand: Vector::new(demand)?,
    })
}
