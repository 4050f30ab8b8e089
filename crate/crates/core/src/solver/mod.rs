//! Critical points of the discrete energy.
//!
//! [`mountain_pass_solve`] deforms a discrete path from `0` to a far point
//! `e` with `I(e) < 0`, lowering the path maximum until it sits on a critical
//! point. [`convex_solve`] minimizes the strictly convex energy of a forced
//! problem and serves as a manufactured-solution oracle.

mod convex;
mod geometry;
mod mountain_pass;
mod precond;
mod ps;

use serde::{Deserialize, Serialize};

use crate::energy::EnergyBreakdown;
use crate::error::{Error, Result};
use crate::fracops::DirichletFunction;

pub use convex::convex_solve;
pub use geometry::{estimate_geometry, GeometryEstimate};
pub use mountain_pass::{mountain_pass_solve, nehari_scale};
pub use ps::{ps_diagnostic, PsDiagnostic};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// Stopping tolerance on the dual gradient norm.
    pub tol_grad: f64,
    pub max_iters: usize,
    /// Number of path segments `K`.
    pub path_points: usize,
    pub step_init: f64,
    pub armijo_c: f64,
    pub backtrack_factor: f64,
    pub seed: u64,
    /// Regularization of `|z|^(p-2)` for `p < 2`.
    pub eps_reg: f64,
    /// Amplitude of seeded perturbations of the initial path, relative to the
    /// sup norm of `e`.
    pub init_jitter: f64,
    /// Extra seeded random starts in convex mode.
    pub multistart: usize,
    /// Largest accepted max/median ratio of the iterate norm history.
    pub ps_ratio_cap: f64,
    /// Overrides the initial sine direction; nodal values on the solve grid.
    #[serde(skip)]
    pub initial_direction: Option<Vec<f64>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_grad: 1e-6,
            max_iters: 500,
            path_points: 16,
            step_init: 1.0,
            armijo_c: 1e-4,
            backtrack_factor: 0.5,
            seed: 0,
            eps_reg: 1e-10,
            init_jitter: 0.0,
            multistart: 0,
            ps_ratio_cap: 10.0,
            initial_direction: None,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidOptions(m.into()));
        if !(self.tol_grad > 0.0 && self.tol_grad.is_finite()) {
            return bad("tol_grad must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if self.path_points < 8 {
            return bad("path_points must be at least 8");
        }
        if !(self.step_init > 0.0 && self.step_init.is_finite()) {
            return bad("step_init must be positive");
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return bad("armijo_c must lie in (0, 1)");
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return bad("backtrack_factor must lie in (0, 1)");
        }
        if !(self.eps_reg >= 0.0 && self.eps_reg.is_finite()) {
            return bad("eps_reg must be nonnegative");
        }
        if !(self.init_jitter >= 0.0 && self.init_jitter.is_finite()) {
            return bad("init_jitter must be nonnegative");
        }
        if !(self.ps_ratio_cap >= 1.0) {
            return bad("ps_ratio_cap must be at least 1");
        }
        Ok(())
    }
}

/// Energy differences below this are rounding noise; the Armijo test
/// tolerates them so that descent can continue once the sufficient-decrease
/// term drops under machine precision.
pub(crate) fn rounding_slack(b: &EnergyBreakdown) -> f64 {
    8.0 * f64::EPSILON * (b.j.abs() + b.h.abs())
}

/// Result of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub u_star: DirichletFunction,
    pub energy_value: f64,
    pub breakdown: EnergyBreakdown,
    pub grad_norm: f64,
    pub iterations: usize,
    /// Energy along the final path (mountain-pass mode only).
    pub path_profile: Vec<f64>,
    pub geometry: Option<GeometryEstimate>,
    /// Seminorm of the iterate at each iteration.
    pub iterate_norm_history: Vec<f64>,
    pub converged: bool,
    /// Largest seminorm distance between multi-start solutions (convex mode).
    pub multistart_spread: Option<f64>,
}
