//! Discrete energy `I = J - H`, its exact gradient and the weak residual.
//!
//! `J(u) = (1/p) sum_n h |D_n u|^p` uses the staggered Caputo derivative of
//! [`MidpointDerivative`]; `H(u) = sum_i w_i F(t_i, u_i)` uses trapezoid
//! weights. The gradient is the gradient of this discrete objective with
//! respect to the interior node values.

use crate::error::{Error, Result};
use crate::fracops::{DirichletFunction, Grid, GridFunction, MidpointDerivative};
use crate::model::{NodalNonlinearity, Nonlinearity};
use crate::space::FracParams;

/// Default regularization for `p < 2`.
pub const DEFAULT_EPS_REG: f64 = 1e-10;

/// A fully specified discrete problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub params: FracParams,
    pub nonlinearity: Nonlinearity,
    pub grid: Grid,
}

impl Problem {
    pub fn new(params: FracParams, nonlinearity: Nonlinearity, grid: Grid) -> Result<Self> {
        if (grid.length() - params.length()).abs() > 1e-12 * params.length() {
            return Err(Error::InvalidGrid(format!(
                "grid length {} differs from T = {}",
                grid.length(),
                params.length()
            )));
        }
        nonlinearity.validate(if nonlinearity.is_forcing_mode() {
            None
        } else {
            Some(&params)
        })?;
        Ok(Self {
            params,
            nonlinearity,
            grid,
        })
    }

    /// Problem on a uniform grid with `intervals` cells over `[0, T]`.
    pub fn uniform(params: FracParams, nonlinearity: Nonlinearity, intervals: usize) -> Result<Self> {
        let grid = Grid::new(params.length(), intervals)?;
        Self::new(params, nonlinearity, grid)
    }
}

/// `I = J - H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub j: f64,
    pub h: f64,
    pub i: f64,
}

impl EnergyBreakdown {
    fn new(j: f64, h: f64) -> Self {
        Self { j, h, i: j - h }
    }
}

/// Precomputed evaluator for one [`Problem`].
#[derive(Debug, Clone)]
pub struct EnergyFunctional {
    problem: Problem,
    op: MidpointDerivative,
    nodal: NodalNonlinearity,
    weights: Vec<f64>,
    eps_reg: f64,
}

impl EnergyFunctional {
    pub fn new(problem: &Problem) -> Self {
        Self::with_regularization(problem, DEFAULT_EPS_REG)
    }

    /// `eps_reg` only affects `p < 2`.
    pub fn with_regularization(problem: &Problem, eps_reg: f64) -> Self {
        Self {
            op: MidpointDerivative::new(problem.grid, problem.params.order()),
            nodal: problem.nonlinearity.on_grid(&problem.grid),
            weights: problem.grid.trapezoid_weights(),
            problem: problem.clone(),
            eps_reg: eps_reg.abs(),
        }
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn grid(&self) -> Grid {
        self.problem.grid
    }

    pub fn p(&self) -> f64 {
        self.problem.params.p()
    }

    pub fn derivative(&self) -> &MidpointDerivative {
        &self.op
    }

    pub fn quadrature_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nodal(&self) -> &NodalNonlinearity {
        &self.nodal
    }

    pub(crate) fn eps_reg(&self) -> f64 {
        if self.regularized() { self.eps_reg } else { 0.0 }
    }

    fn regularized(&self) -> bool {
        self.p() < 2.0 && self.eps_reg > 0.0
    }

    /// `phi(z)` with `phi' = |z|^(p-2) z` (regularized for `p < 2`).
    fn phi(&self, z: f64) -> f64 {
        let p = self.p();
        if self.regularized() {
            let e2 = self.eps_reg * self.eps_reg;
            ((z * z + e2).powf(0.5 * p) - e2.powf(0.5 * p)) / p
        } else {
            z.abs().powf(p) / p
        }
    }

    fn dphi(&self, z: f64) -> f64 {
        let p = self.p();
        if self.regularized() {
            (z * z + self.eps_reg * self.eps_reg).powf(0.5 * (p - 2.0)) * z
        } else if p == 2.0 {
            z
        } else if z == 0.0 {
            0.0
        } else {
            z.abs().powf(p - 2.0) * z
        }
    }

    /// Cell values of the discrete derivative.
    pub fn derivative_cells(&self, u: &[f64]) -> Vec<f64> {
        self.op.apply(u)
    }

    /// `J` from precomputed derivative cells.
    pub fn j_from_cells(&self, cells: &[f64]) -> f64 {
        let h = self.grid().step();
        cells.iter().map(|&z| h * self.phi(z)).sum()
    }

    pub fn j_value(&self, u: &[f64]) -> f64 {
        self.j_from_cells(&self.op.apply(u))
    }

    pub fn h_value(&self, u: &[f64]) -> f64 {
        u.iter()
            .enumerate()
            .map(|(i, &x)| self.weights[i] * self.nodal.big_f(i, x))
            .sum()
    }

    /// Energy of raw nodal values (length `N + 1`; endpoints should be 0).
    pub fn breakdown_values(&self, u: &[f64]) -> EnergyBreakdown {
        EnergyBreakdown::new(self.j_value(u), self.h_value(u))
    }

    pub fn energy_values(&self, u: &[f64]) -> f64 {
        self.breakdown_values(u).i
    }

    pub fn breakdown(&self, u: &DirichletFunction) -> EnergyBreakdown {
        self.breakdown_values(u.values())
    }

    pub fn energy(&self, u: &DirichletFunction) -> f64 {
        self.energy_values(u.values())
    }

    /// Gradient of `J` (endpoint components zero).
    pub fn gradient_j(&self, u: &[f64]) -> Vec<f64> {
        let h = self.grid().step();
        let w: Vec<f64> = self.op.apply(u).iter().map(|&z| h * self.dphi(z)).collect();
        let mut g = self.op.apply_transpose(&w);
        clamp_ends(&mut g);
        g
    }

    /// Gradient of `H` (endpoint components zero).
    pub fn gradient_h(&self, u: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = u
            .iter()
            .enumerate()
            .map(|(i, &x)| self.weights[i] * self.nodal.f(i, x))
            .collect();
        clamp_ends(&mut g);
        g
    }

    /// Gradient of `I` with respect to the node values; endpoint components
    /// are zero.
    pub fn gradient_values(&self, u: &[f64]) -> Vec<f64> {
        self.energy_and_gradient_values(u).1
    }

    pub fn energy_and_gradient_values(&self, u: &[f64]) -> (EnergyBreakdown, Vec<f64>) {
        let h = self.grid().step();
        let cells = self.op.apply(u);
        let j = self.j_from_cells(&cells);
        let w: Vec<f64> = cells.iter().map(|&z| h * self.dphi(z)).collect();
        let mut g = self.op.apply_transpose(&w);
        let mut big_h = 0.0;
        for (i, (gi, &x)) in g.iter_mut().zip(u).enumerate() {
            big_h += self.weights[i] * self.nodal.big_f(i, x);
            *gi -= self.weights[i] * self.nodal.f(i, x);
        }
        clamp_ends(&mut g);
        (EnergyBreakdown::new(j, big_h), g)
    }

    pub fn gradient(&self, u: &DirichletFunction) -> GridFunction {
        let g = self.gradient_values(u.values());
        GridFunction::new(self.grid(), g).expect("gradient has grid length")
    }

    /// Discrete dual norm `sqrt(sum g_i^2 / w_i)` over interior nodes: the
    /// `L^2` norm of the residual function whose weighted pairing is `g`.
    pub fn dual_norm(&self, g: &[f64]) -> f64 {
        let n = g.len() - 1;
        g[1..n]
            .iter()
            .zip(&self.weights[1..n])
            .map(|(gi, wi)| gi * gi / wi)
            .sum::<f64>()
            .sqrt()
    }

    pub fn grad_norm(&self, u: &DirichletFunction) -> f64 {
        self.dual_norm(&self.gradient_values(u.values()))
    }

    /// `int |D u|^(p-2) D u D phi - int f(t, u) phi`, evaluated with the same
    /// quadratures as the energy.
    pub fn weak_residual(&self, u: &DirichletFunction, phi: &DirichletFunction) -> f64 {
        let h = self.grid().step();
        let du = self.op.apply(u.values());
        let dphi = self.op.apply(phi.values());
        let lhs: f64 = du.iter().zip(&dphi).map(|(&a, &b)| h * self.dphi(a) * b).sum();
        let rhs: f64 = u
            .values()
            .iter()
            .zip(phi.values())
            .enumerate()
            .map(|(i, (&x, &v))| self.weights[i] * self.nodal.f(i, x) * v)
            .sum();
        lhs - rhs
    }
}

fn clamp_ends(g: &mut [f64]) {
    let n = g.len() - 1;
    g[0] = 0.0;
    g[n] = 0.0;
}

fn functional(u: &DirichletFunction, params: &FracParams, nl: &Nonlinearity) -> Result<EnergyFunctional> {
    let problem = Problem::new(*params, nl.clone(), u.grid())?;
    Ok(EnergyFunctional::new(&problem))
}

pub fn energy(u: &DirichletFunction, params: &FracParams, nl: &Nonlinearity) -> Result<EnergyBreakdown> {
    Ok(functional(u, params, nl)?.breakdown(u))
}

pub fn gradient(u: &DirichletFunction, params: &FracParams, nl: &Nonlinearity) -> Result<GridFunction> {
    Ok(functional(u, params, nl)?.gradient(u))
}

pub fn weak_residual(
    u: &DirichletFunction,
    phi: &DirichletFunction,
    params: &FracParams,
    nl: &Nonlinearity,
) -> Result<f64> {
    Ok(functional(u, params, nl)?.weak_residual(u, phi))
}

/// `|z|^(p-2) z`.
pub fn duality_map(z: f64, p: f64) -> f64 {
    if z == 0.0 {
        0.0
    } else {
        z.abs().powf(p - 2.0) * z
    }
}

/// Frozen constants of the scalar inequalities behind the continuity and
/// monotonicity estimates for `phi(z) = |z|^(p-2) z`.
pub mod inequalities {
    use super::duality_map;

    /// `|phi(z) - phi(y)| <= beta |z - y| (|z| + |y|)^(p-2)` for `p >= 2`.
    pub fn holder_beta_large_p(p: f64) -> f64 {
        p - 1.0
    }

    /// `|phi(z) - phi(y)| <= beta |z - y|^(p-1)` for `1 < p <= 2`.
    pub fn holder_beta_small_p(p: f64) -> f64 {
        2f64.powf(2.0 - p)
    }

    /// `(phi(z) - phi(y))(z - y) >= C |z - y|^p` for `p >= 2`.
    pub fn monotonicity_large_p(p: f64) -> f64 {
        2f64.powf(2.0 - p)
    }

    /// `(phi(z) - phi(y))(z - y) >= C |z - y|^2 / (|z| + |y|)^(2-p)` for
    /// `1 < p < 2`; sharp as `z -> y`.
    pub fn monotonicity_small_p(p: f64) -> f64 {
        (p - 1.0) * 2f64.powf(2.0 - p)
    }

    /// Slack `rhs - lhs` of the applicable continuity inequality.
    pub fn continuity_slack(z: f64, y: f64, p: f64) -> f64 {
        let lhs = (duality_map(z, p) - duality_map(y, p)).abs();
        let d = (z - y).abs();
        let rhs = if p >= 2.0 {
            holder_beta_large_p(p) * d * (z.abs() + y.abs()).powf(p - 2.0)
        } else {
            holder_beta_small_p(p) * d.powf(p - 1.0)
        };
        rhs - lhs
    }

    /// Slack `lhs - rhs` of the applicable monotonicity inequality.
    pub fn monotonicity_slack(z: f64, y: f64, p: f64) -> f64 {
        let lhs = (duality_map(z, p) - duality_map(y, p)) * (z - y);
        let d = (z - y).abs();
        let rhs = if p >= 2.0 {
            monotonicity_large_p(p) * d.powf(p)
        } else if d == 0.0 {
            0.0
        } else {
            monotonicity_small_p(p) * d * d / (z.abs() + y.abs()).powf(2.0 - p)
        };
        lhs - rhs
    }

    /// Relative scale for slack comparisons.
    pub fn scale(z: f64, y: f64, p: f64) -> f64 {
        (z.abs() + y.abs()).powf(p - 1.0) * (1.0 + (z - y).abs()) + f64::MIN_POSITIVE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Profile;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn functional(alpha: f64, p: f64, nl: Nonlinearity, n: usize) -> EnergyFunctional {
        let params = FracParams::new(alpha, p, 1.0).unwrap();
        EnergyFunctional::new(&Problem::uniform(params, nl, n).unwrap())
    }

    fn zero_load() -> Nonlinearity {
        Nonlinearity::forcing_only(Profile::constant(0.0))
    }

    fn random_dirichlet(rng: &mut ChaCha8Rng, grid: Grid) -> DirichletFunction {
        let coeffs: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        DirichletFunction::from_fn(grid, |t| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * ((k + 1) as f64 * PI * t).sin())
                .sum()
        })
        .unwrap()
    }

    #[test]
    fn zero_state() {
        let e = functional(0.8, 2.0, Nonlinearity::default(), 64);
        let u = DirichletFunction::zeros(e.grid());
        assert_eq!(e.breakdown(&u), EnergyBreakdown { j: 0.0, h: 0.0, i: 0.0 });
        assert!(e.gradient(&u).values().iter().all(|&g| g == 0.0));
        let phi = DirichletFunction::from_fn(e.grid(), |t| (PI * t).sin()).unwrap();
        assert_eq!(e.weak_residual(&u, &phi), 0.0);
        assert_eq!(e.weak_residual(&phi, &DirichletFunction::zeros(e.grid())), 0.0);
    }

    #[test]
    fn classical_sine_energy() {
        let e = functional(1.0, 2.0, zero_load(), 2048);
        let u = DirichletFunction::from_fn(e.grid(), |t| (PI * t).sin()).unwrap();
        let b = e.breakdown(&u);
        assert!((b.j - PI * PI / 4.0).abs() < 1e-5);
        assert_eq!(b.h, 0.0);
    }

    #[test]
    fn homogeneity_of_j() {
        let e = functional(0.7, 3.0, Nonlinearity::power(4.0, 1.0), 128);
        let u = DirichletFunction::from_fn(e.grid(), |t| t * (1.0 - t)).unwrap();
        let base = e.breakdown(&u);
        for &c in &[-2.0, 0.5, 3.0] {
            let scaled = e.breakdown(&u.scaled(c));
            assert!((scaled.j - c.abs().powf(3.0) * base.j).abs() < 1e-12 * scaled.j);
            assert!((scaled.h - c.abs().powf(4.0) * base.h).abs() < 1e-12 * scaled.h);
        }
    }

    #[test]
    fn finite_difference_directional_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &alpha in &[0.6, 0.8, 1.0] {
            for &p in &[1.5, 2.0, 3.0] {
                let e = functional(alpha, p, Nonlinearity::power(p + 2.0, 1.0), 64);
                for _ in 0..10 {
                    let u = random_dirichlet(&mut rng, e.grid());
                    let v = random_dirichlet(&mut rng, e.grid());
                    let g = e.gradient(&u);
                    let exact: f64 = g.values().iter().zip(v.values()).map(|(a, b)| a * b).sum();
                    let step = 1e-6;
                    let fd = (e.energy(&u.combine(1.0, &v, step)) - e.energy(&u.combine(1.0, &v, -step)))
                        / (2.0 * step);
                    assert!(
                        (fd - exact).abs() <= 1e-5 * (1.0 + exact.abs()),
                        "alpha {alpha} p {p}: {fd} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn euler_identity() {
        let nl = Nonlinearity {
            weight: Profile::Samples {
                values: vec![1.0, 2.0, 1.5],
            },
            ..Nonlinearity::power(4.5, 1.0)
        };
        for &p in &[2.0, 3.0] {
            let e = functional(0.75, p, nl.clone(), 200);
            let u = DirichletFunction::from_fn(e.grid(), |t| t * (1.0 - t) * (1.0 + t)).unwrap();
            let (b, g) = e.energy_and_gradient_values(u.values());
            let pairing: f64 = g.iter().zip(u.values()).map(|(a, b)| a * b).sum();
            let load: f64 = e.gradient_h(u.values()).iter().zip(u.values()).map(|(a, b)| a * b).sum();
            assert!((pairing - (p * b.j - load)).abs() < 1e-12 * (1.0 + b.j));
        }
    }

    #[test]
    fn weak_residual_is_gradient_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let e = functional(0.8, 2.5, Nonlinearity::power(4.0, 2.0), 96);
        for _ in 0..5 {
            let u = random_dirichlet(&mut rng, e.grid());
            let phi = random_dirichlet(&mut rng, e.grid());
            let g = e.gradient(&u);
            let pairing: f64 = g.values().iter().zip(phi.values()).map(|(a, b)| a * b).sum();
            assert!((e.weak_residual(&u, &phi) - pairing).abs() < 1e-12 * (1.0 + pairing.abs()));
        }
    }

    #[test]
    fn classical_linear_system_solution_has_zero_gradient() {
        // -u'' = g with g = pi^2 sin(pi t): solve the discrete system directly
        let n = 64;
        let g = Profile::Sine { amplitude: PI * PI, mode: 1 };
        let e = functional(1.0, 2.0, Nonlinearity::forcing_only(g.clone()), n);
        let h = e.grid().step();
        let rhs: Vec<f64> = (1..n).map(|i| h * g.eval(i as f64 * h, 1.0)).collect();
        // tridiagonal (2, -1) / h, Thomas algorithm
        let m = n - 1;
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        let (a_diag, off) = (2.0 / h, -1.0 / h);
        c[0] = off / a_diag;
        d[0] = rhs[0] / a_diag;
        for i in 1..m {
            let denom = a_diag - off * c[i - 1];
            c[i] = off / denom;
            d[i] = (rhs[i] - off * d[i - 1]) / denom;
        }
        let mut x = vec![0.0; m];
        x[m - 1] = d[m - 1];
        for i in (0..m - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        let mut u = vec![0.0];
        u.extend(x);
        u.push(0.0);
        let grad = e.gradient_values(&u);
        assert!(grad.iter().all(|g| g.abs() < 1e-12));
    }

    #[test]
    fn dual_norm_is_l2_of_residual_density() {
        let e = functional(0.9, 2.0, Nonlinearity::default(), 100);
        let w = e.quadrature_weights().to_vec();
        let density: Vec<f64> = (0..w.len()).map(|i| (PI * i as f64 / 100.0).sin()).collect();
        let g: Vec<f64> = density.iter().zip(&w).map(|(r, w)| r * w).collect();
        assert!((e.dual_norm(&g) - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn regularized_p_below_two_matches_unregularized_away_from_zero() {
        let e = functional(0.8, 1.5, Nonlinearity::power(3.0, 1.0), 64);
        let u = DirichletFunction::from_fn(e.grid(), |t| (PI * t).sin()).unwrap();
        let plain = EnergyFunctional::with_regularization(e.problem(), 0.0);
        assert!((e.energy(&u) - plain.energy(&u)).abs() < 1e-12);
    }

    #[test]
    fn scalar_inequalities_hold_on_samples() {
        use inequalities::*;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &p in &[1.1, 1.5, 1.9, 2.0, 2.5, 3.0, 5.0] {
            for _ in 0..2000 {
                let z: f64 = rng.random_range(-10.0..10.0);
                let y: f64 = rng.random_range(-10.0..10.0);
                let s = scale(z, y, p);
                assert!(continuity_slack(z, y, p) >= -1e-12 * s, "p {p} z {z} y {y}");
                assert!(monotonicity_slack(z, y, p) >= -1e-12 * s, "p {p} z {z} y {y}");
            }
        }
    }

    #[test]
    fn small_p_monotonicity_constant_is_sharp() {
        use inequalities::*;
        let p = 1.5;
        let (z, y) = (1.0, 1.0 + 1e-6);
        let lhs = (duality_map(z, p) - duality_map(y, p)) * (z - y);
        let ratio = lhs * (z.abs() + y.abs()).powf(2.0 - p) / (z - y).powi(2);
        assert!((ratio - monotonicity_small_p(p)).abs() < 1e-5);
    }
}
