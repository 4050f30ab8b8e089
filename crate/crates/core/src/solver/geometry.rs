use std::f64::consts::PI;

use crate::energy::{EnergyFunctional, Problem};
use crate::error::{Error, Result};
use crate::fracops::DirichletFunction;
use crate::space::{lq_embedding_constant, DiscreteSpace};

use super::SolverOptions;

const MAX_DOUBLINGS: i32 = 60;

/// Mountain-pass geometry: `I >= beta` on the sphere of radius `rho` and a
/// far point `e` with `I(e) < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryEstimate {
    pub rho: f64,
    pub beta: f64,
    /// Far point `e = sigma u0`.
    pub e: DirichletFunction,
    /// Unit-seminorm direction.
    pub u0: DirichletFunction,
    pub sigma: f64,
    /// `C` in `I(u) >= |u|^p (1/p - C |u|^(q-p))`.
    pub constant: f64,
    pub energy_e: f64,
}

/// Rejects parameter pairs where the geometry constants degenerate.
pub(crate) fn check_degenerate(problem: &Problem) -> Result<()> {
    let params = &problem.params;
    params.require_window()?;
    if params.alpha() - 1.0 / params.p() < 1e-6 {
        return Err(Error::Geometry(format!(
            "alpha = {} is within 1e-6 of 1/p",
            params.alpha()
        )));
    }
    if problem.nonlinearity.is_forcing_mode() {
        return Err(Error::Geometry("mountain-pass mode needs a pure power nonlinearity".into()));
    }
    if problem.nonlinearity.q - params.p() < 1e-3 {
        return Err(Error::Geometry(format!(
            "q - p = {} is below 1e-3",
            problem.nonlinearity.q - params.p()
        )));
    }
    Ok(())
}

pub fn estimate_geometry(problem: &Problem, opts: &SolverOptions) -> Result<GeometryEstimate> {
    opts.validate()?;
    check_degenerate(problem)?;
    let params = &problem.params;
    let nl = &problem.nonlinearity;
    let (p, q) = (params.p(), nl.q);
    let (_, a_max) = nl.weight_bounds();
    let constant = a_max * lq_embedding_constant(params, q)? / q;
    let rho = (1.0 / (4.0 * p * constant)).powf(1.0 / (q - p));
    let beta = rho.powf(p) / (4.0 * p);

    let space = DiscreteSpace::new(*params, problem.grid)?;
    let length = params.length();
    let direction = match &opts.initial_direction {
        Some(v) => DirichletFunction::clamped(problem.grid, v.clone())?,
        None => DirichletFunction::from_fn(problem.grid, |t| (PI * t / length).sin())?,
    };
    let norm = space.seminorm(&direction);
    if norm <= 0.0 {
        return Err(Error::Geometry("initial direction has zero seminorm".into()));
    }
    let u0 = direction.scaled(1.0 / norm);

    let energy = EnergyFunctional::with_regularization(problem, opts.eps_reg);
    let mut sigma = 1.0f64;
    for _ in 0..=MAX_DOUBLINGS {
        let e = u0.scaled(sigma);
        let value = energy.energy(&e);
        if value < 0.0 && space.seminorm(&e) >= rho {
            return Ok(GeometryEstimate {
                rho,
                beta,
                e,
                u0,
                sigma,
                constant,
                energy_e: value,
            });
        }
        sigma *= 2.0;
    }
    Err(Error::Geometry(format!(
        "no sigma up to 2^{MAX_DOUBLINGS} gives negative energy"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Nonlinearity;
    use crate::space::FracParams;

    fn problem(alpha: f64, p: f64, nl: Nonlinearity) -> Problem {
        Problem::uniform(FracParams::new(alpha, p, 1.0).unwrap(), nl, 128).unwrap()
    }

    #[test]
    fn basic_contract() {
        for &(alpha, p, q) in &[(0.8, 2.0, 4.0), (1.0, 2.0, 4.0), (0.75, 3.0, 5.0)] {
            let pr = problem(alpha, p, Nonlinearity::power(q, 1.0));
            let g = estimate_geometry(&pr, &SolverOptions::default()).unwrap();
            assert!(g.rho > 0.0 && g.beta > 0.0);
            assert!(g.energy_e < 0.0);
            let space = DiscreteSpace::new(pr.params, pr.grid).unwrap();
            assert!(space.seminorm(&g.e) >= g.rho);
            assert!((space.seminorm(&g.u0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stronger_weight_shrinks_rho_and_beta() {
        let opts = SolverOptions::default();
        let g1 = estimate_geometry(&problem(0.8, 2.0, Nonlinearity::power(4.0, 1.0)), &opts).unwrap();
        let nl = Nonlinearity {
            c_growth: 1e6,
            ..Nonlinearity::power(4.0, 1e6)
        };
        let g2 = estimate_geometry(&problem(0.8, 2.0, nl), &opts).unwrap();
        assert!(g2.rho < g1.rho && g2.beta < g1.beta);
        assert!(g2.rho > 0.0 && g2.beta > 0.0);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let opts = SolverOptions::default();
        let near = problem(0.6, 2.0, Nonlinearity::power(2.0005, 1.0));
        assert!(matches!(estimate_geometry(&near, &opts), Err(Error::Geometry(_))));
        let below_window = problem(0.4, 2.0, Nonlinearity::power(4.0, 1.0));
        assert!(estimate_geometry(&below_window, &opts).is_err());
    }
}
