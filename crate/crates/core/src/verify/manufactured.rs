//! Discrete manufactured solutions for the forced (convex) problem.

use crate::energy::{EnergyFunctional, Problem};
use crate::error::{Error, Result};
use crate::fracops::{DirichletFunction, Grid};
use crate::model::{Nonlinearity, Profile};
use crate::space::FracParams;

/// Load `g` for which `u_bar` solves the forced problem, computed as the
/// discrete `J`-gradient of `u_bar` on a grid with `fine` cells divided by
/// the quadrature weights. Endpoint samples are extrapolated linearly.
///
/// Coarser grids whose cell count divides `fine` see `g` at exactly the
/// fine nodes.
pub fn manufactured_forcing(
    params: &FracParams,
    u_bar: impl Fn(f64) -> f64,
    fine: usize,
) -> Result<Profile> {
    let grid = Grid::new(params.length(), fine)?;
    let target = DirichletFunction::from_fn(grid, u_bar)?;
    let problem = Problem::new(
        *params,
        Nonlinearity::forcing_only(Profile::constant(0.0)),
        grid,
    )?;
    let energy = EnergyFunctional::new(&problem);
    let grad = energy.gradient_j(target.values());
    let weights = energy.quadrature_weights();
    let mut values: Vec<f64> = grad.iter().zip(weights).map(|(g, w)| g / w).collect();
    let n = values.len() - 1;
    values[0] = 2.0 * values[1] - values[2];
    values[n] = 2.0 * values[n - 1] - values[n - 2];
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(0));
    }
    Ok(Profile::Samples { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn classical_sine_load() {
        let params = FracParams::new(1.0, 2.0, 1.0).unwrap();
        let g = manufactured_forcing(&params, |t| (PI * t).sin(), 2048).unwrap();
        for &t in &[0.1, 0.5, 0.8] {
            let expected = PI * PI * (PI * t).sin();
            assert!((g.eval(t, 1.0) - expected).abs() < 1e-4, "{t}");
        }
    }
}
