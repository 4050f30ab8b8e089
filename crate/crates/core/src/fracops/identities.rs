//! Residuals of the classical fractional-calculus identities on a grid.
//! Each must shrink under refinement.

use crate::error::{Error, Result};

use super::grid::{DirichletFunction, GridFunction};
use super::operators::{caputo_right, frac_deriv_left, frac_integral_left};
use super::weights::FracOrder;

/// Sup-norm of `0 D^a (0 I^a u) - u` over interior nodes.
///
/// The constant part `u(0)` is carried analytically: `I^a` of a constant is
/// reproduced exactly by the product rule and `D^a (c t^a / Gamma(1+a)) = c`,
/// so only `u - u(0)` (which vanishes at the base point) goes through the
/// discrete derivative.
pub fn check_left_inverse(u: &GridFunction, order: FracOrder) -> Result<f64> {
    let base = u.first();
    let shifted = u.map(|v| v - base);
    let integral = frac_integral_left(&shifted, order)?;
    let recovered = frac_deriv_left(&integral, order)?.map(|v| v + base);
    Ok(recovered.interior_sup_distance(u))
}

/// Sup-norm of `I^a (I^b u) - I^(a+b) u`; requires `a + b <= 1`.
pub fn check_semigroup(u: &GridFunction, a: FracOrder, b: FracOrder) -> Result<f64> {
    let sum = FracOrder::new(a.value() + b.value())?;
    let nested = frac_integral_left(&frac_integral_left(u, b)?, a)?;
    let direct = frac_integral_left(u, sum)?;
    Ok(nested
        .values()
        .iter()
        .zip(direct.values())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}

/// `|int (0 D^a u) v dt - int u (t D_T^a v) dt|` for Dirichlet `u`.
///
/// The right Riemann-Liouville derivative of `v` is its Caputo derivative
/// plus `v(T) (T - t)^(-a) / Gamma(1 - a)`; paired with `u` the singular term
/// integrates to `v(T) * (0 I^(1-a) u)(T)`, which the product rule evaluates
/// without sampling the singularity.
pub fn check_integration_by_parts(
    u: &DirichletFunction,
    v: &GridFunction,
    order: FracOrder,
) -> Result<f64> {
    if u.grid() != v.grid() {
        return Err(Error::InvalidGrid("u and v live on different grids".into()));
    }
    let du = frac_deriv_left(u, order)?;
    let lhs = du.product(v).integral();

    let mut rhs = u.product(&caputo_right(v, order)).integral();
    if !order.is_integer() && v.last() != 0.0 {
        let complement = FracOrder::new(1.0 - order.value())?;
        rhs += v.last() * frac_integral_left(u, complement)?.last();
    }
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::Grid;
    use std::f64::consts::PI;

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn zero_inputs_give_zero_residuals() {
        let g = Grid::new(1.0, 32).unwrap();
        let z = GridFunction::zeros(g);
        assert_eq!(check_left_inverse(&z, order(0.5)).unwrap(), 0.0);
        assert_eq!(check_semigroup(&z, order(0.3), order(0.4)).unwrap(), 0.0);
        let u = DirichletFunction::from_fn(g, |t| t * (1.0 - t)).unwrap();
        assert_eq!(check_integration_by_parts(&u, &z, order(0.75)).unwrap(), 0.0);
    }

    #[test]
    fn left_inverse_self_convergence() {
        let a = order(0.6);
        let r = |n| {
            let g = Grid::new(1.0, n).unwrap();
            check_left_inverse(&GridFunction::from_fn(g, |t| (PI * t).sin()).unwrap(), a).unwrap()
        };
        let (coarse, fine) = (r(256), r(512));
        assert!(coarse / fine >= 1.5, "{coarse} vs {fine}");
    }

    #[test]
    fn left_inverse_at_order_one_is_second_order() {
        let a = order(1.0);
        let r = |n| {
            let g = Grid::new(1.0, n).unwrap();
            check_left_inverse(&GridFunction::from_fn(g, |t| (3.0 * t).cos()).unwrap(), a).unwrap()
        };
        let ratio = r(128) / r(256);
        assert!(ratio > 3.5, "ratio {ratio}");
    }

    #[test]
    fn semigroup_on_linear_data() {
        let g = Grid::new(1.0, 1024).unwrap();
        let u = GridFunction::from_fn(g, |t| t).unwrap();
        let r = check_semigroup(&u, order(0.25), order(0.25)).unwrap();
        assert!(r <= 1e-3, "residual {r}");
    }

    #[test]
    fn semigroup_to_order_one_on_constant() {
        let a = order(0.4);
        let b = order(0.6);
        let mut prev = f64::INFINITY;
        for n in [64, 128, 256, 512] {
            let g = Grid::new(1.0, n).unwrap();
            let one = GridFunction::from_fn(g, |_| 1.0).unwrap();
            let nested = frac_integral_left(&frac_integral_left(&one, b).unwrap(), a).unwrap();
            let err = nested
                .values()
                .iter()
                .zip(g.nodes())
                .fold(0.0f64, |m, (v, t)| m.max((v - t).abs()));
            assert!(err < prev);
            prev = err;
        }
    }

    #[test]
    fn integration_by_parts_is_exact_when_v_vanishes_at_t() {
        // the L1 weights satisfy a discrete summation-by-parts identity
        let a = order(0.75);
        for n in [256, 512] {
            let g = Grid::new(1.0, n).unwrap();
            let u = DirichletFunction::from_fn(g, |t| t * (1.0 - t)).unwrap();
            let v = GridFunction::from_fn(g, |t| (PI * t).sin()).unwrap();
            assert!(check_integration_by_parts(&u, &v, a).unwrap() < 1e-14);
        }
    }

    #[test]
    fn integration_by_parts_with_nonvanishing_test_function() {
        let a = order(0.5);
        let r = |n| {
            let g = Grid::new(1.0, n).unwrap();
            let u = DirichletFunction::from_fn(g, |t| (PI * t).sin()).unwrap();
            let v = GridFunction::from_fn(g, |t| 1.0 + t * t).unwrap();
            check_integration_by_parts(&u, &v, a).unwrap()
        };
        let (coarse, fine) = (r(128), r(512));
        assert!(fine < coarse / 2.0, "{coarse} vs {fine}");
    }

    #[test]
    fn integration_by_parts_order_one_rate() {
        let a = order(1.0);
        let r = |n| {
            let g = Grid::new(1.0, n).unwrap();
            let u = DirichletFunction::from_fn(g, |t| t * (1.0 - t) * t.exp()).unwrap();
            let v = GridFunction::from_fn(g, |t| (2.0 * t).cos() + t * t).unwrap();
            check_integration_by_parts(&u, &v, a).unwrap()
        };
        let ratio = r(128) / r(256);
        assert!(ratio > 3.5, "ratio {ratio}");
    }
}
