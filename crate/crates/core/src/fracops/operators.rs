//! Left and right fractional integrals and derivatives on uniform grids.
//!
//! Integrals use product-trapezoid convolution quadrature: the integrand is
//! replaced by its piecewise-linear interpolant and integrated exactly against
//! the kernel `(t - s)^(a - 1) / Gamma(a)`. Derivatives use the L1 scheme for
//! the Caputo form `I^(1-a) u'`, which agrees with the Riemann-Liouville
//! derivative whenever `u` vanishes at the base point. Right-sided operators
//! are the left-sided ones conjugated by sample reversal.

use crate::error::{Error, Result};
use crate::gamma::gamma;

use super::grid::GridFunction;
use super::weights::{ConvolutionWeights, FracOrder};

/// Which end of the interval an operator is based at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Nodal value of a Riemann-Liouville derivative, which may be infinite at
/// the base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeValue {
    Finite(f64),
    Singular,
}

impl NodeValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            NodeValue::Finite(v) => Some(v),
            NodeValue::Singular => None,
        }
    }
}

/// `0 I_t^a u` at every node.
pub fn frac_integral_left(u: &GridFunction, order: FracOrder) -> Result<GridFunction> {
    let grid = u.grid();
    let n_int = grid.intervals();
    let a = order.value();
    let weights = ConvolutionWeights::product_trapezoid(order, n_int);
    let w = weights.weights();
    let scale = grid.step().powf(a) / gamma(a + 2.0);
    let x = u.values();

    let mut out = vec![0.0; grid.len()];
    for n in 1..=n_int {
        let mut acc = weights.start_weight(n) * x[0] + x[n];
        for j in 1..n {
            acc += w[n - j] * x[j];
        }
        out[n] = scale * acc;
    }
    GridFunction::new(grid, out)
}

/// `t I_T^a u` at every node.
pub fn frac_integral_right(u: &GridFunction, order: FracOrder) -> Result<GridFunction> {
    Ok(frac_integral_left(&u.reversed(), order)?.reversed())
}

/// Caputo derivative `0^C D_t^a u` at the nodes, with no condition on `u(0)`.
///
/// For `a < 1` this is the L1 scheme, i.e. the exact Caputo derivative of the
/// piecewise-linear interpolant. For `a = 1` it is the second-order
/// finite-difference derivative (central inside, one-sided at the ends).
pub fn caputo_left(u: &GridFunction, order: FracOrder) -> GridFunction {
    let grid = u.grid();
    let x = u.values();
    let n_int = grid.intervals();
    let h = grid.step();
    let mut out = vec![0.0; grid.len()];

    if order.is_integer() {
        out[0] = (-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * h);
        for i in 1..n_int {
            out[i] = (x[i + 1] - x[i - 1]) / (2.0 * h);
        }
        out[n_int] = (3.0 * x[n_int] - 4.0 * x[n_int - 1] + x[n_int - 2]) / (2.0 * h);
    } else {
        let a = order.value();
        let e = 1.0 - a;
        let b: Vec<f64> = (0..n_int)
            .map(|k| (k as f64 + 1.0).powf(e) - (k as f64).powf(e))
            .collect();
        let diffs: Vec<f64> = x.windows(2).map(|p| p[1] - p[0]).collect();
        let scale = h.powf(-a) / gamma(2.0 - a);
        for n in 1..=n_int {
            let mut acc = 0.0;
            for j in 1..=n {
                acc += b[n - j] * diffs[j - 1];
            }
            out[n] = scale * acc;
        }
    }
    GridFunction::new(grid, out).expect("finite input gives finite derivative")
}

/// Right Caputo derivative `t^C D_T^a v`.
pub fn caputo_right(v: &GridFunction, order: FracOrder) -> GridFunction {
    caputo_left(&v.reversed(), order).reversed()
}

fn require_zero(value: f64, scale: f64, side: &'static str) -> Result<()> {
    if value.abs() > 1e-12 * (1.0 + scale) {
        Err(Error::BoundaryNotZero { side, value })
    } else {
        Ok(())
    }
}

/// `0 D_t^a u` for `u(0) = 0`, where Riemann-Liouville and Caputo agree.
pub fn frac_deriv_left(u: &GridFunction, order: FracOrder) -> Result<GridFunction> {
    require_zero(u.first(), u.sup_norm(), "t = 0")?;
    Ok(caputo_left(u, order))
}

/// `t D_T^a v` for `v(T) = 0`.
pub fn frac_deriv_right(v: &GridFunction, order: FracOrder) -> Result<GridFunction> {
    require_zero(v.last(), v.sup_norm(), "t = T")?;
    Ok(caputo_right(v, order))
}

/// Riemann-Liouville derivative recovered from the Caputo one plus the
/// boundary term `u(a) (t - a)^(-a) / Gamma(1 - a)` (left) or
/// `u(b) (b - t)^(-a) / Gamma(1 - a)` (right).
///
/// The base-point entry is [`NodeValue::Singular`] whenever the boundary
/// value is nonzero.
pub fn rl_from_caputo(u: &GridFunction, order: FracOrder, side: Side) -> Result<Vec<NodeValue>> {
    if order.is_integer() {
        return Err(Error::InvalidOrder(order.value()));
    }
    let a = order.value();
    let grid = u.grid();
    let (caputo, boundary) = match side {
        Side::Left => (caputo_left(u, order), u.first()),
        Side::Right => (caputo_right(u, order), u.last()),
    };
    let coeff = boundary / gamma(1.0 - a);
    let base = match side {
        Side::Left => 0,
        Side::Right => grid.intervals(),
    };
    Ok(caputo
        .values()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if i == base {
                if boundary == 0.0 {
                    NodeValue::Finite(c)
                } else {
                    NodeValue::Singular
                }
            } else {
                let dist = (grid.node(i) - grid.node(base)).abs();
                NodeValue::Finite(c + coeff * dist.powf(-a))
            }
        })
        .collect())
}

/// Grünwald-Letnikov approximation of the left Riemann-Liouville derivative.
///
/// First-order accurate; kept as an independent route for cross-checking
/// [`frac_deriv_left`].
pub fn gl_deriv_left(u: &GridFunction, order: FracOrder) -> GridFunction {
    let grid = u.grid();
    let weights = ConvolutionWeights::grunwald_letnikov(order, grid.intervals());
    let w = weights.weights();
    let x = u.values();
    let scale = grid.step().powf(-order.value());
    let out = (0..grid.len())
        .map(|n| scale * (0..=n).map(|k| w[k] * x[n - k]).sum::<f64>())
        .collect();
    GridFunction::new(grid, out).expect("finite input gives finite derivative")
}
