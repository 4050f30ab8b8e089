//! Discrete fractional integrals and derivatives on uniform grids.

mod grid;
mod identities;
mod midpoint;
mod operators;
mod weights;

pub use grid::{DirichletFunction, Grid, GridFunction};
pub use identities::{check_integration_by_parts, check_left_inverse, check_semigroup};
pub use midpoint::MidpointDerivative;
pub use operators::{
    caputo_left, caputo_right, frac_deriv_left, frac_deriv_right, frac_integral_left,
    frac_integral_right, gl_deriv_left, rl_from_caputo, NodeValue, Side,
};
pub use weights::{ConvolutionWeights, FracOrder, Scheme};
