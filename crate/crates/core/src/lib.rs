//! Mixed left/right fractional p-Laplacian Dirichlet problems on `[0, T]`:
//!
//! ```text
//! t D_T^a ( |0 D_t^a u|^(p-2) 0 D_t^a u ) = f(t, u),   u(0) = u(T) = 0
//! ```
//!
//! The crate discretizes the fractional operators on uniform grids, evaluates
//! the variational energy `I(u) = (1/p) int |0 D_t^a u|^p - int F(t, u)` and
//! its exact discrete gradient, and finds nontrivial critical points with a
//! path-deformation mountain-pass method.

pub mod energy;
pub mod error;
pub mod fracops;
pub mod gamma;
pub mod model;
pub mod solver;
pub mod space;
pub mod verify;

pub use energy::{EnergyBreakdown, EnergyFunctional, Problem};
pub use error::{Error, Result};
pub use fracops::{DirichletFunction, FracOrder, Grid, GridFunction};
pub use model::{Nonlinearity, Profile};
pub use solver::{GeometryEstimate, SolveReport, SolverOptions};
pub use space::FracParams;
