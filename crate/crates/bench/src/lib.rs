//! Shared fixtures for the benchmarks.

use fracmp::{DirichletFunction, FracParams, Grid, Nonlinearity, Problem};

/// Smooth Dirichlet sample `t (T - t) (1 + t)` on `intervals` cells of `[0, 1]`.
pub fn sample_state(intervals: usize) -> DirichletFunction {
    let grid = Grid::new(1.0, intervals).expect("valid grid");
    DirichletFunction::from_fn(grid, |t| t * (1.0 - t) * (1.0 + t)).expect("finite samples")
}

/// Pure cubic problem on `[0, 1]`.
pub fn cubic_problem(alpha: f64, p: f64, intervals: usize) -> Problem {
    let params = FracParams::new(alpha, p, 1.0).expect("valid parameters");
    Problem::uniform(params, Nonlinearity::power(p + 2.0, 1.0), intervals).expect("valid problem")
}
