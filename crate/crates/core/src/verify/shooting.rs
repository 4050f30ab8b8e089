//! Shooting oracle for `-u'' = a u^(q-1)`, `u(0) = u(T) = 0`, `u > 0`.

use crate::error::{Error, Result};
use crate::fracops::{DirichletFunction, Grid};

fn rhs(state: [f64; 2], a: f64, q: f64) -> [f64; 2] {
    let u = state[0];
    [state[1], -a * u.signum() * u.abs().powf(q - 1.0)]
}

fn rk4(state: [f64; 2], dt: f64, a: f64, q: f64) -> [f64; 2] {
    let add = |s: [f64; 2], k: [f64; 2], c: f64| [s[0] + c * k[0], s[1] + c * k[1]];
    let k1 = rhs(state, a, q);
    let k2 = rhs(add(state, k1, 0.5 * dt), a, q);
    let k3 = rhs(add(state, k2, 0.5 * dt), a, q);
    let k4 = rhs(add(state, k3, dt), a, q);
    [
        state[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        state[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// Trajectory at the grid nodes for initial slope `s`, with `substeps` RK4
/// steps per cell.
fn trajectory(s: f64, grid: Grid, a: f64, q: f64, substeps: usize) -> Vec<f64> {
    let dt = grid.step() / substeps as f64;
    let mut state = [0.0, s];
    let mut out = Vec::with_capacity(grid.len());
    out.push(0.0);
    for _ in 0..grid.intervals() {
        for _ in 0..substeps {
            state = rk4(state, dt, a, q);
        }
        out.push(state[0]);
    }
    out
}

/// True when the trajectory stays positive on the open interval.
fn positive_inside(values: &[f64]) -> bool {
    values[1..values.len() - 1].iter().all(|&v| v > 0.0)
}

/// Positive solution of `-u'' = a u^(q-1)` with constant `a > 0`, `q > 2`,
/// sampled on `grid`.
///
/// The initial slope is found by bisection: slopes too small reach `t = T`
/// while still positive, slopes too large cross zero before `T`.
pub fn shoot_power(grid: Grid, a: f64, q: f64, substeps: usize) -> Result<DirichletFunction> {
    if !(a > 0.0 && q > 2.0) {
        return Err(Error::InvalidParams("shooting needs a > 0 and q > 2".into()));
    }
    let substeps = substeps.max(1);
    let too_small = |s: f64| {
        let v = trajectory(s, grid, a, q, substeps);
        positive_inside(&v) && *v.last().unwrap() > 0.0
    };
    let mut lo = 1e-3;
    while !too_small(lo) {
        lo *= 0.5;
        if lo < 1e-12 {
            return Err(Error::Geometry("shooting: no small slope stays positive".into()));
        }
    }
    let mut hi = 2.0 * lo;
    while too_small(hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Geometry("shooting: no slope reaches zero".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if too_small(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    DirichletFunction::clamped(grid, trajectory(0.5 * (lo + hi), grid, a, q, substeps))
}
