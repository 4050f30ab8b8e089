//! Test-function corpora.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::Result;
use crate::fracops::{DirichletFunction, Grid, GridFunction};

/// A named smooth function of `(t, T)`.
#[derive(Clone, Copy)]
pub struct CorpusFunction {
    pub name: &'static str,
    pub f: fn(f64, f64) -> f64,
}

impl std::fmt::Debug for CorpusFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name)
    }
}

/// Ten smooth functions on `[0, T]`, all vanishing at `t = 0` and none at
/// `t = T`.
pub fn smooth_corpus() -> [CorpusFunction; 10] {
    [
        CorpusFunction { name: "t", f: |t, _| t },
        CorpusFunction { name: "t^2", f: |t, _| t * t },
        CorpusFunction { name: "sin(pi t / 2T)", f: |t, l| (0.5 * PI * t / l).sin() },
        CorpusFunction { name: "t exp(t)", f: |t, _| t * t.exp() },
        CorpusFunction { name: "sin(2t)", f: |t, _| (2.0 * t).sin() },
        CorpusFunction { name: "t cos(3t)", f: |t, _| t * (3.0 * t).cos() },
        CorpusFunction { name: "1 - cos(t)", f: |t, _| 1.0 - t.cos() },
        CorpusFunction { name: "t^3 + t/2", f: |t, _| t * t * t + 0.5 * t },
        CorpusFunction { name: "ln(1 + t)", f: |t, _| t.ln_1p() },
        CorpusFunction { name: "t / (1 + t^2)", f: |t, _| t / (1.0 + t * t) },
    ]
}

impl CorpusFunction {
    pub fn sample(&self, grid: Grid) -> Result<GridFunction> {
        let l = grid.length();
        GridFunction::from_fn(grid, |t| (self.f)(t, l))
    }

    /// `f(t) (T - t) / T`, which vanishes at both ends.
    pub fn dirichlet(&self, grid: Grid) -> Result<DirichletFunction> {
        let l = grid.length();
        DirichletFunction::from_fn(grid, |t| (self.f)(t, l) * (l - t) / l)
    }
}

/// Random Dirichlet function: up to eight sine modes with decaying
/// amplitudes plus up to three piecewise-linear bumps.
pub fn random_dirichlet<R: Rng>(rng: &mut R, grid: Grid) -> DirichletFunction {
    let l = grid.length();
    let modes = rng.random_range(1..=8usize);
    let coeffs: Vec<f64> = (1..=modes)
        .map(|k| rng.random_range(-1.0..1.0) / k as f64)
        .collect();
    let bumps: Vec<(f64, f64, f64)> = (0..rng.random_range(0..=3usize))
        .map(|_| {
            let width = rng.random_range(0.05..0.4) * l;
            let center = rng.random_range(width..(l - width).max(width + 1e-9));
            (center, width, rng.random_range(-1.0..1.0))
        })
        .collect();
    let values: Vec<f64> = grid
        .nodes()
        .map(|t| {
            let waves: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * ((k + 1) as f64 * PI * t / l).sin())
                .sum();
            let hats: f64 = bumps
                .iter()
                .map(|&(c, w, a)| a * (1.0 - (t - c).abs() / w).max(0.0))
                .sum();
            waves + hats
        })
        .collect();
    DirichletFunction::clamped(grid, values).expect("finite samples")
}

/// `sin(k pi t / T)` for `k = 1..=count`.
pub fn sine_basis(grid: Grid, count: usize) -> Vec<DirichletFunction> {
    let l = grid.length();
    (1..=count)
        .map(|k| {
            DirichletFunction::clamped(
                grid,
                grid.nodes().map(|t| (k as f64 * PI * t / l).sin()).collect(),
            )
            .expect("finite samples")
        })
        .collect()
}
