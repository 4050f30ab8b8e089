//! The nonlinearity `f(t, xi) = a(t) |xi|^(q-2) xi (+ g(t))` and numerical
//! checks of the growth (f1), Ambrosetti-Rabinowitz (f2) and small-amplitude
//! (f3) hypotheses.
//!
//! Without forcing the family satisfies all three whenever `q > p`,
//! `a >= a_min > 0` and `p < mu <= q`. The forcing term `g` is a
//! verification-only device: it breaks (f3) and is used to build convex
//! problems with known minimizers.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracops::Grid;
use crate::space::FracParams;

/// A scalar profile on `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Constant { value: f64 },
    /// `amplitude * sin(mode * pi * t / T)`.
    Sine { amplitude: f64, mode: u32 },
    /// Piecewise-linear interpolation of samples on a uniform grid of `[0, T]`.
    Samples { values: Vec<f64> },
}

impl Profile {
    pub fn constant(value: f64) -> Self {
        Profile::Constant { value }
    }

    pub fn eval(&self, t: f64, length: f64) -> f64 {
        match self {
            Profile::Constant { value } => *value,
            Profile::Sine { amplitude, mode } => {
                amplitude * (*mode as f64 * PI * t / length).sin()
            }
            Profile::Samples { values } => {
                let n = values.len() - 1;
                let x = (t / length).clamp(0.0, 1.0) * n as f64;
                let i = (x.floor() as usize).min(n - 1);
                let frac = x - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
        }
    }

    /// Values at the nodes of `grid`.
    pub fn sample(&self, grid: &Grid) -> Vec<f64> {
        grid.nodes().map(|t| self.eval(t, grid.length())).collect()
    }

    /// Lower and upper bounds of the profile on `[0, T]`.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Profile::Constant { value } => (*value, *value),
            Profile::Sine { amplitude, mode } => {
                let a = amplitude.abs();
                match mode {
                    0 => (0.0, 0.0),
                    1 if *amplitude >= 0.0 => (0.0, a),
                    1 => (-a, 0.0),
                    _ => (-a, a),
                }
            }
            Profile::Samples { values } => values
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v))),
        }
    }

    fn validate(&self, what: &str) -> Result<()> {
        let finite = match self {
            Profile::Constant { value } => value.is_finite(),
            Profile::Sine { amplitude, .. } => amplitude.is_finite(),
            Profile::Samples { values } => {
                if values.len() < 2 {
                    return Err(Error::InvalidNonlinearity(format!(
                        "{what} needs at least two samples"
                    )));
                }
                values.iter().all(|v| v.is_finite())
            }
        };
        if finite {
            Ok(())
        } else {
            Err(Error::InvalidNonlinearity(format!("{what} has non-finite entries")))
        }
    }
}

/// Parametric Carathéodory nonlinearity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Nonlinearity {
    /// Growth exponent `q`.
    pub q: f64,
    /// Weight `a(t)`.
    pub weight: Profile,
    /// Ambrosetti-Rabinowitz exponent `mu`.
    pub mu: f64,
    /// Ambrosetti-Rabinowitz threshold `r`.
    pub r: f64,
    /// Growth constant `C` in `|f| <= C (1 + |xi|^(q-1))`.
    pub c_growth: f64,
    /// Verification-only load `g(t)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing: Option<Profile>,
}

impl Default for Nonlinearity {
    fn default() -> Self {
        Self {
            mu: 3.5,
            ..Self::power(4.0, 1.0)
        }
    }
}

impl Nonlinearity {
    /// `a |xi|^(q-2) xi` with constant weight, `mu = q`, `r = 1`, `C = a`.
    pub fn power(q: f64, a: f64) -> Self {
        Self {
            q,
            weight: Profile::constant(a),
            mu: q,
            r: 1.0,
            c_growth: a,
            forcing: None,
        }
    }

    /// Pure load `f(t, xi) = g(t)`; the energy is then strictly convex.
    pub fn forcing_only(forcing: Profile) -> Self {
        let (lo, hi) = forcing.bounds();
        Self {
            q: 2.0,
            weight: Profile::constant(0.0),
            mu: 2.0,
            r: 1.0,
            c_growth: lo.abs().max(hi.abs()).max(1.0),
            forcing: Some(forcing),
        }
    }

    pub fn is_forcing_mode(&self) -> bool {
        self.forcing.is_some()
    }

    /// True when `a` vanishes identically (the energy is then convex).
    pub fn is_linear_load(&self) -> bool {
        self.weight.bounds() == (0.0, 0.0)
    }

    pub fn weight_bounds(&self) -> (f64, f64) {
        self.weight.bounds()
    }

    /// Structural checks; with `params`, also the ranges the existence theory
    /// needs in pure-power mode.
    pub fn validate(&self, params: Option<&FracParams>) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidNonlinearity(m));
        if !(self.q.is_finite() && self.q > 1.0) {
            return bad(format!("q must exceed 1, got {}", self.q));
        }
        self.weight.validate("weight")?;
        if let Some(g) = &self.forcing {
            g.validate("forcing")?;
        }
        let (a_min, _) = self.weight.bounds();
        if a_min < 0.0 {
            return bad(format!("weight must be nonnegative, min is {a_min}"));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return bad(format!("r must be positive, got {}", self.r));
        }
        if !(self.c_growth > 0.0 && self.c_growth.is_finite()) {
            return bad(format!("growth constant must be positive, got {}", self.c_growth));
        }
        if self.forcing.is_some() {
            return Ok(());
        }
        if a_min <= 0.0 {
            return bad("pure-power mode needs a(t) >= a_min > 0".into());
        }
        if let Some(params) = params {
            let p = params.p();
            if self.q <= p {
                return bad(format!("need q > p, got q = {} and p = {p}", self.q));
            }
            if !(self.mu > p && self.mu <= self.q) {
                return bad(format!("need p < mu <= q, got mu = {}", self.mu));
            }
        }
        Ok(())
    }

    fn power_term(&self, a: f64, xi: f64) -> f64 {
        a * xi.signum() * xi.abs().powf(self.q - 1.0)
    }

    /// `f(t, xi)` on `[0, length]`.
    pub fn eval_f(&self, t: f64, length: f64, xi: f64) -> f64 {
        let a = self.weight.eval(t, length);
        let mut v = if xi == 0.0 { 0.0 } else { self.power_term(a, xi) };
        if let Some(g) = &self.forcing {
            v += g.eval(t, length);
        }
        v
    }

    /// `F(t, xi) = int_0^xi f(t, s) ds` in closed form.
    pub fn eval_big_f(&self, t: f64, length: f64, xi: f64) -> f64 {
        let a = self.weight.eval(t, length);
        let mut v = a * xi.abs().powf(self.q) / self.q;
        if let Some(g) = &self.forcing {
            v += g.eval(t, length) * xi;
        }
        v
    }

    /// Samples of the weight and forcing on a grid, for fast nodal evaluation.
    pub fn on_grid(&self, grid: &Grid) -> NodalNonlinearity {
        NodalNonlinearity {
            q: self.q,
            weight: self.weight.sample(grid),
            forcing: self.forcing.as_ref().map(|g| g.sample(grid)),
        }
    }
}

/// A [`Nonlinearity`] with its profiles sampled on grid nodes.
#[derive(Debug, Clone)]
pub struct NodalNonlinearity {
    q: f64,
    weight: Vec<f64>,
    forcing: Option<Vec<f64>>,
}

impl NodalNonlinearity {
    pub fn f(&self, i: usize, xi: f64) -> f64 {
        let mut v = if xi == 0.0 {
            0.0
        } else {
            self.weight[i] * xi.signum() * xi.abs().powf(self.q - 1.0)
        };
        if let Some(g) = &self.forcing {
            v += g[i];
        }
        v
    }

    pub fn big_f(&self, i: usize, xi: f64) -> f64 {
        let mut v = self.weight[i] * xi.abs().powf(self.q) / self.q;
        if let Some(g) = &self.forcing {
            v += g[i] * xi;
        }
        v
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn forcing(&self) -> Option<&[f64]> {
        self.forcing.as_deref()
    }
}

/// `(t, xi)` sample points over `[0, T] x [-xi_max, xi_max]`.
pub fn sample_points(length: f64, xi_max: f64, n_t: usize, n_xi: usize) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(n_t * n_xi);
    for i in 0..n_t {
        let t = length * i as f64 / (n_t.max(2) - 1) as f64;
        for j in 0..n_xi {
            let xi = -xi_max + 2.0 * xi_max * j as f64 / (n_xi.max(2) - 1) as f64;
            pts.push((t, xi));
        }
    }
    pts
}

/// `max |f| / (C (1 + |xi|^(q-1)))` over the samples; (f1) holds when this is
/// at most one.
pub fn check_f1(nl: &Nonlinearity, length: f64, samples: &[(f64, f64)]) -> f64 {
    samples.iter().fold(0.0, |worst, &(t, xi)| {
        let ratio = nl.eval_f(t, length, xi).abs()
            / (nl.c_growth * (1.0 + xi.abs().powf(nl.q - 1.0)));
        worst.max(ratio)
    })
}

/// Outcome of the (f2) check on samples with `|xi| >= r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F2Report {
    /// `min (xi f - mu F)`.
    pub ar_margin: f64,
    /// `min F`.
    pub min_potential: f64,
    /// `max |xi f|`, the scale for rounding in `ar_margin`.
    pub scale: f64,
    pub samples_used: usize,
}

impl F2Report {
    /// `mu F <= xi f` (equality allowed at `mu = q`) and `F` strictly
    /// positive above the floor `1e-14`.
    pub fn holds(&self) -> bool {
        self.samples_used > 0
            && self.ar_margin >= -1e-12 * (1.0 + self.scale)
            && self.min_potential > 1e-14
    }
}

pub fn check_f2(nl: &Nonlinearity, length: f64, samples: &[(f64, f64)]) -> F2Report {
    let mut report = F2Report {
        ar_margin: f64::INFINITY,
        min_potential: f64::INFINITY,
        scale: 0.0,
        samples_used: 0,
    };
    for &(t, xi) in samples.iter().filter(|(_, xi)| xi.abs() >= nl.r) {
        let big_f = nl.eval_big_f(t, length, xi);
        let work = xi * nl.eval_f(t, length, xi);
        let margin = work - nl.mu * big_f;
        report.scale = report.scale.max(work.abs());
        report.ar_margin = report.ar_margin.min(margin);
        report.min_potential = report.min_potential.min(big_f);
        report.samples_used += 1;
    }
    report
}

/// Outcome of the (f3) check along a sequence `xi_k -> 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct F3Report {
    /// `max_t |f(t, xi_k)| / |xi_k|^(p-1)` for each `k`.
    pub ratios: Vec<f64>,
    /// Least-squares slope of `log ratio` against `log xi`, i.e. the decay
    /// exponent (`q - p` for the pure power).
    pub fitted_exponent: f64,
}

impl F3Report {
    pub fn last(&self) -> f64 {
        *self.ratios.last().unwrap_or(&f64::INFINITY)
    }

    pub fn is_monotone(&self) -> bool {
        self.ratios.windows(2).all(|w| w[1] <= w[0])
    }

    /// Monotone decrease to below `1e-6`.
    pub fn holds(&self) -> bool {
        self.is_monotone() && self.last() < 1e-6
    }
}

/// Geometric sequence `xi_k = xi_0 * ratio^k`, `k = 0..count`.
pub fn geometric_sequence(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start * ratio.powi(k as i32)).collect()
}

pub fn check_f3(nl: &Nonlinearity, params: &FracParams, xis: &[f64]) -> F3Report {
    let length = params.length();
    let ts: Vec<f64> = (0..=16).map(|i| length * i as f64 / 16.0).collect();
    let ratios: Vec<f64> = xis
        .iter()
        .map(|&xi| {
            ts.iter().fold(0.0f64, |m, &t| {
                m.max(nl.eval_f(t, length, xi).abs() / xi.abs().powf(params.p() - 1.0))
            })
        })
        .collect();
    let pts: Vec<(f64, f64)> = xis
        .iter()
        .zip(&ratios)
        .filter(|(_, r)| **r > 0.0 && r.is_finite())
        .map(|(x, r)| (x.abs().ln(), r.ln()))
        .collect();
    F3Report {
        ratios,
        fitted_exponent: fit_slope(&pts),
    }
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
