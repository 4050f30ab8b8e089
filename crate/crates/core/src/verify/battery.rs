//! The property battery behind `fracmp verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::{inequalities, EnergyFunctional, Problem};
use crate::error::Result;
use crate::fracops::{
    check_integration_by_parts, check_left_inverse, check_semigroup, frac_deriv_left,
    frac_integral_left, FracOrder, Grid, GridFunction,
};
use crate::gamma::gamma;
use crate::model::{check_f1, check_f2, check_f3, geometric_sequence, sample_points};
use crate::space::{clarkson_pointwise, reverse_minkowski_gap, tol_disc, DiscreteSpace};

use super::corpus::{random_dirichlet, smooth_corpus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

/// One row of the verification table.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub status: Status,
    /// The measured quantity (residual, margin or ratio; see `note`).
    pub value: f64,
    pub tolerance: f64,
    pub note: String,
}

impl SuiteResult {
    fn new(name: &'static str, ok: bool, value: f64, tolerance: f64, note: impl Into<String>) -> Self {
        Self {
            name,
            status: Status::from_bool(ok),
            value,
            tolerance,
            note: note.into(),
        }
    }

    fn skipped(name: &'static str, note: impl Into<String>) -> Self {
        Self {
            name,
            status: Status::Skipped,
            value: f64::NAN,
            tolerance: f64::NAN,
            note: note.into(),
        }
    }
}

/// Largest residuals of the three identities over the smooth corpus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    pub left_inverse: f64,
    pub semigroup: f64,
    pub integration_by_parts: f64,
}

/// Identity residuals on `intervals` cells of `[0, length]`. Integration by
/// parts pairs the Dirichlet variant of each corpus function with the next
/// corpus function plus one, which does not vanish at `T`.
pub fn identity_residuals(alpha: FracOrder, length: f64, intervals: usize) -> Result<IdentityResiduals> {
    let grid = Grid::new(length, intervals)?;
    let half = FracOrder::new(0.5 * alpha.value())?;
    let corpus = smooth_corpus();
    let mut out = IdentityResiduals {
        left_inverse: 0.0,
        semigroup: 0.0,
        integration_by_parts: 0.0,
    };
    for (k, f) in corpus.iter().enumerate() {
        let u = f.sample(grid)?;
        out.left_inverse = out.left_inverse.max(check_left_inverse(&u, alpha)?);
        out.semigroup = out.semigroup.max(check_semigroup(&u, half, half)?);
        let ud = f.dirichlet(grid)?;
        let v = corpus[(k + 1) % corpus.len()].sample(grid)?.map(|x| x + 1.0);
        out.integration_by_parts = out
            .integration_by_parts
            .max(check_integration_by_parts(&ud, &v, alpha)?);
    }
    Ok(out)
}

/// Runs every suite for `problem`; sample counts scale with `effort`
/// (1 is the command-line default).
pub fn run_battery(problem: &Problem, seed: u64, effort: usize) -> Result<Vec<SuiteResult>> {
    let effort = effort.max(1);
    let params = problem.params;
    let grid = problem.grid;
    let n = grid.intervals();
    let alpha = params.order();
    let a = alpha.value();
    let p = params.p();
    let length = params.length();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    // power rule for u = t
    let t = GridFunction::from_fn(grid, |t| t)?;
    let int = frac_integral_left(&t, alpha)?;
    let der = frac_deriv_left(&t, alpha)?;
    let mut int_err = 0.0f64;
    let mut der_err = 0.0f64;
    for (i, x) in grid.nodes().enumerate().skip(1) {
        let exact = x.powf(1.0 + a) / gamma(2.0 + a);
        int_err = int_err.max((int.values()[i] - exact).abs() / exact);
        if i < n {
            der_err = der_err.max((der.values()[i] - x.powf(1.0 - a) / gamma(2.0 - a)).abs());
        }
    }
    out.push(SuiteResult::new("power_rule_integral", int_err <= 1e-3, int_err, 1e-3, "relative sup error"));
    out.push(SuiteResult::new("power_rule_derivative", der_err <= 1e-2, der_err, 1e-2, "interior sup error"));

    // identities: residuals must shrink from N to 2N
    let coarse = identity_residuals(alpha, length, n)?;
    let fine = identity_residuals(alpha, length, 2 * n)?;
    for (name, c, f) in [
        ("left_inverse", coarse.left_inverse, fine.left_inverse),
        ("semigroup", coarse.semigroup, fine.semigroup),
        ("integration_by_parts", coarse.integration_by_parts, fine.integration_by_parts),
    ] {
        out.push(SuiteResult::new(
            name,
            f < c,
            f,
            c,
            "residual at 2N; tolerance column holds the residual at N",
        ));
    }

    // embeddings
    let space = DiscreteSpace::new(params, grid)?;
    let tol = tol_disc(n);
    let count = 100 * effort;
    let funcs: Vec<_> = (0..count).map(|_| random_dirichlet(&mut rng, grid)).collect();
    let poincare = funcs
        .iter()
        .map(|u| space.check_poincare(u) / space.seminorm(u))
        .fold(f64::INFINITY, f64::min);
    out.push(SuiteResult::new("poincare", poincare >= -tol, poincare, -tol, "min relative margin"));
    if params.require_window().is_ok() {
        let mut sup = f64::INFINITY;
        for u in &funcs {
            sup = sup.min(space.check_sup_embedding(u)? / space.seminorm(u));
        }
        out.push(SuiteResult::new("sup_embedding", sup >= -tol, sup, -tol, "min relative margin"));
    } else {
        out.push(SuiteResult::skipped("sup_embedding", "needs a > 1/p"));
    }

    // uniform convexity
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 * effort {
        let z = rng.random_range(-10.0..10.0);
        let w = rng.random_range(-10.0..10.0);
        let (lhs, rhs) = clarkson_pointwise(z, w, p)?;
        worst = worst.min((rhs - lhs) / rhs.max(1e-300));
    }
    out.push(SuiteResult::new("clarkson_pointwise", worst >= -1e-12, worst, -1e-12, "min relative slack"));
    let mut gap = f64::INFINITY;
    for pair in funcs.chunks(2).filter(|c| c.len() == 2) {
        gap = gap.min(space.convexity_midpoint_gap(&pair[0], &pair[1])?.gap);
    }
    out.push(SuiteResult::new("convexity_midpoint_gap", gap >= -1e-12, gap, -1e-12, "min gap"));
    let weights = grid.trapezoid_weights();
    let mut mink = f64::INFINITY;
    for pair in funcs.chunks(2).filter(|c| c.len() == 2) {
        mink = mink.min(reverse_minkowski_gap(pair[0].values(), pair[1].values(), &weights, 0.5));
    }
    out.push(SuiteResult::new("reverse_minkowski", mink >= -1e-12, mink, -1e-12, "min gap at s = 1/2"));

    // hypotheses on f
    let nl = &problem.nonlinearity;
    let pts = sample_points(length, 100.0, 21, 2001);
    let f1 = check_f1(nl, length, &pts);
    out.push(SuiteResult::new("f1_growth", f1 <= 1.0 + 1e-12, f1, 1.0, "max |f| / C(1 + |xi|^(q-1))"));
    let by_design = "forcing mode violates this by construction";
    let forced = nl.is_forcing_mode();
    let f2 = check_f2(nl, length, &pts);
    let note = if forced { by_design } else { "min (xi f - mu F)" };
    out.push(SuiteResult::new("f2_ambrosetti_rabinowitz", f2.holds(), f2.ar_margin, 0.0, note));
    let f3 = check_f3(nl, &params, &geometric_sequence(0.5, 0.5, 40));
    let note = if forced { by_design } else { "last ratio along xi_k -> 0" };
    out.push(SuiteResult::new("f3_small_amplitude", f3.holds(), f3.last(), 1e-6, note));

    // energy gradient
    let energy = EnergyFunctional::new(problem);
    let mut fd_err = 0.0f64;
    for pair in funcs.chunks(2).filter(|c| c.len() == 2).take(20) {
        let (u, v) = (&pair[0], &pair[1]);
        let g = energy.gradient(u);
        let exact: f64 = g.values().iter().zip(v.values()).map(|(x, y)| x * y).sum();
        let h = 1e-6;
        let fd = (energy.energy(&u.combine(1.0, v, h)) - energy.energy(&u.combine(1.0, v, -h))) / (2.0 * h);
        fd_err = fd_err.max((fd - exact).abs() / (1.0 + exact.abs()));
    }
    out.push(SuiteResult::new("gradient_finite_difference", fd_err <= 1e-5, fd_err, 1e-5, "max relative error"));
    let mut euler = 0.0f64;
    for u in funcs.iter().take(20) {
        let (b, g) = energy.energy_and_gradient_values(u.values());
        let pairing: f64 = g.iter().zip(u.values()).map(|(x, y)| x * y).sum();
        let load: f64 = energy.gradient_h(u.values()).iter().zip(u.values()).map(|(x, y)| x * y).sum();
        euler = euler.max((pairing - (p * b.j - load)).abs() / (1.0 + b.j + load.abs()));
    }
    // the regularized energy is homogeneous only up to eps_reg
    let euler_tol = if p < 2.0 { 1e-8 } else { 1e-12 };
    out.push(SuiteResult::new("euler_identity", euler <= euler_tol, euler, euler_tol, "max relative defect"));

    // scalar inequalities
    let (cont, mono) = scalar_inequality_sweep(p, 10_000 * effort, &mut rng);
    out.push(SuiteResult::new("continuity_inequality", cont >= -1e-12, cont, -1e-12, "min relative slack"));
    out.push(SuiteResult::new("monotonicity_inequality", mono >= -1e-12, mono, -1e-12, "min relative slack"));
    Ok(out)
}

/// Smallest relative slacks of the continuity and strong-monotonicity
/// inequalities over random pairs and a near-diagonal grid.
pub fn scalar_inequality_sweep<R: Rng>(p: f64, samples: usize, rng: &mut R) -> (f64, f64) {
    let mut cont = f64::INFINITY;
    let mut mono = f64::INFINITY;
    let mut record = |z: f64, y: f64| {
        let s = inequalities::scale(z, y, p);
        cont = cont.min(inequalities::continuity_slack(z, y, p) / s);
        mono = mono.min(inequalities::monotonicity_slack(z, y, p) / s);
    };
    for _ in 0..samples {
        let z = rng.random_range(-1.0..1.0) * 10f64.powf(rng.random_range(-3.0..3.0));
        let y = rng.random_range(-1.0..1.0) * 10f64.powf(rng.random_range(-3.0..3.0));
        record(z, y);
    }
    // near-equality regions: y close to z, y close to -z, and y = 0
    for i in 0..=200 {
        let z = 10f64.powf(-3.0 + 6.0 * i as f64 / 200.0);
        for &r in &[1.0 + 1e-6, 1.0 - 1e-3, 0.9, 0.5, 0.0, -0.5, -1.0, -1.0 + 1e-3] {
            record(z, r * z);
            record(-z, r * z);
        }
    }
    (cont, mono)
}
