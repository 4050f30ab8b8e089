use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use fracmp::fracops::frac_deriv_left;
use fracmp::model::{fit_slope, Profile};
use fracmp::solver::{convex_solve, mountain_pass_solve, ps_diagnostic, SolveReport};
use fracmp::space::{poincare_constant, DiscreteSpace};
use fracmp::verify::{identity_residuals, run_battery, shoot_power, sine_basis, Status};
use fracmp::{EnergyFunctional, Problem};
use rayon::prelude::*;

use crate::config::{Mode, RunConfig};
use crate::error::CliError;
use crate::output::{fmt_float, write_atomic, Table};

/// Grid sizes of a convergence study.
pub const STUDY_LEVELS: [usize; 5] = [64, 128, 256, 512, 1024];
/// Smallest accepted convergence slope where a rate contract applies.
pub const MIN_SLOPE: f64 = 0.9;

const TEST_FUNCTIONS: usize = 16;

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })
}

/// Solves in the configured mode and writes `solution.csv`,
/// `path_profile.csv` and `report.txt`. Returns 0 on convergence and 2
/// otherwise (outputs are still written and flagged).
pub fn cmd_solve(config: &RunConfig) -> Result<u8, CliError> {
    let problem = config.problem()?;
    let report = match config.mode {
        Mode::MountainPass => mountain_pass_solve(&problem, &config.solver)?,
        Mode::Convex => convex_solve(&problem, &config.solver)?,
        other => {
            return Err(CliError::Config(format!(
                "solve needs mode mountain_pass or convex, got {other:?}"
            )))
        }
    };
    let dir = &config.output_dir;
    ensure_dir(dir)?;

    let grid = problem.grid;
    let derivative = frac_deriv_left(&report.u_star, problem.params.order())?;
    let mut solution = Table::new(&["t", "u", "Dalpha_u"]);
    for (i, t) in grid.nodes().enumerate() {
        solution.push_floats(&[t, report.u_star.values()[i], derivative.values()[i]]);
    }
    solution.write(&dir.join("solution.csv"))?;

    let mut profile = Table::new(&["j", "energy"]);
    for (j, e) in report.path_profile.iter().enumerate() {
        profile.push_raw(vec![j.to_string(), fmt_float(*e)]);
    }
    profile.write(&dir.join("path_profile.csv"))?;

    let text = solve_report(config, &problem, &report)?;
    write_atomic(&dir.join("report.txt"), text.as_bytes())?;
    print!("{text}");
    Ok(if report.converged { 0 } else { 2 })
}

fn solve_report(config: &RunConfig, problem: &Problem, report: &SolveReport) -> Result<String, CliError> {
    let energy = EnergyFunctional::with_regularization(problem, config.solver.eps_reg);
    let space = DiscreteSpace::new(problem.params, problem.grid)?;
    let weak = sine_basis(problem.grid, TEST_FUNCTIONS)
        .iter()
        .map(|phi| energy.weak_residual(&report.u_star, phi).abs())
        .fold(0.0f64, f64::max);
    let ps = ps_diagnostic(report, &problem.params, &problem.nonlinearity, &config.solver);
    let nl = &problem.nonlinearity;

    let mut s = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    line("mode", format!("{:?}", config.mode));
    line("status", if report.converged { "converged" } else { "NOT CONVERGED" }.into());
    line("alpha", fmt_float(problem.params.alpha()));
    line("p", fmt_float(problem.params.p()));
    line("q", fmt_float(nl.q));
    line("length", fmt_float(problem.params.length()));
    line("grid_n", problem.grid.intervals().to_string());
    line("iterations", report.iterations.to_string());
    line("energy.J", fmt_float(report.breakdown.j));
    line("energy.H", fmt_float(report.breakdown.h));
    line("energy.I", fmt_float(report.breakdown.i));
    line("grad_norm", fmt_float(report.grad_norm));
    line("tol_grad", fmt_float(config.solver.tol_grad));
    line("seminorm", fmt_float(space.seminorm(&report.u_star)));
    line("sup_norm", fmt_float(report.u_star.sup_norm()));
    line("weak_residual_max", fmt_float(weak));
    if let Some(g) = &report.geometry {
        line("geometry.rho", fmt_float(g.rho));
        line("geometry.beta", fmt_float(g.beta));
        line("geometry.sigma", fmt_float(g.sigma));
        line("geometry.energy_e", fmt_float(g.energy_e));
    }
    if let Some(spread) = report.multistart_spread {
        line("multistart_spread", fmt_float(spread));
    }
    line("ps.coefficient", fmt_float(ps.coefficient));
    line("ps.norm_ratio", fmt_float(ps.ratio));
    line("ps.bounded", ps.bounded.to_string());
    line("ps.hypothesis_ok", ps.hypothesis_ok.to_string());
    if let Some(err) = classical_oracle_error(problem, report)? {
        line("oracle.shooting_sup_error", fmt_float(err));
    }
    Ok(s)
}

/// Sup distance to the shooting solution when the problem is the classical
/// `-u'' = a u^(q-1)` with constant `a`.
fn classical_oracle_error(problem: &Problem, report: &SolveReport) -> Result<Option<f64>, CliError> {
    let nl = &problem.nonlinearity;
    let classical = problem.params.alpha() == 1.0 && problem.params.p() == 2.0;
    let a = match (&nl.weight, &nl.forcing) {
        (Profile::Constant { value }, None) if *value > 0.0 => *value,
        _ => return Ok(None),
    };
    if !classical || nl.q <= 2.0 || report.geometry.is_none() {
        return Ok(None);
    }
    let oracle = shoot_power(problem.grid, a, nl.q, 16)?;
    let u = &report.u_star;
    let err = u
        .interior_sup_distance(&oracle)
        .min(u.scaled(-1.0).interior_sup_distance(&oracle));
    Ok(Some(err))
}

/// Runs the property battery and prints a table. Returns 0 iff no suite
/// fails.
pub fn cmd_verify(config: &RunConfig) -> Result<u8, CliError> {
    let problem = config.problem()?;
    let rows = run_battery(&problem, config.solver.seed, 1)?;
    println!("{:<28} {:<6} {:>24} {:>24}  note", "suite", "status", "value", "tolerance");
    for r in &rows {
        println!(
            "{:<28} {:<6} {:>24} {:>24}  {}",
            r.name,
            r.status.label(),
            fmt_float(r.value),
            fmt_float(r.tolerance),
            r.note
        );
    }
    let failed = rows.iter().filter(|r| r.status == Status::Fail).count();
    println!("{} suites, {failed} failed", rows.len());
    Ok(if failed == 0 { 0 } else { 2 })
}

/// One row of `convergence.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub n: usize,
    pub quantity: &'static str,
    pub value: f64,
}

/// Convergence slopes: `-d log(value) / d log(N)` per quantity.
pub fn study_slopes(rows: &[StudyRow]) -> Vec<(&'static str, f64)> {
    let mut names: Vec<&'static str> = rows.iter().map(|r| r.quantity).collect();
    names.dedup();
    names
        .into_iter()
        .map(|q| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.quantity == q && r.value > 0.0)
                .map(|r| ((r.n as f64).ln(), r.value.ln()))
                .collect();
            (q, -fit_slope(&pts))
        })
        .collect()
}

/// Quantities in a study; those without a rate contract are constant in N.
pub fn has_rate_contract(quantity: &str) -> bool {
    quantity != "poincare_constant"
}

/// Convex mode: self-convergence `max |u_N - u_2N|` at the coarse nodes.
/// Other modes: identity residuals on the smooth corpus.
pub fn convergence_rows(config: &RunConfig) -> Result<Vec<StudyRow>, CliError> {
    let problem = config.problem()?;
    let params = problem.params;
    let mut rows = Vec::new();
    if config.mode == Mode::Convex {
        let solutions: Vec<Vec<f64>> = STUDY_LEVELS
            .par_iter()
            .map(|&n| -> Result<Vec<f64>, CliError> {
                let p = Problem::uniform(params, problem.nonlinearity.clone(), n)?;
                Ok(convex_solve(&p, &config.solver)?.u_star.into_inner().into_values())
            })
            .collect::<Result<_, _>>()?;
        for (k, pair) in solutions.windows(2).enumerate() {
            let err = pair[0]
                .iter()
                .enumerate()
                .map(|(i, x)| (x - pair[1][2 * i]).abs())
                .fold(0.0f64, f64::max);
            rows.push(StudyRow {
                n: STUDY_LEVELS[k],
                quantity: "self_convergence_error",
                value: err,
            });
        }
    } else {
        let results: Vec<_> = STUDY_LEVELS
            .par_iter()
            .map(|&n| identity_residuals(params.order(), params.length(), n).map(|r| (n, r)))
            .collect::<Result<_, _>>()?;
        for (n, r) in results {
            rows.push(StudyRow { n, quantity: "left_inverse", value: r.left_inverse });
            rows.push(StudyRow { n, quantity: "semigroup", value: r.semigroup });
            rows.push(StudyRow { n, quantity: "integration_by_parts", value: r.integration_by_parts });
        }
        rows.sort_by_key(|r| match r.quantity {
            "left_inverse" => 0,
            "semigroup" => 1,
            _ => 2,
        });
    }
    let c = poincare_constant(&params);
    rows.extend(STUDY_LEVELS.iter().map(|&n| StudyRow { n, quantity: "poincare_constant", value: c }));
    Ok(rows)
}

/// Writes `convergence.csv` and returns 0 iff every contracted slope is at
/// least [`MIN_SLOPE`].
pub fn cmd_converge(config: &RunConfig) -> Result<u8, CliError> {
    let rows = convergence_rows(config)?;
    ensure_dir(&config.output_dir)?;
    let mut table = Table::new(&["n", "quantity", "value"]);
    for r in &rows {
        table.push_raw(vec![r.n.to_string(), r.quantity.to_string(), fmt_float(r.value)]);
    }
    table.write(&config.output_dir.join("convergence.csv"))?;
    let mut ok = true;
    for (q, slope) in study_slopes(&rows) {
        if has_rate_contract(q) {
            let pass = slope >= MIN_SLOPE;
            ok &= pass;
            println!("{q:<24} slope {slope:>8.4} {}", if pass { "PASS" } else { "FAIL" });
        } else {
            println!("{q:<24} flat");
        }
    }
    Ok(if ok { 0 } else { 2 })
}
