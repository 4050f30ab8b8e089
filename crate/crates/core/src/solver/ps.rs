use crate::model::Nonlinearity;
use crate::space::FracParams;

use super::{SolveReport, SolverOptions};

/// Boundedness summary of a solve's iterate history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsDiagnostic {
    /// `1/p - 1/mu`; positive exactly when `mu > p`.
    pub coefficient: f64,
    /// Max over median of the iterate norms.
    pub ratio: f64,
    pub bounded: bool,
    pub hypothesis_ok: bool,
}

/// Informational only; never fails.
pub fn ps_diagnostic(
    report: &SolveReport,
    params: &FracParams,
    nl: &Nonlinearity,
    opts: &SolverOptions,
) -> PsDiagnostic {
    let coefficient = 1.0 / params.p() - 1.0 / nl.mu;
    let mut norms: Vec<f64> = report
        .iterate_norm_history
        .iter()
        .copied()
        .filter(|x| x.is_finite())
        .collect();
    norms.sort_by(f64::total_cmp);
    let ratio = match norms.len() {
        0 => 1.0,
        len => {
            let median = if len % 2 == 1 {
                norms[len / 2]
            } else {
                0.5 * (norms[len / 2 - 1] + norms[len / 2])
            };
            let max = norms[len - 1];
            if median > 0.0 {
                max / median
            } else if max == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        }
    };
    PsDiagnostic {
        coefficient,
        ratio,
        bounded: ratio <= opts.ps_ratio_cap,
        hypothesis_ok: coefficient > 0.0,
    }
}
