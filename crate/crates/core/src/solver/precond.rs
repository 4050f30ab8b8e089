//! Sobolev-type preconditioner `P = D^T diag(h w) D` on interior nodes.
//!
//! For `p >= 2`, `w_n = (p - 1) max(|D_n u|, floor)^(p - 2)` is the floored
//! curvature of the `p`-Dirichlet term at the current state. For regularized
//! `p < 2` it is the secant weight `(|D_n u|^2 + eps^2)^((p - 2) / 2)`, which
//! makes the quadratic model a majorant of the Dirichlet term.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::energy::EnergyFunctional;
use crate::error::{Error, Result};

const RELATIVE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone)]
pub(crate) struct Preconditioner {
    p: f64,
    eps: f64,
    h: f64,
    local_scale: Option<f64>,
    matrix: Option<DMatrix<f64>>,
    cached: Option<Cholesky<f64, Dyn>>,
}

impl Preconditioner {
    pub fn new(energy: &EnergyFunctional) -> Self {
        let op = energy.derivative();
        let grid = op.grid();
        let (local_scale, matrix) = if op.is_local() {
            (Some(1.0 / grid.step()), None)
        } else {
            (None, Some(op.interior_matrix()))
        };
        Self {
            p: energy.p(),
            eps: energy.eps_reg(),
            h: grid.step(),
            local_scale,
            matrix,
            cached: None,
        }
    }

    fn cell_weights(&self, cells: &[f64]) -> Vec<f64> {
        let p = self.p;
        if p == 2.0 {
            return vec![self.h; cells.len()];
        }
        if self.eps > 0.0 {
            let e2 = self.eps * self.eps;
            return cells
                .iter()
                .map(|z| self.h * (z * z + e2).powf(0.5 * (p - 2.0)))
                .collect();
        }
        let max = cells.iter().fold(0.0f64, |m, z| m.max(z.abs()));
        let floor = if max > 0.0 { RELATIVE_FLOOR * max } else { 1.0 };
        cells
            .iter()
            .map(|z| self.h * (p - 1.0) * z.abs().max(floor).powf(p - 2.0))
            .collect()
    }

    /// Solves `P d = g` on the interior nodes; `cells` are the derivative
    /// cell values of the current state. Endpoint entries of the result are 0.
    pub fn solve(&mut self, cells: &[f64], g: &[f64]) -> Result<Vec<f64>> {
        let n = g.len() - 1;
        let w = self.cell_weights(cells);
        let interior = &g[1..n];
        let x = match self.local_scale {
            Some(s) => thomas(&w, s * s, interior),
            None => {
                let chol = match (&self.cached, self.p == 2.0) {
                    (Some(c), true) => c.clone(),
                    _ => {
                        let m = self.matrix.as_ref().expect("dense operator");
                        let mut weighted = m.clone();
                        for (mut row, wn) in weighted.row_iter_mut().zip(&w) {
                            row *= *wn;
                        }
                        let p = m.transpose() * weighted;
                        let c = Cholesky::new(p).ok_or_else(|| {
                            Error::Linear("preconditioner is not positive definite".into())
                        })?;
                        if self.p == 2.0 {
                            self.cached = Some(c.clone());
                        }
                        c
                    }
                };
                chol.solve(&DVector::from_column_slice(interior))
                    .iter()
                    .copied()
                    .collect()
            }
        };
        let mut d = Vec::with_capacity(n + 1);
        d.push(0.0);
        d.extend(x);
        d.push(0.0);
        Ok(d)
    }
}

/// Tridiagonal solve for the order-one operator: diagonal
/// `s2 (w_{i-1} + w_i)`, off-diagonal `-s2 w_i`.
fn thomas(w: &[f64], s2: f64, rhs: &[f64]) -> Vec<f64> {
    let m = rhs.len();
    let diag = |i: usize| s2 * (w[i] + w[i + 1]);
    let off = |i: usize| -s2 * w[i + 1];
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    let mut denom = diag(0);
    c[0] = if m > 1 { off(0) / denom } else { 0.0 };
    d[0] = rhs[0] / denom;
    for i in 1..m {
        denom = diag(i) - off(i - 1) * c[i - 1];
        if i + 1 < m {
            c[i] = off(i) / denom;
        }
        d[i] = (rhs[i] - off(i - 1) * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; m];
    x[m - 1] = d[m - 1];
    for i in (0..m - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::Problem;
    use crate::model::{Nonlinearity, Profile};
    use crate::space::FracParams;

    fn apply_p(energy: &EnergyFunctional, pre: &Preconditioner, cells: &[f64], x: &[f64]) -> Vec<f64> {
        let op = energy.derivative();
        let w = pre.cell_weights(cells);
        let dx: Vec<f64> = op.apply(x).iter().zip(&w).map(|(a, b)| a * b).collect();
        let mut r = op.apply_transpose(&dx);
        let n = r.len() - 1;
        r[0] = 0.0;
        r[n] = 0.0;
        r
    }

    #[test]
    fn solves_reproduce_right_hand_side() {
        for &(alpha, p) in &[(1.0, 2.0), (1.0, 3.0), (0.7, 2.0), (0.7, 1.5)] {
            let params = FracParams::new(alpha, p, 1.0).unwrap();
            let problem =
                Problem::uniform(params, Nonlinearity::forcing_only(Profile::constant(1.0)), 40).unwrap();
            let energy = EnergyFunctional::new(&problem);
            let u: Vec<f64> = problem.grid.nodes().map(|t| (3.0 * t).sin() * t * (1.0 - t)).collect();
            let cells = energy.derivative_cells(&u);
            let mut pre = Preconditioner::new(&energy);
            let mut g: Vec<f64> = (0..41).map(|i| ((i * 7) % 5) as f64 - 2.0).collect();
            g[0] = 0.0;
            g[40] = 0.0;
            let d = pre.solve(&cells, &g).unwrap();
            let back = apply_p(&energy, &pre, &cells, &d);
            for (a, b) in back.iter().zip(&g) {
                assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "alpha {alpha} p {p}");
            }
        }
    }
}
