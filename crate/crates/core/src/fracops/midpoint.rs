use nalgebra::DMatrix;

use crate::gamma::gamma;

use super::grid::Grid;
use super::weights::FracOrder;

/// Left Caputo derivative of the piecewise-linear interpolant, evaluated at
/// the cell midpoints `t_{n-1/2}`, `n = 1..=N`.
///
/// This is the derivative that enters the discrete energy and the working
/// seminorm: integrating its `p`-th power with the midpoint rule is exact at
/// order one (cell slopes) and stays coercive for every `0 < a <= 1`.
///
/// `D_n = h^(-a) / Gamma(2 - a) * sum_{j <= n} c_{n-j} (u_j - u_{j-1})` with
/// `c_0 = (1/2)^(1-a)` and `c_k = (k + 1/2)^(1-a) - (k - 1/2)^(1-a)`.
#[derive(Debug, Clone)]
pub struct MidpointDerivative {
    grid: Grid,
    order: FracOrder,
    scale: f64,
    coeffs: Vec<f64>,
}

impl MidpointDerivative {
    pub fn new(grid: Grid, order: FracOrder) -> Self {
        let a = order.value();
        let e = 1.0 - a;
        let n = grid.intervals();
        let mut coeffs = Vec::with_capacity(n);
        coeffs.push(0.5f64.powf(e));
        for k in 1..n {
            let k = k as f64;
            coeffs.push((k + 0.5).powf(e) - (k - 0.5).powf(e));
        }
        Self {
            grid,
            order,
            scale: grid.step().powf(-a) / gamma(2.0 - a),
            coeffs,
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    /// Midpoints `t_{n-1/2}` of the cells.
    pub fn midpoints(&self) -> Vec<f64> {
        let h = self.grid.step();
        (0..self.grid.intervals()).map(|n| (n as f64 + 0.5) * h).collect()
    }

    /// True when the operator is the plain cell slope (order one).
    pub fn is_local(&self) -> bool {
        self.order.is_integer()
    }

    /// Cell values from nodal samples (length `N + 1` in, `N` out).
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        debug_assert_eq!(u.len(), self.grid.len());
        let diffs: Vec<f64> = u.windows(2).map(|p| p[1] - p[0]).collect();
        if self.is_local() {
            return diffs.iter().map(|d| self.scale * d).collect();
        }
        let n = diffs.len();
        (0..n)
            .map(|cell| {
                let acc: f64 = (0..=cell).map(|j| self.coeffs[cell - j] * diffs[j]).sum();
                self.scale * acc
            })
            .collect()
    }

    /// Transpose action: nodal vector `r` with `r_i = sum_n y_n dD_n/du_i`.
    pub fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        let n = self.grid.intervals();
        debug_assert_eq!(y.len(), n);
        // g[j] = sum_{cell >= j} y[cell] c[cell - j]: the sensitivity of the
        // energy to the difference u_{j+1} - u_j.
        let g: Vec<f64> = if self.is_local() {
            y.to_vec()
        } else {
            (0..n)
                .map(|j| (j..n).map(|cell| y[cell] * self.coeffs[cell - j]).sum())
                .collect()
        };
        let mut r = vec![0.0; n + 1];
        for (j, gj) in g.iter().enumerate() {
            r[j] -= self.scale * gj;
            r[j + 1] += self.scale * gj;
        }
        r
    }

    /// Dense matrix of the operator restricted to interior nodes,
    /// shape `N x (N - 1)`.
    pub fn interior_matrix(&self) -> DMatrix<f64> {
        let n = self.grid.intervals();
        let mut m = DMatrix::zeros(n, n - 1);
        for cell in 0..n {
            for i in 1..n {
                // node i enters the differences j = i - 1 (+) and j = i (-)
                let mut v = 0.0;
                if i - 1 <= cell {
                    v += self.coeffs[cell - (i - 1)];
                }
                if i <= cell {
                    v -= self.coeffs[cell - i];
                }
                m[(cell, i - 1)] = self.scale * v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_linear_data() {
        let grid = Grid::new(2.0, 40).unwrap();
        for &a in &[0.3, 0.75, 1.0] {
            let op = MidpointDerivative::new(grid, FracOrder::new(a).unwrap());
            let u: Vec<f64> = grid.nodes().collect();
            let d = op.apply(&u);
            for (t, v) in op.midpoints().iter().zip(&d) {
                let exact = t.powf(1.0 - a) / gamma(2.0 - a);
                assert!((v - exact).abs() < 1e-12 * (1.0 + exact), "a = {a}");
            }
        }
    }

    #[test]
    fn transpose_is_adjoint() {
        let grid = Grid::new(1.0, 17).unwrap();
        let op = MidpointDerivative::new(grid, FracOrder::new(0.55).unwrap());
        let u: Vec<f64> = grid.nodes().map(|t| (5.0 * t).cos()).collect();
        let y: Vec<f64> = (0..17).map(|k| (k as f64 * 0.7).sin()).collect();
        let lhs: f64 = op.apply(&u).iter().zip(&y).map(|(a, b)| a * b).sum();
        let rhs: f64 = op.apply_transpose(&y).iter().zip(&u).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn interior_matrix_matches_apply() {
        let grid = Grid::new(1.0, 12).unwrap();
        for &a in &[0.6, 1.0] {
            let op = MidpointDerivative::new(grid, FracOrder::new(a).unwrap());
            let mut u: Vec<f64> = grid.nodes().map(|t| t * (1.0 - t) * (1.0 + t)).collect();
            u[0] = 0.0;
            u[12] = 0.0;
            let m = op.interior_matrix();
            let x = nalgebra::DVector::from_column_slice(&u[1..12]);
            let via_matrix = &m * x;
            for (a, b) in op.apply(&u).iter().zip(via_matrix.iter()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
