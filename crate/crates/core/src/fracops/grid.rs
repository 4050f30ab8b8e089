use std::ops::Deref;

use crate::error::{Error, Result};

/// Uniform partition of `[0, T]` into `N` subintervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    length: f64,
    intervals: usize,
}

impl Grid {
    pub fn new(length: f64, intervals: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        if intervals < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 subintervals, got {intervals}"
            )));
        }
        Ok(Self { length, intervals })
    }

    /// Interval length `T`.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of subintervals `N`.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    /// Number of nodes, `N + 1`.
    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.length / self.intervals as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.intervals {
            self.length
        } else {
            i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }

    /// Composite trapezoid weights on the nodes.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let h = self.step();
        let mut w = vec![h; self.len()];
        w[0] = 0.5 * h;
        w[self.intervals] = 0.5 * h;
        w
    }

    /// Composite trapezoid rule applied to nodal samples.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        let n = self.intervals;
        let inner: f64 = values[1..n].iter().sum();
        self.step() * (inner + 0.5 * (values[0] + values[n]))
    }
}

/// Samples of a real function on the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().map(f).collect())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &GridFunction, b: f64) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    /// Pointwise product.
    pub fn product(&self, other: &GridFunction) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(x, y)| x * y).collect(),
        }
    }

    /// Samples of `t -> u(T - t)`.
    pub fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Trapezoid integral over `[0, T]`.
    pub fn integral(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    /// Largest absolute difference over interior nodes.
    pub fn interior_sup_distance(&self, other: &GridFunction) -> f64 {
        let n = self.values.len() - 1;
        self.values[1..n]
            .iter()
            .zip(&other.values[1..n])
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// A grid function with `u(0) = u(T) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletFunction(GridFunction);

impl DirichletFunction {
    pub fn new(u: GridFunction) -> Result<Self> {
        let scale = 1.0 + u.sup_norm();
        if u.first().abs() > 1e-14 * scale {
            return Err(Error::BoundaryNotZero {
                side: "t = 0",
                value: u.first(),
            });
        }
        if u.last().abs() > 1e-14 * scale {
            return Err(Error::BoundaryNotZero {
                side: "t = T",
                value: u.last(),
            });
        }
        let grid = u.grid();
        let mut values = u.into_values();
        let n = values.len() - 1;
        values[0] = 0.0;
        values[n] = 0.0;
        Ok(Self(GridFunction { grid, values }))
    }

    /// Builds from samples, overwriting both endpoint values with zero.
    pub fn clamped(grid: Grid, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        let n = values.len() - 1;
        values[0] = 0.0;
        values[n] = 0.0;
        Ok(Self(GridFunction::new(grid, values)?))
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(GridFunction::from_fn(grid, f)?)
    }

    pub fn zeros(grid: Grid) -> Self {
        Self(GridFunction::zeros(grid))
    }

    pub fn as_grid_function(&self) -> &GridFunction {
        &self.0
    }

    pub fn into_inner(self) -> GridFunction {
        self.0
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.scaled(c))
    }

    pub fn combine(&self, a: f64, other: &DirichletFunction, b: f64) -> Self {
        Self(self.0.combine(a, &other.0, b))
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.reversed())
    }
}

impl Deref for DirichletFunction {
    type Target = GridFunction;

    fn deref(&self) -> &GridFunction {
        &self.0
    }
}
