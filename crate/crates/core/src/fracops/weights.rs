use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fractional order in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<FracOrder> for f64 {
    fn from(order: FracOrder) -> f64 {
        order.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Piecewise-linear integrand against exact kernel moments.
    ProductTrapezoid,
    /// Binomial coefficients of `(1 - z)^alpha`.
    GrunwaldLetnikov,
}

/// Convolution weights for a uniform-grid fractional operator.
///
/// For [`Scheme::ProductTrapezoid`] the vector holds the interior kernel
/// weights `(k+1)^(1+a) - 2 k^(1+a) + (k-1)^(1+a)` with `w[0] = 1`; the start
/// weight depends on the target node and comes from [`Self::start_weight`].
/// For [`Scheme::GrunwaldLetnikov`] it holds `w_0 = 1`,
/// `w_k = w_{k-1} (k - 1 - a) / k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionWeights {
    scheme: Scheme,
    order: FracOrder,
    w: Vec<f64>,
}

impl ConvolutionWeights {
    pub fn product_trapezoid(order: FracOrder, intervals: usize) -> Self {
        let e = 1.0 + order.value();
        let mut w = Vec::with_capacity(intervals + 1);
        w.push(1.0);
        for k in 1..=intervals {
            let k = k as f64;
            w.push((k + 1.0).powf(e) - 2.0 * k.powf(e) + (k - 1.0).powf(e));
        }
        Self {
            scheme: Scheme::ProductTrapezoid,
            order,
            w,
        }
    }

    pub fn grunwald_letnikov(order: FracOrder, intervals: usize) -> Self {
        let a = order.value();
        let mut w = Vec::with_capacity(intervals + 1);
        w.push(1.0);
        for k in 1..=intervals {
            let prev = w[k - 1];
            w.push(prev * (k as f64 - 1.0 - a) / k as f64);
        }
        Self {
            scheme: Scheme::GrunwaldLetnikov,
            order,
            w,
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// Weight of the sample at `t_0` when integrating up to node `n >= 1`
    /// (product-trapezoid only).
    pub fn start_weight(&self, n: usize) -> f64 {
        debug_assert_eq!(self.scheme, Scheme::ProductTrapezoid);
        let a = self.order.value();
        let n = n as f64;
        (n - 1.0).powf(1.0 + a) - (n - a - 1.0) * n.powf(a)
    }
}
