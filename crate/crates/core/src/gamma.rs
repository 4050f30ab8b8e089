//! Gamma function via the Lanczos approximation (g = 7, nine coefficients).
//!
//! Relative error is below 1e-13 on (0, 10]; arguments below 1/2 go through
//! the reflection formula.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;

const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real x that is not a non-positive integer.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn known_values() {
        assert!(rel(gamma(1.0), 1.0) < 1e-14);
        assert!(rel(gamma(0.5), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(1.5), PI.sqrt() / 2.0) < 1e-14);
        let mut fact = 1.0;
        for n in 1..=10 {
            assert!(rel(gamma(n as f64), fact) < 1e-13, "n = {n}");
            fact *= n as f64;
        }
    }

    #[test]
    fn recurrence_holds_on_unit_interval() {
        for k in 1..200 {
            let x = k as f64 / 200.0;
            assert!(rel(gamma(x + 1.0), x * gamma(x)) < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn agrees_with_statrs() {
        for k in 1..=1000 {
            let x = k as f64 / 100.0;
            let reference = statrs::function::gamma::gamma(x);
            assert!(rel(gamma(x), reference) < 1e-10, "x = {x}");
        }
    }
}
