//! Bessel functions of the first kind J_ν and modified Bessel functions I_ν
//! of real order ν > -1 and real argument x >= 0.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gamma::recip_gamma;
use crate::error::{Error, Result};

/// Power series below this argument, Hankel asymptotic expansion above.
pub const SERIES_SWITCH: f64 = 12.0;
const SERIES_TERMS: usize = 48;
const ASYMPTOTIC_TERMS: usize = 64;
const I_ASYMPTOTIC_SWITCH: f64 = 30.0;

/// J_ν(x) query.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesselSpec {
    pub order: f64,
    pub x: f64,
}

impl BesselSpec {
    pub fn new(order: f64, x: f64) -> Self {
        BesselSpec { order, x }
    }
}

fn check_order(function: &'static str, order: f64) -> Result<()> {
    if !(order > -1.0) || !order.is_finite() {
        return Err(Error::domain(function, format!("order must exceed -1, got {order}")));
    }
    Ok(())
}

/// Coefficients a_k(ν) = Π_{j=1..k} (4ν² - (2j-1)²) / (k! 8^k) of the Hankel
/// expansions.
fn hankel_coefficients(order: f64) -> [f64; ASYMPTOTIC_TERMS] {
    let mu = 4.0 * order * order;
    let mut a = [0.0; ASYMPTOTIC_TERMS];
    a[0] = 1.0;
    for k in 1..ASYMPTOTIC_TERMS {
        let odd = (2 * k - 1) as f64;
        a[k] = a[k - 1] * (mu - odd * odd) / (k as f64 * 8.0);
    }
    a
}

/// J_ν for a fixed order, with the series and asymptotic coefficients
/// precomputed. Use this when evaluating many arguments of the same order.
#[derive(Clone, Debug)]
pub struct BesselJ {
    order: f64,
    series: [f64; SERIES_TERMS],
    hankel: [f64; ASYMPTOTIC_TERMS],
}

impl BesselJ {
    pub fn new(order: f64) -> Result<Self> {
        check_order("bessel_j", order)?;
        let mut series = [0.0; SERIES_TERMS];
        series[0] = recip_gamma(order + 1.0);
        for k in 1..SERIES_TERMS {
            let kf = k as f64;
            series[k] = -series[k - 1] / (kf * (kf + order));
        }
        Ok(BesselJ { order, series, hankel: hankel_coefficients(order) })
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    /// J_ν(x) for x >= 0. Negative arguments are outside the real domain for
    /// non-integer orders and give NaN.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 || x.is_nan() {
            return f64::NAN;
        }
        if x == 0.0 {
            return if self.order == 0.0 {
                1.0
            } else if self.order > 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
        }
        if x <= SERIES_SWITCH {
            self.eval_series(x)
        } else {
            self.eval_asymptotic(x)
        }
    }

    fn eval_series(&self, x: f64) -> f64 {
        let q = 0.25 * x * x;
        let mut acc = 0.0;
        for &c in self.series.iter().rev() {
            acc = acc * q + c;
        }
        let half = 0.5 * x;
        let pow = if self.order == 0.0 {
            1.0
        } else if self.order == 1.0 {
            half
        } else {
            half.powf(self.order)
        };
        pow * acc
    }

    fn eval_asymptotic(&self, x: f64) -> f64 {
        let (p, q) = hankel_pq(&self.hankel, x);
        let chi = x - (0.5 * self.order + 0.25) * PI;
        (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}

/// Sums P and Q of the Hankel expansion, stopping at the smallest term.
fn hankel_pq(a: &[f64; ASYMPTOTIC_TERMS], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut q = 0.0;
    let mut xk = 1.0;
    let mut prev = f64::INFINITY;
    for (k, &ak) in a.iter().enumerate() {
        let term = ak * xk;
        if term.abs() > prev && k > 2 {
            break;
        }
        // (-1)^m a_{2m} / x^{2m} and (-1)^m a_{2m+1} / x^{2m+1}
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term == 0.0 || term.abs() < 1e-17 * p.abs().max(1e-300) {
            break;
        }
        prev = term.abs();
        xk /= x;
    }
    (p, q)
}

/// J_ν(x).
pub fn bessel_j(s: &BesselSpec) -> Result<f64> {
    if !(s.x >= 0.0) || !s.x.is_finite() {
        return Err(Error::domain("bessel_j", format!("requires x >= 0, got {}", s.x)));
    }
    let j = BesselJ::new(s.order)?;
    let v = j.eval(s.x);
    if v.is_infinite() {
        return Err(Error::Singularity {
            function: "bessel_j",
            detail: format!("negative order {} at x = 0", s.order),
        });
    }
    Ok(v)
}

/// I_ν(x), or e^{-x} I_ν(x) when `scaled` is set.
pub fn bessel_i(order: f64, x: f64, scaled: bool) -> Result<f64> {
    check_order("bessel_i", order)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel_i", format!("requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return match order {
            0.0 => Ok(1.0),
            o if o > 0.0 => Ok(0.0),
            _ => Err(Error::Singularity { function: "bessel_i", detail: format!("negative order {order} at x = 0") }),
        };
    }
    if x <= I_ASYMPTOTIC_SWITCH {
        let q = 0.25 * x * x;
        let mut term = recip_gamma(order + 1.0);
        let mut sum = term;
        let mut k = 1.0;
        loop {
            term *= q / (k * (k + order));
            sum += term;
            if term < 1e-17 * sum || k > 500.0 {
                break;
            }
            k += 1.0;
        }
        let v = (0.5 * x).powf(order) * sum;
        return Ok(if scaled { v * (-x).exp() } else { v });
    }
    // e^x / sqrt(2πx) Σ (-1)^k a_k / x^k
    let a = hankel_coefficients(order);
    let mut sum = 0.0;
    let mut xk = 1.0;
    let mut prev = f64::INFINITY;
    for (k, &ak) in a.iter().enumerate() {
        let term = ak * xk;
        if term.abs() > prev && k > 2 {
            break;
        }
        sum += if k % 2 == 0 { term } else { -term };
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        prev = term.abs();
        xk /= x;
    }
    let scaled_value = sum / (2.0 * PI * x).sqrt();
    if scaled {
        return Ok(scaled_value);
    }
    if x > 700.0 {
        return Err(Error::Overflow { function: "bessel_i", at: x });
    }
    Ok(scaled_value * x.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn j(nu: f64, x: f64) -> f64 {
        bessel_j(&BesselSpec::new(nu, x)).unwrap()
    }

    #[test]
    fn leading_term() {
        assert_eq!(j(0.0, 0.0), 1.0);
        assert_eq!(j(2.0, 0.0), 0.0);
        assert_eq!(bessel_i(0.0, 0.0, false).unwrap(), 1.0);
        assert_eq!(bessel_i(1.0, 0.0, false).unwrap(), 0.0);
    }

    #[test]
    fn half_integer_closed_forms() {
        for &x in &[0.3, 1.0, 5.0, 11.9, 12.1, 20.0, 47.0] {
            let jhalf = (2.0 / (PI * x)).sqrt() * x.sin();
            let jthree = (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos());
            assert!((j(0.5, x) - jhalf).abs() < 1e-11, "J_1/2({x})");
            assert!((j(1.5, x) - jthree).abs() < 1e-11, "J_3/2({x})");
        }
        assert!(j(0.5, PI).abs() < 1e-15);
        let ihalf = (2.0 / PI).sqrt() * 1f64.sinh();
        assert_relative_eq!(bessel_i(0.5, 1.0, false).unwrap(), ihalf, max_relative = 1e-14);
        assert_relative_eq!(bessel_i(0.5, 1.0, false).unwrap(), 0.937_674_888_245_487_6, max_relative = 1e-13);
        for &x in &[10.0, 29.0, 31.0, 80.0] {
            let want = (2.0 / (PI * x)).sqrt() * x.sinh() * (-x).exp();
            assert_relative_eq!(bessel_i(0.5, x, true).unwrap(), want, max_relative = 1e-13);
        }
    }

    #[test]
    fn first_zero_of_j0() {
        assert!(j(0.0, 2.404_825_557_7).abs() < 1e-9);
    }

    // Frozen values from an arbitrary-precision reference implementation.
    #[test]
    fn reference_values() {
        assert!((j(2.5, 13.7) - -0.212_156_348_344_594_62).abs() < 1e-12);
        assert!((j(5.0, 30.0) - -0.143_240_295_512_077_1).abs() < 1e-12);
        assert!((j(0.3, 12.0) - -0.058_942_057_108_976_8).abs() < 1e-12);
        assert!((j(4.2, 7.5) - 0.086_787_217_999_711_88).abs() < 1e-12);
        assert_relative_eq!(bessel_i(1.5, 40.0, false).unwrap(), 1.447_651_291_029_641_5e16, max_relative = 1e-12);
        assert_relative_eq!(bessel_i(2.0, 3.3, false).unwrap(), 3.102_655_401_330_95, max_relative = 1e-13);
    }

    #[test]
    fn series_asymptotic_overlap() {
        // Both representations agree near the switch point.
        for &nu in &[0.0, 0.5, 1.0, 2.3, 5.0] {
            let b = BesselJ::new(nu).unwrap();
            for &x in &[11.0, 12.0, 13.0] {
                let s = b.eval_series(x);
                let a = b.eval_asymptotic(x);
                assert!((s - a).abs() < 1e-10, "nu={nu} x={x}: {s} vs {a}");
            }
        }
    }

    #[test]
    fn small_argument_limit() {
        use crate::specfun::gamma_fn;
        let x: f64 = 1e-4;
        for &nu in &[0.0f64, 0.5, 1.0, 2.0] {
            let ratio = j(nu, x) * 2f64.powf(nu) * gamma_fn(1.0 + nu).unwrap() / x.powf(nu);
            assert!((ratio - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn large_argument_envelope() {
        for &nu in &[0.0f64, 0.5, 1.0, 2.0] {
            let mut x = 30.0;
            while x < 200.0 {
                let env = (2.0 / (PI * x)).sqrt() * (x - nu * PI / 2.0 - PI / 4.0).cos();
                assert!((j(nu, x) - env).abs() <= 1.0 / x);
                x += 3.7;
            }
        }
    }

    #[test]
    fn errors() {
        assert!(bessel_j(&BesselSpec::new(-1.0, 1.0)).is_err());
        assert!(bessel_j(&BesselSpec::new(0.5, -1.0)).is_err());
        assert!(matches!(bessel_i(0.0, 800.0, false), Err(Error::Overflow { .. })));
        assert!(bessel_i(0.0, 800.0, true).is_ok());
    }
}
