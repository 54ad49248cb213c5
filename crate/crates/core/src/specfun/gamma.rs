//! Gamma, log-gamma, reciprocal gamma, digamma and the Pochhammer symbol.

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Lanczos series and shifted argument for `x >= 0.5`.
fn lanczos_parts(x: f64) -> (f64, f64) {
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    (acc, x + LANCZOS_G + 0.5)
}

/// Euler's gamma function for real arguments.
///
/// Non-positive integers are poles and return [`Error::Pole`]; results beyond
/// the `f64` range return [`Error::Overflow`].
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("gamma", format!("non-finite argument {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { function: "gamma", at: x });
    }
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1 - x) = π / sin(πx).
        let g = gamma_fn(1.0 - x)?;
        return Ok(PI / ((PI * x).sin() * g));
    }
    if x > 171.62 {
        return Err(Error::Overflow { function: "gamma", at: x });
    }
    let (acc, t) = lanczos_parts(x);
    // Split the power to keep t^(x - 1/2) from overflowing before e^-t shrinks it.
    let half = t.powf(0.5 * (x - 0.5));
    Ok((2.0 * PI).sqrt() * half * (half * (-t).exp()) * acc)
}

/// Natural logarithm of Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("requires x > 0, got {x}")));
    }
    if x < 0.5 {
        let g = gamma_fn(x)?;
        return Ok(g.ln());
    }
    let (acc, t) = lanczos_parts(x);
    Ok(HALF_LN_TWO_PI + (x - 0.5) * t.ln() - t + acc.ln())
}

/// 1/Γ(x), which is entire: zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 171.62 {
        return (-ln_gamma(x).unwrap_or(f64::INFINITY)).exp();
    }
    match gamma_fn(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// Digamma ψ(x) = Γ'(x)/Γ(x).
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole { function: "digamma", at: x });
    }
    if x < 0.0 {
        // ψ(1 - x) - ψ(x) = π cot(πx)
        return Ok(digamma(1.0 - x)? - PI / (PI * x).tan());
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 20.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let series =
        inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    Ok(acc + x.ln() - 0.5 / x - series)
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1).
///
/// Computed as a direct product, so it is defined for every real `a`
/// including the poles of Γ(a).
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}
