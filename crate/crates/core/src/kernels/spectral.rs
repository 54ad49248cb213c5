//! Eigenfunction expansions of the trigonometric Pöschl–Teller problem.
//!
//! With λ = ν + 1/2 the operator -∂²_θ + (ν² - 1/4)/sin²θ on (0, π) has
//! eigenfunctions sin^λ θ C_n^λ(cos θ) and eigenvalues (n + λ)². These sums
//! share no code with the closed-form kernels.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::ln_gamma;

const MAX_MODES: usize = 200_000;

fn expand(nu: f64, theta: f64, theta_p: f64, decay: impl Fn(f64) -> f64) -> Result<f64> {
    if !(nu > -0.5) {
        return Err(Error::domain("trig_spectral", format!("order must exceed -1/2, got {nu}")));
    }
    if !(theta > 0.0 && theta < PI && theta_p > 0.0 && theta_p < PI) {
        return Err(Error::domain("trig_spectral", "angles must lie in (0, π)"));
    }
    let lam = nu + 0.5;
    let (x, xp) = (theta.cos(), theta_p.cos());
    let weight = (theta.sin() * theta_p.sin()).powf(lam);
    // ln of π 2^{1-2λ} / Γ(λ)², the n-independent part of the norm
    let ln_base = PI.ln() + (1.0 - 2.0 * lam) * 2f64.ln() - 2.0 * ln_gamma(lam)?;
    let ln_g2l = ln_gamma(2.0 * lam)?;
    let (mut c0, mut c0p) = (1.0, 1.0);
    let (mut c1, mut c1p) = (2.0 * lam * x, 2.0 * lam * xp);
    // ln(Γ(n+2λ)/n!) updated incrementally
    let mut ln_ratio = ln_g2l;
    let mut sum = 0.0;
    for n in 0..MAX_MODES {
        let nf = n as f64;
        if n > 0 {
            ln_ratio += ((nf - 1.0 + 2.0 * lam) / nf).ln();
        }
        let (cn, cnp) = if n == 0 { (c0, c0p) } else { (c1, c1p) };
        let ln_norm = ln_base + ln_ratio - (nf + lam).ln();
        let d = decay(nf + lam);
        sum += d * cn * cnp * (-ln_norm).exp();
        if n > 0 {
            let next = (2.0 * x * (nf + lam) * c1 - (nf + 2.0 * lam - 1.0) * c0) / (nf + 1.0);
            let nextp = (2.0 * xp * (nf + lam) * c1p - (nf + 2.0 * lam - 1.0) * c0p) / (nf + 1.0);
            c0 = c1;
            c0p = c1p;
            c1 = next;
            c1p = nextp;
        }
        if d < 1e-18 && n > 4 {
            return Ok(weight * sum);
        }
    }
    Err(Error::NoConvergence { routine: "trig_spectral", detail: format!("{MAX_MODES} modes") })
}

/// Σ e^{-y(n+λ)} φ_n(θ) φ_n(θ') / ‖φ_n‖².
pub fn trig_poisson_spectral(nu: f64, y: f64, theta: f64, theta_p: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain("trig_poisson_spectral", "height must be positive"));
    }
    expand(nu, theta, theta_p, |k| (-y * k).exp())
}

/// Σ e^{-t(n+λ)²} φ_n(θ) φ_n(θ') / ‖φ_n‖².
pub fn trig_heat_spectral(nu: f64, t: f64, theta: f64, theta_p: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("trig_heat_spectral", "time must be positive"));
    }
    expand(nu, theta, theta_p, |k| (-t * k * k).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_sine_series() {
        // λ = 1: φ_n = sin((n+1)θ) up to normalization, ‖·‖² = π/2
        let (t, a, b) = (0.3, 0.8, 2.1);
        let direct: f64 = (1..200)
            .map(|m| (-t * (m * m) as f64).exp() * (m as f64 * a).sin() * (m as f64 * b).sin() * 2.0 / PI)
            .sum();
        let v = trig_heat_spectral(0.5, t, a, b).unwrap();
        assert!((v - direct).abs() < 1e-13);
    }
}
