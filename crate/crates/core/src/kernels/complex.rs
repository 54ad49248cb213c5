//! Complex-height continuation of the Euclidean kernel through the toroidal
//! form of the Legendre function,
//!
//! ```text
//! Q_{ν-1/2}(cosh η) = A e^{-(ν+1/2)η} ₂F₁(1/2, ν+1/2; ν+1; e^{-2η}),
//! A = √π Γ(ν+1/2)/Γ(ν+1),
//! ```
//!
//! which converges for every z off the cut (-∞, 1].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{gamma_fn, MAX_TERMS};

/// Largest |w| accepted by the direct series.
pub const MAX_MODULUS: f64 = 0.995;

/// ₂F₁(a, b; c; w) for complex w by the direct series.
pub fn gauss_2f1_complex(a: f64, b: f64, c: f64, w: Complex64) -> Result<Complex64> {
    if w.norm() > MAX_MODULUS {
        return Err(Error::Singularity {
            function: "gauss_2f1_complex",
            detail: format!("|w| = {} exceeds {MAX_MODULUS}", w.norm()),
        });
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= w * ((a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        routine: "gauss_2f1_complex",
        detail: format!("{MAX_TERMS} terms at |w| = {}", w.norm()),
    })
}

/// Euclidean Poisson kernel P_ν(Y, X, X') continued to complex Y and X,
/// with real boundary point X' > 0. Equals -(Y/(π X X')) Q'_{ν-1/2}(z).
pub fn poisson_kernel_complex(nu: f64, y: Complex64, x: Complex64, xp: f64) -> Result<Complex64> {
    if !(nu > -0.5) {
        return Err(Error::domain("poisson_kernel_complex", format!("order must exceed -1/2, got {nu}")));
    }
    if !(xp > 0.0) {
        return Err(Error::domain("poisson_kernel_complex", "boundary point must be positive"));
    }
    let d = x - xp;
    let zm1 = (y * y + d * d) / (2.0 * x * xp);
    if zm1.im == 0.0 && zm1.re <= 0.0 && zm1.re >= -2.0 {
        return Err(Error::Singularity {
            function: "poisson_kernel_complex",
            detail: format!("Legendre argument z - 1 = {zm1} lies on the cut"),
        });
    }
    // η = acosh z = 2 asinh √((z-1)/2), principal branch, Re η > 0
    let eta = 2.0 * (zm1 * 0.5).sqrt().asinh();
    let w = (-2.0 * eta).exp();
    let a = 0.5;
    let b = nu + 0.5;
    let c = nu + 1.0;
    let f = gauss_2f1_complex(a, b, c, w)?;
    let df = gauss_2f1_complex(a + 1.0, b + 1.0, c + 1.0, w)? * (a * b / c);
    let amp = PI.sqrt() * gamma_fn(nu + 0.5)? / gamma_fn(nu + 1.0)?;
    let bracket = (nu + 0.5) * f + 2.0 * w * df;
    let value = y / (PI * x * xp) * 2.0 * amp * (-(nu + 1.5) * eta).exp() * bracket / (1.0 - w);
    if !value.is_finite() {
        return Err(Error::Singularity {
            function: "poisson_kernel_complex",
            detail: format!("non-finite value at Y = {y}, X = {x}"),
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn complex_series_matches_log() {
        // ₂F₁(1, 1; 2; w) = -ln(1-w)/w
        let w = Complex64::new(0.3, 0.4);
        let f = gauss_2f1_complex(1.0, 1.0, 2.0, w).unwrap();
        let want = -(1.0 - w).ln() / w;
        assert!((f - want).norm() < 1e-14);
    }

    #[test]
    fn real_axis_values() {
        let cases = [
            (0.5, 1.0, 1.0, 1.0, 0.254_647_908_947_032_54),
            (1.0, 0.5, 1.0, 2.0, 0.085_791_480_089_240_02),
            (1.5, 0.3, 1.0, 1.2, 0.609_276_716_830_289_3),
            (2.0, 0.1, 1.0, 1.0, 3.042_405_493_329_714),
            (1.5, 1.0, 0.5, 2.0, 0.014_148_908_153_896_404),
            (1.0, 0.1, 2.0, 2.0, 3.170_444_969_294_542),
        ];
        for (nu, y, x, xp, want) in cases {
            let v = poisson_kernel_complex(nu, c(y), c(x), xp).unwrap();
            assert!((v.re - want).abs() < 1e-12 * want, "{nu} {y} {x} {xp}: {v}");
            assert!(v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let y = Complex64::new(0.7, 0.9);
        let a = poisson_kernel_complex(1.5, y, c(1.2), 0.8).unwrap();
        let b = poisson_kernel_complex(1.5, y.conj(), c(1.2), 0.8).unwrap();
        assert!((a - b.conj()).norm() < 1e-14 * a.norm());
    }
}
