//! Associated Legendre functions of the second kind on the ray z > 1.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gamma::gamma_fn;
use super::hypergeometric::hyp2f1_with_complement;
use crate::error::{Error, Result};

/// Q^μ_degree(z) with μ ∈ {0, 1} and z > 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegendreSpec {
    pub degree: f64,
    pub order: u8,
    pub z: f64,
}

impl LegendreSpec {
    pub fn new(degree: f64, order: u8, z: f64) -> Self {
        LegendreSpec { degree, order, z }
    }
}

/// Real-valued Q^μ_d(z) for z > 1, through ₂F₁ in 1/z².
///
/// The phase e^{iμπ} of the complex-plane definition is the real sign
/// (-1)^μ for integer μ and is kept, so Q¹_0(z) = -(z² - 1)^{-1/2}.
pub fn legendre_q(s: &LegendreSpec) -> Result<f64> {
    if !(s.z > 1.0) {
        return Err(Error::domain("legendre_q", format!("requires z > 1, got {}", s.z)));
    }
    legendre_q_shifted(s.degree, s.order, s.z - 1.0)
}

/// Q^μ_d at z = 1 + `z_minus_one`, for callers that know z - 1 without
/// cancellation.
pub(crate) fn legendre_q_shifted(degree: f64, order: u8, z_minus_one: f64) -> Result<f64> {
    if order > 1 {
        return Err(Error::domain("legendre_q", format!("order must be 0 or 1, got {order}")));
    }
    if !(degree > -1.0) {
        return Err(Error::domain("legendre_q", format!("degree must exceed -1, got {degree}")));
    }
    if !(z_minus_one > 0.0) || !z_minus_one.is_finite() {
        return Err(Error::domain("legendre_q", format!("requires z > 1, got z - 1 = {z_minus_one}")));
    }
    let mu = order as f64;
    let z = 1.0 + z_minus_one;
    let z2m1 = z_minus_one * (z_minus_one + 2.0);
    let x = 1.0 / (z * z);
    let one_minus_x = z2m1 / (z * z);

    let a = 0.5 * (mu + degree + 1.0);
    let b = 0.5 * (mu + degree + 2.0);
    let c = degree + 1.5;
    let f = hyp2f1_with_complement(a, b, c, x, one_minus_x).map_err(|e| match e {
        Error::NoConvergence { detail, .. } => Error::Singularity { function: "legendre_q", detail },
        other => other,
    })?;

    let sign = if order == 1 { -1.0 } else { 1.0 };
    let pref = PI.sqrt() * gamma_fn(mu + degree + 1.0)? / (2f64.powf(degree + 1.0) * gamma_fn(c)?);
    let value = sign * pref * z.powf(-mu - degree - 1.0) * z2m1.powf(0.5 * mu) * f;
    if !value.is_finite() {
        return Err(Error::Singularity {
            function: "legendre_q",
            detail: format!("non-finite value at z - 1 = {z_minus_one:e}"),
        });
    }
    Ok(value)
}
