//! Heat kernels from Poisson kernels by Bromwich inversion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bromwich::{bromwich_invert, BromwichMode, ContourSpec};
use super::{poisson_kernel_at_complex_height, Order};
use crate::coordmap::MapKind;
use crate::error::{Error, Result};
use crate::specfun::bessel_i;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeatKind {
    Euclidean,
    Trig,
    Hyp,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatQuery {
    pub time: f64,
    pub interior: f64,
    pub boundary: f64,
}

/// Heat kernel at time t between `interior` and `boundary`, from the
/// Poisson kernel at complex height s^{1/2}.
pub fn heat_kernel(kind: HeatKind, o: Order, hq: HeatQuery, c: &ContourSpec, map_kind: Option<MapKind>) -> Result<f64> {
    let geometry = match (kind, map_kind) {
        (HeatKind::Euclidean, _) => None,
        (HeatKind::Trig, None | Some(MapKind::Trig)) => Some(MapKind::Trig),
        (HeatKind::Hyp, Some(k)) if k.is_hyperbolic() => Some(k),
        (HeatKind::Hyp, _) => {
            return Err(Error::invalid("hyperbolic heat kernel needs map_kind hyp_paper or hyp_conformal"))
        }
        (HeatKind::Trig, Some(k)) => {
            return Err(Error::invalid(format!("map_kind {k} does not apply to the trig kernel")))
        }
    };
    if !(hq.interior > 0.0) || !(hq.boundary > 0.0) {
        return Err(Error::domain("heat_kernel", "coordinates must be positive"));
    }
    let f = |s: Complex64| poisson_kernel_at_complex_height(o, geometry, s.sqrt(), hq.interior, hq.boundary);
    bromwich_invert(f, hq.time, c, BromwichMode::Transmutation)
}

/// (XX')^{1/2}/(2t) · e^{-(X²+X'²)/(4t)} · I_ν(XX'/(2t)), evaluated with the
/// scaled Bessel function.
pub fn heat_weber(nu: f64, t: f64, x: f64, xp: f64) -> Result<f64> {
    if !(t > 0.0 && x > 0.0 && xp > 0.0) {
        return Err(Error::domain("heat_weber", "t, X, X' must be positive"));
    }
    let arg = x * xp / (2.0 * t);
    let d = x - xp;
    Ok((x * xp).sqrt() / (2.0 * t) * (-d * d / (4.0 * t)).exp() * bessel_i(nu, arg, true)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn q(t: f64, x: f64, xp: f64) -> HeatQuery {
        HeatQuery { time: t, interior: x, boundary: xp }
    }

    #[test]
    fn half_order_closed_form() {
        let o = Order::new(0.5).unwrap();
        let v = heat_kernel(HeatKind::Euclidean, o, q(1.0, 1.0, 1.0), &ContourSpec::default(), None).unwrap();
        let want = (1.0 - (-1f64).exp()) / (4.0 * PI).sqrt();
        assert!((v - want).abs() < 1e-9, "{v}");
    }

    #[test]
    fn weber_identity() {
        for nu in [0.5, 1.0, 2.0] {
            let o = Order::new(nu).unwrap();
            for t in [0.1, 0.5, 1.0, 2.0] {
                let v = heat_kernel(HeatKind::Euclidean, o, q(t, 1.0, 2.0), &ContourSpec::default(), None).unwrap();
                let w = heat_weber(nu, t, 1.0, 2.0).unwrap();
                assert!((v - w).abs() < 1e-8, "ν={nu} t={t}: {v} vs {w}");
            }
        }
    }

    #[test]
    fn vertical_contour_agrees() {
        let o = Order::new(1.0).unwrap();
        let v = heat_kernel(HeatKind::Euclidean, o, q(0.5, 1.0, 2.0), &ContourSpec::vertical(), None).unwrap();
        assert!((v - 0.184_650_221_858_898_9).abs() < 1e-7, "{v}");
    }

    #[test]
    fn trig_matches_spectral() {
        let o = Order::new(1.5).unwrap();
        for t in [0.1, 0.5, 2.0] {
            let v = heat_kernel(HeatKind::Trig, o, q(t, 1.0, 1.7), &ContourSpec::default(), None).unwrap();
            let s = super::super::trig_heat_spectral(1.5, t, 1.0, 1.7).unwrap();
            assert!((v - s).abs() < 1e-8, "t={t}: {v} vs {s}");
        }
    }

    #[test]
    fn off_diagonal_decay() {
        let o = Order::new(1.0).unwrap();
        let v = heat_kernel(HeatKind::Euclidean, o, q(0.01, 1.0, 2.0), &ContourSpec::default(), None).unwrap();
        assert!(v.abs() < 1e-9);
    }
}
