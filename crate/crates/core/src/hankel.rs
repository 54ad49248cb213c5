//! Hankel transform of order ν and the oscillatory-quadrature oracles built
//! on it.
//!
//! The transform pair used throughout is
//!
//! ```text
//! (H_ν f)(Ω) = ∫_0^∞ (XΩ)^{1/2} J_ν(XΩ) f(X) dX,
//! ```
//!
//! which is its own inverse and diagonalizes ∂²_X + (1/4 - ν²)/X² with
//! eigenvalue -Ω². The oracles below evaluate the same Bessel-product
//! integrals that the closed-form kernels claim to sum, by brute-force
//! panel-wise Gauss–Legendre quadrature, so they share no code path with
//! the kernels beyond `J_ν` itself.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Evaluated, Result, Warning};
use crate::quadrature::{trapezoid, GaussLegendre};
use crate::specfun::BesselJ;

pub use crate::quadrature::QuadratureSpec;
pub use crate::sampled::{CubicSpline, SampledFunction};

/// Upper bound on quadrature nodes per transform evaluation.
const MAX_NODES: usize = 4_000_000;

fn check_order(order: f64) -> Result<()> {
    if !(order > -1.0) || !order.is_finite() {
        return Err(Error::domain("hankel", format!("order must exceed -1, got {order}")));
    }
    Ok(())
}

/// Quadrature nodes over the support of `f` with the sampled values folded
/// into the weights. Panels follow the knots of the cubic interpolant and
/// are split further until their width is at most π/(4 Ω_max).
fn weighted_nodes(f: &SampledFunction, omega_max: f64, q: &QuadratureSpec) -> (Vec<f64>, Vec<f64>, Vec<Warning>) {
    let mut warnings = Vec::new();
    let Some((lo, hi)) = f.support() else {
        return (Vec::new(), Vec::new(), warnings);
    };
    let spline = f.spline();
    let knots = spline.knots();
    let gl = GaussLegendre::new(q.nodes_per_panel);
    let max_width = if omega_max > 0.0 { PI / (4.0 * omega_max) } else { f64::INFINITY };
    let intervals = knots.windows(2).filter(|w| w[0] >= lo && w[1] <= hi).count().max(1);
    let min_split = q.panels.div_ceil(intervals).max(1);

    let mut planned: Vec<(usize, f64, f64, usize)> = Vec::new();
    let mut total = 0usize;
    for (i, w) in knots.windows(2).enumerate() {
        if w[0] < lo || w[1] > hi {
            continue;
        }
        let split = (((w[1] - w[0]) / max_width).ceil() as usize).max(min_split);
        total += split * gl.len();
        planned.push((i, w[0], w[1], split));
    }
    if total > MAX_NODES {
        let scale = MAX_NODES as f64 / total as f64;
        for p in planned.iter_mut() {
            p.3 = ((p.3 as f64 * scale).floor() as usize).max(1);
        }
        warnings.push(Warning::Truncation {
            detail: format!("oscillation bound needs {total} nodes; capped at {MAX_NODES}, panel phase exceeds π/4"),
        });
    }

    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for (i, a, b, split) in planned {
        let h = (b - a) / split as f64;
        for k in 0..split {
            let pa = a + k as f64 * h;
            for (x, w) in gl.mapped(pa, pa + h) {
                xs.push(x);
                ws.push(w * spline.eval_in(i, x));
            }
        }
    }
    (xs, ws, warnings)
}

/// Evaluates H_ν f on `out_grid` by composite Gauss–Legendre quadrature over
/// the support of the cubic interpolant of `f`.
pub fn hankel_transform(
    f: &SampledFunction,
    order: f64,
    out_grid: &[f64],
    q: &QuadratureSpec,
) -> Result<Evaluated<SampledFunction>> {
    check_order(order)?;
    q.validate()?;
    let omega_max = out_grid.iter().cloned().fold(0.0, f64::max);
    let (xs, ws, warnings) = weighted_nodes(f, omega_max, q);
    let bessel = BesselJ::new(order)?;
    let values: Vec<f64> = out_grid
        .par_iter()
        .map(|&omega| {
            xs.iter()
                .zip(&ws)
                .map(|(&x, &w)| {
                    let arg = x * omega;
                    w * arg.sqrt() * bessel.eval(arg)
                })
                .sum::<f64>()
        })
        .collect();
    Ok(Evaluated::with_warnings(SampledFunction::new(out_grid.to_vec(), values)?, warnings))
}

/// ∫_0^∞ e^{-px} J_ν(ax) J_ν(bx) x dx by truncated composite Gauss–Legendre.
///
/// The integral is cut at x_max with e^{-p x_max} equal to the tail tolerance.
pub fn weighted_laplace_integral(order: f64, p: f64, a: f64, b: f64, q: &QuadratureSpec) -> Result<Evaluated<f64>> {
    if !(order > -0.5) {
        return Err(Error::domain("weighted_laplace_integral", format!("order must exceed -1/2, got {order}")));
    }
    if !(p > 0.0 && a > 0.0 && b > 0.0) {
        return Err(Error::domain("weighted_laplace_integral", "p, a, b must be positive"));
    }
    q.validate()?;
    let mut warnings = Vec::new();
    if p < 0.05 {
        warnings.push(Warning::SlowDecay { p });
    }
    let x_max = -q.tail_tolerance.ln() / p;
    let width = (PI / (4.0 * (a + b))).min(2.0 / p);
    let panels = ((x_max / width).ceil() as usize).max(q.panels);
    let gl = GaussLegendre::new(q.nodes_per_panel);
    let bessel = BesselJ::new(order)?;
    let h = x_max / panels as f64;
    let value: f64 = (0..panels)
        .into_par_iter()
        .map(|k| {
            let lo = k as f64 * h;
            gl.mapped(lo, lo + h)
                .map(|(x, w)| w * (-p * x).exp() * bessel.eval(a * x) * bessel.eval(b * x) * x)
                .sum::<f64>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    Ok(Evaluated::with_warnings(value, warnings))
}

/// Heat kernel of ∂²_X + (1/4 - ν²)/X² from its spectral representation
/// ∫_0^∞ (XX')^{1/2} J_ν(XΩ) J_ν(X'Ω) e^{-tΩ²} Ω dΩ, cut at
/// Ω_max = max(8/√t, q.truncation), 40 by default.
pub fn heat_spectral_integral(order: f64, t: f64, x: f64, xp: f64, q: &QuadratureSpec) -> Result<f64> {
    check_order(order)?;
    if !(t > 0.0) {
        return Err(Error::domain("heat_spectral_integral", format!("requires t > 0, got {t}")));
    }
    if !(x > 0.0 && xp > 0.0) {
        return Err(Error::domain("heat_spectral_integral", "coordinates must be positive"));
    }
    q.validate()?;
    let omega_max = (8.0 / t.sqrt()).max(q.truncation);
    let width = (PI / (4.0 * (x + xp))).min(0.5 * t.sqrt());
    let panels = ((omega_max / width).ceil() as usize).max(q.panels);
    let gl = GaussLegendre::new(q.nodes_per_panel);
    let bessel = BesselJ::new(order)?;
    let h = omega_max / panels as f64;
    let sum: f64 = (0..panels)
        .into_par_iter()
        .map(|k| {
            let lo = k as f64 * h;
            gl.mapped(lo, lo + h)
                .map(|(om, w)| w * bessel.eval(x * om) * bessel.eval(xp * om) * (-t * om * om).exp() * om)
                .sum::<f64>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    Ok((x * xp).sqrt() * sum)
}

/// Residuals of the four transform properties, each relative to the norm of
/// the input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HankelReport {
    /// ‖H²f - f‖₂ / ‖f‖₂
    pub involution: f64,
    /// |‖Hf‖₂ - ‖f‖₂| / ‖f‖₂
    pub isometry: f64,
    /// |⟨Hf, g⟩ - ⟨f, Hg⟩| / (‖f‖₂ ‖g‖₂) for a fixed companion g
    pub self_adjoint: f64,
    /// ‖H(L_ν f) + Ω² Hf‖₂ / ‖f‖₂ with L_ν by central differences
    pub diagonalization: f64,
}

impl HankelReport {
    pub fn max_residual(&self) -> f64 {
        self.involution.max(self.isometry).max(self.self_adjoint).max(self.diagonalization)
    }
}

/// Number of samples of the reference resolution.
pub const REFERENCE_POINTS: usize = 2048;
/// Span [0, REFERENCE_SPAN] of the reference grid.
pub const REFERENCE_SPAN: f64 = 20.0;

/// Gaussian bump e^{-(X-7)²/2} on `points` samples of [0, 20]. Negligible
/// at both ends of the grid.
pub fn reference_bump(points: usize) -> Result<SampledFunction> {
    SampledFunction::from_fn(0.0, REFERENCE_SPAN, points, |x| (-0.5 * (x - 7.0) * (x - 7.0)).exp())
}

/// Companion function for the self-adjointness residual.
fn companion(grid: &[f64]) -> Result<SampledFunction> {
    let values = grid.iter().map(|&x| x * (-(x - 5.0) * (x - 5.0)).exp()).collect();
    SampledFunction::new(grid.to_vec(), values)
}

/// Central-difference L_ν f = f'' + (1/4 - ν²) f / X² on the grid of `f`,
/// zero at the end points.
pub fn apply_bessel_operator(f: &SampledFunction, order: f64) -> Result<SampledFunction> {
    let g = f.grid();
    let v = f.values();
    let n = g.len();
    let mut out = vec![0.0; n];
    let coeff = 0.25 - order * order;
    for i in 1..n.saturating_sub(1) {
        let h0 = g[i] - g[i - 1];
        let h1 = g[i + 1] - g[i];
        let d2 = 2.0 * (h0 * v[i + 1] - (h0 + h1) * v[i] + h1 * v[i - 1]) / (h0 * h1 * (h0 + h1));
        out[i] = d2 + coeff * v[i] / (g[i] * g[i]);
    }
    SampledFunction::new(g.to_vec(), out)
}

fn weighted_l2(grid: &[f64], v: &[f64]) -> f64 {
    let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
    trapezoid(grid, &sq).sqrt()
}

fn inner(grid: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    trapezoid(grid, &prod)
}

/// Checks involution, isometry, self-adjointness and diagonalization of
/// H_ν on `f`, using the grid of `f` for both X and Ω.
pub fn check_hankel_properties(f: &SampledFunction, order: f64, q: &QuadratureSpec) -> Result<HankelReport> {
    check_order(order)?;
    let grid = f.grid().to_vec();
    let norm_f = f.l2_norm();
    if norm_f == 0.0 {
        return Ok(HankelReport { involution: 0.0, isometry: 0.0, self_adjoint: 0.0, diagonalization: 0.0 });
    }
    let hf = hankel_transform(f, order, &grid, q)?.value;
    let hhf = hankel_transform(&hf, order, &grid, q)?.value;

    let diff: Vec<f64> = hhf.values().iter().zip(f.values()).map(|(a, b)| a - b).collect();
    let involution = weighted_l2(&grid, &diff) / norm_f;
    let isometry = (hf.l2_norm() - norm_f).abs() / norm_f;

    let g = companion(&grid)?;
    let hg = hankel_transform(&g, order, &grid, q)?.value;
    let lhs = inner(&grid, hf.values(), g.values());
    let rhs = inner(&grid, f.values(), hg.values());
    let self_adjoint = (lhs - rhs).abs() / (norm_f * g.l2_norm());

    let lf = apply_bessel_operator(f, order)?;
    let hlf = hankel_transform(&lf, order, &grid, q)?.value;
    let resid: Vec<f64> = hlf.values().iter().zip(hf.values()).zip(&grid).map(|((a, b), om)| a + om * om * b).collect();
    let diagonalization = weighted_l2(&grid, &resid) / norm_f;

    Ok(HankelReport { involution, isometry, self_adjoint, diagonalization })
}

/// Quadrature used by the property checks: knot-aligned panels with four
/// Gauss nodes.
pub fn property_quadrature() -> QuadratureSpec {
    QuadratureSpec { nodes_per_panel: 4, panels: 1, ..QuadratureSpec::default() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_maps_to_zero() {
        let f = SampledFunction::from_fn(0.0, 10.0, 101, |_| 0.0).unwrap();
        let out: Vec<f64> = (0..20).map(|i| i as f64 * 0.25).collect();
        let h = hankel_transform(&f, 1.0, &out, &QuadratureSpec::default()).unwrap();
        assert!(h.value.values().iter().all(|v| *v == 0.0));
        let r = check_hankel_properties(&f, 1.0, &property_quadrature()).unwrap();
        assert_eq!(r.max_residual(), 0.0);
    }

    #[test]
    fn self_reciprocal_gaussian() {
        // X^{ν+1/2} e^{-X²/2} is its own order-ν transform.
        let f = SampledFunction::from_fn(0.0, 12.0, 1201, |x| x * x * (-0.5 * x * x).exp()).unwrap();
        let out: Vec<f64> = (0..=50).map(|i| i as f64 * 0.1).collect();
        let h = hankel_transform(&f, 1.5, &out, &QuadratureSpec::default()).unwrap().value;
        for (&om, &v) in out.iter().zip(h.values()) {
            let want = om * om * (-0.5 * om * om).exp();
            assert!((v - want).abs() < 1e-6, "Ω = {om}: {v} vs {want}");
        }
    }

    #[test]
    fn self_reciprocal_order_zero() {
        // X^{1/2} has a square-root cusp at 0, so the grid is finer.
        let f = SampledFunction::from_fn(0.0, 12.0, 4801, |x| x.sqrt() * (-0.5 * x * x).exp()).unwrap();
        let out: Vec<f64> = (0..=50).map(|i| i as f64 * 0.1).collect();
        let h = hankel_transform(&f, 0.0, &out, &QuadratureSpec::default()).unwrap().value;
        for (&om, &v) in out.iter().zip(h.values()) {
            let want = om.sqrt() * (-0.5 * om * om).exp();
            assert!((v - want).abs() < 1e-6, "Ω = {om}: {v} vs {want}");
        }
    }

    #[test]
    fn linearity() {
        let f = reference_bump(400).unwrap();
        let g = companion(f.grid()).unwrap();
        let combo: Vec<f64> = f.values().iter().zip(g.values()).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
        let fg = SampledFunction::new(f.grid().to_vec(), combo).unwrap();
        let out: Vec<f64> = (1..40).map(|i| i as f64 * 0.2).collect();
        let q = QuadratureSpec::default();
        let hf = hankel_transform(&f, 1.5, &out, &q).unwrap().value;
        let hg = hankel_transform(&g, 1.5, &out, &q).unwrap().value;
        let hfg = hankel_transform(&fg, 1.5, &out, &q).unwrap().value;
        for i in 0..out.len() {
            let lin = 2.0 * hf.values()[i] - 0.5 * hg.values()[i];
            assert!((hfg.values()[i] - lin).abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_laplace_half_order_closed_form() {
        // ν = 1/2: (1/(π√(ab))) [p/(p²+(a-b)²) - p/(p²+(a+b)²)]
        let q = QuadratureSpec::default();
        let v = weighted_laplace_integral(0.5, 1.0, 1.0, 1.0, &q).unwrap().value;
        assert_relative_eq!(v, 0.8 / PI, max_relative = 1e-10);
        assert_relative_eq!(v, 0.254_647_908_947_032_5, max_relative = 1e-10);
        let (p, a, b): (f64, f64, f64) = (0.3, 0.7, 2.1);
        let want = (p / (p * p + (a - b).powi(2)) - p / (p * p + (a + b).powi(2))) / (PI * (a * b).sqrt());
        let v = weighted_laplace_integral(0.5, p, a, b, &q).unwrap().value;
        assert_relative_eq!(v, want, max_relative = 1e-9);
    }

    #[test]
    fn weighted_laplace_reference_value() {
        // Dense reference quadrature, converged to 25 digits.
        let q = QuadratureSpec::default();
        let v = weighted_laplace_integral(1.0, 1.0, 1.0, 2.0, &q).unwrap().value;
        assert!((v - 0.064_334_042_436_545_26).abs() < 1e-8);
        // self-convergence under refinement
        let fine = QuadratureSpec { panels: 4096, nodes_per_panel: 12, ..q };
        let v2 = weighted_laplace_integral(1.0, 1.0, 1.0, 2.0, &fine).unwrap().value;
        assert!((v - v2).abs() < 1e-8);
    }

    #[test]
    fn weighted_laplace_symmetric_and_decaying() {
        let q = QuadratureSpec::default();
        let ab = weighted_laplace_integral(1.5, 0.4, 0.8, 1.9, &q).unwrap().value;
        let ba = weighted_laplace_integral(1.5, 0.4, 1.9, 0.8, &q).unwrap().value;
        assert!((ab - ba).abs() < 1e-12);
        // a = b, p -> ∞ decays like p^-2
        let v1 = weighted_laplace_integral(1.0, 50.0, 1.0, 1.0, &q).unwrap().value;
        let v2 = weighted_laplace_integral(1.0, 100.0, 1.0, 1.0, &q).unwrap().value;
        assert!(v2 < v1 && v1 < 1e-3);
        let slow = weighted_laplace_integral(1.0, 0.01, 1.0, 1.0, &q).unwrap();
        assert!(matches!(slow.warnings[0], Warning::SlowDecay { .. }));
    }

    #[test]
    fn heat_spectral_values() {
        let q = QuadratureSpec::default();
        let v = heat_spectral_integral(0.5, 1.0, 1.0, 1.0, &q).unwrap();
        let want = (1.0 - (-1f64).exp()) / (4.0 * PI).sqrt();
        assert!((v - want).abs() < 1e-10);
        // Weber second exponential integral
        let w = heat_spectral_integral(1.0, 0.5, 1.0, 2.0, &q).unwrap();
        let weber =
            2f64.sqrt() / (2.0 * 0.5) * (-(5.0) / 2.0f64).exp() * crate::specfun::bessel_i(1.0, 2.0, false).unwrap();
        assert!((w - weber).abs() < 1e-8);
        assert!((w - 0.184_650_221_858_898_88).abs() < 1e-8);
        assert!(heat_spectral_integral(1.0, 1e4, 1.0, 2.0, &q).unwrap().abs() < 1e-6);
    }

    #[test]
    fn operator_second_order() {
        let f = reference_bump(801).unwrap();
        let lf = apply_bessel_operator(&f, 1.0).unwrap();
        for (i, &x) in f.grid().iter().enumerate().skip(100).take(400) {
            let e = (-0.5 * (x - 7.0) * (x - 7.0)).exp();
            let exact = ((x - 7.0) * (x - 7.0) - 1.0) * e - 0.75 * e / (x * x);
            // h²/12 max|f''''| with h = 0.025
            assert!((lf.values()[i] - exact).abs() < 3e-4);
        }
    }
}
