//! Coordinate substitutions that carry the Pöschl–Teller geometries onto the
//! half-plane, and a finite-difference checker for the conjugation identity
//! between the transported operators.
//!
//! All three maps are written in characteristic form
//!
//! ```text
//! X = φ(ξ) + φ(η),    Y = (φ(ξ) - φ(η)) / i
//! ```
//!
//! with φ = tan or tanh. The trigonometric map and the conformal hyperbolic
//! map take complex-conjugate ξ, η and are the images of w ↦ 2 tan(w/2) and
//! w ↦ 2 tanh(w/2). The literal hyperbolic map takes real ξ = (x+y)/2,
//! η = (x-y)/2, which is a wave-operator substitution and not conformal.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};

/// Point (θ, y) of the half-strip (0, π) × [0, ∞).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripPoint {
    pub theta: f64,
    pub y: f64,
}

/// Point (x, y) of the quarter-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarterPoint {
    pub x: f64,
    pub y: f64,
}

/// Point (X, Y) of the half-plane X > 0 with height Y.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "Y")]
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    /// w ↦ 2 tan(w/2) on the half-strip.
    Trig,
    /// Literal tanh substitution with real characteristic coordinates.
    HypPaper,
    /// w ↦ 2 tanh(w/2), defined for 0 ≤ y < π.
    HypConformal,
}

impl MapKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::Trig => "trig",
            MapKind::HypPaper => "hyp_paper",
            MapKind::HypConformal => "hyp_conformal",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MapKind::Trig => "conformal map",
            MapKind::HypPaper => "literal paper map",
            MapKind::HypConformal => "derived conformal map",
        }
    }

    pub fn is_hyperbolic(self) -> bool {
        !matches!(self, MapKind::Trig)
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trig" => Ok(MapKind::Trig),
            "hyp_paper" => Ok(MapKind::HypPaper),
            "hyp_conformal" => Ok(MapKind::HypConformal),
            other => Err(Error::invalid(format!("unknown map kind {other:?}"))),
        }
    }
}

/// Characteristic coordinates of a point, possibly complex.
#[derive(Clone, Copy, Debug)]
struct CharCoords {
    xi: Complex64,
    eta: Complex64,
}

impl CharCoords {
    fn new(kind: MapKind, a: Complex64, y: Complex64) -> Self {
        let i = Complex64::i();
        match kind {
            MapKind::Trig | MapKind::HypConformal => CharCoords { xi: 0.5 * (a + i * y), eta: 0.5 * (a - i * y) },
            MapKind::HypPaper => CharCoords { xi: 0.5 * (a + y), eta: 0.5 * (a - y) },
        }
    }

    fn image(self, kind: MapKind) -> (Complex64, Complex64) {
        let (p, q) = match kind {
            MapKind::Trig => (self.xi.tan(), self.eta.tan()),
            _ => (self.xi.tanh(), self.eta.tanh()),
        };
        let y = match kind {
            MapKind::HypPaper => p - q,
            _ => (p - q) / Complex64::i(),
        };
        (p + q, y)
    }
}

/// X₁ = 2 sin θ/(cos θ + cosh y), Ỹ₁ = 2 sinh y/(cos θ + cosh y).
pub fn trig_map(p: StripPoint) -> HalfPlanePoint {
    let d = p.theta.cos() + p.y.cosh();
    HalfPlanePoint { x: 2.0 * p.theta.sin() / d, y: 2.0 * p.y.sinh() / d }
}

/// Image of a quarter-plane point under either hyperbolic map.
pub fn hyp_map(kind: MapKind, p: QuarterPoint) -> Result<HalfPlanePoint> {
    match kind {
        MapKind::HypPaper => {
            let d = p.x.cosh() + p.y.cosh();
            Ok(HalfPlanePoint { x: 2.0 * p.x.sinh() / d, y: 2.0 * p.y.sinh() / d })
        }
        MapKind::HypConformal => {
            if !(p.y < PI) {
                return Err(Error::domain("hyp_map", format!("conformal map needs y < π, got {}", p.y)));
            }
            let d = p.x.cosh() + p.y.cos();
            Ok(HalfPlanePoint { x: 2.0 * p.x.sinh() / d, y: 2.0 * p.y.sin() / d })
        }
        MapKind::Trig => Err(Error::invalid("hyp_map needs a hyperbolic map kind")),
    }
}

/// Maps (a, y) with a = θ or x according to `kind`.
pub fn map_point(kind: MapKind, a: f64, y: f64) -> Result<HalfPlanePoint> {
    match kind {
        MapKind::Trig => Ok(trig_map(StripPoint { theta: a, y })),
        _ => hyp_map(kind, QuarterPoint { x: a, y }),
    }
}

/// Analytic continuation of the map to complex height y, used by the heat
/// kernels. Returns (X, Y).
pub fn map_complex(kind: MapKind, a: f64, y: Complex64) -> (Complex64, Complex64) {
    CharCoords::new(kind, Complex64::new(a, 0.0), y).image(kind)
}

/// Boundary image X' of a boundary coordinate and the Jacobian dX'/ds.
pub fn boundary_pullback(kind: MapKind, s: f64) -> Result<(f64, f64)> {
    match kind {
        MapKind::Trig => {
            if !(s > 0.0 && s < PI) {
                return Err(Error::domain("boundary_pullback", format!("θ' must lie in (0, π), got {s}")));
            }
            let c = (0.5 * s).cos();
            Ok((2.0 * (0.5 * s).tan(), 1.0 / (c * c)))
        }
        _ => {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::domain("boundary_pullback", format!("x' must be positive, got {s}")));
            }
            let c = (0.5 * s).cosh();
            Ok((2.0 * (0.5 * s).tanh(), 1.0 / (c * c)))
        }
    }
}

/// |W'|² of the conformal maps. For the literal hyperbolic map this is the
/// analogous factor 4/(cosh x + cosh y)², which is not a Jacobian.
pub fn conformal_factor(kind: MapKind, a: f64, y: f64) -> f64 {
    let d = match kind {
        MapKind::Trig => a.cos() + y.cosh(),
        MapKind::HypConformal => a.cosh() + y.cos(),
        MapKind::HypPaper => a.cosh() + y.cosh(),
    };
    4.0 / (d * d)
}

/// Singular part of the transported potential: 1/sin²θ or 1/sinh²x.
pub fn potential_profile(kind: MapKind, a: f64) -> f64 {
    let s = match kind {
        MapKind::Trig => a.sin(),
        _ => a.sinh(),
    };
    1.0 / (s * s)
}

/// Max of |∂X/∂a - ∂Y/∂y| and |∂X/∂y + ∂Y/∂a| by central differences.
pub fn cauchy_riemann_residual(kind: MapKind, a: f64, y: f64, h: f64) -> Result<f64> {
    let m = |a, y| map_point(kind, a, y);
    let (pa, ma) = (m(a + h, y)?, m(a - h, y)?);
    let (py, my) = (m(a, y + h)?, m(a, y - h)?);
    let xa = (pa.x - ma.x) / (2.0 * h);
    let ya = (pa.y - ma.y) / (2.0 * h);
    let xy = (py.x - my.x) / (2.0 * h);
    let yy = (py.y - my.y) / (2.0 * h);
    Ok((xa - yy).abs().max((xy + ya).abs()))
}

/// Smooth test function on the half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TestFunction {
    /// exp(-((X-X₀)² + (Y-Y₀)²)/w²)
    GaussianBump { center: [f64; 2], width: f64 },
}

impl TestFunction {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            TestFunction::GaussianBump { center, width } => {
                let dx = x - center[0];
                let dy = y - center[1];
                (-(dx * dx + dy * dy) / (width * width)).exp()
            }
        }
    }
}

impl Default for TestFunction {
    fn default() -> Self {
        TestFunction::GaussianBump { center: [1.6, 0.7], width: 0.5 }
    }
}

/// Rectangular point set in the source coordinates (a, y), a = θ or x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub a_range: [f64; 2],
    pub y_range: [f64; 2],
    pub a_count: usize,
    pub y_count: usize,
}

impl SampleGrid {
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.a_count * self.y_count);
        for j in 0..self.y_count {
            let y = lerp(self.y_range, j, self.y_count);
            for i in 0..self.a_count {
                out.push((lerp(self.a_range, i, self.a_count), y));
            }
        }
        out
    }

    pub fn default_for(kind: MapKind) -> Self {
        match kind {
            MapKind::Trig => SampleGrid { a_range: [0.7, 2.2], y_range: [0.2, 1.2], a_count: 7, y_count: 6 },
            _ => SampleGrid { a_range: [0.6, 2.0], y_range: [0.2, 1.2], a_count: 7, y_count: 6 },
        }
    }
}

fn lerp(r: [f64; 2], i: usize, n: usize) -> f64 {
    if n <= 1 {
        r[0]
    } else {
        r[0] + (r[1] - r[0]) * i as f64 / (n - 1) as f64
    }
}

/// Residual norms with their behavior under successive halvings of h.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Max residual at the finest step.
    pub max_residual: f64,
    /// Root-mean-square residual at the finest step.
    pub l2_residual: f64,
    /// Smallest of the per-halving orders of the max residual.
    pub empirical_order: f64,
    pub kind: String,
    pub c: f64,
    pub nu: f64,
    /// Coarsest step.
    pub h: f64,
    pub steps: Vec<f64>,
    pub max_by_step: Vec<f64>,
    pub orders: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl ResidualReport {
    /// Assembles a report from per-step (max, rms) pairs.
    pub(crate) fn from_levels(
        kind: String,
        c: f64,
        nu: f64,
        steps: Vec<f64>,
        norms: Vec<(f64, f64)>,
        warnings: Vec<Warning>,
    ) -> Self {
        let max_by_step: Vec<f64> = norms.iter().map(|n| n.0).collect();
        let orders: Vec<f64> = max_by_step.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        let empirical_order = orders.iter().cloned().fold(f64::INFINITY, f64::min);
        let (max_residual, l2_residual) = *norms.last().unwrap_or(&(0.0, 0.0));
        ResidualReport {
            max_residual,
            l2_residual,
            empirical_order: if orders.is_empty() { f64::NAN } else { empirical_order },
            kind,
            c,
            nu,
            h: steps.first().copied().unwrap_or(f64::NAN),
            steps,
            max_by_step,
            orders,
            warnings: warnings.iter().map(|w| w.to_string()).collect(),
        }
    }
}

/// Halving ladder h, h/2, …, h/2^(levels-1).
pub fn halvings(h: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| h / f64::powi(2.0, k as i32)).collect()
}

fn laplacian(f: impl Fn(f64, f64) -> f64, a: f64, y: f64, h: f64) -> f64 {
    (f(a + h, y) + f(a - h, y) + f(a, y + h) + f(a, y - h) - 4.0 * f(a, y)) / (h * h)
}

/// Residual of the conjugation identity at one point:
/// |W'|⁻² [Δ + c (1/4-ν²) V_kind] (F∘W) - [Δ + (1/4-ν²)/X²] F at W(a, y).
pub fn conjugation_residual_at(
    kind: MapKind,
    c: f64,
    nu: f64,
    f: &TestFunction,
    a: f64,
    y: f64,
    h: f64,
) -> Result<f64> {
    let strength = 0.25 - nu * nu;
    let pulled = |a: f64, y: f64| match map_point(kind, a, y) {
        Ok(p) => f.eval(p.x, p.y),
        Err(_) => f64::NAN,
    };
    let w = map_point(kind, a, y)?;
    let g = pulled(a, y);
    let left =
        (laplacian(pulled, a, y, h) + c * strength * potential_profile(kind, a) * g) / conformal_factor(kind, a, y);
    let right = laplacian(|x, yy| f.eval(x, yy), w.x, w.y, h) + strength / (w.x * w.x) * f.eval(w.x, w.y);
    let r = left - right;
    if !r.is_finite() {
        return Err(Error::domain("conjugation_residual", format!("stencil leaves the domain at ({a}, {y})")));
    }
    Ok(r)
}

/// Conjugation residual over `grid` for the steps h, h/2, h/4, h/8.
pub fn conjugation_residual(
    kind: MapKind,
    c: f64,
    nu: f64,
    f: &TestFunction,
    grid: &SampleGrid,
    h: f64,
) -> Result<ResidualReport> {
    if !(h > 0.0) {
        return Err(Error::invalid("step must be positive"));
    }
    let steps = halvings(h, 4);
    let points = grid.points();
    let mut warnings = Vec::new();
    let edge = |a: f64| match kind {
        MapKind::Trig => a.min(PI - a),
        _ => a,
    };
    if points.iter().any(|&(a, _)| edge(a) <= 4.0 * h) {
        warnings.push(Warning::SingularProximity {
            detail: format!("sample grid within 4h of the singular edge for {kind}"),
        });
    }
    let mut norms = Vec::new();
    for &step in &steps {
        let mut max: f64 = 0.0;
        let mut sq = 0.0;
        for &(a, y) in &points {
            let r = conjugation_residual_at(kind, c, nu, f, a, y, step)?;
            max = max.max(r.abs());
            sq += r * r;
        }
        norms.push((max, (sq / points.len().max(1) as f64).sqrt()));
    }
    Ok(ResidualReport::from_levels(kind.to_string(), c, nu, steps, norms, warnings))
}
