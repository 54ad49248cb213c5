//! Numerical inversion of the Laplace transform on a Talbot or a vertical
//! contour.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContourKind {
    /// Fixed-parameter cotangent contour.
    Talbot,
    /// Line Re s = γ, trapezoid rule with epsilon acceleration.
    Vertical,
}

/// Contour parameters. For the vertical line the abscissa and truncation
/// are scale-free: the line sits at Re s = abscissa/t and the trapezoid
/// period is 2·truncation·t.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContourSpec {
    pub kind: ContourKind,
    pub abscissa: f64,
    pub node_count: usize,
    pub truncation: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec { kind: ContourKind::Talbot, abscissa: 9.0, node_count: 32, truncation: 2.0 }
    }
}

impl ContourSpec {
    pub fn vertical() -> Self {
        ContourSpec { kind: ContourKind::Vertical, node_count: 400, ..ContourSpec::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count < 8 {
            return Err(Error::invalid(format!("node_count must be at least 8, got {}", self.node_count)));
        }
        if self.kind == ContourKind::Talbot && !self.node_count.is_multiple_of(2) {
            return Err(Error::invalid("Talbot node_count must be even"));
        }
        if !(self.abscissa > 0.0) || !(self.truncation > 0.0) {
            return Err(Error::invalid("abscissa and truncation must be positive"));
        }
        Ok(())
    }
}

/// What the contour integral computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BromwichMode {
    /// Inverse Laplace transform of F at t.
    Plain,
    /// Heat kernel at time t from a Poisson kernel F(s) = P(s^{1/2}):
    /// √(π/(4t)) · L⁻¹[s^{-1/2} F(s)] evaluated at 1/(4t).
    Transmutation,
}

const SIGMA: f64 = -0.6122;
const MU: f64 = 0.5017;
const ALPHA: f64 = 0.6407;
const NU: f64 = 0.2645;

fn talbot(f: &dyn Fn(Complex64) -> Result<Complex64>, t: f64, n: usize) -> Result<f64> {
    let scale = n as f64 / t;
    let mut sum = 0.0;
    for k in 0..n / 2 {
        let theta = (2 * k + 1) as f64 * PI / n as f64;
        let at = ALPHA * theta;
        let cot = at.cos() / at.sin();
        let s = scale * Complex64::new(SIGMA + MU * theta * cot, NU * theta);
        let ds = scale * Complex64::new(MU * (cot - at / (at.sin() * at.sin())), NU);
        sum += ((s * t).exp() * f(s)? * ds).im;
    }
    Ok(2.0 * sum / n as f64)
}

fn vertical(f: &dyn Fn(Complex64) -> Result<Complex64>, t: f64, spec: &ContourSpec, n: usize) -> Result<f64> {
    let gamma = spec.abscissa / t;
    let period = spec.truncation * t;
    let mut partial = Vec::with_capacity(n + 1);
    let mut acc = 0.5 * f(Complex64::new(gamma, 0.0))?.re;
    partial.push(acc);
    for k in 1..=n {
        let w = k as f64 * PI / period;
        let s = Complex64::new(gamma, w);
        acc += (f(s)? * Complex64::from_polar(1.0, w * t)).re;
        partial.push(acc);
    }
    Ok((gamma * t).exp() / period * wynn_epsilon(&partial))
}

/// Wynn's epsilon algorithm on a sequence of partial sums; returns the last
/// even-column estimate.
fn wynn_epsilon(s: &[f64]) -> f64 {
    let n = s.len();
    if n < 3 {
        return *s.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = *s.last().unwrap();
    for col in 1..n {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let val = if d == 0.0 { f64::INFINITY } else { prev[i + 1] + 1.0 / d };
            next.push(val);
        }
        if next.iter().any(|v| !v.is_finite()) {
            break;
        }
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            best = *cur.last().unwrap();
        }
        if cur.len() < 2 {
            break;
        }
    }
    best
}

fn invert_once(f: &dyn Fn(Complex64) -> Result<Complex64>, t: f64, c: &ContourSpec, n: usize) -> Result<f64> {
    match c.kind {
        ContourKind::Talbot => talbot(f, t, n),
        ContourKind::Vertical => vertical(f, t, c, n),
    }
}

/// Inverts F on the contour `c`, once with `node_count` nodes and once with
/// twice as many, and returns the finer value. Fails when the two differ by
/// more than 1e-6 relative (with a 1e-10 absolute floor).
pub fn bromwich_invert(
    f: impl Fn(Complex64) -> Result<Complex64>,
    t: f64,
    c: &ContourSpec,
    mode: BromwichMode,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain("bromwich_invert", format!("requires t > 0, got {t}")));
    }
    c.validate()?;
    let transmuted = |s: Complex64| -> Result<Complex64> { Ok(f(s)? / s.sqrt()) };
    let (g, at): (&dyn Fn(Complex64) -> Result<Complex64>, f64) = match mode {
        BromwichMode::Plain => (&f, t),
        BromwichMode::Transmutation => (&transmuted, 0.25 / t),
    };
    let coarse = invert_once(g, at, c, c.node_count)?;
    let fine = invert_once(g, at, c, 2 * c.node_count)?;
    let scale = match mode {
        BromwichMode::Plain => 1.0,
        BromwichMode::Transmutation => (PI / (4.0 * t)).sqrt(),
    };
    let (coarse, fine) = (scale * coarse, scale * fine);
    if !fine.is_finite() || (fine - coarse).abs() > 1e-6 * fine.abs() + 1e-10 {
        return Err(Error::NoConvergence {
            routine: "bromwich_invert",
            detail: format!("{} and {} nodes give {coarse:e} and {fine:e}", c.node_count, 2 * c.node_count),
        });
    }
    Ok(fine)
}
