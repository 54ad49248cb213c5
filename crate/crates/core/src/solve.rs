//! Dirichlet solutions assembled from the closed-form kernels, and their
//! comparison with the finite-difference solver.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coordmap::MapKind;
use crate::error::{Error, Evaluated, Result, Warning};
use crate::kernels::{poisson_kernel_euclidean, poisson_kernel_hyp, poisson_kernel_trig, KernelQuery, Order};
use crate::pde::{fd_solve_dirichlet, Grid2D, OperatorKind, OperatorTag, SolverStats, DEFAULT_TOLERANCE};
use crate::quadrature::{simpson_panel, QuadratureSpec};
use crate::sampled::SampledFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainTag {
    Euclidean,
    Trig,
    Hyp,
}

impl DomainTag {
    pub fn operator(self) -> OperatorTag {
        match self {
            DomainTag::Euclidean => OperatorTag::InverseSquare,
            DomainTag::Trig => OperatorTag::TrigPt,
            DomainTag::Hyp => OperatorTag::HypPt,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub samples: SampledFunction,
    pub domain_tag: DomainTag,
}

impl BoundaryData {
    pub fn new(samples: SampledFunction, domain_tag: DomainTag) -> Result<Self> {
        let d = BoundaryData { samples, domain_tag };
        d.validate()?;
        Ok(d)
    }

    /// Data must vanish on and beyond the singular boundary points: s ≤ 0,
    /// and s ≥ π for the strip.
    pub fn validate(&self) -> Result<()> {
        let outside = |s: f64| s <= 0.0 || (self.domain_tag == DomainTag::Trig && s >= PI);
        let bad = self.samples.grid().iter().zip(self.samples.values()).find(|(s, v)| outside(**s) && **v != 0.0);
        if let Some((s, _)) = bad {
            return Err(Error::invalid(format!(
                "boundary data must vanish outside the open {:?} boundary; nonzero at {s}",
                self.domain_tag
            )));
        }
        Ok(())
    }
}

fn default_coeff() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveRequest {
    pub order: Order,
    pub data: BoundaryData,
    pub height: f64,
    pub output_grid: Vec<f64>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_kind: Option<MapKind>,
    #[serde(default = "default_coeff")]
    pub potential_coeff: f64,
}

impl SolveRequest {
    pub fn validate(&self) -> Result<()> {
        if !(self.height > 0.0) {
            return Err(Error::invalid(format!("height must be positive, got {}", self.height)));
        }
        self.data.validate()?;
        self.quadrature.validate()?;
        if self.data.domain_tag == DomainTag::Hyp && !self.map_kind.is_some_and(|k| k.is_hyperbolic()) {
            return Err(Error::invalid("hyperbolic solve needs map_kind hyp_paper or hyp_conformal"));
        }
        Ok(())
    }

    fn kernel(&self, y: f64, a: f64, a_p: f64) -> Result<Evaluated<f64>> {
        match self.data.domain_tag {
            DomainTag::Euclidean => poisson_kernel_euclidean(self.order, KernelQuery::new(y, a, a_p)),
            DomainTag::Trig => poisson_kernel_trig(self.order, y, a, a_p),
            DomainTag::Hyp => poisson_kernel_hyp(self.order, y, a, a_p, self.map_kind.unwrap_or(MapKind::HypConformal)),
        }
    }
}

/// ∫ P(y, a, a') u₀(a') da' by composite Simpson over the data support;
/// panels within 4y of a are split eight ways.
fn solve_point(r: &SolveRequest, y: f64, a: f64) -> Result<Evaluated<f64>> {
    let Some((lo, hi)) = r.data.samples.support() else {
        return Ok(Evaluated::clean(0.0));
    };
    let spline = r.data.samples.spline();
    let panels = r.quadrature.panels;
    let width = (hi - lo) / panels as f64;
    let mut warnings: Vec<Warning> = Vec::new();
    let mut total = 0.0;
    let integrand = |x: f64, warnings: &mut Vec<Warning>| -> Result<f64> {
        let u = spline.eval(x);
        if u == 0.0 || x <= 0.0 {
            return Ok(0.0);
        }
        let k = r.kernel(y, a, x)?;
        for w in k.warnings {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        Ok(k.value * u)
    };
    for p in 0..panels {
        let pa = lo + p as f64 * width;
        let pb = pa + width;
        let near = pb > a - 4.0 * y && pa < a + 4.0 * y;
        let split = if near { 8 } else { 1 };
        let h = width / split as f64;
        for s in 0..split {
            let xa = pa + s as f64 * h;
            let xb = xa + h;
            let fa = integrand(xa, &mut warnings)?;
            let fm = integrand(0.5 * (xa + xb), &mut warnings)?;
            let fb = integrand(xb, &mut warnings)?;
            total += simpson_panel(fa, fm, fb, h);
        }
    }
    Ok(Evaluated::with_warnings(total, warnings))
}

fn solve_grid(r: &SolveRequest) -> Result<Evaluated<SampledFunction>> {
    r.validate()?;
    let results: Vec<Evaluated<f64>> =
        r.output_grid.par_iter().map(|&a| solve_point(r, r.height, a)).collect::<Result<_>>()?;
    let mut warnings = Vec::new();
    let mut values = Vec::with_capacity(results.len());
    for e in results {
        values.push(e.value);
        for w in e.warnings {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
    }
    Ok(Evaluated::with_warnings(SampledFunction::new(r.output_grid.clone(), values)?, warnings))
}

fn expect_tag(r: &SolveRequest, tag: DomainTag) -> Result<()> {
    if r.data.domain_tag != tag {
        return Err(Error::invalid(format!("expected {tag:?} boundary data, got {:?}", r.data.domain_tag)));
    }
    Ok(())
}

/// u(Y, X) = ∫₀^∞ P_ν(Y, X, X') u₀(X') dX' on the output grid.
pub fn solve_euclidean(r: &SolveRequest) -> Result<Evaluated<SampledFunction>> {
    expect_tag(r, DomainTag::Euclidean)?;
    solve_grid(r)
}

/// v(y, θ) = ∫₀^π P^T_ν(y, θ, θ') v₀(θ') dθ' on the output grid.
pub fn solve_trig(r: &SolveRequest) -> Result<Evaluated<SampledFunction>> {
    expect_tag(r, DomainTag::Trig)?;
    solve_grid(r)
}

/// w(y, x) = ∫₀^∞ P^H_ν(y, x, x') w₀(x') dx' with the map named in the
/// request.
pub fn solve_hyp(r: &SolveRequest) -> Result<Evaluated<SampledFunction>> {
    expect_tag(r, DomainTag::Hyp)?;
    solve_grid(r)
}

/// Dispatches on the boundary data's domain.
pub fn solve(r: &SolveRequest) -> Result<Evaluated<SampledFunction>> {
    solve_grid(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeError {
    pub coord1: f64,
    pub coord2: f64,
    pub closed_form: f64,
    pub finite_difference: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub domain: DomainTag,
    pub nu: f64,
    pub c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map_kind: Option<MapKind>,
    pub probes: Vec<ProbeError>,
    pub max_relative_error: f64,
    pub l2_relative_error: f64,
    pub fd_stats: SolverStats,
    pub warnings: Vec<String>,
}

/// Closed-form solve and FD solve of the same data, compared at `probes`
/// given as (coord1, height).
pub fn compare_with_fd(r: &SolveRequest, grid: &Grid2D, probes: &[(f64, f64)]) -> Result<ComparisonReport> {
    r.validate()?;
    let op = OperatorKind::new(r.data.domain_tag.operator(), r.potential_coeff, r.order)?;
    let fd = fd_solve_dirichlet(&op, &r.data.samples, grid, DEFAULT_TOLERANCE)?;
    let closed: Vec<Evaluated<f64>> = probes.par_iter().map(|&(a, y)| solve_point(r, y, a)).collect::<Result<_>>()?;
    let mut warnings: Vec<String> = fd.warnings.iter().map(|w| w.to_string()).collect();
    let mut rows = Vec::with_capacity(probes.len());
    let (mut num, mut den) = (0.0, 0.0);
    for (&(a, y), cf) in probes.iter().zip(closed) {
        for w in &cf.warnings {
            let s = w.to_string();
            if !warnings.contains(&s) {
                warnings.push(s);
            }
        }
        let fdv = fd.value.sample(a, y)?;
        let diff = (cf.value - fdv).abs();
        num += diff * diff;
        den += cf.value * cf.value;
        let relative_error = if cf.value == 0.0 { diff } else { diff / cf.value.abs() };
        rows.push(ProbeError { coord1: a, coord2: y, closed_form: cf.value, finite_difference: fdv, relative_error });
    }
    let max_relative_error = rows.iter().fold(0.0f64, |m, p| m.max(p.relative_error));
    let l2_relative_error = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
    Ok(ComparisonReport {
        domain: r.data.domain_tag,
        nu: r.order.nu(),
        c: r.potential_coeff,
        map_kind: if r.data.domain_tag == DomainTag::Hyp { r.map_kind } else { None },
        probes: rows,
        max_relative_error,
        l2_relative_error,
        fd_stats: fd.value.stats,
        warnings,
    })
}

/// Smooth bump e^{-1/(1-r²)}, r = (s - center)/half_width, zero for |r| ≥ 1.
pub fn bump(center: f64, half_width: f64) -> impl Fn(f64) -> f64 {
    move |s| {
        let r = (s - center) / half_width;
        if r.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - r * r)).exp()
        }
    }
}

/// Standard data, probes and grid for the comparison runs of each domain.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceCase {
    pub data: BoundaryData,
    pub probes: Vec<(f64, f64)>,
    pub grid: Grid2D,
}

pub fn reference_case(tag: DomainTag) -> Result<ReferenceCase> {
    let half = PI / 2.0;
    let (samples, probes) = match tag {
        DomainTag::Euclidean => (
            SampledFunction::from_fn(0.0, 10.0, 2001, bump(4.0, 2.0))?,
            vec![(4.0, 0.5), (3.5, 1.0), (4.5, 1.0), (4.0, 2.0), (5.0, 1.5)],
        ),
        DomainTag::Trig => (
            SampledFunction::from_fn(0.0, PI, 2001, bump(half, 0.9))?,
            vec![(half, 0.3), (1.3, 0.5), (1.9, 0.5), (half, 1.0), (1.2, 0.8)],
        ),
        DomainTag::Hyp => (
            SampledFunction::from_fn(0.0, 10.0, 2001, bump(2.0, 1.0))?,
            vec![(2.0, 0.3), (1.5, 0.5), (2.5, 0.5), (2.0, 1.0), (3.0, 0.8)],
        ),
    };
    Ok(ReferenceCase { data: BoundaryData::new(samples, tag)?, probes, grid: Grid2D::default_for(tag.operator()) })
}
