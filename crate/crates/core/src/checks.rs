//! Verification suites run by the `check` command. Each suite returns a
//! JSON report and a pass flag.

use serde::Serialize;
use serde_json::{json, Value};

use crate::coordmap::{conjugation_residual, MapKind, SampleGrid, TestFunction};
use crate::error::{Error, Result};
use crate::hankel::{
    check_hankel_properties, heat_spectral_integral, property_quadrature, reference_bump, weighted_laplace_integral,
    QuadratureSpec, REFERENCE_POINTS,
};
use crate::kernels::{
    heat_kernel, heat_weber, poisson_kernel_euclidean, ContourSpec, HeatKind, HeatQuery, KernelQuery, Order,
};
use crate::pde::{pde_residual, OperatorKind, OperatorTag};
use crate::solve::{compare_with_fd, reference_case, DomainTag, SolveRequest};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Hankel,
    Kernels,
    Heat,
    Conjugation,
    Pde,
    Solve,
    All,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub report: Value,
}

pub fn run_suite(suite: Suite) -> Result<Vec<SuiteReport>> {
    let single = |s: Suite, (pass, report): (bool, Value)| SuiteReport { suite: s, pass, report };
    Ok(match suite {
        Suite::Hankel => vec![single(suite, hankel()?)],
        Suite::Kernels => vec![single(suite, kernels()?)],
        Suite::Heat => vec![single(suite, heat()?)],
        Suite::Conjugation => vec![single(suite, conjugation()?)],
        Suite::Pde => vec![single(suite, pde()?)],
        Suite::Solve => vec![single(suite, solve()?)],
        Suite::All => {
            let mut out = Vec::new();
            for s in [Suite::Hankel, Suite::Kernels, Suite::Heat, Suite::Conjugation, Suite::Pde, Suite::Solve] {
                out.extend(run_suite(s)?);
            }
            out
        }
    })
}

fn hankel() -> Result<(bool, Value)> {
    let q = property_quadrature();
    let fine = check_hankel_properties(&reference_bump(REFERENCE_POINTS)?, 1.0, &q)?;
    let coarse = check_hankel_properties(&reference_bump(REFERENCE_POINTS / 2)?, 1.0, &q)?;
    let pass = fine.max_residual() <= 1e-4
        && fine.involution <= coarse.involution
        && fine.isometry <= coarse.isometry
        && fine.diagonalization <= coarse.diagonalization;
    Ok((pass, json!({ "order": 1.0, "points": REFERENCE_POINTS, "residuals": fine, "half_resolution": coarse })))
}

fn kernels() -> Result<(bool, Value)> {
    let q = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for nu in [0.5, 1.0, 1.5, 2.0] {
        let o = Order::new(nu)?;
        for y in [0.1, 0.5, 1.5] {
            for x in [0.5, 1.0, 2.0] {
                for xp in [0.5, 1.0, 2.0] {
                    let p = poisson_kernel_euclidean(o, KernelQuery::new(y, x, xp))?.value;
                    let w = weighted_laplace_integral(nu, y, x, xp, &q)?.value;
                    worst = worst.max((p - (x * xp).sqrt() * w).abs());
                }
            }
        }
    }
    Ok((worst <= 1e-6, json!({ "max_abs_difference": worst, "tolerance": 1e-6 })))
}

fn heat() -> Result<(bool, Value)> {
    let c = ContourSpec::default();
    let q = QuadratureSpec::default();
    let mut worst_spectral: f64 = 0.0;
    let mut worst_weber: f64 = 0.0;
    for nu in [0.5, 1.0, 2.0] {
        let o = Order::new(nu)?;
        for t in [0.1, 0.5, 1.0, 2.0] {
            for (x, xp) in [(1.0, 1.0), (1.0, 2.0)] {
                let v =
                    heat_kernel(HeatKind::Euclidean, o, HeatQuery { time: t, interior: x, boundary: xp }, &c, None)?;
                worst_spectral = worst_spectral.max((v - heat_spectral_integral(nu, t, x, xp, &q)?).abs());
                worst_weber = worst_weber.max((v - heat_weber(nu, t, x, xp)?).abs());
            }
        }
    }
    let pass = worst_spectral <= 1e-6 && worst_weber <= 1e-6;
    Ok((pass, json!({ "max_vs_spectral": worst_spectral, "max_vs_weber": worst_weber, "tolerance": 1e-6 })))
}

fn conjugation() -> Result<(bool, Value)> {
    let f = TestFunction::default();
    let grid = SampleGrid::default_for(MapKind::Trig);
    let mut reports = Vec::new();
    let mut pass = true;
    for nu in [1.0, 1.5, 2.0] {
        let r = conjugation_residual(MapKind::Trig, 1.0, nu, &f, &grid, 0.04)?;
        pass &= r.empirical_order >= 1.9;
        reports.push(r);
    }
    let one = conjugation_residual(MapKind::Trig, 1.0, 1.5, &f, &grid, 1e-3)?;
    let sixteenth = conjugation_residual(MapKind::Trig, 1.0 / 16.0, 1.5, &f, &grid, 1e-3)?;
    pass &= sixteenth.max_residual >= 10.0 * one.max_residual;
    Ok((pass, json!({ "trig_c1": reports, "at_h_1e-3": { "c1": one, "c1_16": sixteenth } })))
}

fn pde() -> Result<(bool, Value)> {
    let probes = [(1.0, 0.5), (1.5, 0.8), (2.0, 1.0), (0.8, 1.2), (2.5, 0.6)];
    let xp = 1.3;
    let mut reports = Vec::new();
    let mut pass = true;
    for nu in [1.0, 1.5, 2.0] {
        let o = Order::new(nu)?;
        let op = OperatorKind::new(OperatorTag::InverseSquare, 1.0, o)?;
        let f = move |x: f64, y: f64| {
            poisson_kernel_euclidean(o, KernelQuery::new(y, x, xp)).map(|e| e.value).unwrap_or(f64::NAN)
        };
        let r = pde_residual(&op, &f, &probes, 0.04)?;
        pass &= r.empirical_order >= 1.9;
        reports.push(r);
    }
    Ok((pass, json!({ "boundary_point": xp, "reports": reports })))
}

fn solve() -> Result<(bool, Value)> {
    let mut cases = Vec::new();
    let mut pass = true;
    let runs: [(DomainTag, &[f64]); 2] =
        [(DomainTag::Euclidean, &[0.5, 1.0, 1.5, 2.0]), (DomainTag::Trig, &[1.0, 1.5])];
    for (tag, nus) in runs {
        let rc = reference_case(tag)?;
        for &nu in nus {
            let r = comparison_request(&rc.data, nu, None)?;
            let rep = compare_with_fd(&r, &rc.grid, &rc.probes)?;
            pass &= rep.max_relative_error <= 1e-2;
            cases.push(rep);
        }
    }
    let rc = reference_case(DomainTag::Hyp)?;
    let mut hyp = Vec::new();
    for kind in [MapKind::HypPaper, MapKind::HypConformal] {
        hyp.push(compare_with_fd(&comparison_request(&rc.data, 1.5, Some(kind))?, &rc.grid, &rc.probes)?);
    }
    let certified = hyp.iter().any(|r| r.max_relative_error <= 1e-2);
    Ok((
        pass,
        json!({ "certified": cases, "hyp": hyp, "hyp_status": if certified { "certified" } else { "uncertified" } }),
    ))
}

pub(crate) fn comparison_request(
    data: &crate::solve::BoundaryData,
    nu: f64,
    map_kind: Option<MapKind>,
) -> Result<SolveRequest> {
    if !(nu > -0.5) {
        return Err(Error::invalid("order must exceed -1/2"));
    }
    Ok(SolveRequest {
        order: Order::new(nu)?,
        data: data.clone(),
        height: 1.0,
        output_grid: Vec::new(),
        quadrature: QuadratureSpec::default(),
        map_kind,
        potential_coeff: 1.0,
    })
}
