//! Finite-difference reference solver for the three Dirichlet problems.
//!
//! The unknown lives on a grid in (coord1, coord2) = (X, Y), (θ, y) or
//! (x, y). Along coord1 the nodes may sit at cell centers, so the singular
//! lines X = 0, θ ∈ {0, π}, x = 0 are cell faces and the zero Dirichlet
//! condition there is imposed through a mirrored ghost value. Along coord2
//! the nodes are vertices: row 0 carries the data, the last row is zero.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coordmap::{halvings, ResidualReport};
use crate::error::{Error, Evaluated, Result, Warning};
use crate::kernels::Order;
use crate::sampled::SampledFunction;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200_000;
const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub coord1: [f64; 2],
    pub count1: usize,
    pub coord2: [f64; 2],
    pub count2: usize,
    /// Put coord1 nodes at cell centers.
    pub staggered: bool,
}

impl Grid2D {
    pub fn new(coord1: [f64; 2], count1: usize, coord2: [f64; 2], count2: usize) -> Self {
        Grid2D { coord1, count1, coord2, count2, staggered: true }
    }

    /// Default 256² grid for each operator: [0, 20]² for the half-plane and
    /// the quarter-plane, (0, π) × [0, 10] for the strip.
    pub fn default_for(tag: OperatorTag) -> Self {
        match tag {
            OperatorTag::TrigPt => Grid2D::new([0.0, PI], 256, [0.0, 10.0], 256),
            _ => Grid2D::new([0.0, 20.0], 256, [0.0, 20.0], 256),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count1 < 16 || self.count2 < 16 {
            return Err(Error::invalid("grid counts must be at least 16"));
        }
        if !(self.coord1[1] > self.coord1[0]) || !(self.coord2[1] > self.coord2[0]) {
            return Err(Error::invalid("grid ranges must be increasing"));
        }
        Ok(())
    }

    pub fn h1(&self) -> f64 {
        (self.coord1[1] - self.coord1[0]) / self.count1 as f64
    }

    pub fn h2(&self) -> f64 {
        (self.coord2[1] - self.coord2[0]) / self.count2 as f64
    }

    /// Number of coord1 nodes carrying unknowns.
    pub fn nodes1(&self) -> usize {
        if self.staggered {
            self.count1
        } else {
            self.count1 - 1
        }
    }

    pub fn node1(&self, i: usize) -> f64 {
        let off = if self.staggered { 0.5 } else { 1.0 };
        self.coord1[0] + (i as f64 + off) * self.h1()
    }

    pub fn node2(&self, j: usize) -> f64 {
        self.coord2[0] + j as f64 * self.h2()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorTag {
    /// ∂²_X + ∂²_Y + c(1/4 - ν²)/X²
    InverseSquare,
    /// ∂²_θ + ∂²_y + c(1/4 - ν²)/sin²θ
    TrigPt,
    /// ∂²_x + ∂²_y + c(1/4 - ν²)/sinh²x
    HypPt,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorKind {
    pub tag: OperatorTag,
    pub potential_coeff: f64,
    pub order: Order,
}

impl OperatorKind {
    pub fn new(tag: OperatorTag, potential_coeff: f64, order: Order) -> Result<Self> {
        if !(potential_coeff > 0.0) {
            return Err(Error::invalid(format!("potential coefficient must be positive, got {potential_coeff}")));
        }
        Ok(OperatorKind { tag, potential_coeff, order })
    }

    /// Coefficient V(a) of the potential term in Δu + V u = 0.
    pub fn potential(&self, a: f64) -> f64 {
        let s = match self.tag {
            OperatorTag::InverseSquare => a,
            OperatorTag::TrigPt => a.sin(),
            OperatorTag::HypPt => a.sinh(),
        };
        self.potential_coeff * self.order.strength() / (s * s)
    }

    fn name(&self) -> &'static str {
        match self.tag {
            OperatorTag::InverseSquare => "inverse_square",
            OperatorTag::TrigPt => "trig_pt",
            OperatorTag::HypPt => "hyp_pt",
        }
    }

    /// Distance from the singular line(s) in coord1.
    fn edge_distance(&self, a: f64) -> f64 {
        match self.tag {
            OperatorTag::TrigPt => a.min(PI - a),
            _ => a,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Solution on the full vertex set in coord2 (rows 0..=count2) and the
/// unknown nodes in coord1, stored row by row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub grid: Grid2D,
    pub values: Vec<f64>,
    pub stats: SolverStats,
}

impl Field {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nodes1() + i]
    }

    /// Cubic Lagrange interpolation on the 4×4 nodes around (a, y).
    pub fn sample(&self, a: f64, y: f64) -> Result<f64> {
        let g = &self.grid;
        let n1 = g.nodes1();
        let n2 = g.count2 + 1;
        let off = if g.staggered { 0.5 } else { 1.0 };
        let s1 = (a - g.coord1[0]) / g.h1() - off;
        let s2 = (y - g.coord2[0]) / g.h2();
        if !(s1 >= -0.5 - 1e-12 && s1 <= n1 as f64 - 0.5 && s2 >= 0.0 && s2 <= (n2 - 1) as f64) {
            return Err(Error::domain("Field::sample", format!("({a}, {y}) lies outside the grid")));
        }
        let base = |s: f64, n: usize| -> usize { ((s.floor() as isize) - 1).clamp(0, n as isize - 4) as usize };
        let (i0, j0) = (base(s1, n1), base(s2, n2));
        let w1 = lagrange4(s1 - i0 as f64);
        let w2 = lagrange4(s2 - j0 as f64);
        let mut v = 0.0;
        for (dj, wj) in w2.iter().enumerate() {
            for (di, wi) in w1.iter().enumerate() {
                v += wi * wj * self.get(i0 + di, j0 + dj);
            }
        }
        Ok(v)
    }

    /// Row-major `coord1,coord2,value` CSV after a one-line header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "coord1,coord2,value")?;
        for j in 0..=self.grid.count2 {
            let y = self.grid.node2(j);
            for i in 0..self.grid.nodes1() {
                writeln!(out, "{},{},{}", self.grid.node1(i), y, self.get(i, j))?;
            }
        }
        Ok(())
    }

    /// Grid metadata and solver statistics, without the values.
    pub fn header_json(&self) -> serde_json::Value {
        serde_json::json!({ "grid": self.grid, "stats": self.stats })
    }
}

/// Lagrange weights on the nodes 0, 1, 2, 3 at position s.
fn lagrange4(s: f64) -> [f64; 4] {
    let mut w = [1.0; 4];
    for (k, wk) in w.iter_mut().enumerate() {
        for m in 0..4 {
            if m != k {
                *wk *= (s - m as f64) / (k as f64 - m as f64);
            }
        }
    }
    w
}

struct System {
    n1: usize,
    rows: usize,
    inv_h1: f64,
    inv_h2: f64,
    diag: Vec<f64>,
}

impl System {
    fn new(op: &OperatorKind, grid: &Grid2D) -> Self {
        let n1 = grid.nodes1();
        let rows = grid.count2 - 1;
        let inv_h1 = 1.0 / (grid.h1() * grid.h1());
        let inv_h2 = 1.0 / (grid.h2() * grid.h2());
        let mut diag = Vec::with_capacity(n1 * rows);
        for _ in 0..rows {
            for i in 0..n1 {
                let mut d = 2.0 * inv_h1 + 2.0 * inv_h2 - op.potential(grid.node1(i));
                if grid.staggered && (i == 0 || i == n1 - 1) {
                    d += inv_h1;
                }
                diag.push(d);
            }
        }
        System { n1, rows, inv_h1, inv_h2, diag }
    }

    fn len(&self) -> usize {
        self.n1 * self.rows
    }

    /// out = (-Δ_h - V) u on the unknowns.
    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let n1 = self.n1;
        let rows = self.rows;
        out.par_chunks_mut(n1).enumerate().for_each(|(j, row)| {
            for (i, o) in row.iter_mut().enumerate() {
                let k = j * n1 + i;
                let mut v = self.diag[k] * u[k];
                if i > 0 {
                    v -= self.inv_h1 * u[k - 1];
                }
                if i + 1 < n1 {
                    v -= self.inv_h1 * u[k + 1];
                }
                if j > 0 {
                    v -= self.inv_h2 * u[k - n1];
                }
                if j + 1 < rows {
                    v -= self.inv_h2 * u[k + n1];
                }
                *o = v;
            }
        });
    }
}

/// Dot product with a fixed chunking so the result is independent of the
/// thread schedule.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let partial: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    partial.iter().sum()
}

/// Solves Δu + V u = 0 with `boundary` on the bottom row and zero on the
/// other edges by Jacobi-preconditioned conjugate gradients, stopping when
/// the residual falls to `tol` times the right-hand side.
pub fn fd_solve_dirichlet(
    op: &OperatorKind,
    boundary: &SampledFunction,
    grid: &Grid2D,
    tol: f64,
) -> Result<Evaluated<Field>> {
    grid.validate()?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if op.tag == OperatorTag::TrigPt && (grid.coord1[0] < 0.0 || grid.coord1[1] > PI) {
        return Err(Error::invalid("strip grid must lie inside [0, π]"));
    }
    let mut warnings = Vec::new();
    let nodes: Vec<f64> = (0..grid.nodes1()).map(|i| grid.node1(i)).collect();
    if nodes.iter().any(|&a| op.edge_distance(a) <= 0.0) {
        return Err(Error::invalid("grid places a node on a singular line"));
    }
    if let Some((_, hi)) = boundary.support() {
        let span = grid.coord1[1] - grid.coord1[0];
        if hi > grid.coord1[1] - 0.1 * span {
            warnings.push(Warning::BoundarySupport {
                detail: format!("data reaches {hi}, within 10% of the truncated edge {}", grid.coord1[1]),
            });
        }
    }
    let spline = boundary.spline();
    let data: Vec<f64> = nodes.iter().map(|&a| spline.eval(a)).collect();
    let sys = System::new(op, grid);
    let n = sys.len();
    let n1 = sys.n1;

    let mut b = vec![0.0; n];
    for i in 0..n1 {
        b[i] = sys.inv_h2 * data[i];
    }
    let mut x = vec![0.0; n];
    let b_norm = dot(&b, &b).sqrt();
    let mut iterations = 0;
    let mut rel = 0.0;
    if b_norm > 0.0 {
        let mut r = b.clone();
        let mut z: Vec<f64> = r.iter().zip(&sys.diag).map(|(r, d)| r / d).collect();
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        let mut rz = dot(&r, &z);
        loop {
            sys.apply(&p, &mut ap);
            let alpha = rz / dot(&p, &ap);
            x.par_iter_mut().zip(&p).for_each(|(x, p)| *x += alpha * p);
            r.par_iter_mut().zip(&ap).for_each(|(r, a)| *r -= alpha * a);
            iterations += 1;
            rel = dot(&r, &r).sqrt() / b_norm;
            if rel <= tol {
                break;
            }
            if iterations >= MAX_ITERATIONS || !rel.is_finite() {
                return Err(Error::NoConvergence {
                    routine: "fd_solve_dirichlet",
                    detail: format!("relative residual {rel:e} after {iterations} iterations"),
                });
            }
            z.par_iter_mut().zip(&r).zip(&sys.diag).for_each(|((z, r), d)| *z = r / d);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            p.par_iter_mut().zip(&z).for_each(|(p, z)| *p = z + beta * *p);
        }
    }

    let mut values = Vec::with_capacity(n1 * (grid.count2 + 1));
    values.extend_from_slice(&data);
    values.extend_from_slice(&x);
    values.extend(std::iter::repeat_n(0.0, n1));
    let field = Field { grid: *grid, values, stats: SolverStats { iterations, relative_residual: rel } };
    Ok(Evaluated::with_warnings(field, warnings))
}

/// Applies the operator by central differences to `f(a, y)` at each probe
/// for the steps h, h/2, h/4, h/8.
pub fn pde_residual(
    op: &OperatorKind,
    f: &(dyn Fn(f64, f64) -> f64 + Sync),
    probes: &[(f64, f64)],
    h: f64,
) -> Result<ResidualReport> {
    if !(h > 0.0) {
        return Err(Error::invalid("step must be positive"));
    }
    let mut warnings = Vec::new();
    if probes.iter().any(|&(a, _)| op.edge_distance(a) < 4.0 * h) {
        warnings.push(Warning::SingularProximity { detail: "probe within 4h of a singular line".into() });
    }
    let steps = halvings(h, 4);
    let mut norms = Vec::new();
    for &s in &steps {
        let r: Vec<f64> = probes
            .par_iter()
            .map(|&(a, y)| {
                let lap = (f(a + s, y) + f(a - s, y) + f(a, y + s) + f(a, y - s) - 4.0 * f(a, y)) / (s * s);
                lap + op.potential(a) * f(a, y)
            })
            .collect();
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("pde_residual", "function is not finite on the stencil"));
        }
        let max = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let rms = (r.iter().map(|v| v * v).sum::<f64>() / r.len().max(1) as f64).sqrt();
        norms.push((max, rms));
    }
    Ok(ResidualReport::from_levels(op.name().to_string(), op.potential_coeff, op.order.nu(), steps, norms, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(tag: OperatorTag, nu: f64) -> OperatorKind {
        OperatorKind::new(tag, 1.0, Order::new(nu).unwrap()).unwrap()
    }

    fn small() -> Grid2D {
        Grid2D::new([0.0, 10.0], 64, [0.0, 10.0], 64)
    }

    #[test]
    fn zero_data_zero_field() {
        let f = SampledFunction::from_fn(0.0, 10.0, 50, |_| 0.0).unwrap();
        let r = fd_solve_dirichlet(&op(OperatorTag::InverseSquare, 1.0), &f, &small(), 1e-10).unwrap();
        assert!(r.value.values.iter().all(|v| *v == 0.0));
        assert_eq!(r.value.stats.iterations, 0);
    }

    #[test]
    fn linear_and_nonnegative() {
        let o = op(OperatorTag::InverseSquare, 1.5);
        let f = SampledFunction::from_fn(0.0, 10.0, 200, |x| (-(x - 3.0) * (x - 3.0)).exp()).unwrap();
        let g = SampledFunction::from_fn(0.0, 10.0, 200, |x| x * (-(x - 4.0) * (x - 4.0)).exp()).unwrap();
        let fg: Vec<f64> = f.values().iter().zip(g.values()).map(|(a, b)| 2.0 * a - 3.0 * b).collect();
        let fg = SampledFunction::new(f.grid().to_vec(), fg).unwrap();
        let grid = small();
        let uf = fd_solve_dirichlet(&o, &f, &grid, 1e-12).unwrap().value;
        let ug = fd_solve_dirichlet(&o, &g, &grid, 1e-12).unwrap().value;
        let ufg = fd_solve_dirichlet(&o, &fg, &grid, 1e-12).unwrap().value;
        for k in 0..ufg.values.len() {
            assert!((ufg.values[k] - 2.0 * uf.values[k] + 3.0 * ug.values[k]).abs() < 1e-9);
            assert!(uf.values[k] >= -1e-10);
        }
    }

    #[test]
    fn interpolation_reproduces_cubics() {
        let grid = small();
        let n1 = grid.nodes1();
        let mut values = Vec::new();
        let p = |a: f64, y: f64| a * a * a - 2.0 * a * y + y * y * 0.5;
        for j in 0..=grid.count2 {
            for i in 0..n1 {
                values.push(p(grid.node1(i), grid.node2(j)));
            }
        }
        let field = Field { grid, values, stats: SolverStats { iterations: 0, relative_residual: 0.0 } };
        for &(a, y) in &[(3.3, 1.7), (0.1, 0.05), (9.9, 9.95)] {
            assert!((field.sample(a, y).unwrap() - p(a, y)).abs() < 1e-9);
        }
        assert!(field.sample(11.0, 1.0).is_err());
    }

    #[test]
    fn boundary_support_warning() {
        let f = SampledFunction::from_fn(0.0, 10.0, 100, |x| if x > 9.5 { 1.0 } else { 0.0 }).unwrap();
        let r = fd_solve_dirichlet(&op(OperatorTag::InverseSquare, 1.0), &f, &small(), 1e-8).unwrap();
        assert!(matches!(r.warnings[0], Warning::BoundarySupport { .. }));
    }

    #[test]
    fn residual_of_exact_solution() {
        // XY is harmonic and the potential vanishes at ν = 1/2
        let o = op(OperatorTag::InverseSquare, 0.5);
        let r = pde_residual(&o, &|a, y| a * y, &[(1.0, 1.0), (2.0, 0.5)], 0.1).unwrap();
        assert!(r.max_residual < 1e-10);
        // X^{ν+1/2} solves the X-part for any ν
        let o = op(OperatorTag::InverseSquare, 1.5);
        let r = pde_residual(&o, &|a, _| a * a, &[(1.0, 1.0)], 0.1).unwrap();
        assert!(r.max_residual < 1e-10);
    }
}
