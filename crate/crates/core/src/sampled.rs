//! Tabulated one-dimensional functions and their cubic-spline interpolants.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::trapezoid;

/// Values on a strictly increasing grid. Treated as exactly zero outside the
/// grid span.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSampled")]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSampled {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawSampled> for SampledFunction {
    type Error = Error;

    fn try_from(raw: RawSampled) -> Result<Self> {
        SampledFunction::new(raw.grid, raw.values)
    }
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::invalid(format!(
                "grid has {} points but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        if grid.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::invalid("grid points must be finite and non-negative"));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("grid must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values must be finite"));
        }
        Ok(SampledFunction { grid, values })
    }

    /// Samples `f` on `n` equispaced points of [lo, hi].
    pub fn from_fn(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("need at least two sample points"));
        }
        let grid = uniform_grid(lo, hi, n);
        let values = grid.iter().map(|&x| f(x)).collect();
        SampledFunction::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Smallest interval of the grid containing every non-zero sample, padded
    /// by one grid cell on each side. `None` for identically zero data.
    pub fn support(&self) -> Option<(f64, f64)> {
        let first = self.values.iter().position(|v| *v != 0.0)?;
        let last = self.values.iter().rposition(|v| *v != 0.0)?;
        let lo = self.grid[first.saturating_sub(1)];
        let hi = self.grid[(last + 1).min(self.grid.len() - 1)];
        Some((lo, hi))
    }

    /// Discrete L² norm by the trapezoid rule.
    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        trapezoid(&self.grid, &sq).sqrt()
    }

    pub fn spline(&self) -> CubicSpline {
        CubicSpline::new(&self.grid, &self.values)
    }

    /// Writes `coordinate,value` rows with no header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for (x, v) in self.grid.iter().zip(&self.values) {
            writeln!(out, "{x:e},{v:e}")?;
        }
        Ok(())
    }

    /// Reads two-column CSV. Lines starting with `#` and a non-numeric first
    /// line are skipped.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',').map(str::trim);
            let (Some(a), Some(b)) = (parts.next(), parts.next()) else {
                return Err(Error::invalid(format!("line {}: expected two columns", lineno + 1)));
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(v)) => {
                    grid.push(x);
                    values.push(v);
                }
                _ if grid.is_empty() && lineno == 0 => continue,
                _ => return Err(Error::invalid(format!("line {}: not numeric", lineno + 1))),
            }
        }
        SampledFunction::new(grid, values)
    }
}

pub(crate) fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo + i as f64 * h }).collect()
}

/// Natural cubic spline through tabulated data, zero outside the data span.
#[derive(Clone, Debug)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        let n = x.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior knots.
            let mut c_prime = vec![0.0; n];
            let mut d_prime = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                let a = h0 / 6.0;
                let b = (h0 + h1) / 3.0;
                let c = h1 / 6.0;
                let d = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
                let denom = b - a * c_prime[i - 1];
                c_prime[i] = c / denom;
                d_prime[i] = (d - a * d_prime[i - 1]) / denom;
            }
            for i in (1..n - 1).rev() {
                m[i] = d_prime[i] - c_prime[i] * m[i + 1];
            }
        }
        CubicSpline { x: x.to_vec(), y: y.to_vec(), m }
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if n == 0 || t < self.x[0] || t > self.x[n - 1] {
            return 0.0;
        }
        if n == 1 {
            return self.y[0];
        }
        let i = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        self.eval_in(i, t)
    }

    /// Evaluates on knot interval `i` without searching.
    #[inline]
    pub fn eval_in(&self, i: usize, t: f64) -> f64 {
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(SampledFunction::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(SampledFunction::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(SampledFunction::new(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn spline_reproduces_smooth_function() {
        let f = SampledFunction::from_fn(0.0, 10.0, 401, |x| (-(x - 5.0) * (x - 5.0)).exp()).unwrap();
        let s = f.spline();
        for k in 0..997 {
            let t = 0.5 + k as f64 * 0.009;
            let want = (-(t - 5.0) * (t - 5.0)).exp();
            assert!((s.eval(t) - want).abs() < 1e-6, "t = {t}");
        }
        assert_eq!(s.eval(-1.0), 0.0);
        assert_eq!(s.eval(10.5), 0.0);
    }

    #[test]
    fn support_hull() {
        let f = SampledFunction::new(vec![0.0, 1.0, 2.0, 3.0, 4.0], vec![0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(f.support(), Some((1.0, 3.0)));
        let z = SampledFunction::new(vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(z.support(), None);
    }

    #[test]
    fn csv_round_trip() {
        let f = SampledFunction::from_fn(0.0, 1.0, 11, |x| x * x).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let g = SampledFunction::read_csv(&buf[..]).unwrap();
        assert_eq!(f, g);
    }
}
