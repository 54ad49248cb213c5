//! Closed-form Poisson kernels and the heat kernels obtained from them by
//! contour inversion.
//!
//! The Euclidean kernel of ∂²_Y + ∂²_X + (1/4 - ν²)/X² on the half-plane is
//!
//! ```text
//! P_ν(Y, X, X') = -(2/π) Y Q¹_{ν-1/2}(z) / √((Y² + (X+X')²)(Y² + (X-X')²)),
//! z = (Y² + X² + X'²) / (2XX'),
//! ```
//!
//! with the real Legendre function on z > 1. The Pöschl–Teller kernels are
//! the Euclidean one composed with a map from `coordmap` and multiplied by
//! the Jacobian of the boundary map.

mod batch;
mod bromwich;
mod complex;
mod heat;
mod spectral;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coordmap::{boundary_pullback, map_complex, map_point, MapKind};
use crate::error::{Error, Evaluated, Result, Warning};
use crate::specfun::legendre_q_shifted;

pub use batch::{run_batch, write_batch_csv, KernelBatch, KernelKind};
pub use bromwich::{bromwich_invert, BromwichMode, ContourKind, ContourSpec};
pub use complex::{gauss_2f1_complex, poisson_kernel_complex};
pub use heat::{heat_kernel, heat_weber, HeatKind, HeatQuery};
pub use spectral::{trig_heat_spectral, trig_poisson_spectral};

/// Below this value of z - 1 the kernel is flagged as near-singular.
pub const NEAR_SINGULAR: f64 = 1e-12;

/// The order ν > -1/2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > -0.5) || !nu.is_finite() {
            return Err(Error::domain("order", format!("ν must exceed -1/2, got {nu}")));
        }
        Ok(Order(nu))
    }

    pub fn nu(self) -> f64 {
        self.0
    }

    /// Potential strength 1/4 - ν².
    pub fn strength(self) -> f64 {
        0.25 - self.0 * self.0
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;

    fn try_from(nu: f64) -> Result<Self> {
        Order::new(nu)
    }
}

impl From<Order> for f64 {
    fn from(o: Order) -> f64 {
        o.0
    }
}

/// Height, interior coordinate and boundary coordinate of one evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelQuery {
    pub height: f64,
    pub interior: f64,
    pub boundary: f64,
}

impl KernelQuery {
    pub fn new(height: f64, interior: f64, boundary: f64) -> Self {
        KernelQuery { height, interior, boundary }
    }

    fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !(ok(self.height) && ok(self.interior) && ok(self.boundary)) {
            return Err(Error::domain(
                "poisson_kernel",
                format!("Y, X, X' must be positive, got ({}, {}, {})", self.height, self.interior, self.boundary),
            ));
        }
        Ok(())
    }

    /// z - 1 = (Y² + (X - X')²)/(2XX'), free of cancellation.
    pub fn z_minus_one(&self) -> f64 {
        let d = self.interior - self.boundary;
        (self.height * self.height + d * d) / (2.0 * self.interior * self.boundary)
    }

    /// k = 2√(XX') / √(Y² + (X+X')²).
    pub fn modulus(&self) -> f64 {
        let s = self.interior + self.boundary;
        2.0 * (self.interior * self.boundary).sqrt() / (self.height * self.height + s * s).sqrt()
    }
}

/// Poisson kernel of the half-plane problem with inverse-square potential.
pub fn poisson_kernel_euclidean(o: Order, q: KernelQuery) -> Result<Evaluated<f64>> {
    q.validate()?;
    let (y, x, xp) = (q.height, q.interior, q.boundary);
    let zm1 = q.z_minus_one();
    let mut warnings = Vec::new();
    if zm1 < NEAR_SINGULAR {
        warnings.push(Warning::NearSingular { z_minus_one: zm1 });
    }
    let q1 = legendre_q_shifted(o.nu() - 0.5, 1, zm1)?;
    let s = x + xp;
    let d = x - xp;
    let rad = ((y * y + s * s) * (y * y + d * d)).sqrt();
    Ok(Evaluated::with_warnings(-2.0 / PI * y * q1 / rad, warnings))
}

/// Image kernel of the half-plane without potential, equal to the ν = 1/2
/// kernel: (1/π)[Y/(Y² + (X-X')²) - Y/(Y² + (X+X')²)].
pub fn half_line_image_kernel(y: f64, x: f64, xp: f64) -> f64 {
    let d = x - xp;
    let s = x + xp;
    (y / (y * y + d * d) - y / (y * y + s * s)) / PI
}

/// Kernel of the half-strip problem with potential (ν² - 1/4)/sin²θ.
pub fn poisson_kernel_trig(o: Order, y: f64, theta: f64, theta_p: f64) -> Result<Evaluated<f64>> {
    if !(y > 0.0) || !(theta > 0.0 && theta < PI) {
        return Err(Error::domain("poisson_kernel_trig", format!("need y > 0 and θ in (0, π), got ({y}, {theta})")));
    }
    composed(o, MapKind::Trig, y, theta, theta_p)
}

/// Kernel of the hyperbolic problem built from the chosen map.
pub fn poisson_kernel_hyp(o: Order, y: f64, x: f64, x_p: f64, kind: MapKind) -> Result<Evaluated<f64>> {
    if kind == MapKind::Trig {
        return Err(Error::invalid("poisson_kernel_hyp needs a hyperbolic map kind"));
    }
    if !(y > 0.0) || !(x > 0.0) {
        return Err(Error::domain("poisson_kernel_hyp", format!("need y > 0 and x > 0, got ({y}, {x})")));
    }
    composed(o, kind, y, x, x_p)
}

fn composed(o: Order, kind: MapKind, y: f64, a: f64, a_p: f64) -> Result<Evaluated<f64>> {
    let (xp, jac) = boundary_pullback(kind, a_p)?;
    let w = map_point(kind, a, y)?;
    let p = poisson_kernel_euclidean(o, KernelQuery::new(w.y, w.x, xp))?;
    Ok(p.map(|v| v * jac))
}

/// Kernel of `kind` continued to complex height y. `MapKind` selects the
/// geometry; `None` means the Euclidean half-plane.
pub fn poisson_kernel_at_complex_height(
    o: Order,
    geometry: Option<MapKind>,
    y: Complex64,
    a: f64,
    a_p: f64,
) -> Result<Complex64> {
    match geometry {
        None => poisson_kernel_complex(o.nu(), y, Complex64::new(a, 0.0), a_p),
        Some(kind) => {
            let (xp, jac) = boundary_pullback(kind, a_p)?;
            let (x, yy) = map_complex(kind, a, y);
            Ok(poisson_kernel_complex(o.nu(), yy, x, xp)? * jac)
        }
    }
}
