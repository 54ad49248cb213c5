//! Special functions the kernels are built from: Γ and the Pochhammer
//! symbol, the Gauss hypergeometric function, Legendre functions of the
//! second kind on z > 1, and the Bessel functions J_ν and I_ν.
//!
//! Everything here is a pure function of its arguments.

mod bessel;
mod gamma;
mod hypergeometric;
mod legendre;

pub use bessel::{bessel_i, bessel_j, BesselJ, BesselSpec, SERIES_SWITCH};
pub use gamma::{digamma, gamma_fn, ln_gamma, pochhammer, recip_gamma};
pub use hypergeometric::{gauss_2f1, HypergeometricParams, MAX_TERMS, SERIES_TOLERANCE};
pub use legendre::{legendre_q, LegendreSpec};

pub(crate) use legendre::legendre_q_shifted;
