use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Errors raised by the numerical routines and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: f64 },

    #[error("{function}: argument outside the domain ({detail})")]
    Domain { function: &'static str, detail: String },

    #[error("{routine} did not converge: {detail}")]
    NoConvergence { routine: &'static str, detail: String },

    #[error("{function} is singular at the requested point ({detail})")]
    Singularity { function: &'static str, detail: String },

    #[error("{function} overflows for argument {at}")]
    Overflow { function: &'static str, at: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { function, detail: detail.into() }
    }

    pub(crate) fn invalid(detail: impl Into<String>) -> Self {
        Error::Invalid(detail.into())
    }

    /// True for failures of an iterative or series method, as opposed to bad
    /// input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::Singularity { .. } | Error::Overflow { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Non-fatal conditions reported next to a computed value.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "warning", rename_all = "snake_case")]
pub enum Warning {
    /// Legendre argument within 1e-12 of the coincidence point z = 1.
    NearSingular { z_minus_one: f64 },
    /// Oscillation per quadrature panel exceeds the resolution bound.
    Truncation { detail: String },
    /// Laplace damping too weak for the accuracy budget.
    SlowDecay { p: f64 },
    /// Grid touches a singular line of the potential.
    SingularProximity { detail: String },
    /// Boundary data reaches into the outer 10% of a truncated domain.
    BoundarySupport { detail: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NearSingular { z_minus_one } => {
                write!(f, "near-singular kernel evaluation (z - 1 = {z_minus_one:e})")
            }
            Warning::Truncation { detail } => write!(f, "truncation: {detail}"),
            Warning::SlowDecay { p } => write!(f, "slow exponential decay (p = {p})"),
            Warning::SingularProximity { detail } => write!(f, "singular proximity: {detail}"),
            Warning::BoundarySupport { detail } => write!(f, "boundary support: {detail}"),
        }
    }
}

/// A value together with the warnings raised while computing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

impl<T> Evaluated<T> {
    pub fn clean(value: T) -> Self {
        Evaluated { value, warnings: Vec::new() }
    }

    pub fn with_warnings(value: T, warnings: Vec<Warning>) -> Self {
        Evaluated { value, warnings }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Evaluated<U> {
        Evaluated { value: f(self.value), warnings: self.warnings }
    }
}
