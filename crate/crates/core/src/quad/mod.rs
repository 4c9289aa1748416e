//! Quadrature: the gamma function, adaptive Gauss-Kronrod integration,
//! power-kernel integrals with exact singularity removal, and the left and
//! right Riemann-Liouville fractional integrals.

mod adaptive;
mod frac;
mod gamma;
mod kernel;

pub use adaptive::{integrate, integrate_with_budget, DEFAULT_MAX_EVALUATIONS};
pub use frac::{
    frac_left, frac_pair_on_reciprocal, frac_right, FracOrder, ReciprocalPair, MAX_ALPHA,
};
pub use gamma::gamma;
pub use kernel::{integrate_kernel_pow, integrate_power_weight, Singular};

use crate::expr::EvalError;
use crate::harmonic::DomainError;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integration bounds must be finite with lo < hi, got [{lo}, {hi}]")]
    InvalidBounds { lo: f64, hi: f64 },
    #[error("evaluation failed at x = {x}: {source}")]
    Eval { x: f64, source: EvalError },
    #[error(
        "no convergence after {evaluations} evaluations (estimate {value}, error {error})"
    )]
    NonConvergence { evaluations: usize, value: f64, error: f64 },
    #[error("gamma is not available at x = {x}")]
    GammaDomain { x: f64 },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Absolute and relative accuracy targets; an integral is accepted when its
/// error estimate is at most `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-10, rel: 1e-8 }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Result<Self, DomainError> {
        for (name, v) in [("abs tolerance", abs), ("rel tolerance", rel)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DomainError::Parameter { name, value: v, expected: "> 0" });
            }
        }
        Ok(Tolerance { abs, rel })
    }

    pub fn threshold(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }

    /// Same relative target, absolute target multiplied by `k`.
    pub fn scale_abs(&self, k: f64) -> Tolerance {
        Tolerance { abs: self.abs * k, rel: self.rel }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn scaled(self, k: f64) -> QuadResult {
        QuadResult {
            value: self.value * k,
            abs_error_estimate: self.abs_error_estimate * k.abs(),
            evaluations: self.evaluations,
        }
    }

    pub fn plus(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}
