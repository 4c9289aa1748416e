//! Left and right Riemann-Liouville fractional integrals
//!
//! ```text
//! J_{a+}^α f(x) = 1/Γ(α) ∫_a^x (x - t)^(α-1) f(t) dt,   x > a
//! J_{b-}^α f(x) = 1/Γ(α) ∫_x^b (t - x)^(α-1) f(t) dt,   x < b
//! ```
//!
//! The literature this toolkit checks calls them "Hadamard" integrals, but
//! the kernels are the Riemann-Liouville ones and that is what is computed.

use super::{gamma, integrate_power_weight, QuadError, QuadResult, Singular, Tolerance};
use crate::expr::EvalError;
use crate::func::RealFn;
use crate::harmonic::{DomainError, Interval};
use serde::Serialize;

/// Largest accepted order.
pub const MAX_ALPHA: f64 = 50.0;

/// Fractional order `0 < alpha <= 50`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self, DomainError> {
        if alpha > 0.0 && alpha <= MAX_ALPHA {
            Ok(FracOrder(alpha))
        } else {
            Err(DomainError::Parameter { name: "alpha", value: alpha, expected: "(0, 50]" })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

fn normalized(r: QuadResult, alpha: FracOrder) -> Result<QuadResult, QuadError> {
    Ok(r.scaled(1.0 / gamma(alpha.get())?))
}

/// `J_{a+}^alpha f(x)`.
pub fn frac_left<F: RealFn + ?Sized>(
    f: &F,
    a: f64,
    alpha: FracOrder,
    x: f64,
    tol: Tolerance,
) -> Result<QuadResult, QuadError> {
    if !(a >= 0.0 && x > a && x.is_finite()) {
        return Err(DomainError::Parameter { name: "x", value: x, expected: "x > a >= 0" }.into());
    }
    let g = gamma(alpha.get())?;
    let r = integrate_power_weight(f, a, x, alpha, Singular::Above(x), tol.scale_abs(g))?;
    normalized(r, alpha)
}

/// `J_{b-}^alpha f(x)`.
pub fn frac_right<F: RealFn + ?Sized>(
    f: &F,
    b: f64,
    alpha: FracOrder,
    x: f64,
    tol: Tolerance,
) -> Result<QuadResult, QuadError> {
    if !(x >= 0.0 && x < b && b.is_finite()) {
        return Err(DomainError::Parameter { name: "x", value: x, expected: "0 <= x < b" }.into());
    }
    let g = gamma(alpha.get())?;
    let r = integrate_power_weight(f, x, b, alpha, Singular::Below(x), tol.scale_abs(g))?;
    normalized(r, alpha)
}

/// The two operators applied to `u -> f(1/u)` on `[1/b, 1/a]`, each
/// evaluated at the opposite endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReciprocalPair {
    /// `J_{1/b+}^alpha (f o 1/x)(1/a)`
    pub left: QuadResult,
    /// `J_{1/a-}^alpha (f o 1/x)(1/b)`
    pub right: QuadResult,
}

impl ReciprocalPair {
    pub fn sum(&self) -> QuadResult {
        self.left.plus(self.right)
    }
}

pub fn frac_pair_on_reciprocal<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    alpha: FracOrder,
    tol: Tolerance,
) -> Result<ReciprocalPair, QuadError> {
    let (a, b) = (iv.a(), iv.b());
    let composed = |u: f64| -> Result<f64, EvalError> { f.value((1.0 / u).clamp(a, b)) };
    let left = frac_left(&composed, 1.0 / b, alpha, 1.0 / a, tol)?;
    let right = frac_right(&composed, 1.0 / a, alpha, 1.0 / b, tol)?;
    Ok(ReciprocalPair { left, right })
}
