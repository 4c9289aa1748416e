//! Integrals against power kernels `|t - c|^(alpha-1)`.
//!
//! With `u = |t - c|^alpha` the kernel disappears:
//! `int |t - c|^(alpha-1) f(t) dt = (1/alpha) int f(c ± u^(1/alpha)) du`,
//! so the singular point `c` costs nothing for `alpha < 1`.

use super::{integrate, FracOrder, QuadError, QuadResult, Tolerance};
use crate::expr::EvalError;
use crate::func::RealFn;

/// Where the kernel is anchored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Singular {
    /// Kernel `(t - c)^(alpha-1)` with `c <= lo`.
    Below(f64),
    /// Kernel `(c - t)^(alpha-1)` with `c >= hi`.
    Above(f64),
}

/// `int_lo^hi w(t) f(t) dt` with `w` anchored at `lo` (`at_lo = true`) or at
/// `hi`.
pub fn integrate_kernel_pow<F: RealFn + ?Sized>(
    f: &F,
    lo: f64,
    hi: f64,
    alpha: FracOrder,
    at_lo: bool,
    tol: Tolerance,
) -> Result<QuadResult, QuadError> {
    let anchor = if at_lo { Singular::Below(lo) } else { Singular::Above(hi) };
    integrate_power_weight(f, lo, hi, alpha, anchor, tol)
}

/// General form: the anchor may sit outside `[lo, hi]`.
pub fn integrate_power_weight<F: RealFn + ?Sized>(
    f: &F,
    lo: f64,
    hi: f64,
    alpha: FracOrder,
    anchor: Singular,
    tol: Tolerance,
) -> Result<QuadResult, QuadError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::InvalidBounds { lo, hi });
    }
    let al = alpha.get();
    match anchor {
        Singular::Below(c) if !(c <= lo) => return Err(QuadError::InvalidBounds { lo: c, hi: lo }),
        Singular::Above(c) if !(c >= hi) => return Err(QuadError::InvalidBounds { lo: hi, hi: c }),
        _ => {}
    }
    if al == 1.0 {
        return integrate(f, lo, hi, tol);
    }
    let inv = 1.0 / al;
    // clamp back into [lo, hi]: u^(1/alpha) can overshoot by an ulp
    let (u_lo, u_hi, map): (f64, f64, Box<dyn Fn(f64) -> f64 + Sync>) = match anchor {
        Singular::Below(c) => (
            (lo - c).powf(al),
            (hi - c).powf(al),
            Box::new(move |u: f64| (c + u.powf(inv)).clamp(lo, hi)),
        ),
        Singular::Above(c) => (
            (c - hi).powf(al),
            (c - lo).powf(al),
            Box::new(move |u: f64| (c - u.powf(inv)).clamp(lo, hi)),
        ),
    };
    if !(u_lo < u_hi) || !u_hi.is_finite() {
        return Err(QuadError::InvalidBounds { lo: u_lo, hi: u_hi });
    }
    let g = |u: f64| -> Result<f64, EvalError> { f.value(map(u)) };
    let r = integrate(&g, u_lo, u_hi, tol.scale_abs(al))?;
    Ok(r.scaled(inv))
}
