//! Scalar functions of one real variable, as consumed by every checker and
//! integrator in the crate.

use crate::expr::{EvalError, Expr};

/// A fallible real function `x -> f(x)`.
pub trait RealFn: Sync {
    fn value(&self, x: f64) -> Result<f64, EvalError>;
}

impl RealFn for Expr {
    fn value(&self, x: f64) -> Result<f64, EvalError> {
        self.eval(x)
    }
}

impl<F> RealFn for F
where
    F: Fn(f64) -> Result<f64, EvalError> + Sync,
{
    fn value(&self, x: f64) -> Result<f64, EvalError> {
        self(x)
    }
}

/// `x -> |f'(x)|^q`, the function whose harmonic convexity the derivative
/// bounds assume (`q = 1` for the first-order bounds).
#[derive(Debug, Clone, Copy)]
pub struct AbsDerivPow<'a> {
    pub expr: &'a Expr,
    pub q: f64,
}

impl<'a> AbsDerivPow<'a> {
    pub fn new(expr: &'a Expr, q: f64) -> Self {
        AbsDerivPow { expr, q }
    }
}

impl RealFn for AbsDerivPow<'_> {
    fn value(&self, x: f64) -> Result<f64, EvalError> {
        let d = self.expr.deriv(x)?.abs();
        Ok(if self.q == 1.0 { d } else { d.powf(self.q) })
    }
}

/// Negation, used to phrase concavity checks as convexity checks.
pub struct Negated<'a, F: RealFn + ?Sized>(pub &'a F);

impl<F: RealFn + ?Sized> RealFn for Negated<'_, F> {
    fn value(&self, x: f64) -> Result<f64, EvalError> {
        Ok(-self.0.value(x)?)
    }
}
