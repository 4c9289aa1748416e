//! Three-sided chains `lhs <= mid <= rhs`.

use super::{rounding, CatalogError, Part, Relation, SidesResult};
use crate::expr::EvalError;
use crate::func::RealFn;
use crate::harmonic::Interval;
use crate::quad::{frac_pair_on_reciprocal, gamma, integrate, FracOrder, QuadResult, Tolerance};

fn over_x2<F: RealFn + ?Sized>(f: &F, iv: Interval, tol: Tolerance) -> Result<QuadResult, CatalogError> {
    let w = |x: f64| -> Result<f64, EvalError> { Ok(f.value(x)? / (x * x)) };
    Ok(integrate(&w, iv.a(), iv.b(), tol)?)
}

fn endpoint_avg<F: RealFn + ?Sized>(f: &F, iv: Interval) -> Result<f64, EvalError> {
    Ok(0.5 * (f.value(iv.a())? + f.value(iv.b())?))
}

fn chain(lhs: f64, mid: f64, rhs: f64, err: f64, parts: Vec<Part>) -> SidesResult {
    SidesResult {
        lhs,
        mid: Some(mid),
        rhs,
        quad_error_budget: err + rounding(&[lhs, mid, rhs]),
        relation: Relation::Chain,
        parts,
        constants: None,
    }
}

/// `f(H) <= ab/(b-a) int_a^b f/x^2 <= (f(a) + f(b))/2`.
pub fn hh_chain<F: RealFn + ?Sized>(f: &F, iv: Interval, tol: Tolerance) -> Result<SidesResult, CatalogError> {
    let (a, b) = (iv.a(), iv.b());
    let i = over_x2(f, iv, tol)?;
    let k = a * b / (b - a);
    Ok(chain(
        f.value(iv.harmonic_mean())?,
        k * i.value,
        endpoint_avg(f, iv)?,
        k * i.abs_error_estimate,
        vec![Part::new("int_f_over_x2", i)],
    ))
}

/// Fractional chain with the middle term
/// `Gamma(alpha+1)/2 (ab/(b-a))^alpha [J_{1/a-}(f o 1/x)(1/b) + J_{1/b+}(f o 1/x)(1/a)]`.
pub fn hh_frac_chain<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    alpha: FracOrder,
    tol: Tolerance,
) -> Result<SidesResult, CatalogError> {
    let al = alpha.get();
    let p = frac_pair_on_reciprocal(f, iv, alpha, tol)?.sum();
    let k = 0.5 * gamma(al + 1.0)? * (1.0 / iv.reciprocal_length()).powf(al);
    Ok(chain(
        f.value(iv.harmonic_mean())?,
        k * p.value,
        endpoint_avg(f, iv)?,
        k * p.abs_error_estimate,
        vec![Part::new("pair_f", p)],
    ))
}

/// Weighted chain
/// `f(H) int g/x^2 <= int f g/x^2 <= (f(a)+f(b))/2 int g/x^2`.
pub fn fejer_chain<F: RealFn + ?Sized, G: RealFn + ?Sized>(
    f: &F,
    g: &G,
    iv: Interval,
    tol: Tolerance,
) -> Result<SidesResult, CatalogError> {
    let gi = over_x2(g, iv, tol)?;
    let fg = |x: f64| -> Result<f64, EvalError> { Ok(f.value(x)? * g.value(x)?) };
    let fgi = over_x2(&fg, iv, tol)?;
    let fh = f.value(iv.harmonic_mean())?;
    let avg = endpoint_avg(f, iv)?;
    Ok(chain(
        fh * gi.value,
        fgi.value,
        avg * gi.value,
        (fh.abs() + avg.abs()) * gi.abs_error_estimate + fgi.abs_error_estimate,
        vec![Part::new("int_g_over_x2", gi), Part::new("int_fg_over_x2", fgi)],
    ))
}

/// Fractional weighted chain built from the reciprocal pairs of `g` and
/// `fg`.
pub fn fejer_frac_chain<F: RealFn + ?Sized, G: RealFn + ?Sized>(
    f: &F,
    g: &G,
    iv: Interval,
    alpha: FracOrder,
    tol: Tolerance,
) -> Result<SidesResult, CatalogError> {
    let pg = frac_pair_on_reciprocal(g, iv, alpha, tol)?.sum();
    let fg = |x: f64| -> Result<f64, EvalError> { Ok(f.value(x)? * g.value(x)?) };
    let pfg = frac_pair_on_reciprocal(&fg, iv, alpha, tol)?.sum();
    let fh = f.value(iv.harmonic_mean())?;
    let avg = endpoint_avg(f, iv)?;
    Ok(chain(
        fh * pg.value,
        pfg.value,
        avg * pg.value,
        (fh.abs() + avg.abs()) * pg.abs_error_estimate + pfg.abs_error_estimate,
        vec![Part::new("pair_g", pg), Part::new("pair_fg", pfg)],
    ))
}
