//! The three-term constant families multiplying `|f'(a)|`, `|f'(H)|` and
//! `|f'(b)|` in the derivative bounds.

use super::CatalogError;
use crate::expr::{EvalError, Expr};
use crate::harmonic::{DomainError, HarmonicFrame, Interval};
use crate::quad::{integrate, FracOrder, QuadResult, Tolerance};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantFamily {
    Zeta,
    CAlphaExact,
    CAlphaSmall,
    CAlphaQ,
}

impl ConstantFamily {
    pub fn name(self) -> &'static str {
        match self {
            ConstantFamily::Zeta => "zeta",
            ConstantFamily::CAlphaExact => "c-alpha-exact",
            ConstantFamily::CAlphaSmall => "c-alpha-small",
            ConstantFamily::CAlphaQ => "c-alpha-q",
        }
    }
}

/// Which form of the `C(alpha)` constants to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CVariant {
    #[default]
    Exact,
    SmallAlpha,
}

impl CVariant {
    pub fn name(self) -> &'static str {
        match self {
            CVariant::Exact => "exact",
            CVariant::SmallAlpha => "small-alpha",
        }
    }
}

impl std::str::FromStr for CVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(CVariant::Exact),
            "small-alpha" => Ok(CVariant::SmallAlpha),
            _ => Err(format!("unknown variant `{s}` (expected exact or small-alpha)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub family: ConstantFamily,
    pub alpha: Option<f64>,
    pub q: Option<f64>,
    /// `c3` taken along the lower path instead of
    /// the upper path.
    pub strict_paper: bool,
    pub abs_error: [f64; 3],
}

impl BoundConstants {
    pub fn values(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    fn from_results(
        r: [QuadResult; 3],
        family: ConstantFamily,
        alpha: Option<f64>,
        q: Option<f64>,
        strict_paper: bool,
    ) -> Self {
        BoundConstants {
            c1: r[0].value,
            c2: r[1].value,
            c3: r[2].value,
            family,
            alpha,
            q,
            strict_paper,
            abs_error: [r[0].abs_error_estimate, r[1].abs_error_estimate, r[2].abs_error_estimate],
        }
    }
}

/// `(1+t)^alpha - (1-t)^alpha`.
pub fn alpha_kernel(alpha: f64, t: f64) -> f64 {
    (1.0 + t).powf(alpha) - (1.0 - t).powf(alpha)
}

fn t_integral(
    tol: Tolerance,
    g: impl Fn(f64) -> Result<f64, EvalError> + Sync,
) -> Result<QuadResult, CatalogError> {
    Ok(integrate(&g, 0.0, 1.0, tol)?)
}

/// `|2h(L(t)) - h(b)|` and the upper-path analogue.
pub(crate) fn h_kernels(
    h: &Expr,
    fr: HarmonicFrame,
) -> Result<(impl Fn(f64) -> Result<f64, EvalError> + Sync + '_, impl Fn(f64) -> Result<f64, EvalError> + Sync + '_), EvalError>
{
    let hb = h.eval(fr.interval().b())?;
    let kl = move |t: f64| Ok((2.0 * h.eval(fr.lower(t))? - hb).abs());
    let ku = move |t: f64| Ok((2.0 * h.eval(fr.upper(t))? - hb).abs());
    Ok((kl, ku))
}

pub fn zeta_constants(h: &Expr, iv: Interval, tol: Tolerance) -> Result<BoundConstants, CatalogError> {
    let fr = iv.frame();
    let (kl, ku) = h_kernels(h, fr)?;
    let z1 = t_integral(tol, |t| Ok(kl(t)? * (1.0 - t) * fr.lower(t).powi(2)))?;
    let z2l = t_integral(tol, |t| Ok(t * fr.lower(t).powi(2) * kl(t)?))?;
    let z2u = t_integral(tol, |t| Ok(t * fr.upper(t).powi(2) * ku(t)?))?;
    let z3 = t_integral(tol, |t| Ok(ku(t)? * (1.0 - t) * fr.upper(t).powi(2)))?;
    Ok(BoundConstants::from_results([z1, z2l.plus(z2u), z3], ConstantFamily::Zeta, None, None, false))
}

pub fn c_alpha_constants(
    iv: Interval,
    alpha: FracOrder,
    variant: CVariant,
    strict_paper: bool,
    tol: Tolerance,
) -> Result<BoundConstants, CatalogError> {
    let fr = iv.frame();
    let al = alpha.get();
    let l2 = |t: f64| fr.lower(t).powi(2);
    let u2 = |t: f64| fr.upper(t).powi(2);
    match variant {
        CVariant::Exact => {
            let k = |t: f64| alpha_kernel(al, t);
            let c1 = t_integral(tol, |t| Ok((1.0 - t) * k(t) * l2(t)))?;
            let c2 = t_integral(tol, |t| Ok(t * k(t) * (l2(t) + u2(t))))?;
            let c3 = if strict_paper {
                c1
            } else {
                t_integral(tol, |t| Ok((1.0 - t) * k(t) * u2(t)))?
            };
            Ok(BoundConstants::from_results(
                [c1, c2, c3],
                ConstantFamily::CAlphaExact,
                Some(al),
                None,
                strict_paper,
            ))
        }
        CVariant::SmallAlpha => {
            if al > 1.0 {
                return Err(DomainError::Parameter {
                    name: "alpha",
                    value: al,
                    expected: "(0, 1] for the small-alpha variant",
                }
                .into());
            }
            let c1 = t_integral(tol, |t| Ok((1.0 - t) * t.powf(al) * l2(t)))?;
            let c2 = t_integral(tol, |t| Ok(t.powf(al + 1.0) * (l2(t) + u2(t))))?;
            let c3 = t_integral(tol, |t| Ok((1.0 - t) * t.powf(al) * u2(t)))?;
            Ok(BoundConstants::from_results(
                [c1, c2, c3],
                ConstantFamily::CAlphaSmall,
                Some(al),
                None,
                false,
            ))
        }
    }
}

pub(crate) fn check_q(q: f64) -> Result<(), DomainError> {
    if q > 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(DomainError::Parameter { name: "q", value: q, expected: "q > 1" })
    }
}

pub fn c_alpha_q_constants(
    iv: Interval,
    alpha: FracOrder,
    q: f64,
    tol: Tolerance,
) -> Result<BoundConstants, CatalogError> {
    check_q(q)?;
    c_alpha_q_unchecked(iv, alpha, q, tol)
}

/// Same integrals without the `q > 1` guard, so `q = 1` can be compared
/// against the other families.
pub fn c_alpha_q_unchecked(
    iv: Interval,
    alpha: FracOrder,
    q: f64,
    tol: Tolerance,
) -> Result<BoundConstants, CatalogError> {
    let fr = iv.frame();
    let al = alpha.get();
    let k = |t: f64| alpha_kernel(al, t);
    let l = |t: f64| fr.lower(t).powf(2.0 * q);
    let u = |t: f64| fr.upper(t).powf(2.0 * q);
    let c1 = t_integral(tol, |t| Ok(k(t) * t * l(t)))?;
    let c2 = t_integral(tol, |t| Ok(k(t) * (1.0 - t) * (l(t) + u(t))))?;
    let c3 = t_integral(tol, |t| Ok(k(t) * t * u(t)))?;
    Ok(BoundConstants::from_results([c1, c2, c3], ConstantFamily::CAlphaQ, Some(al), Some(q), false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn iv12() -> Interval {
        Interval::new(1.0, 2.0).unwrap()
    }

    #[test]
    fn zero_kernel_gives_zero() {
        let z = zeta_constants(&parse("0").unwrap(), iv12(), Tolerance::default()).unwrap();
        assert_eq!(z.values(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn constant_kernel_is_scaled() {
        let one = zeta_constants(&parse("1").unwrap(), iv12(), Tolerance::default()).unwrap();
        let three = zeta_constants(&parse("3").unwrap(), iv12(), Tolerance::default()).unwrap();
        for (x, y) in one.values().iter().zip(three.values()) {
            assert!((3.0 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_at_one_is_twice_small_at_one() {
        let al = FracOrder::new(1.0).unwrap();
        let e = c_alpha_constants(iv12(), al, CVariant::Exact, false, Tolerance::default()).unwrap();
        let s = c_alpha_constants(iv12(), al, CVariant::SmallAlpha, false, Tolerance::default()).unwrap();
        for (x, y) in e.values().iter().zip(s.values()) {
            assert!((x - 2.0 * y).abs() < 1e-12);
        }
    }

    #[test]
    fn strict_paper_duplicates_c1() {
        let al = FracOrder::new(0.5).unwrap();
        let c = c_alpha_constants(iv12(), al, CVariant::Exact, true, Tolerance::default()).unwrap();
        assert_eq!(c.c1, c.c3);
        assert!(c.strict_paper);
    }

    #[test]
    fn small_variant_rejects_large_alpha() {
        let al = FracOrder::new(1.5).unwrap();
        assert!(c_alpha_constants(iv12(), al, CVariant::SmallAlpha, false, Tolerance::default()).is_err());
    }

    #[test]
    fn q_constants_nonnegative_and_guarded() {
        let al = FracOrder::new(0.5).unwrap();
        let c = c_alpha_q_constants(iv12(), al, 2.0, Tolerance::default()).unwrap();
        assert!(c.values().iter().all(|v| *v >= 0.0));
        assert!(c_alpha_q_constants(iv12(), al, 1.0, Tolerance::default()).is_err());
    }

    #[test]
    fn kernel_integral_closed_form() {
        for al in [0.3, 1.0, 2.5] {
            let r = integrate(&|t: f64| Ok(alpha_kernel(al, t)), 0.0, 1.0, Tolerance::default()).unwrap();
            let exact = (2f64.powf(al + 1.0) - 2.0) / (al + 1.0);
            assert!((r.value - exact).abs() <= 1e-8 * exact, "alpha {al}: {}", r.value - exact);
        }
    }
}
