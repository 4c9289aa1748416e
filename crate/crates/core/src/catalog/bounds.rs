//! The derivative identity, the two-sided bounds built on it, and the
//! power-difference lemma.

use super::constants::{check_q, h_kernels};
use super::{
    c_alpha_constants, c_alpha_q_constants, rounding, sup_norm, zeta_constants, BoundConstants,
    CVariant, CatalogError, Part, Relation, SidesResult,
};
use crate::expr::{EvalError, Expr};
use crate::func::RealFn;
use crate::harmonic::{lemma1_sides, DomainError, Interval};
use crate::quad::{frac_pair_on_reciprocal, gamma, integrate, FracOrder, QuadResult, Tolerance};

/// Settings shared by the bounds that involve a weight `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightOptions {
    pub sup_grid: usize,
    pub sup_safety: f64,
}

impl Default for WeightOptions {
    fn default() -> Self {
        WeightOptions { sup_grid: super::DEFAULT_SUP_GRID, sup_safety: super::DEFAULT_SUP_SAFETY }
    }
}

/// A computed side with its propagated error.
#[derive(Debug, Clone, Copy)]
struct Side {
    value: f64,
    err: f64,
}

fn bound(lhs: Side, rhs: Side, terms: &[f64], parts: Vec<Part>, constants: Option<BoundConstants>) -> SidesResult {
    let mut all = terms.to_vec();
    all.extend([lhs.value, rhs.value]);
    SidesResult {
        lhs: lhs.value,
        mid: None,
        rhs: rhs.value,
        quad_error_budget: lhs.err + rhs.err + rounding(&all),
        relation: Relation::Bound,
        parts,
        constants,
    }
}

/// `|f'(a)|, |f'(H)|, |f'(b)|`
fn abs_derivs(f: &Expr, iv: Interval) -> Result<[f64; 3], EvalError> {
    Ok([
        f.deriv(iv.a())?.abs(),
        f.deriv(iv.harmonic_mean())?.abs(),
        f.deriv(iv.b())?.abs(),
    ])
}

/// `prefactor * sum c_i w_i` with the error of the constants carried along.
fn weighted(prefactor: f64, c: &BoundConstants, w: [f64; 3]) -> Side {
    let vals = c.values();
    let value = prefactor * (0..3).map(|i| vals[i] * w[i]).sum::<f64>();
    let err = prefactor.abs() * (0..3).map(|i| c.abs_error[i] * w[i]).sum::<f64>();
    Side { value, err }
}

/// `prefactor * (sum c_i w_i)^(1/q)`; the error uses monotonicity of the
/// root instead of a derivative, which stays finite at zero.
fn weighted_root(prefactor: f64, c: &BoundConstants, w: [f64; 3], q: f64) -> Side {
    let s = weighted(1.0, c, w);
    let p = 1.0 / q;
    let value = prefactor * s.value.max(0.0).powf(p);
    let upper = prefactor * (s.value.max(0.0) + s.err).powf(p);
    Side { value, err: (upper - value).abs() }
}

fn identity_left(f: &Expr, h: &Expr, iv: Interval, tol: Tolerance) -> Result<(Side, Vec<f64>, Part), CatalogError> {
    let (a, b) = (iv.a(), iv.b());
    let (ha, hb) = (h.eval(a)?, h.eval(b)?);
    let (fa, fb) = (f.eval(a)?, f.eval(b)?);
    let fdh = |x: f64| -> Result<f64, EvalError> { Ok(f.eval(x)? * h.deriv(x)?) };
    let i = integrate(&fdh, a, b, tol)?;
    let t1 = (hb - 2.0 * ha) * fa / 2.0;
    let t2 = hb * fb / 2.0;
    Ok((
        Side { value: t1 + t2 - i.value, err: i.abs_error_estimate },
        vec![t1, t2, i.value],
        Part::new("int_f_dh", i),
    ))
}

/// Left side `[h(b) - 2h(a)] f(a)/2 + h(b) f(b)/2 - int f h'` against the
/// right side `(b-a)/(4ab) (int (2h(L) - h(b)) f'(L) L^2 + same on U)`.
pub fn identity_2_1(f: &Expr, h: &Expr, iv: Interval, tol: Tolerance) -> Result<SidesResult, CatalogError> {
    let (left, mut terms, part) = identity_left(f, h, iv, tol)?;
    let fr = iv.frame();
    let hb = h.eval(iv.b())?;
    let along = |path: fn(&crate::harmonic::HarmonicFrame, f64) -> f64| {
        move |t: f64| -> Result<f64, EvalError> {
            let x = path(&fr, t);
            Ok((2.0 * h.eval(x)? - hb) * f.deriv(x)? * x * x)
        }
    };
    let il = integrate(&along(|fr, t| fr.lower(t)), 0.0, 1.0, tol)?;
    let iu = integrate(&along(|fr, t| fr.upper(t)), 0.0, 1.0, tol)?;
    let k = iv.reciprocal_length() / 4.0;
    let right = Side {
        value: k * (il.value + iu.value),
        err: k * (il.abs_error_estimate + iu.abs_error_estimate),
    };
    terms.extend([k * il.value, k * iu.value]);
    let mut r = bound(left, right, &terms, vec![part, Part::new("int_kernel_L", il), Part::new("int_kernel_U", iu)], None);
    r.relation = Relation::Identity;
    Ok(r)
}

/// `|identity left side| <= (b-a)/(4ab) [zeta1 |f'(a)| + zeta2 |f'(H)| + zeta3 |f'(b)|]`.
pub fn bound_h_kernel(f: &Expr, h: &Expr, iv: Interval, tol: Tolerance) -> Result<SidesResult, CatalogError> {
    let (left, terms, part) = identity_left(f, h, iv, tol)?;
    let z = zeta_constants(h, iv, tol)?;
    let rhs = weighted(iv.reciprocal_length() / 4.0, &z, abs_derivs(f, iv)?);
    Ok(bound(Side { value: left.value.abs(), err: left.err }, rhs, &terms, vec![part], Some(z)))
}

/// `|(f(a)+f(b))/2 * pair(g) - pair(fg)|` with the reciprocal fractional
/// pairs.
fn frac_weighted_lhs<G: RealFn + ?Sized>(
    f: &Expr,
    g: &G,
    iv: Interval,
    alpha: FracOrder,
    tol: Tolerance,
) -> Result<(Side, Vec<f64>, Vec<Part>), CatalogError> {
    let avg = 0.5 * (f.eval(iv.a())? + f.eval(iv.b())?);
    let pg = frac_pair_on_reciprocal(g, iv, alpha, tol)?.sum();
    let fg = |x: f64| -> Result<f64, EvalError> { Ok(f.eval(x)? * g.value(x)?) };
    let pfg = frac_pair_on_reciprocal(&fg, iv, alpha, tol)?.sum();
    let t1 = avg * pg.value;
    Ok((
        Side {
            value: (t1 - pfg.value).abs(),
            err: avg.abs() * pg.abs_error_estimate + pfg.abs_error_estimate,
        },
        vec![t1, pfg.value],
        vec![Part::new("pair_g", pg), Part::new("pair_fg", pfg)],
    ))
}

fn weight_sup<G: RealFn + ?Sized>(g: &G, iv: Interval, opts: WeightOptions) -> Result<f64, EvalError> {
    Ok(sup_norm(g, iv, opts.sup_grid)?.inflated(opts.sup_safety))
}

/// Fractional weighted bound. `Exact` uses the `2^(alpha+1)` prefactor and
/// the `(1+t)^alpha - (1-t)^alpha` constants; `SmallAlpha` (`alpha <= 1`)
/// the prefactor with denominator `2` and the `t^alpha` constants.
#[allow(clippy::too_many_arguments)]
pub fn bound_frac_weighted<G: RealFn + ?Sized>(
    f: &Expr,
    g: &G,
    iv: Interval,
    alpha: FracOrder,
    variant: CVariant,
    strict_paper: bool,
    opts: WeightOptions,
    tol: Tolerance,
) -> Result<SidesResult, CatalogError> {
    let al = alpha.get();
    let c = c_alpha_constants(iv, alpha, variant, strict_paper, tol)?;
    let (lhs, terms, parts) = frac_weighted_lhs(f, g, iv, alpha, tol)?;
    let (a, b) = (iv.a(), iv.b());
    let denom_pow2 = match variant {
        CVariant::Exact => 2f64.powf(al + 1.0),
        CVariant::SmallAlpha => 2.0,
    };
    let pref = (b - a).powf(al + 1.0) * weight_sup(g, iv, opts)?
        / (denom_pow2 * (a * b).powf(al + 1.0) * gamma(al + 1.0)?);
    let rhs = weighted(pref, &c, abs_derivs(f, iv)?);
    Ok(bound(lhs, rhs, &terms, parts, Some(c)))
}

/// Which specialization of the fractional weighted bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    /// `alpha = 1`, general weight.
    OrderOne,
    /// unit weight, general `alpha`.
    UnitWeight,
    /// unit weight and `alpha = 1`.
    Plain,
}

/// `|(f(a)+f(b))/2 - ab/(b-a) int f/x^2|`
fn hh_lhs(f: &Expr, iv: Interval, tol: Tolerance) -> Result<(Side, Vec<f64>, Part), CatalogError> {
    let (a, b) = (iv.a(), iv.b());
    let avg = 0.5 * (f.eval(a)? + f.eval(b)?);
    let w = |x: f64| -> Result<f64, EvalError> { Ok(f.eval(x)? / (x * x)) };
    let i = integrate(&w, a, b, tol)?;
    let k = a * b / (b - a);
    Ok((
        Side { value: (avg - k * i.value).abs(), err: k * i.abs_error_estimate },
        vec![avg, k * i.value],
        Part::new("int_f_over_x2", i),
    ))
}

#[allow(clippy::too_many_arguments)]
pub fn bound_special(
    f: &Expr,
    g: Option<&dyn RealFn>,
    iv: Interval,
    case: SpecialCase,
    alpha: Option<FracOrder>,
    strict_paper: bool,
    opts: WeightOptions,
    tol: Tolerance,
) -> Result<SidesResult, CatalogError> {
    let (a, b) = (iv.a(), iv.b());
    let one = FracOrder::new(1.0)?;
    let d = abs_derivs(f, iv)?;
    match case {
        SpecialCase::OrderOne => {
            let g = g.ok_or(DomainError::Parameter {
                name: "g",
                value: f64::NAN,
                expected: "a weight function",
            })?;
            let c = c_alpha_constants(iv, one, CVariant::SmallAlpha, false, tol)?;
            let gi = integrate(&|x: f64| Ok(g.value(x)? / (x * x)), a, b, tol)?;
            let fgi = integrate(&|x: f64| Ok(f.eval(x)? * g.value(x)? / (x * x)), a, b, tol)?;
            let avg = 0.5 * (f.eval(a)? + f.eval(b)?);
            let t1 = avg * gi.value;
            let lhs = Side {
                value: (t1 - fgi.value).abs(),
                err: avg.abs() * gi.abs_error_estimate + fgi.abs_error_estimate,
            };
            let pref = (b - a).powi(2) / (4.0 * (a * b).powi(2)) * weight_sup(g, iv, opts)?;
            let rhs = weighted(pref, &c, d);
            let parts = vec![Part::new("int_g_over_x2", gi), Part::new("int_fg_over_x2", fgi)];
            Ok(bound(lhs, rhs, &[t1, fgi.value], parts, Some(c)))
        }
        SpecialCase::UnitWeight => {
            let alpha = alpha.ok_or(DomainError::Parameter {
                name: "alpha",
                value: f64::NAN,
                expected: "an order alpha > 0",
            })?;
            let al = alpha.get();
            let c = c_alpha_constants(iv, alpha, CVariant::Exact, strict_paper, tol)?;
            let avg = 0.5 * (f.eval(a)? + f.eval(b)?);
            let p = frac_pair_on_reciprocal(f, iv, alpha, tol)?.sum();
            let k = gamma(al + 1.0)? * (a * b).powf(al) / (2.0 * (b - a).powf(al));
            let lhs = Side { value: (avg - k * p.value).abs(), err: k * p.abs_error_estimate };
            let rhs = weighted((b - a) / (2f64.powf(al + 2.0) * a * b), &c, d);
            Ok(bound(lhs, rhs, &[avg, k * p.value], vec![Part::new("pair_f", p)], Some(c)))
        }
        SpecialCase::Plain => {
            let c = c_alpha_constants(iv, one, CVariant::SmallAlpha, false, tol)?;
            let (lhs, terms, part) = hh_lhs(f, iv, tol)?;
            let rhs = weighted((b - a) / (4.0 * a * b), &c, d);
            Ok(bound(lhs, rhs, &terms, vec![part], Some(c)))
        }
    }
}

/// `A^(1 - 1/q) B^(1/q)` with the error from the corner `(A + dA, B + dB)`.
fn holder_product(a: QuadResult, b: QuadResult, q: f64) -> Side {
    let p = 1.0 - 1.0 / q;
    let r = 1.0 / q;
    let av = a.value.max(0.0);
    let bv = b.value.max(0.0);
    let value = av.powf(p) * bv.powf(r);
    let upper = (av + a.abs_error_estimate).powf(p) * (bv + b.abs_error_estimate).powf(r);
    Side { value, err: upper - value }
}

/// The Hoelder form of the derivative bound for `|f'|^q`.
pub fn bound_h_kernel_q(f: &Expr, h: &Expr, iv: Interval, q: f64, tol: Tolerance) -> Result<SidesResult, CatalogError> {
    check_q(q)?;
    let (left, mut terms, part) = identity_left(f, h, iv, tol)?;
    let fr = iv.frame();
    let (kl, ku) = h_kernels(h, fr)?;
    let [da, dh, db] = abs_derivs(f, iv)?.map(|d| d.powf(q));
    let a1 = integrate(&kl, 0.0, 1.0, tol)?;
    let b1 = integrate(
        &|t: f64| {
            let l = fr.lower(t).powf(2.0 * q);
            Ok(kl(t)? * (t * l * da + (1.0 - t) * l * dh))
        },
        0.0,
        1.0,
        tol,
    )?;
    let a2 = integrate(&ku, 0.0, 1.0, tol)?;
    let b2 = integrate(
        &|t: f64| {
            let u = fr.upper(t).powf(2.0 * q);
            Ok(ku(t)? * (t * u * db + (1.0 - t) * u * dh))
        },
        0.0,
        1.0,
        tol,
    )?;
    let k = iv.reciprocal_length() / 4.0;
    let p1 = holder_product(a1, b1, q);
    let p2 = holder_product(a2, b2, q);
    let rhs = Side { value: k * (p1.value + p2.value), err: k * (p1.err + p2.err) };
    terms.extend([k * p1.value, k * p2.value]);
    let parts = vec![
        part,
        Part::new("int_abs_kernel_L", a1),
        Part::new("int_weighted_L", b1),
        Part::new("int_abs_kernel_U", a2),
        Part::new("int_weighted_U", b2),
    ];
    Ok(bound(Side { value: left.value.abs(), err: left.err }, rhs, &terms, parts, None))
}

/// Power-mean form of the fractional weighted bound.
#[allow(clippy::too_many_arguments)]
pub fn bound_frac_weighted_q<G: RealFn + ?Sized>(
    f: &Expr,
    g: &G,
    iv: Interval,
    alpha: FracOrder,
    q: f64,
    opts: WeightOptions,
    tol: Tolerance,
) -> Result<SidesResult, CatalogError> {
    let al = alpha.get();
    let c = c_alpha_q_constants(iv, alpha, q, tol)?;
    let (lhs, terms, parts) = frac_weighted_lhs(f, g, iv, alpha, tol)?;
    let (a, b) = (iv.a(), iv.b());
    let pref = (b - a).powf(al + 1.0) * weight_sup(g, iv, opts)?
        / (2f64.powf(al + 1.0) * (a * b).powf(al + 1.0) * gamma(al + 1.0)?)
        * (4.0 * (2f64.powf(al) - 1.0) / (al + 1.0)).powf(1.0 - 1.0 / q);
    let rhs = weighted_root(pref, &c, abs_derivs(f, iv)?.map(|d| d.powf(q)), q);
    Ok(bound(lhs, rhs, &terms, parts, Some(c)))
}

/// Unit weight, `alpha = 1` form of the power-mean bound.
pub fn bound_plain_q(f: &Expr, iv: Interval, q: f64, tol: Tolerance) -> Result<SidesResult, CatalogError> {
    let c = c_alpha_q_constants(iv, FracOrder::new(1.0)?, q, tol)?;
    let (lhs, terms, part) = hh_lhs(f, iv, tol)?;
    let (a, b) = (iv.a(), iv.b());
    let pref = (b - a) / (2f64.powf(2.0 + 1.0 / q) * a * b);
    let rhs = weighted_root(pref, &c, abs_derivs(f, iv)?.map(|d| d.powf(q)), q);
    Ok(bound(lhs, rhs, &terms, vec![part], Some(c)))
}

/// `|a^theta - b^theta| <= (b - a)^theta`.
pub fn lemma1(a: f64, b: f64, theta: f64) -> Result<SidesResult, CatalogError> {
    let (lhs, rhs) = lemma1_sides(a, b, theta)?;
    let terms = [a.powf(theta), b.powf(theta)];
    Ok(bound(Side { value: lhs, err: 0.0 }, Side { value: rhs, err: 0.0 }, &terms, vec![], None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::harmonic::Symmetrized;

    fn iv12() -> Interval {
        Interval::new(1.0, 2.0).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn identity_cases() {
        for (f, h) in [("x", "x"), ("7", "x^2"), ("x^2", "3"), ("exp(x)", "sqrt(x)")] {
            let r = identity_2_1(&p(f), &p(h), iv12(), tol()).unwrap();
            assert!(r.residual().abs() <= 1e-9 * (1.0 + r.lhs.abs()), "{f} {h}: {r:?}");
            assert!(r.holds());
        }
        let c = identity_2_1(&p("7"), &p("x^2"), iv12(), tol()).unwrap();
        assert!(c.lhs.abs() < 1e-12 && c.rhs == 0.0);
    }

    #[test]
    fn h_kernel_constant_and_scaling() {
        let r = bound_h_kernel(&p("4"), &p("x"), iv12(), tol()).unwrap();
        assert!(r.lhs.abs() < 1e-12 && r.rhs == 0.0);
        let f = p("x");
        let r1 = bound_h_kernel(&f, &p("x"), iv12(), tol()).unwrap();
        let r2 = bound_h_kernel(&f.scaled(2.0), &p("x"), iv12(), tol()).unwrap();
        assert!((r2.lhs - 2.0 * r1.lhs).abs() <= 1e-12 * r2.lhs.abs());
        assert!((r2.rhs - 2.0 * r1.rhs).abs() <= 1e-12 * r2.rhs.abs());
    }

    #[test]
    fn plain_closed_form_lhs() {
        let r = bound_special(&p("x"), None, iv12(), SpecialCase::Plain, None, false, WeightOptions::default(), tol())
            .unwrap();
        assert!((r.lhs - (1.5 - 2.0 * std::f64::consts::LN_2)).abs() < 1e-10);
    }

    #[test]
    fn unit_weight_at_one_matches_plain() {
        let f = p("x^3");
        let one = FracOrder::new(1.0).unwrap();
        let a = bound_special(&f, None, iv12(), SpecialCase::UnitWeight, Some(one), false, WeightOptions::default(), tol())
            .unwrap();
        let b = bound_special(&f, None, iv12(), SpecialCase::Plain, None, false, WeightOptions::default(), tol())
            .unwrap();
        assert!((a.lhs - b.lhs).abs() < 1e-9 && (a.rhs - b.rhs).abs() < 1e-9);
    }

    #[test]
    fn frac_weighted_q_at_one_matches_plain_q() {
        let f = p("x^2");
        let one_fn = p("1");
        let opts = WeightOptions { sup_safety: 1.0, ..WeightOptions::default() };
        let c3 = bound_frac_weighted_q(&f, &one_fn, iv12(), FracOrder::new(1.0).unwrap(), 2.0, opts, tol()).unwrap();
        let c4 = bound_plain_q(&f, iv12(), 2.0, tol()).unwrap();
        let norm = 2.0 * iv12().reciprocal_length();
        assert!((c3.lhs / norm - c4.lhs).abs() < 1e-9);
        assert!((c3.rhs / norm - c4.rhs).abs() < 1e-9);
    }

    #[test]
    fn h_kernel_q_holds_for_identity() {
        let r = bound_h_kernel_q(&p("x"), &p("x"), iv12(), 2.0, tol()).unwrap();
        assert!(r.holds());
        assert!(bound_h_kernel_q(&p("x"), &p("x"), iv12(), 1.0, tol()).is_err());
    }

    #[test]
    fn constant_f_has_zero_lhs() {
        let base = p("x");
        let g = Symmetrized::new(&base, iv12());
        let al = FracOrder::new(0.5).unwrap();
        let r = bound_frac_weighted(&p("2"), &g, iv12(), al, CVariant::Exact, false, WeightOptions::default(), tol())
            .unwrap();
        assert!(r.lhs.abs() < 1e-12 && r.rhs == 0.0 && r.holds());
    }

    #[test]
    fn lemma_examples() {
        let r = lemma1(1.0, 4.0, 0.5).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 3f64.sqrt()).abs() < 1e-15);
        assert!(lemma1(1.0, 4.0, 1.5).is_err());
    }
}
