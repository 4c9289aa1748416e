//! Deliberately naive reference integrators: composite trapezoid and
//! midpoint sums and seeded Monte Carlo. Nothing here shares rule code with
//! [`crate::quad`]; the constant families and fractional pairs are
//! re-derived from their defining integrands.
//!
//! Sums are split into fixed-size chunks evaluated in parallel and then
//! combined by a fixed-order pairwise reduction, so results do not depend
//! on the number of worker threads. Monte Carlo draws come from ChaCha20
//! (`rand_chacha`), seeded with the user seed and one stream per chunk.

use crate::catalog::{BoundConstants, CVariant, ConstantFamily};
use crate::expr::{EvalError, Expr};
use crate::func::RealFn;
use crate::harmonic::{DomainError, Interval};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Generator recorded in every Monte Carlo estimate.
pub const GENERATOR: &str = "ChaCha20";

const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OracleMethod {
    Trapezoid { n: usize },
    RiemannMidpoint { n: usize },
    MonteCarlo { n: usize, seed: u64, generator: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub value: f64,
    pub method: OracleMethod,
    /// Present for Monte Carlo only.
    pub stderr: Option<f64>,
}

fn pairwise(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise(&v[..n / 2]) + pairwise(&v[n / 2..]),
    }
}

fn chunked_sum<T>(n: usize, term: T) -> Result<f64, EvalError>
where
    T: Fn(usize) -> Result<f64, EvalError> + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partial = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut s = 0.0;
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                s += term(i)?;
            }
            Ok(s)
        })
        .collect::<Result<Vec<f64>, EvalError>>()?;
    Ok(pairwise(&partial))
}

fn check_range(lo: f64, hi: f64) -> Result<(), DomainError> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(DomainError::Parameter { name: "hi - lo", value: hi - lo, expected: "> 0 with finite ends" })
    }
}

fn check_n(n: usize, min: usize) -> Result<(), DomainError> {
    if n >= min {
        Ok(())
    } else {
        Err(DomainError::Parameter { name: "n", value: n as f64, expected: "large enough for the method" })
    }
}

/// Composite midpoint rule on `n` panels.
pub fn midpoint<F: RealFn + ?Sized>(f: &F, lo: f64, hi: f64, n: usize) -> Result<OracleEstimate, OracleError> {
    check_range(lo, hi)?;
    check_n(n, 1)?;
    let step = (hi - lo) / n as f64;
    let s = chunked_sum(n, |i| f.value(lo + (i as f64 + 0.5) * step))?;
    Ok(OracleEstimate { value: s * step, method: OracleMethod::RiemannMidpoint { n }, stderr: None })
}

/// Composite trapezoid rule on `n` panels; falls back to the midpoint rule
/// when an endpoint cannot be evaluated.
pub fn trapz<F: RealFn + ?Sized>(f: &F, lo: f64, hi: f64, n: usize) -> Result<OracleEstimate, OracleError> {
    check_range(lo, hi)?;
    check_n(n, 2)?;
    let (flo, fhi) = match (f.value(lo), f.value(hi)) {
        (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() => (a, b),
        _ => return midpoint(f, lo, hi, n),
    };
    let step = (hi - lo) / n as f64;
    let inner = chunked_sum(n - 1, |i| f.value(lo + (i + 1) as f64 * step))?;
    Ok(OracleEstimate {
        value: step * (0.5 * (flo + fhi) + inner),
        method: OracleMethod::Trapezoid { n },
        stderr: None,
    })
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn merge(self, o: Moments) -> Moments {
        if self.count == 0.0 {
            return o;
        }
        if o.count == 0.0 {
            return self;
        }
        let count = self.count + o.count;
        let delta = o.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * o.count / count,
            m2: self.m2 + o.m2 + delta * delta * self.count * o.count / count,
        }
    }
}

fn merge_pairwise(v: &[Moments]) -> Moments {
    match v.len() {
        0 => Moments { count: 0.0, mean: 0.0, m2: 0.0 },
        1 => v[0],
        n => merge_pairwise(&v[..n / 2]).merge(merge_pairwise(&v[n / 2..])),
    }
}

/// Plain Monte Carlo: `(hi - lo)` times the sample mean of `f` at `n`
/// uniform points. Bit-reproducible for a fixed seed.
pub fn mc<F: RealFn + ?Sized>(f: &F, lo: f64, hi: f64, n: usize, seed: u64) -> Result<OracleEstimate, OracleError> {
    check_range(lo, hi)?;
    check_n(n, 100)?;
    let width = hi - lo;
    let chunks = n.div_ceil(CHUNK);
    let parts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut m = Moments { count: 0.0, mean: 0.0, m2: 0.0 };
            for _ in c * CHUNK..((c + 1) * CHUNK).min(n) {
                let u: f64 = rng.random();
                let y = f.value(lo + width * u)?;
                m.count += 1.0;
                let d = y - m.mean;
                m.mean += d / m.count;
                m.m2 += d * (y - m.mean);
            }
            Ok(m)
        })
        .collect::<Result<Vec<Moments>, EvalError>>()?;
    let m = merge_pairwise(&parts);
    let var = if m.count > 1.0 { m.m2 / (m.count - 1.0) } else { 0.0 };
    Ok(OracleEstimate {
        value: width * m.mean,
        method: OracleMethod::MonteCarlo { n, seed, generator: GENERATOR },
        stderr: Some(width * (var.max(0.0) / m.count).sqrt()),
    })
}

/// Which constant family to recompute.
#[derive(Debug, Clone, Copy)]
pub enum OracleFamily<'a> {
    Zeta { h: &'a Expr },
    CAlpha { alpha: f64, variant: CVariant, strict_paper: bool },
    CAlphaQ { alpha: f64, q: f64 },
}

/// Harmonic mean and the two paths written out from scratch.
struct Paths {
    a: f64,
    b: f64,
    hm: f64,
}

impl Paths {
    fn new(iv: Interval) -> Self {
        let (a, b) = (iv.a(), iv.b());
        Paths { a, b, hm: 2.0 / (1.0 / a + 1.0 / b) }
    }
    // 1/L is affine in t between 1/H and 1/a
    fn l(&self, t: f64) -> f64 {
        1.0 / (t / self.a + (1.0 - t) / self.hm)
    }
    fn u(&self, t: f64) -> f64 {
        1.0 / (t / self.b + (1.0 - t) / self.hm)
    }
}

/// Each constant by a midpoint sum with `n` nodes in `t`.
pub fn oracle_constants(iv: Interval, family: OracleFamily<'_>, n: usize) -> Result<BoundConstants, OracleError> {
    check_n(n, 1000)?;
    let p = Paths::new(iv);
    let mid = |g: &(dyn Fn(f64) -> Result<f64, EvalError> + Sync)| -> Result<f64, OracleError> {
        Ok(midpoint(&|t: f64| g(t), 0.0, 1.0, n)?.value)
    };
    let kern = |al: f64, t: f64| (1.0 + t).powf(al) - (1.0 - t).powf(al);
    let (vals, fam, alpha, q, strict) = match family {
        OracleFamily::Zeta { h } => {
            let hb = h.eval(p.b)?;
            let kl = |t: f64| -> Result<f64, EvalError> { Ok((2.0 * h.eval(p.l(t))? - hb).abs()) };
            let ku = |t: f64| -> Result<f64, EvalError> { Ok((2.0 * h.eval(p.u(t))? - hb).abs()) };
            let z1 = mid(&|t| Ok(kl(t)? * (1.0 - t) * p.l(t) * p.l(t)))?;
            let z2 = mid(&|t| Ok(t * (p.l(t) * p.l(t) * kl(t)? + p.u(t) * p.u(t) * ku(t)?)))?;
            let z3 = mid(&|t| Ok(ku(t)? * (1.0 - t) * p.u(t) * p.u(t)))?;
            ([z1, z2, z3], ConstantFamily::Zeta, None, None, false)
        }
        OracleFamily::CAlpha { alpha, variant: CVariant::Exact, strict_paper } => {
            let c1 = mid(&|t| Ok((1.0 - t) * kern(alpha, t) * p.l(t) * p.l(t)))?;
            let c2 = mid(&|t| Ok(t * kern(alpha, t) * (p.l(t) * p.l(t) + p.u(t) * p.u(t))))?;
            let c3 = if strict_paper {
                c1
            } else {
                mid(&|t| Ok((1.0 - t) * kern(alpha, t) * p.u(t) * p.u(t)))?
            };
            ([c1, c2, c3], ConstantFamily::CAlphaExact, Some(alpha), None, strict_paper)
        }
        OracleFamily::CAlpha { alpha, variant: CVariant::SmallAlpha, .. } => {
            let c1 = mid(&|t| Ok((1.0 - t) * t.powf(alpha) * p.l(t) * p.l(t)))?;
            let c2 = mid(&|t| Ok(t.powf(alpha + 1.0) * (p.l(t) * p.l(t) + p.u(t) * p.u(t))))?;
            let c3 = mid(&|t| Ok((1.0 - t) * t.powf(alpha) * p.u(t) * p.u(t)))?;
            ([c1, c2, c3], ConstantFamily::CAlphaSmall, Some(alpha), None, false)
        }
        OracleFamily::CAlphaQ { alpha, q } => {
            let c1 = mid(&|t| Ok(kern(alpha, t) * t * p.l(t).powf(2.0 * q)))?;
            let c2 = mid(&|t| Ok(kern(alpha, t) * (1.0 - t) * (p.l(t).powf(2.0 * q) + p.u(t).powf(2.0 * q))))?;
            let c3 = mid(&|t| Ok(kern(alpha, t) * t * p.u(t).powf(2.0 * q)))?;
            ([c1, c2, c3], ConstantFamily::CAlphaQ, Some(alpha), Some(q), false)
        }
    };
    Ok(BoundConstants {
        c1: vals[0],
        c2: vals[1],
        c3: vals[2],
        family: fam,
        alpha,
        q,
        strict_paper: strict,
        abs_error: [0.0; 3],
    })
}

/// `int_a^b f/x^2` by the trapezoid rule.
pub fn oracle_over_x2<F: RealFn + ?Sized>(f: &F, iv: Interval, n: usize) -> Result<f64, OracleError> {
    let w = |x: f64| -> Result<f64, EvalError> { Ok(f.value(x)? / (x * x)) };
    Ok(trapz(&w, iv.a(), iv.b(), n)?.value)
}

/// Sum of the two reciprocal fractional integrals of `u -> f(1/u)` on
/// `[1/b, 1/a]`. Each kernel is removed by `v = distance^alpha` and the
/// result summed with the midpoint rule in `v`.
pub fn oracle_frac_pair<F: RealFn + ?Sized>(f: &F, iv: Interval, alpha: f64, n: usize) -> Result<f64, OracleError> {
    let (a, b) = (iv.a(), iv.b());
    let (lo, hi) = (1.0 / b, 1.0 / a);
    let top = (hi - lo).powf(alpha);
    let back = |u: f64| -> Result<f64, EvalError> { f.value((1.0 / u).clamp(a, b)) };
    // left operator: kernel (1/a - u)^(alpha-1), anchored at the top end
    let left = |v: f64| back(hi - v.powf(1.0 / alpha));
    // right operator: kernel (u - 1/b)^(alpha-1), anchored at the bottom end
    let right = |v: f64| back(lo + v.powf(1.0 / alpha));
    let s = midpoint(&left, 0.0, top, n)?.value + midpoint(&right, 0.0, top, n)?.value;
    Ok(s / (alpha * statrs::function::gamma::gamma(alpha)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn linear_is_exact_for_trapezoid() {
        let r = trapz(&parse("x").unwrap(), 0.0, 1.0, 10_000).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
        assert_eq!(r.stderr, None);
    }

    #[test]
    fn reciprocal_log_two() {
        let r = trapz(&parse("1/x").unwrap(), 1.0, 2.0, 1_000_000).unwrap();
        assert!((r.value - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn singular_endpoint_falls_back_to_midpoint() {
        let r = trapz(&parse("x^-0.5").unwrap(), 0.0, 1.0, 1_000_000).unwrap();
        assert!(matches!(r.method, OracleMethod::RiemannMidpoint { .. }));
        assert!((r.value - 2.0).abs() < 1e-3);
    }

    #[test]
    fn monte_carlo_constant_and_determinism() {
        let r = mc(&parse("3").unwrap(), 1.0, 3.0, 1000, 5).unwrap();
        assert_eq!((r.value, r.stderr), (6.0, Some(0.0)));
        let f = parse("x^2").unwrap();
        let a = mc(&f, 0.0, 1.0, 1_000_000, 42).unwrap();
        let b = mc(&f, 0.0, 1.0, 1_000_000, 42).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!((a.value - 1.0 / 3.0).abs() <= 4.0 * a.stderr.unwrap());
        assert!(mc(&f, 0.0, 1.0, 10, 1).is_err());
    }

    #[test]
    fn zeta_zero_kernel() {
        let iv = Interval::new(1.0, 2.0).unwrap();
        let h = parse("0").unwrap();
        let c = oracle_constants(iv, OracleFamily::Zeta { h: &h }, 1000).unwrap();
        assert_eq!(c.values(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn frac_pair_of_one() {
        let iv = Interval::new(1.0, 2.0).unwrap();
        let v = oracle_frac_pair(&parse("1").unwrap(), iv, 0.5, 1000).unwrap();
        let exact = 2.0 * 0.5f64.sqrt() / statrs::function::gamma::gamma(1.5);
        assert!((v - exact).abs() < 1e-12);
    }
}
