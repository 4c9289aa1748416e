//! Interval geometry in the reciprocal variable: the harmonic mean, the two
//! paths from the harmonic mean to the endpoints, and harmonic reflection.

use crate::expr::EvalError;
use crate::func::RealFn;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("interval needs 0 < a < b with finite endpoints, got a = {a}, b = {b}")]
    InvalidInterval { a: f64, b: f64 },
    #[error("{name} = {value} outside {expected}")]
    Parameter { name: &'static str, value: f64, expected: &'static str },
    #[error("x = {x} outside [{a}, {b}]")]
    OutsideInterval { x: f64, a: f64, b: f64 },
}

/// Default absolute tolerance for harmonic-symmetry checks (scaled by
/// `max(1, |g|)` on the grid).
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-10;

/// Closed interval `[a, b]` with `0 < a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self, DomainError> {
        if a.is_finite() && b.is_finite() && a > 0.0 && a < b {
            Ok(Interval { a, b })
        } else {
            Err(DomainError::InvalidInterval { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn harmonic_mean(&self) -> f64 {
        harmonic_mean_raw(self.a, self.b)
    }

    /// `1/a - 1/b = (b - a)/(ab)`, the length of the reciprocal interval.
    pub fn reciprocal_length(&self) -> f64 {
        (self.b - self.a) / (self.a * self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    pub fn frame(&self) -> HarmonicFrame {
        HarmonicFrame::new(*self)
    }

    /// Harmonic reflection `x -> 1/(1/a + 1/b - 1/x)`; swaps `a` and `b`
    /// and fixes the harmonic mean.
    pub fn reflect(&self, x: f64) -> Result<f64, DomainError> {
        if !self.contains(x) {
            return Err(DomainError::OutsideInterval { x, a: self.a, b: self.b });
        }
        Ok(self.reflect_unchecked(x))
    }

    pub(crate) fn reflect_unchecked(&self, x: f64) -> f64 {
        let r = 1.0 / ((1.0 / self.a - 1.0 / x) + 1.0 / self.b);
        r.clamp(self.a, self.b)
    }
}

/// `2ab/(a+b)` with no validation; `a = b` returns `a`.
pub fn harmonic_mean_raw(a: f64, b: f64) -> f64 {
    2.0 * a * b / (a + b)
}

/// An interval together with its harmonic mean `H`.
///
/// The lower path `L(t) = aH/(tH + (1-t)a)` runs from `L(0) = H` to
/// `L(1) = a`; the upper path `U(t) = bH/(tH + (1-t)b)` runs from
/// `U(0) = H` to `U(1) = b`. In the reciprocal variable both are affine:
/// `1/L(t) = t/a + (1-t)/H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicFrame {
    interval: Interval,
    h: f64,
}

impl HarmonicFrame {
    pub fn new(interval: Interval) -> Self {
        HarmonicFrame { interval, h: interval.harmonic_mean() }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Harmonic mean of the interval.
    pub fn h(&self) -> f64 {
        self.h
    }

    fn check_t(t: f64) -> Result<(), DomainError> {
        if (0.0..=1.0).contains(&t) {
            Ok(())
        } else {
            Err(DomainError::Parameter { name: "t", value: t, expected: "[0, 1]" })
        }
    }

    pub fn lower_path(&self, t: f64) -> Result<f64, DomainError> {
        Self::check_t(t)?;
        Ok(self.lower(t))
    }

    pub fn upper_path(&self, t: f64) -> Result<f64, DomainError> {
        Self::check_t(t)?;
        Ok(self.upper(t))
    }

    #[inline]
    pub(crate) fn lower(&self, t: f64) -> f64 {
        let a = self.interval.a;
        a * self.h / (t * self.h + (1.0 - t) * a)
    }

    #[inline]
    pub(crate) fn upper(&self, t: f64) -> f64 {
        let b = self.interval.b;
        b * self.h / (t * self.h + (1.0 - t) * b)
    }
}

/// `x -> (g(x) + g(reflect(x)))/2`: the harmonically symmetric part of `g`.
pub struct Symmetrized<'a, F: RealFn + ?Sized> {
    inner: &'a F,
    interval: Interval,
}

impl<'a, F: RealFn + ?Sized> Symmetrized<'a, F> {
    pub fn new(inner: &'a F, interval: Interval) -> Self {
        Symmetrized { inner, interval }
    }
}

impl<F: RealFn + ?Sized> RealFn for Symmetrized<'_, F> {
    fn value(&self, x: f64) -> Result<f64, EvalError> {
        let iv = self.interval;
        if !iv.contains(x) {
            return Err(EvalError::OutOfRange { x, lo: iv.a, hi: iv.b });
        }
        let r = iv.reflect_unchecked(x);
        Ok(0.5 * (self.inner.value(x)? + self.inner.value(r)?))
    }
}

/// `n` points of `[a, b]` uniformly spaced in `1/x`, ascending, with exact
/// endpoints. Point `i` and point `n-1-i` are harmonic reflections of each
/// other.
pub fn harmonic_grid(iv: Interval, n: usize) -> Vec<f64> {
    assert!(n >= 2, "harmonic grid needs at least two points");
    let inv_a = 1.0 / iv.a;
    let d = inv_a - 1.0 / iv.b;
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == 0 {
                iv.a
            } else if i == n - 1 {
                iv.b
            } else {
                1.0 / (inv_a - d * (i as f64 / last))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub grid_size: usize,
    /// Largest `|g(x) - g(reflect(x))|` over reflection pairs.
    pub max_deviation: f64,
    /// Grid point attaining the maximum (smallest such x), when nonzero.
    pub witness: Option<f64>,
    /// `max(1, max |g|)` over the grid; tolerances scale with it.
    pub scale: f64,
}

impl SymmetryReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation <= tol * self.scale
    }
}

/// Check `g(x) = g(1/(1/a + 1/b - 1/x))` on a harmonic grid of `n` points.
pub fn check_harmonic_symmetry<F: RealFn + ?Sized>(
    g: &F,
    iv: Interval,
    n: usize,
) -> Result<SymmetryReport, EvalError> {
    let n = n.max(3);
    let xs = harmonic_grid(iv, n);
    let vals = xs.iter().map(|&x| g.value(x)).collect::<Result<Vec<_>, _>>()?;
    let mut max_dev = 0.0;
    let mut witness = None;
    let mut scale: f64 = 1.0;
    for i in 0..n {
        scale = scale.max(vals[i].abs());
        let dev = (vals[i] - vals[n - 1 - i]).abs();
        if dev > max_dev {
            max_dev = dev;
            witness = Some(xs[i]);
        }
    }
    Ok(SymmetryReport { grid_size: n, max_deviation: max_dev, witness, scale })
}

/// Both sides of `|a^θ - b^θ| <= (b - a)^θ` for `0 < θ <= 1`, `0 < a <= b`.
pub fn lemma1_sides(a: f64, b: f64, theta: f64) -> Result<(f64, f64), DomainError> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(DomainError::Parameter { name: "theta", value: theta, expected: "(0, 1]" });
    }
    if !(a.is_finite() && b.is_finite() && a > 0.0 && a <= b) {
        return Err(DomainError::InvalidInterval { a, b });
    }
    Ok(((a.powf(theta) - b.powf(theta)).abs(), (b - a).powf(theta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn interval_rejects_bad_endpoints() {
        assert!(Interval::new(0.0, 2.0).is_err());
        assert!(Interval::new(2.0, 2.0).is_err());
        assert!(Interval::new(3.0, 2.0).is_err());
        assert!(Interval::new(-1.0, 2.0).is_err());
        assert!(Interval::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn harmonic_mean_values() {
        assert_eq!(harmonic_mean_raw(2.0, 2.0), 2.0);
        assert_eq!(iv(1.0, 3.0).harmonic_mean(), 1.5);
        assert!((iv(1.0, 2.0).harmonic_mean() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn paths_match_closed_forms() {
        let fr = iv(1.0, 2.0).frame();
        let h = fr.h();
        assert_eq!(fr.lower_path(0.0).unwrap(), h);
        assert!((fr.lower_path(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fr.upper_path(0.0).unwrap(), h);
        assert!((fr.upper_path(1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((fr.lower_path(0.5).unwrap() - 8.0 / 7.0).abs() < 1e-15);
        assert!((fr.upper_path(0.5).unwrap() - 8.0 / 5.0).abs() < 1e-15);
        assert!(fr.lower_path(1.5).is_err());
        assert!(fr.upper_path(-0.1).is_err());
    }

    #[test]
    fn reflection_examples() {
        let i = iv(1.0, 2.0);
        assert!((i.reflect(1.0).unwrap() - 2.0).abs() < 1e-15);
        let h = i.harmonic_mean();
        assert!((i.reflect(h).unwrap() - h).abs() < 1e-15);
        assert!((i.reflect(1.2).unwrap() - 1.5).abs() < 1e-14);
        assert!(i.reflect(2.5).is_err());
    }

    #[test]
    fn symmetrize_examples() {
        let i = iv(1.0, 2.0);
        let c = parse("3").unwrap();
        let s = Symmetrized::new(&c, i);
        assert_eq!(s.value(1.3).unwrap(), 3.0);
        let x = parse("x").unwrap();
        let s = Symmetrized::new(&x, i);
        assert!((s.value(1.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((s.value(2.0).unwrap() - 1.5).abs() < 1e-15);
        assert!(check_harmonic_symmetry(&s, i, 101).unwrap().passes(DEFAULT_SYMMETRY_TOL));
    }

    #[test]
    fn symmetry_check_examples() {
        let i = iv(1.0, 2.0);
        let one = parse("1").unwrap();
        let r = check_harmonic_symmetry(&one, i, 11).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert!(r.witness.is_none());

        let sq = parse("x^2").unwrap();
        let r = check_harmonic_symmetry(&Symmetrized::new(&sq, i), i, 51).unwrap();
        assert!(r.max_deviation <= 1e-12);

        let x = parse("x").unwrap();
        let r = check_harmonic_symmetry(&x, i, 51).unwrap();
        assert!((r.max_deviation - 1.0).abs() < 1e-15);
        assert_eq!(r.witness, Some(1.0));
        assert!(!r.passes(DEFAULT_SYMMETRY_TOL));
    }

    #[test]
    fn grid_pairs_are_reflections() {
        let i = iv(0.3, 7.0);
        let g = harmonic_grid(i, 41);
        for k in 0..41 {
            let r = i.reflect(g[k]).unwrap();
            assert!((r - g[40 - k]).abs() <= 1e-13 * i.b());
        }
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(lemma1_sides(2.0, 2.0, 0.5).unwrap(), (0.0, 0.0));
        assert_eq!(lemma1_sides(1.0, 3.0, 1.0).unwrap(), (2.0, 2.0));
        let (l, r) = lemma1_sides(1.0, 4.0, 0.5).unwrap();
        assert_eq!(l, 1.0);
        assert!((r - 3f64.sqrt()).abs() < 1e-15);
        assert!(lemma1_sides(1.0, 4.0, 1.5).is_err());
        assert!(lemma1_sides(1.0, 4.0, 0.0).is_err());
        assert!(lemma1_sides(4.0, 1.0, 0.5).is_err());
    }
}
