//! Globally adaptive Gauss-Kronrod (10/21-point) integration.
//!
//! The panel with the largest error estimate is bisected until the summed
//! estimate meets `max(abs, rel * |value|)`. Ties go to the leftmost panel,
//! so the sequence of bisections is fully deterministic.

use super::{QuadError, QuadResult, Tolerance};
use crate::func::RealFn;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Evaluation budget per integral; exceeding it is a hard failure.
pub const DEFAULT_MAX_EVALUATIONS: usize = 1_000_000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const EVALS_PER_PANEL: usize = 21;

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // max-heap on error; among equal errors the leftmost panel wins
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn eval_at<F: RealFn + ?Sized>(f: &F, x: f64) -> Result<f64, QuadError> {
    f.value(x).map_err(|source| QuadError::Eval { x, source })
}

fn gk21<F: RealFn + ?Sized>(f: &F, lo: f64, hi: f64) -> Result<Panel, QuadError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = eval_at(f, center)?;
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut f1 = [0.0; 10];
    let mut f2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let a = eval_at(f, center - dx)?;
        let b = eval_at(f, center + dx)?;
        f1[j] = a;
        f2[j] = b;
        if j % 2 == 1 {
            res_g += WG[j / 2] * (a + b);
        }
        res_k += WGK[j] * (a + b);
        res_abs += WGK[j] * (a.abs() + b.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }
    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel { lo, hi, value, err })
}

/// Integrate `f` over `[lo, hi]` with the default evaluation budget.
pub fn integrate<F: RealFn + ?Sized>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: Tolerance,
) -> Result<QuadResult, QuadError> {
    integrate_with_budget(f, lo, hi, tol, DEFAULT_MAX_EVALUATIONS)
}

pub fn integrate_with_budget<F: RealFn + ?Sized>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: Tolerance,
    max_evaluations: usize,
) -> Result<QuadResult, QuadError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::InvalidBounds { lo, hi });
    }
    let first = gk21(f, lo, hi)?;
    let mut evaluations = EVALS_PER_PANEL;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut total = first.value;
    let mut total_err = first.err;
    heap.push(first);

    loop {
        if total_err <= tol.threshold(total) {
            break;
        }
        if evaluations + 2 * EVALS_PER_PANEL > max_evaluations {
            return Err(QuadError::NonConvergence { evaluations, value: total, error: total_err });
        }
        let Some(worst) = heap.pop() else {
            // every remaining panel is too narrow to bisect in f64
            return Err(QuadError::NonConvergence { evaluations, value: total, error: total_err });
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            frozen.push(worst);
            continue;
        }
        let left = gk21(f, worst.lo, mid)?;
        let right = gk21(f, mid, worst.hi)?;
        evaluations += 2 * EVALS_PER_PANEL;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }

    // re-sum in left-to-right order so the reported value does not carry
    // the drift of the running update
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    let value = panels.iter().map(|p| p.value).sum();
    let abs_error_estimate = panels.iter().map(|p| p.err).sum();
    Ok(QuadResult { value, abs_error_estimate, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, EvalError};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn constant_one() {
        let r = integrate(&parse("1").unwrap(), 0.0, 1.0, tol()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        assert!(r.evaluations >= 1 && r.abs_error_estimate >= 0.0);
    }

    #[test]
    fn reciprocal_gives_ln2() {
        let r = integrate(&parse("1/x").unwrap(), 1.0, 2.0, tol()).unwrap();
        assert!((r.value - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn inverse_sqrt_endpoint_singularity() {
        let r = integrate(&parse("x^-0.5").unwrap(), 0.0, 1.0, tol()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn interior_kink() {
        let f = |x: f64| -> Result<f64, EvalError> { Ok((x - 0.3).abs()) };
        let r = integrate(&f, 0.0, 1.0, tol()).unwrap();
        assert!((r.value - (0.3 * 0.3 + 0.7 * 0.7) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let f = |x: f64| -> Result<f64, EvalError> { Ok((1.0 / x).sin()) };
        let e = integrate_with_budget(&f, 1e-9, 1.0, Tolerance::new(1e-14, 1e-14).unwrap(), 500)
            .unwrap_err();
        assert!(matches!(e, QuadError::NonConvergence { .. }));
    }

    #[test]
    fn interior_evaluation_error_propagates() {
        let e = integrate(&parse("ln(x)").unwrap(), -1.0, 1.0, tol()).unwrap_err();
        assert!(matches!(e, QuadError::Eval { .. }));
    }

    #[test]
    fn bad_bounds() {
        assert!(integrate(&parse("1").unwrap(), 1.0, 1.0, tol()).is_err());
        assert!(integrate(&parse("1").unwrap(), 0.0, f64::INFINITY, tol()).is_err());
    }
}
