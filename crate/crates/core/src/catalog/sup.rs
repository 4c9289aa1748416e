use crate::expr::EvalError;
use crate::func::RealFn;
use crate::harmonic::{harmonic_grid, Interval};
use serde::Serialize;

pub const DEFAULT_SUP_GRID: usize = 1001;
/// Multiplier applied to the grid maximum before it enters a bound.
pub const DEFAULT_SUP_SAFETY: f64 = 1.0 + 1e-6;

/// Grid estimate of `sup |g|`; a lower bound on the true value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupNorm {
    pub value: f64,
    pub argmax: f64,
}

impl SupNorm {
    pub fn inflated(&self, safety: f64) -> f64 {
        self.value * safety
    }
}

fn scan<F: RealFn + ?Sized>(g: &F, xs: &[f64]) -> Result<(usize, f64), EvalError> {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &x) in xs.iter().enumerate() {
        let v = g.value(x)?.abs();
        if v > best.1 {
            best = (i, v);
        }
    }
    Ok(best)
}

/// Max of `|g|` on an `n`-point harmonic grid, then twice more on a grid of
/// the same size spanning the two cells around the running argmax.
pub fn sup_norm<F: RealFn + ?Sized>(g: &F, iv: Interval, n: usize) -> Result<SupNorm, EvalError> {
    let n = n.max(3);
    let mut xs = harmonic_grid(iv, n);
    let (mut i, mut best) = scan(g, &xs)?;
    let mut argmax = xs[i];
    for _ in 0..2 {
        let lo = xs[i.saturating_sub(1)];
        let hi = xs[(i + 1).min(xs.len() - 1)];
        if !(lo < hi) {
            break;
        }
        let Ok(sub) = Interval::new(lo, hi) else { break };
        xs = harmonic_grid(sub, n);
        let (j, v) = scan(g, &xs)?;
        if v > best {
            best = v;
            argmax = xs[j];
        }
        i = j;
    }
    Ok(SupNorm { value: best, argmax })
}
