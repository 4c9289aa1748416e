//! Grid certification of ordinary, harmonic and harmonic s-convexity, plus
//! the four implication rules linking convexity, monotonicity and harmonic
//! convexity on positive intervals.
//!
//! A grid check certifies nothing off-grid: a clean report means "no
//! violation found at this resolution", never "convex".

use crate::expr::EvalError;
use crate::func::{Negated, RealFn};
use crate::harmonic::{harmonic_grid, DomainError, Interval};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Violations at or below this (scaled) level are rounding noise.
pub const DEFAULT_VIOLATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConvexityError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Grid resolution over `(x, y, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Grid3 {
    pub nx: usize,
    pub ny: usize,
    pub nt: usize,
}

impl Default for Grid3 {
    fn default() -> Self {
        Grid3 { nx: 41, ny: 41, nt: 21 }
    }
}

impl Grid3 {
    pub fn new(nx: usize, ny: usize, nt: usize) -> Result<Self, DomainError> {
        for (name, n) in [("nx", nx), ("ny", ny), ("nt", nt)] {
            if n < 3 {
                return Err(DomainError::Parameter { name, value: n as f64, expected: ">= 3" });
            }
        }
        Ok(Grid3 { nx, ny, nt })
    }

    /// The dyadic refinement `n -> 2n - 1`, which contains every point of
    /// `self`.
    pub fn refined(&self) -> Grid3 {
        Grid3 { nx: 2 * self.nx - 1, ny: 2 * self.ny - 1, nt: 2 * self.nt - 1 }
    }
}

impl fmt::Display for Grid3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.nx, self.ny, self.nt)
    }
}

impl std::str::FromStr for Grid3 {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("grid must be nx,ny,nt; got `{s}`"));
        }
        let n: Vec<usize> = parts
            .iter()
            .map(|p| p.parse::<usize>().map_err(|e| format!("grid entry `{p}`: {e}")))
            .collect::<Result<_, _>>()?;
        Grid3::new(n[0], n[1], n[2]).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvexityClass {
    Convex,
    HarmonicallyConvex,
    HarmonicallySConvex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Curvature {
    Convex,
    Concave,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub class_tested: ConvexityClass,
    pub curvature: Curvature,
    pub s: Option<f64>,
    pub grid: Grid3,
    /// Largest defining-inequality excess, divided by
    /// `max(1, |weighted endpoint terms|)` and clamped below at zero.
    pub max_violation: f64,
    /// `(x, y, t)` at the maximum; present iff `max_violation > tolerance`.
    pub witness: Option<[f64; 3]>,
    pub tolerance: f64,
}

impl ConvexityReport {
    pub fn certified(&self) -> bool {
        self.witness.is_none()
    }

    pub fn verdict(&self) -> String {
        if self.certified() {
            format!("no violation found at resolution {}", self.grid)
        } else {
            let w = self.witness.unwrap_or_default();
            format!(
                "violation {:.3e} at x = {}, y = {}, t = {}",
                self.max_violation, w[0], w[1], w[2]
            )
        }
    }
}

fn uniform_t(n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|i| i as f64 / last).collect()
}

/// Shared scan over the `(x, y, t)` grid. `combine(x, y, t)` gives the
/// argument point; weights are `(w_y, w_x)` applied to `f(y)`, `f(x)`.
fn scan<F, C, W>(
    f: &F,
    iv: Interval,
    grid: Grid3,
    combine: C,
    weights: W,
) -> Result<(f64, Option<[f64; 3]>), EvalError>
where
    F: RealFn + ?Sized,
    C: Fn(f64, f64, f64) -> f64,
    W: Fn(f64) -> (f64, f64),
{
    let xs = harmonic_grid(iv, grid.nx);
    let ys = harmonic_grid(iv, grid.ny);
    let ts = uniform_t(grid.nt);
    let fx = xs.iter().map(|&x| f.value(x)).collect::<Result<Vec<_>, _>>()?;
    let fy = ys.iter().map(|&y| f.value(y)).collect::<Result<Vec<_>, _>>()?;
    let mut best = 0.0;
    let mut witness = None;
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            for &t in &ts {
                let (wy, wx) = weights(t);
                let (py, px) = (wy * fy[j], wx * fx[i]);
                let z = if t == 0.0 {
                    x
                } else if t == 1.0 {
                    y
                } else if x == y {
                    x
                } else {
                    combine(x, y, t).clamp(x.min(y), x.max(y))
                };
                let fz = if z == x {
                    fx[i]
                } else if z == y {
                    fy[j]
                } else {
                    f.value(z)?
                };
                let excess = (fz - (py + px)) / (py.abs() + px.abs()).max(1.0);
                if excess > best {
                    best = excess;
                    witness = Some([x, y, t]);
                }
            }
        }
    }
    Ok((best, witness))
}

fn check_s(s: f64) -> Result<(), DomainError> {
    if s > 0.0 && s <= 1.0 {
        Ok(())
    } else {
        Err(DomainError::Parameter { name: "s", value: s, expected: "(0, 1]" })
    }
}

fn harmonic_report<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    grid: Grid3,
    s: f64,
    curvature: Curvature,
) -> Result<ConvexityReport, ConvexityError> {
    check_s(s)?;
    let grid = Grid3::new(grid.nx, grid.ny, grid.nt)?;
    let combine = |x: f64, y: f64, t: f64| x * y / (t * x + (1.0 - t) * y);
    let (max_violation, witness) = if s == 1.0 {
        scan(f, iv, grid, combine, |t| (t, 1.0 - t))?
    } else {
        scan(f, iv, grid, combine, |t| (t.powf(s), (1.0 - t).powf(s)))?
    };
    let tolerance = DEFAULT_VIOLATION_TOL;
    Ok(ConvexityReport {
        class_tested: if s == 1.0 {
            ConvexityClass::HarmonicallyConvex
        } else {
            ConvexityClass::HarmonicallySConvex
        },
        curvature,
        s: if s == 1.0 { None } else { Some(s) },
        grid,
        max_violation,
        witness: if max_violation > tolerance { witness } else { None },
        tolerance,
    })
}

/// Check `f(xy/(tx + (1-t)y)) <= t^s f(y) + (1-t)^s f(x)` over the grid;
/// `s = 1` is plain harmonic convexity.
pub fn check_harmonically_convex<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    grid: Grid3,
    s: f64,
) -> Result<ConvexityReport, ConvexityError> {
    harmonic_report(f, iv, grid, s, Curvature::Convex)
}

/// The reversed inequality, checked as harmonic s-convexity of `-f`.
pub fn check_harmonically_concave<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    grid: Grid3,
    s: f64,
) -> Result<ConvexityReport, ConvexityError> {
    harmonic_report(&Negated(f), iv, grid, s, Curvature::Concave)
}

fn affine_report<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    grid: Grid3,
    curvature: Curvature,
) -> Result<ConvexityReport, ConvexityError> {
    let grid = Grid3::new(grid.nx, grid.ny, grid.nt)?;
    // f(tx + (1-t)y) <= t f(x) + (1-t) f(y): weight t goes with x here.
    let (max_violation, witness) = scan(
        f,
        iv,
        grid,
        |x, y, t| t * y + (1.0 - t) * x,
        |t| (t, 1.0 - t),
    )?;
    let tolerance = DEFAULT_VIOLATION_TOL;
    Ok(ConvexityReport {
        class_tested: ConvexityClass::Convex,
        curvature,
        s: None,
        grid,
        max_violation,
        witness: if max_violation > tolerance { witness.map(|[x, y, t]| [y, x, t]) } else { None },
        tolerance,
    })
}

/// Check `f(tx + (1-t)y) <= t f(x) + (1-t) f(y)` over the grid.
pub fn check_convex<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    grid: Grid3,
) -> Result<ConvexityReport, ConvexityError> {
    affine_report(f, iv, grid, Curvature::Convex)
}

pub fn check_concave<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    grid: Grid3,
) -> Result<ConvexityReport, ConvexityError> {
    affine_report(&Negated(f), iv, grid, Curvature::Concave)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleStatus {
    /// Premises hold on the grid, so the conclusion is implied.
    Fires,
    /// Premises fail; the rule says nothing.
    Idle,
    /// Rule concerns negative intervals, which are not supported.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleOutcome {
    pub rule: u8,
    pub statement: &'static str,
    pub status: RuleStatus,
    /// When the rule fires: whether the direct grid check agrees with the
    /// implied conclusion.
    pub direct_check_agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionReport {
    pub convex: ConvexityReport,
    pub concave: ConvexityReport,
    pub nondecreasing: bool,
    pub nonincreasing: bool,
    pub harmonically_convex: ConvexityReport,
    pub rules: Vec<RuleOutcome>,
}

impl PropositionReport {
    /// True when some firing rule's conclusion contradicts the direct check.
    pub fn has_disagreement(&self) -> bool {
        self.rules.iter().any(|r| r.direct_check_agrees == Some(false))
    }
}

fn monotone_flags<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    n: usize,
) -> Result<(bool, bool), EvalError> {
    let xs = harmonic_grid(iv, n);
    let vals = xs.iter().map(|&x| f.value(x)).collect::<Result<Vec<_>, _>>()?;
    let mut up = true;
    let mut down = true;
    for w in vals.windows(2) {
        let slack = DEFAULT_VIOLATION_TOL * w[0].abs().max(w[1].abs()).max(1.0);
        if w[1] < w[0] - slack {
            up = false;
        }
        if w[1] > w[0] + slack {
            down = false;
        }
    }
    Ok((up, down))
}

const RULES: [&str; 4] = [
    "I in (0,inf), f convex and nondecreasing => f harmonically convex",
    "I in (0,inf), f harmonically convex and nonincreasing => f convex",
    "I in (-inf,0), f harmonically convex and nondecreasing => f convex",
    "I in (-inf,0), f convex and nonincreasing => f harmonically convex",
];

/// Test the premises of the four implication rules on the grid and compare
/// each firing rule's conclusion against the direct check.
pub fn classify_via_proposition<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    grid: Grid3,
) -> Result<PropositionReport, ConvexityError> {
    let convex = check_convex(f, iv, grid)?;
    let concave = check_concave(f, iv, grid)?;
    let harmonic = check_harmonically_convex(f, iv, grid, 1.0)?;
    let (nondecreasing, nonincreasing) = monotone_flags(f, iv, (grid.nx - 1) * 8 + 1)?;

    let rule1 = convex.certified() && nondecreasing;
    let rule2 = harmonic.certified() && nonincreasing;
    let outcome = |idx: usize, fires: bool, agrees: bool| RuleOutcome {
        rule: idx as u8 + 1,
        statement: RULES[idx],
        status: if fires { RuleStatus::Fires } else { RuleStatus::Idle },
        direct_check_agrees: fires.then_some(agrees),
    };
    let rules = vec![
        outcome(0, rule1, harmonic.certified()),
        outcome(1, rule2, convex.certified()),
        RuleOutcome {
            rule: 3,
            statement: RULES[2],
            status: RuleStatus::NotApplicable,
            direct_check_agrees: None,
        },
        RuleOutcome {
            rule: 4,
            statement: RULES[3],
            status: RuleStatus::NotApplicable,
            direct_check_agrees: None,
        },
    ];
    Ok(PropositionReport {
        convex,
        concave,
        nondecreasing,
        nonincreasing,
        harmonically_convex: harmonic,
        rules,
    })
}
