//! Randomized campaign over the whole catalog.
//!
//! Case `i` draws from ChaCha20 seeded with the campaign seed on stream `i`,
//! so every case is reproducible on its own and the report stream does not
//! depend on the number of workers.

use crate::catalog::InequalityId;
use crate::config::RunConfig;
use crate::expr::{parse, Expr};
use crate::quad::MAX_ALPHA;
use crate::report::{fmt17, Status, VerificationReport};
use crate::verify::{run_case_cached, CaseSpec, HypothesisCache, UsageError, WeightSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Interval endpoints stay inside `(A_MIN, B_MAX]`.
pub const A_MIN: f64 = 0.1;
pub const B_MAX: f64 = 10.0;
pub const RATIO_MIN: f64 = 1.01;
pub const RATIO_MAX: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub count: usize,
    pub seed: u64,
    pub alpha_list: Vec<f64>,
    pub q_list: Vec<f64>,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<(), UsageError> {
        if self.count == 0 {
            return Err(UsageError("--count must be at least 1".into()));
        }
        if self.alpha_list.is_empty() || self.q_list.is_empty() {
            return Err(UsageError("alpha and q lists must be nonempty".into()));
        }
        if let Some(a) = self.alpha_list.iter().find(|a| !(**a > 0.0 && **a <= MAX_ALPHA)) {
            return Err(UsageError(format!("alpha {a} outside (0, {MAX_ALPHA}]")));
        }
        if let Some(q) = self.q_list.iter().find(|q| !(**q > 1.0 && q.is_finite())) {
            return Err(UsageError(format!("q {q} must be > 1")));
        }
        Ok(())
    }
}

/// Randomized inputs shared by the catalog entries of one case.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCase {
    pub index: usize,
    pub a: f64,
    pub b: f64,
    pub f: Expr,
    /// Symmetrized before use.
    pub g: Expr,
    pub h: Expr,
    pub alpha: f64,
    pub q: f64,
}

const WEIGHTS: [&str; 5] = ["1", "x", "x^2", "exp(-x)", "1/x"];
const H_CHOICES: [&str; 5] = ["x", "x^2", "1", "sqrt(x)", "exp(-x)"];

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// `f`: a positive combination of convex nondecreasing terms plus a
/// constant. On a positive interval each such `f` is harmonically convex,
/// and so is every power `|f'|^q`, since `f'` is nonnegative, convex and
/// nondecreasing.
fn random_f(rng: &mut ChaCha20Rng, b: f64) -> Expr {
    let mask = rng.random_range(1u32..16);
    let mut terms = Vec::new();
    for (bit, base) in ["x", "x^2", "x^3", "exp"].iter().enumerate() {
        if mask & (1 << bit) == 0 {
            continue;
        }
        let c = round3(rng.random_range(0.1..3.0));
        if *base == "exp" {
            let s = round3(b * rng.random_range(0.5..2.0)).max(0.001);
            terms.push(format!("{c}*exp(x/{s})"));
        } else {
            terms.push(format!("{c}*{base}"));
        }
    }
    let c0 = round3(rng.random_range(-2.0..2.0));
    let mut text = terms.join(" + ");
    if c0 < 0.0 {
        text += &format!(" - {}", -c0);
    } else if c0 > 0.0 {
        text += &format!(" + {c0}");
    }
    parse(&text).expect("generated expression parses")
}

pub fn generate_case(plan: &SweepPlan, index: usize) -> SweepCase {
    let mut rng = ChaCha20Rng::seed_from_u64(plan.seed);
    rng.set_stream(index as u64);
    let a = rng.random_range(A_MIN..B_MAX / RATIO_MIN);
    let hi = RATIO_MAX.min(B_MAX / a);
    let ratio = (rng.random_range(RATIO_MIN.ln()..=hi.ln())).exp();
    let b = (a * ratio).min(B_MAX);
    let f = random_f(&mut rng, b);
    let g = parse(WEIGHTS[rng.random_range(0..WEIGHTS.len())]).expect("weight parses");
    let h = parse(H_CHOICES[rng.random_range(0..H_CHOICES.len())]).expect("h parses");
    let alpha = plan.alpha_list[rng.random_range(0..plan.alpha_list.len())];
    let q = plan.q_list[rng.random_range(0..plan.q_list.len())];
    SweepCase { index, a, b, f, g, h, alpha, q }
}

/// One spec per catalog entry. The entries restricted to orders in `(0, 1]`
/// get `min(alpha, 1/alpha)`.
pub fn case_specs(c: &SweepCase) -> Vec<CaseSpec> {
    let small = c.alpha.min(1.0 / c.alpha);
    InequalityId::ALL
        .iter()
        .map(|&id| {
            let n = id.needs();
            let mut s = CaseSpec::new(id, c.f.clone(), c.a, c.b);
            if n.g {
                s.g = Some(WeightSpec::Symmetrized(c.g.clone()));
            }
            if n.h {
                s.h = Some(c.h.clone());
            }
            if n.alpha {
                s.alpha = Some(if id == InequalityId::Bound210 { small } else { c.alpha });
            }
            if n.q {
                s.q = Some(c.q);
            }
            if n.theta {
                s.theta = Some(small);
            }
            s
        })
        .collect()
}

fn run_one(c: &SweepCase, cfg: &RunConfig) -> Result<Vec<VerificationReport>, UsageError> {
    let mut cache = HypothesisCache::new();
    case_specs(c).iter().map(|s| run_case_cached(s, cfg, &mut cache)).collect()
}

/// All reports, case by case in index order, each case in catalog order.
pub fn run_sweep(plan: &SweepPlan, cfg: &RunConfig) -> Result<Vec<VerificationReport>, UsageError> {
    plan.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| UsageError(format!("cannot start workers: {e}")))?;
    let per_case: Vec<Vec<VerificationReport>> = pool.install(|| {
        (0..plan.count)
            .into_par_iter()
            .map(|i| run_one(&generate_case(plan, i), cfg))
            .collect::<Result<_, _>>()
    })?;
    Ok(per_case.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstMargin {
    /// `margin + quad_error_budget`; negative means FAIL.
    pub slack: f64,
    pub case: usize,
    pub inequality: InequalityId,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub reports: usize,
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_rejected: usize,
    pub numerical_failure: usize,
    pub worst: Option<WorstMargin>,
    pub fail_by_inequality: BTreeMap<String, usize>,
}

impl SweepSummary {
    /// `reports` must be in [`run_sweep`] order.
    pub fn from_reports(reports: &[VerificationReport]) -> Self {
        let per_case = InequalityId::ALL.len();
        let mut s = SweepSummary {
            reports: reports.len(),
            pass: 0,
            fail: 0,
            hypothesis_rejected: 0,
            numerical_failure: 0,
            worst: None,
            fail_by_inequality: BTreeMap::new(),
        };
        for (i, r) in reports.iter().enumerate() {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => {
                    s.fail += 1;
                    *s.fail_by_inequality.entry(r.inequality.name().to_string()).or_default() += 1;
                }
                Status::HypothesisRejected => s.hypothesis_rejected += 1,
                Status::NumericalFailure => s.numerical_failure += 1,
            }
            if let (Some(m), Some(e), Status::Pass | Status::Fail) = (r.margin, r.quad_error_budget, r.status) {
                let slack = m + e;
                if s.worst.as_ref().is_none_or(|w| slack < w.slack) {
                    s.worst = Some(WorstMargin { slack, case: i / per_case, inequality: r.inequality });
                }
            }
        }
        s
    }

    /// FAIL beats NUMERICAL-FAILURE beats HYPOTHESIS-REJECTED.
    pub fn exit_code(&self) -> i32 {
        if self.fail > 0 {
            Status::Fail.exit_code()
        } else if self.numerical_failure > 0 {
            Status::NumericalFailure.exit_code()
        } else if self.hypothesis_rejected > 0 {
            Status::HypothesisRejected.exit_code()
        } else {
            0
        }
    }

    pub fn line(&self) -> String {
        let worst = self.worst.as_ref().map_or("none".to_string(), |w| {
            format!("{} (case {}, {})", fmt17(w.slack), w.case, w.inequality)
        });
        let by: Vec<String> = self.fail_by_inequality.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        format!(
            "summary reports={} pass={} fail={} hypothesis-rejected={} numerical-failure={} worst-slack={} fail-by-inequality=[{}]",
            self.reports,
            self.pass,
            self.fail,
            self.hypothesis_rejected,
            self.numerical_failure,
            worst,
            by.join(" ")
        )
    }
}
