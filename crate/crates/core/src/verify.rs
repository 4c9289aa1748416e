//! One verification case: validate the inputs, certify the hypotheses,
//! compute the sides and assemble a [`VerificationReport`].

use crate::catalog::{
    bound_frac_weighted, bound_special, bound_frac_weighted_q, bound_plain_q, bound_h_kernel,
    bound_h_kernel_q, fejer_chain, fejer_frac_chain, hh_chain, hh_frac_chain, identity_2_1, lemma1,
    CVariant, CatalogError, ConstantFamily, SpecialCase, InequalityId, SidesResult,
    WeightOptions,
};
use crate::config::RunConfig;
use crate::convexity::{check_harmonically_convex, ConvexityError};
use crate::expr::{EvalError, Expr};
use crate::func::{AbsDerivPow, RealFn};
use crate::harmonic::{check_harmonic_symmetry, harmonic_grid, Interval, Symmetrized};
use crate::oracle::{oracle_constants, oracle_frac_pair, oracle_over_x2, OracleError, OracleFamily};
use crate::quad::FracOrder;
use crate::report::{
    rel_gap, CheckStatus, CrosscheckItem, Flags, HypothesisCheck, OracleCrosscheck, ReportParams,
    Settings, Sides, Status, VerificationReport,
};
use std::collections::HashMap;
use thiserror::Error;

/// Bad or missing inputs; maps to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

impl UsageError {
    fn new(msg: impl Into<String>) -> Self {
        UsageError(msg.into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    AsGiven(Expr),
    /// Replaced by its harmonically symmetric part on the interval.
    Symmetrized(Expr),
}

impl WeightSpec {
    fn expr(&self) -> &Expr {
        match self {
            WeightSpec::AsGiven(e) | WeightSpec::Symmetrized(e) => e,
        }
    }

    fn mode(&self) -> &'static str {
        match self {
            WeightSpec::AsGiven(_) => "as-given",
            WeightSpec::Symmetrized(_) => "symmetrized",
        }
    }
}

/// Everything needed to evaluate one statement.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    pub inequality: InequalityId,
    pub f: Expr,
    pub g: Option<WeightSpec>,
    pub h: Option<Expr>,
    pub a: f64,
    pub b: f64,
    pub alpha: Option<f64>,
    pub q: Option<f64>,
    pub theta: Option<f64>,
}

impl CaseSpec {
    pub fn new(inequality: InequalityId, f: Expr, a: f64, b: f64) -> Self {
        CaseSpec { inequality, f, g: None, h: None, a, b, alpha: None, q: None, theta: None }
    }
}

enum Weight<'a> {
    Given(&'a Expr),
    Sym(Symmetrized<'a, Expr>),
}

impl RealFn for Weight<'_> {
    fn value(&self, x: f64) -> Result<f64, EvalError> {
        match self {
            Weight::Given(e) => e.eval(x),
            Weight::Sym(s) => s.value(x),
        }
    }
}

/// Validated inputs.
struct Ready<'a> {
    iv: Interval,
    alpha: Option<FracOrder>,
    q: Option<f64>,
    theta: Option<f64>,
    variant: Option<CVariant>,
    g: Option<Weight<'a>>,
    h: Option<&'a Expr>,
    warnings: Vec<String>,
}

fn validate<'a>(spec: &'a CaseSpec, cfg: &RunConfig) -> Result<Ready<'a>, UsageError> {
    let id = spec.inequality;
    let needs = id.needs();
    let iv = Interval::new(spec.a, spec.b).map_err(|e| UsageError::new(e.to_string()))?;
    let mut warnings = Vec::new();
    let missing = |what: &str| UsageError::new(format!("{id} needs {what}"));
    let mut ignored = |flag: &str, given: bool, used: bool| {
        if given && !used {
            warnings.push(format!("{flag} is not used by {id} and was ignored"));
        }
    };
    let alpha_used = needs.alpha;
    ignored("--alpha", spec.alpha.is_some(), alpha_used);
    ignored("--q", spec.q.is_some(), needs.q);
    ignored("--theta", spec.theta.is_some(), needs.theta);
    ignored("--g", spec.g.is_some(), needs.g);
    ignored("--h", spec.h.is_some(), needs.h);

    let alpha = if alpha_used {
        let al = spec.alpha.ok_or_else(|| missing("--alpha"))?;
        Some(FracOrder::new(al).map_err(|e| UsageError::new(e.to_string()))?)
    } else {
        None
    };
    let q = if needs.q {
        let q = spec.q.ok_or_else(|| missing("--q"))?;
        if !(q > 1.0 && q.is_finite()) {
            return Err(UsageError::new(format!("q must be > 1, got {q}")));
        }
        Some(q)
    } else {
        None
    };
    let theta = if needs.theta {
        let th = spec.theta.ok_or_else(|| missing("--theta"))?;
        if !(th > 0.0 && th <= 1.0) {
            return Err(UsageError::new(format!("theta must lie in (0, 1], got {th}")));
        }
        Some(th)
    } else {
        None
    };
    let variant = match id {
        InequalityId::Bound29 => Some(cfg.variant),
        InequalityId::Bound210 => Some(CVariant::SmallAlpha),
        InequalityId::Bound217 => Some(CVariant::Exact),
        _ => None,
    };
    if variant == Some(CVariant::SmallAlpha) {
        if let Some(al) = alpha {
            if al.get() > 1.0 {
                return Err(UsageError::new(format!(
                    "the small-alpha form needs alpha <= 1, got {}",
                    al.get()
                )));
            }
        }
    }
    let g = if needs.g {
        Some(match spec.g.as_ref().ok_or_else(|| missing("--g or --g-symmetrize"))? {
            WeightSpec::AsGiven(e) => Weight::Given(e),
            WeightSpec::Symmetrized(e) => Weight::Sym(Symmetrized::new(e, iv)),
        })
    } else {
        None
    };
    let h = if needs.h { Some(spec.h.as_ref().ok_or_else(|| missing("--h"))?) } else { None };
    Ok(Ready { iv, alpha, q, theta, variant, g, h, warnings })
}

/// Per-case memo of hypothesis checks, so the statements of one sweep case
/// share the grid work.
#[derive(Default)]
pub struct HypothesisCache {
    done: HashMap<String, Result<HypothesisCheck, String>>,
}

impl HypothesisCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn get(
        &mut self,
        key: String,
        run: impl FnOnce() -> Result<HypothesisCheck, String>,
    ) -> Result<HypothesisCheck, String> {
        self.done.entry(key).or_insert_with(run).clone()
    }
}

fn harmonic_check<F: RealFn + ?Sized>(
    name: String,
    f: &F,
    iv: Interval,
    cfg: &RunConfig,
) -> Result<HypothesisCheck, String> {
    let r = check_harmonically_convex(f, iv, cfg.grid, 1.0).map_err(|e| match e {
        ConvexityError::Eval(e) => format!("{name}: {e}"),
        ConvexityError::Domain(e) => format!("{name}: {e}"),
    })?;
    Ok(HypothesisCheck {
        name,
        status: if r.certified() { CheckStatus::Passed } else { CheckStatus::Failed },
        max_violation: r.max_violation,
        witness: r.witness.map(|w| w.to_vec()),
    })
}

fn symmetry_check(g: &dyn RealFn, iv: Interval, cfg: &RunConfig) -> Result<HypothesisCheck, String> {
    let name = "harmonic-symmetry(g)".to_string();
    let r = check_harmonic_symmetry(g, iv, cfg.symmetry_grid).map_err(|e| format!("{name}: {e}"))?;
    let pass = r.passes(cfg.symmetry_tol);
    Ok(HypothesisCheck {
        name,
        status: if pass { CheckStatus::Passed } else { CheckStatus::Failed },
        max_violation: r.max_deviation / r.scale,
        witness: if pass { None } else { r.witness.map(|x| vec![x]) },
    })
}

fn nonnegative_check(g: &dyn RealFn, iv: Interval, cfg: &RunConfig) -> Result<HypothesisCheck, String> {
    let name = "nonnegative(g)".to_string();
    let mut worst = 0.0;
    let mut witness = None;
    for x in harmonic_grid(iv, cfg.symmetry_grid) {
        let v = g.value(x).map_err(|e| format!("{name}: {e}"))?;
        if -v > worst || v.is_nan() {
            worst = if v.is_nan() { f64::INFINITY } else { -v };
            witness = Some(vec![x]);
        }
    }
    Ok(HypothesisCheck {
        name,
        status: if worst > 0.0 { CheckStatus::Failed } else { CheckStatus::Passed },
        max_violation: worst,
        witness,
    })
}

fn run_checks(
    spec: &CaseSpec,
    ready: &Ready<'_>,
    cfg: &RunConfig,
    cache: &mut HypothesisCache,
) -> Result<Vec<HypothesisCheck>, String> {
    use InequalityId::*;
    let id = spec.inequality;
    let iv = ready.iv;
    let f = &spec.f;
    let mut out = Vec::new();
    match id {
        Hh13 | HhFrac14 | Fejer16 | FejerFrac17 => {
            out.push(cache.get("hc:f".into(), || {
                harmonic_check("harmonic-convexity(f)".into(), f, iv, cfg)
            })?);
        }
        Bound26 | Bound29 | Bound210 | Bound216 | Bound217 | Bound218 => {
            out.push(cache.get("hc:df".into(), || {
                harmonic_check("harmonic-convexity(|f'|)".into(), &AbsDerivPow::new(f, 1.0), iv, cfg)
            })?);
        }
        Bound219 | Bound220 | Bound223 => {
            let q = ready.q.unwrap_or(1.0);
            out.push(cache.get(format!("hc:df^{q:e}"), || {
                harmonic_check(format!("harmonic-convexity(|f'|^{q})"), &AbsDerivPow::new(f, q), iv, cfg)
            })?);
        }
        Identity21 | Lemma1 => {}
    }
    if let Some(g) = &ready.g {
        out.push(cache.get("nn:g".into(), || nonnegative_check(g, iv, cfg))?);
        out.push(cache.get("sym:g".into(), || symmetry_check(g, iv, cfg))?);
    }
    Ok(out)
}

fn compute_sides(spec: &CaseSpec, r: &Ready<'_>, cfg: &RunConfig) -> Result<SidesResult, CatalogError> {
    use InequalityId::*;
    let tol = cfg.tolerance;
    let iv = r.iv;
    let f = &spec.f;
    let opts = WeightOptions { sup_grid: cfg.sup_grid, sup_safety: cfg.sup_safety };
    // validate() guarantees presence of everything an id needs
    let g = || r.g.as_ref().map(|g| g as &dyn RealFn).expect("validated weight");
    let h = || r.h.expect("validated h");
    let alpha = || r.alpha.expect("validated alpha");
    let q = || r.q.expect("validated q");
    match spec.inequality {
        Hh13 => hh_chain(f, iv, tol),
        HhFrac14 => hh_frac_chain(f, iv, alpha(), tol),
        Fejer16 => fejer_chain(f, g(), iv, tol),
        FejerFrac17 => fejer_frac_chain(f, g(), iv, alpha(), tol),
        Identity21 => identity_2_1(f, h(), iv, tol),
        Bound26 => bound_h_kernel(f, h(), iv, tol),
        Bound29 | Bound210 => bound_frac_weighted(
            f,
            g(),
            iv,
            alpha(),
            r.variant.unwrap_or_default(),
            cfg.strict_paper,
            opts,
            tol,
        ),
        Bound216 => bound_special(f, Some(g()), iv, SpecialCase::OrderOne, None, cfg.strict_paper, opts, tol),
        Bound217 => {
            bound_special(f, None, iv, SpecialCase::UnitWeight, Some(alpha()), cfg.strict_paper, opts, tol)
        }
        Bound218 => bound_special(f, None, iv, SpecialCase::Plain, None, cfg.strict_paper, opts, tol),
        Bound219 => bound_h_kernel_q(f, h(), iv, q(), tol),
        Bound220 => bound_frac_weighted_q(f, g(), iv, alpha(), q(), opts, tol),
        Bound223 => bound_plain_q(f, iv, q(), tol),
        Lemma1 => lemma1(spec.a, spec.b, r.theta.expect("validated theta")),
    }
}

/// Recompute the named intermediate integrals and constants with the
/// naive oracle.
fn crosscheck(
    spec: &CaseSpec,
    r: &Ready<'_>,
    sides: &SidesResult,
    cfg: &RunConfig,
) -> Result<OracleCrosscheck, OracleError> {
    let n = cfg.oracle_n;
    let iv = r.iv;
    let f = &spec.f;
    let mut items = Vec::new();
    let fg = |x: f64| -> Result<f64, EvalError> {
        let g = r.g.as_ref().map_or(Ok(1.0), |g| g.value(x))?;
        Ok(f.eval(x)? * g)
    };
    for p in &sides.parts {
        let oracle = match p.name {
            "int_f_over_x2" => Some(oracle_over_x2(f, iv, n)?),
            "int_g_over_x2" => r.g.as_ref().map(|g| oracle_over_x2(g, iv, n)).transpose()?,
            "int_fg_over_x2" => Some(oracle_over_x2(&fg, iv, n)?),
            "pair_f" | "pair_g" | "pair_fg" => {
                let al = r.alpha.map_or(1.0, |a| a.get());
                match p.name {
                    "pair_f" => Some(oracle_frac_pair(f, iv, al, n)?),
                    "pair_g" => r.g.as_ref().map(|g| oracle_frac_pair(g, iv, al, n)).transpose()?,
                    _ => Some(oracle_frac_pair(&fg, iv, al, n)?),
                }
            }
            _ => None,
        };
        if let Some(o) = oracle {
            items.push(CrosscheckItem { name: p.name.to_string(), engine: p.value, oracle: o, rel_gap: rel_gap(p.value, o) });
        }
    }
    if let Some(c) = &sides.constants {
        let family = match c.family {
            ConstantFamily::Zeta => r.h.map(|h| OracleFamily::Zeta { h }),
            ConstantFamily::CAlphaExact => Some(OracleFamily::CAlpha {
                alpha: c.alpha.unwrap_or(1.0),
                variant: CVariant::Exact,
                strict_paper: c.strict_paper,
            }),
            ConstantFamily::CAlphaSmall => Some(OracleFamily::CAlpha {
                alpha: c.alpha.unwrap_or(1.0),
                variant: CVariant::SmallAlpha,
                strict_paper: false,
            }),
            ConstantFamily::CAlphaQ => {
                Some(OracleFamily::CAlphaQ { alpha: c.alpha.unwrap_or(1.0), q: c.q.unwrap_or(1.0) })
            }
        };
        if let Some(fam) = family {
            let o = oracle_constants(iv, fam, n)?;
            for (i, (e, o)) in c.values().iter().zip(o.values()).enumerate() {
                items.push(CrosscheckItem {
                    name: format!("{}_c{}", c.family.name(), i + 1),
                    engine: *e,
                    oracle: o,
                    rel_gap: rel_gap(*e, o),
                });
            }
        }
    }
    let max_rel_gap = items.iter().map(|i| i.rel_gap).fold(0.0, f64::max);
    Ok(OracleCrosscheck { n, items, max_rel_gap })
}

fn params(spec: &CaseSpec, r: Option<&Ready<'_>>, cfg: &RunConfig) -> ReportParams {
    let needs = spec.inequality.needs();
    ReportParams {
        a: spec.a,
        b: spec.b,
        alpha: spec.alpha.filter(|_| needs.alpha),
        q: spec.q.filter(|_| needs.q),
        theta: spec.theta.filter(|_| needs.theta),
        f: spec.f.to_string(),
        g: spec.g.as_ref().filter(|_| needs.g).map(|g| g.expr().to_string()),
        g_mode: spec.g.as_ref().filter(|_| needs.g).map(WeightSpec::mode),
        h: spec.h.as_ref().filter(|_| needs.h).map(Expr::to_string),
        variant: r.and_then(|r| r.variant),
        flags: Flags { strict_paper: cfg.strict_paper, force: cfg.force },
        settings: Settings {
            tolerance: cfg.tolerance,
            grid: cfg.grid,
            symmetry_grid: cfg.symmetry_grid,
            symmetry_tol: cfg.symmetry_tol,
            sup_grid: cfg.sup_grid,
            sup_safety: cfg.sup_safety,
        },
    }
}

/// Run one case. Only input problems are errors; everything else,
/// including numerical breakdown, is reported through the status.
pub fn run_case(spec: &CaseSpec, cfg: &RunConfig) -> Result<VerificationReport, UsageError> {
    run_case_cached(spec, cfg, &mut HypothesisCache::new())
}

/// [`run_case`] sharing hypothesis checks through `cache`. The cache must
/// only be reused for cases with the same `f`, `g`, interval and settings.
pub fn run_case_cached(
    spec: &CaseSpec,
    cfg: &RunConfig,
    cache: &mut HypothesisCache,
) -> Result<VerificationReport, UsageError> {
    let ready = validate(spec, cfg)?;
    let mut report = VerificationReport {
        inequality: spec.inequality,
        params: params(spec, Some(&ready), cfg),
        sides: None,
        margin: None,
        quad_error_budget: None,
        hypothesis_checks: Vec::new(),
        status: Status::NumericalFailure,
        message: None,
        warnings: ready.warnings.clone(),
        oracle_crosscheck: None,
        timestamp: None,
    };
    let checks = match run_checks(spec, &ready, cfg, cache) {
        Ok(c) => c,
        Err(msg) => {
            report.message = Some(format!("hypothesis check could not be evaluated: {msg}"));
            return Ok(report);
        }
    };
    let rejected: Vec<String> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.clone()).collect();
    report.hypothesis_checks = checks;
    if !rejected.is_empty() {
        let what = format!("hypothesis not certified: {}", rejected.join(", "));
        report.status = Status::HypothesisRejected;
        if !cfg.force {
            report.message = Some(what);
            return Ok(report);
        }
        report.warnings.push(format!("{what}; sides computed anyway because of --force"));
    }
    let sides = match compute_sides(spec, &ready, cfg) {
        Ok(s) => s,
        Err(e) if e.is_usage() => return Err(UsageError::new(e.to_string())),
        Err(e) => {
            report.status = Status::NumericalFailure;
            report.message = Some(e.to_string());
            return Ok(report);
        }
    };
    report.sides = Some(Sides { lhs: sides.lhs, mid: sides.mid, rhs: sides.rhs, relation: sides.relation });
    report.margin = Some(sides.margin());
    report.quad_error_budget = Some(sides.quad_error_budget);
    if !sides.is_finite() || sides.margin().is_nan() {
        report.status = Status::NumericalFailure;
        report.message = Some("non-finite side or error budget".into());
        return Ok(report);
    }
    if cfg.oracle {
        match crosscheck(spec, &ready, &sides, cfg) {
            Ok(c) => report.oracle_crosscheck = Some(c),
            Err(e) => report.warnings.push(format!("oracle cross-check failed: {e}")),
        }
    }
    if rejected.is_empty() {
        report.status = if sides.holds() { Status::Pass } else { Status::Fail };
    } else if !sides.holds() {
        report.warnings.push("sides violate the statement, but its hypotheses do not hold".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn spec(id: InequalityId, f: &str) -> CaseSpec {
        CaseSpec::new(id, parse(f).unwrap(), 1.0, 2.0)
    }

    #[test]
    fn hh_chain_passes_for_identity() {
        let r = run_case(&spec(InequalityId::Hh13, "x"), &RunConfig::default()).unwrap();
        assert_eq!(r.status, Status::Pass);
        let s = r.sides.unwrap();
        assert!((s.mid.unwrap() - 2.0 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn missing_inputs_are_usage_errors() {
        assert!(run_case(&spec(InequalityId::Fejer16, "x"), &RunConfig::default()).is_err());
        assert!(run_case(&spec(InequalityId::HhFrac14, "x"), &RunConfig::default()).is_err());
        let mut s = spec(InequalityId::Bound223, "x");
        s.q = Some(1.0);
        assert!(run_case(&s, &RunConfig::default()).is_err());
        let mut s = spec(InequalityId::Bound210, "x");
        s.g = Some(WeightSpec::AsGiven(parse("1").unwrap()));
        s.alpha = Some(1.5);
        assert!(run_case(&s, &RunConfig::default()).is_err());
        let bad = CaseSpec::new(InequalityId::Hh13, parse("1/x").unwrap(), 0.0, 2.0);
        assert!(run_case(&bad, &RunConfig::default()).is_err());
    }

    #[test]
    fn rejection_and_force() {
        let s = spec(InequalityId::Hh13, "-x^2");
        let r = run_case(&s, &RunConfig::default()).unwrap();
        assert_eq!(r.status, Status::HypothesisRejected);
        assert!(r.sides.is_none());
        let cfg = RunConfig { force: true, ..RunConfig::default() };
        let r = run_case(&s, &cfg).unwrap();
        assert_eq!(r.status, Status::HypothesisRejected);
        assert!(r.sides.is_some());
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn asymmetric_weight_is_rejected_unless_symmetrized() {
        let mut s = spec(InequalityId::Fejer16, "x^2");
        s.g = Some(WeightSpec::AsGiven(parse("x").unwrap()));
        assert_eq!(run_case(&s, &RunConfig::default()).unwrap().status, Status::HypothesisRejected);
        s.g = Some(WeightSpec::Symmetrized(parse("x").unwrap()));
        assert_eq!(run_case(&s, &RunConfig::default()).unwrap().status, Status::Pass);
    }

    #[test]
    fn evaluation_failure_is_numerical() {
        let r = run_case(&spec(InequalityId::Identity21, "ln(x - 1.5)").with_h("x"), &RunConfig::default())
            .unwrap();
        assert_eq!(r.status, Status::NumericalFailure);
        assert!(r.message.is_some());
    }

    #[test]
    fn crosscheck_records_parts_and_constants() {
        let mut s = spec(InequalityId::Bound29, "x^2");
        s.g = Some(WeightSpec::Symmetrized(parse("x").unwrap()));
        s.alpha = Some(0.5);
        let cfg = RunConfig { oracle: true, oracle_n: 200_000, force: true, ..RunConfig::default() };
        let r = run_case(&s, &cfg).unwrap();
        let o = r.oracle_crosscheck.unwrap();
        let names: Vec<&str> = o.items.iter().map(|i| i.name.as_str()).collect();
        assert!(names.contains(&"pair_g") && names.contains(&"c-alpha-exact_c3"), "{names:?}");
        assert!(o.max_rel_gap < 1e-3, "{o:?}");
    }

    impl CaseSpec {
        fn with_h(mut self, h: &str) -> Self {
            self.h = Some(parse(h).unwrap());
            self
        }
    }
}
