//! `hhfejer`: verify, sweep, constants and classify.
//!
//! Exit codes: 0 PASS, 1 FAIL, 2 usage error, 3 numerical failure,
//! 4 hypothesis rejected.

mod args;

use args::{ClassifyArgs, Cli, Command, ConstantsArgs, FamilyArg, SweepArgs, VerifyArgs};
use clap::Parser;
use hhfejer_core::catalog::{c_alpha_constants, c_alpha_q_constants, zeta_constants, BoundConstants};
use hhfejer_core::convexity::{check_harmonically_convex, classify_via_proposition, ConvexityError};
use hhfejer_core::oracle::{oracle_constants, OracleFamily};
use hhfejer_core::report::{fmt17, rel_gap, to_json_line, CSV_HEADER};
use hhfejer_core::sweep::run_sweep;
use hhfejer_core::{
    parse, CaseSpec, Expr, FracOrder, Interval, OutputFormat, SweepPlan, SweepSummary,
    VerificationReport, WeightSpec,
};
use serde_json::json;
use std::io::{self, Write};
use std::process::ExitCode;

const USAGE: u8 = 2;
const NUMERICAL: u8 = 3;

/// A failure that ends the command with the given exit code.
struct Exit(u8, String);

fn usage(msg: impl ToString) -> Exit {
    Exit(USAGE, msg.to_string())
}

fn expr(flag: &str, text: &str) -> Result<Expr, Exit> {
    parse(text).map_err(|e| usage(format!("--{flag} `{text}`: {e}")))
}

fn timestamp() -> String {
    time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .unwrap_or_default()
}

fn emit(out: &mut impl Write, format: OutputFormat, reports: &[VerificationReport]) -> io::Result<()> {
    if format == OutputFormat::Csv {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for r in reports {
        let mut r = r.clone();
        r.timestamp = Some(timestamp());
        match format {
            OutputFormat::Json => writeln!(out, "{}", r.to_json())?,
            OutputFormat::Csv => writeln!(out, "{}", r.to_csv_row())?,
            OutputFormat::Text => write!(out, "{}", r.to_text())?,
        }
    }
    out.flush()
}

fn verify(a: VerifyArgs) -> Result<u8, Exit> {
    let cfg = a.common.run_config().map_err(usage)?;
    let g = match (&a.g, &a.g_symmetrize) {
        (Some(g), _) => Some(WeightSpec::AsGiven(expr("g", g)?)),
        (None, Some(g)) => Some(WeightSpec::Symmetrized(expr("g-symmetrize", g)?)),
        (None, None) => None,
    };
    let spec = CaseSpec {
        inequality: a.ineq,
        f: expr("f", &a.f)?,
        g,
        h: a.h.as_deref().map(|h| expr("h", h)).transpose()?,
        a: a.a,
        b: a.b,
        alpha: a.alpha,
        q: a.q,
        theta: a.theta,
    };
    let report = hhfejer_core::run_case(&spec, &cfg).map_err(usage)?;
    emit(&mut io::stdout().lock(), cfg.out, std::slice::from_ref(&report)).map_err(|e| Exit(1, e.to_string()))?;
    Ok(report.status.exit_code() as u8)
}

fn sweep(a: SweepArgs) -> Result<u8, Exit> {
    let mut cfg = a.common.run_config().map_err(usage)?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(j) = a.jobs {
        cfg.jobs = j;
    }
    let plan = SweepPlan { count: a.count, seed: cfg.seed, alpha_list: a.alpha_list, q_list: a.q_list };
    let reports = run_sweep(&plan, &cfg).map_err(usage)?;
    emit(&mut io::stdout().lock(), cfg.out, &reports).map_err(|e| Exit(1, e.to_string()))?;
    let summary = SweepSummary::from_reports(&reports);
    eprintln!("{}", summary.line());
    Ok(summary.exit_code() as u8)
}

fn constants(a: ConstantsArgs) -> Result<u8, Exit> {
    let cfg = a.common.run_config().map_err(usage)?;
    let iv = Interval::new(a.a, a.b).map_err(usage)?;
    let tol = cfg.tolerance;
    let alpha = |needed: bool| -> Result<Option<FracOrder>, Exit> {
        match (a.alpha, needed) {
            (Some(al), _) => FracOrder::new(al).map(Some).map_err(usage),
            (None, true) => Err(usage("this family needs --alpha")),
            (None, false) => Ok(None),
        }
    };
    let h = a.h.as_deref().map(|h| expr("h", h)).transpose()?;
    let engine: BoundConstants = match a.family {
        FamilyArg::Zeta => {
            let h = h.as_ref().ok_or_else(|| usage("the zeta family needs --h"))?;
            zeta_constants(h, iv, tol)
        }
        FamilyArg::CAlpha => {
            let al = alpha(true)?.expect("required");
            c_alpha_constants(iv, al, cfg.variant, cfg.strict_paper, tol)
        }
        FamilyArg::CAlphaQ => {
            let al = alpha(true)?.expect("required");
            let q = a.q.ok_or_else(|| usage("the c-alpha-q family needs --q"))?;
            c_alpha_q_constants(iv, al, q, tol)
        }
    }
    .map_err(|e| if e.is_usage() { usage(&e) } else { Exit(NUMERICAL, e.to_string()) })?;
    let oracle = if cfg.oracle {
        let fam = match a.family {
            FamilyArg::Zeta => OracleFamily::Zeta { h: h.as_ref().expect("checked above") },
            FamilyArg::CAlpha => OracleFamily::CAlpha {
                alpha: engine.alpha.unwrap_or(1.0),
                variant: cfg.variant,
                strict_paper: cfg.strict_paper,
            },
            FamilyArg::CAlphaQ => {
                OracleFamily::CAlphaQ { alpha: engine.alpha.unwrap_or(1.0), q: engine.q.unwrap_or(2.0) }
            }
        };
        Some(oracle_constants(iv, fam, cfg.oracle_n).map_err(|e| Exit(NUMERICAL, e.to_string()))?)
    } else {
        None
    };
    let e = engine.values();
    let o = oracle.map(|o| o.values());
    let gaps = o.map(|o| [rel_gap(e[0], o[0]), rel_gap(e[1], o[1]), rel_gap(e[2], o[2])]);
    let mut out = io::stdout().lock();
    let res = match cfg.out {
        OutputFormat::Json => {
            let v = json!({
                "family": engine.family.name(),
                "a": a.a,
                "b": a.b,
                "alpha": engine.alpha,
                "q": engine.q,
                "h": h.as_ref().map(|h| h.to_string()),
                "variant": (a.family == FamilyArg::CAlpha).then(|| cfg.variant.name()),
                "strict_paper": engine.strict_paper,
                "engine": e,
                "engine_abs_error": engine.abs_error,
                "oracle": o,
                "oracle_n": o.map(|_| cfg.oracle_n),
                "rel_gap": gaps,
            });
            writeln!(out, "{}", to_json_line(&v))
        }
        OutputFormat::Csv => {
            writeln!(out, "constant,engine,engine_abs_error,oracle,rel_gap").and_then(|_| {
                (0..3).try_for_each(|i| {
                    writeln!(
                        out,
                        "c{},{},{},{},{}",
                        i + 1,
                        fmt17(e[i]),
                        fmt17(engine.abs_error[i]),
                        o.map(|o| fmt17(o[i])).unwrap_or_default(),
                        gaps.map(|g| fmt17(g[i])).unwrap_or_default()
                    )
                })
            })
        }
        OutputFormat::Text => {
            let mut s = format!("{} on [{}, {}]\n", engine.family.name(), fmt17(a.a), fmt17(a.b));
            for i in 0..3 {
                s += &format!("  c{} = {}", i + 1, fmt17(e[i]));
                if let (Some(o), Some(g)) = (o, gaps) {
                    s += &format!("  oracle {}  gap {}", fmt17(o[i]), fmt17(g[i]));
                }
                s += "\n";
            }
            write!(out, "{s}")
        }
    };
    res.map_err(|e| Exit(1, e.to_string()))?;
    Ok(0)
}

fn classify(a: ClassifyArgs) -> Result<u8, Exit> {
    let f = expr("f", &a.f)?;
    let iv = Interval::new(a.a, a.b).map_err(usage)?;
    if !(a.s > 0.0 && a.s <= 1.0) {
        return Err(usage(format!("--s must lie in (0, 1], got {}", a.s)));
    }
    let grid = a.grid.unwrap_or_default();
    let fail = |e: ConvexityError| match e {
        ConvexityError::Domain(d) => usage(d),
        ConvexityError::Eval(e) => Exit(NUMERICAL, e.to_string()),
    };
    let direct = check_harmonically_convex(&f, iv, grid, a.s).map_err(fail)?;
    let prop = classify_via_proposition(&f, iv, grid).map_err(fail)?;
    let mut out = io::stdout().lock();
    let res = match a.out.unwrap_or_default() {
        OutputFormat::Json => {
            let v = json!({
                "f": f.to_string(),
                "a": a.a,
                "b": a.b,
                "s": a.s,
                "harmonic_check": direct,
                "proposition": prop,
                "rule_disagreement": prop.has_disagreement(),
            });
            writeln!(out, "{}", to_json_line(&v))
        }
        OutputFormat::Csv => writeln!(
            out,
            "f,a,b,s,certified,max_violation,convex,concave,nondecreasing,nonincreasing,rules_firing\n{},{},{},{},{},{},{},{},{},{},{}",
            f,
            fmt17(a.a),
            fmt17(a.b),
            fmt17(a.s),
            direct.certified(),
            fmt17(direct.max_violation),
            prop.convex.certified(),
            prop.concave.certified(),
            prop.nondecreasing,
            prop.nonincreasing,
            prop.rules
                .iter()
                .filter(|r| r.direct_check_agrees.is_some())
                .map(|r| r.rule.to_string())
                .collect::<Vec<_>>()
                .join(";")
        ),
        OutputFormat::Text => {
            let mut s = format!("f = {f} on [{}, {}], s = {}\n", fmt17(a.a), fmt17(a.b), a.s);
            s += &format!("  harmonic s-convexity: {}\n", direct.verdict());
            s += &format!("  convex: {}\n", prop.convex.verdict());
            s += &format!("  nondecreasing: {}  nonincreasing: {}\n", prop.nondecreasing, prop.nonincreasing);
            for r in &prop.rules {
                let agree = match r.direct_check_agrees {
                    Some(true) => " (direct check agrees)",
                    Some(false) => " (direct check DISAGREES)",
                    None => "",
                };
                s += &format!("  rule {} {:?}: {}{agree}\n", r.rule, r.status, r.statement);
            }
            write!(out, "{s}")
        }
    };
    res.map_err(|e| Exit(1, e.to_string()))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let r = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a),
        Command::Constants(a) => constants(a),
        Command::Classify(a) => classify(a),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
