//! Verification reports and their JSON, CSV and text renderings.
//!
//! Every float is written with 17 significant digits (`{:.16e}`) so doubles
//! round-trip exactly; non-finite values become `null` in JSON.

use crate::catalog::{CVariant, InequalityId, Relation};
use crate::convexity::Grid3;
use crate::quad::Tolerance;
use serde::ser::Serialize;
use std::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "HYPOTHESIS-REJECTED")]
    HypothesisRejected,
    #[serde(rename = "NUMERICAL-FAILURE")]
    NumericalFailure,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::HypothesisRejected => "HYPOTHESIS-REJECTED",
            Status::NumericalFailure => "NUMERICAL-FAILURE",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::NumericalFailure => 3,
            Status::HypothesisRejected => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Passed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub status: CheckStatus,
    pub max_violation: f64,
    /// Where the worst violation sits, when there is one.
    pub witness: Option<Vec<f64>>,
}

impl HypothesisCheck {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Passed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Flags {
    pub strict_paper: bool,
    pub force: bool,
}

/// Numerical settings that influence the verdict.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Settings {
    pub tolerance: Tolerance,
    pub grid: Grid3,
    pub symmetry_grid: usize,
    pub symmetry_tol: f64,
    pub sup_grid: usize,
    pub sup_safety: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ReportParams {
    pub a: f64,
    pub b: f64,
    pub alpha: Option<f64>,
    pub q: Option<f64>,
    pub theta: Option<f64>,
    pub f: String,
    pub g: Option<String>,
    /// `as-given` or `symmetrized`.
    pub g_mode: Option<&'static str>,
    pub h: Option<String>,
    pub variant: Option<CVariant>,
    pub flags: Flags,
    pub settings: Settings,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Sides {
    pub lhs: f64,
    pub mid: Option<f64>,
    pub rhs: f64,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CrosscheckItem {
    pub name: String,
    pub engine: f64,
    pub oracle: f64,
    /// `|engine - oracle| / max(|engine|, |oracle|)`, zero when both vanish.
    pub rel_gap: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct OracleCrosscheck {
    pub n: usize,
    pub items: Vec<CrosscheckItem>,
    pub max_rel_gap: f64,
}

pub fn rel_gap(engine: f64, oracle: f64) -> f64 {
    let scale = engine.abs().max(oracle.abs());
    if scale == 0.0 {
        0.0
    } else {
        (engine - oracle).abs() / scale
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct VerificationReport {
    pub inequality: InequalityId,
    pub params: ReportParams,
    pub sides: Option<Sides>,
    pub margin: Option<f64>,
    pub quad_error_budget: Option<f64>,
    pub hypothesis_checks: Vec<HypothesisCheck>,
    pub status: Status,
    pub message: Option<String>,
    pub warnings: Vec<String>,
    pub oracle_crosscheck: Option<OracleCrosscheck>,
    /// Wall-clock stamp filled in by the caller; not part of the
    /// determinism contract.
    pub timestamp: Option<String>,
}

/// `serde_json` formatter writing floats as `{:.16e}`.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }
}

/// Compact one-line JSON with 17-digit floats.
pub fn to_json_line<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser).expect("report types always serialize");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// A float with 17 significant digits, or `nan`/`inf` spelled out.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn opt17(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_default()
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CSV_HEADER: &str = "inequality,status,lhs,mid,rhs,margin,quad_error_budget,a,b,alpha,q,theta,f,g,g_mode,h,variant,strict_paper,force,hypotheses_passed,max_oracle_gap";

impl VerificationReport {
    pub fn to_json(&self) -> String {
        to_json_line(self)
    }

    pub fn to_csv_row(&self) -> String {
        let p = &self.params;
        let fields = [
            self.inequality.name().to_string(),
            self.status.name().to_string(),
            opt17(self.sides.map(|s| s.lhs)),
            opt17(self.sides.and_then(|s| s.mid)),
            opt17(self.sides.map(|s| s.rhs)),
            opt17(self.margin),
            opt17(self.quad_error_budget),
            fmt17(p.a),
            fmt17(p.b),
            opt17(p.alpha),
            opt17(p.q),
            opt17(p.theta),
            csv_quote(&p.f),
            csv_quote(p.g.as_deref().unwrap_or("")),
            p.g_mode.unwrap_or("").to_string(),
            csv_quote(p.h.as_deref().unwrap_or("")),
            p.variant.map(|v| v.name()).unwrap_or("").to_string(),
            p.flags.strict_paper.to_string(),
            p.flags.force.to_string(),
            self.hypothesis_checks.iter().all(HypothesisCheck::passed).to_string(),
            opt17(self.oracle_crosscheck.as_ref().map(|o| o.max_rel_gap)),
        ];
        fields.join(",")
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = format!("{}  {}\n", self.inequality, self.status.name());
        out += &format!("  interval [{}, {}]  f = {}\n", fmt17(p.a), fmt17(p.b), p.f);
        if let Some(g) = &p.g {
            out += &format!("  g = {g} ({})\n", p.g_mode.unwrap_or(""));
        }
        if let Some(h) = &p.h {
            out += &format!("  h = {h}\n");
        }
        for (k, v) in [("alpha", p.alpha), ("q", p.q), ("theta", p.theta)] {
            if let Some(v) = v {
                out += &format!("  {k} = {}\n", fmt17(v));
            }
        }
        if let Some(s) = self.sides {
            out += &format!("  lhs = {}\n", fmt17(s.lhs));
            if let Some(m) = s.mid {
                out += &format!("  mid = {}\n", fmt17(m));
            }
            out += &format!("  rhs = {}\n", fmt17(s.rhs));
        }
        if let (Some(m), Some(e)) = (self.margin, self.quad_error_budget) {
            out += &format!("  margin = {}  budget = {}\n", fmt17(m), fmt17(e));
        }
        for c in &self.hypothesis_checks {
            let st = if c.passed() { "ok" } else { "FAILED" };
            out += &format!("  check {}: {st} (max violation {})\n", c.name, fmt17(c.max_violation));
        }
        if let Some(o) = &self.oracle_crosscheck {
            for it in &o.items {
                out += &format!(
                    "  oracle {}: engine {} oracle {} gap {}\n",
                    it.name,
                    fmt17(it.engine),
                    fmt17(it.oracle),
                    fmt17(it.rel_gap)
                );
            }
        }
        if let Some(m) = &self.message {
            out += &format!("  note: {m}\n");
        }
        for w in &self.warnings {
            out += &format!("  warning: {w}\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_floats_round_trip() {
        let v = vec![1.0 / 3.0, 2f64.ln(), 1e-300, 0.0, f64::NAN];
        let s = to_json_line(&v);
        assert!(s.contains("3.3333333333333331e-1"), "{s}");
        assert!(s.ends_with("null]"));
        let back: Vec<Option<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[0], Some(1.0 / 3.0));
        assert_eq!(back[1], Some(2f64.ln()));
        assert_eq!(back[2], Some(1e-300));
        assert_eq!(back[4], None);
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_quote("x^2"), "x^2");
        assert_eq!(csv_quote("a,b"), "\"a,b\"");
        assert_eq!(csv_quote("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn gap_is_symmetric_and_zero_safe() {
        assert_eq!(rel_gap(0.0, 0.0), 0.0);
        assert_eq!(rel_gap(1.0, 2.0), rel_gap(2.0, 1.0));
        assert_eq!(rel_gap(2.0, 1.0), 0.5);
    }
}
