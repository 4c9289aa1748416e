//! Run settings and their flat `key = value` file format.
//!
//! Keys mirror the CLI flag names. `#` starts a comment; blank lines are
//! ignored; unknown keys are an error.

use crate::catalog::{CVariant, DEFAULT_SUP_GRID, DEFAULT_SUP_SAFETY};
use crate::convexity::Grid3;
use crate::harmonic::DEFAULT_SYMMETRY_TOL;
use crate::quad::Tolerance;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            _ => Err(format!("unknown output format `{s}` (json, csv or text)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub tolerance: Tolerance,
    pub grid: Grid3,
    pub symmetry_grid: usize,
    pub symmetry_tol: f64,
    pub sup_grid: usize,
    pub sup_safety: f64,
    pub oracle: bool,
    pub oracle_n: usize,
    pub seed: u64,
    pub strict_paper: bool,
    pub force: bool,
    pub variant: CVariant,
    pub out: OutputFormat,
    /// Worker threads for sweeps; `0` uses every core.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerance: Tolerance::default(),
            grid: Grid3::default(),
            symmetry_grid: 201,
            symmetry_tol: DEFAULT_SYMMETRY_TOL,
            sup_grid: DEFAULT_SUP_GRID,
            sup_safety: DEFAULT_SUP_SAFETY,
            oracle: false,
            oracle_n: 1_000_000,
            seed: 0,
            strict_paper: false,
            force: false,
            variant: CVariant::Exact,
            out: OutputFormat::Json,
            jobs: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    v.parse::<T>().map_err(|e| format!("bad value `{v}` for {key}: {e}"))
}

fn positive(key: &str, v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{key} must be > 0, got {v}"))
    }
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "abs-tol" => self.tolerance.abs = positive(key, parse_value(key, value)?)?,
            "rel-tol" => self.tolerance.rel = positive(key, parse_value(key, value)?)?,
            "grid" => self.grid = parse_value(key, value)?,
            "symmetry-grid" => {
                let n: usize = parse_value(key, value)?;
                if n < 3 {
                    return Err("symmetry-grid must be >= 3".into());
                }
                self.symmetry_grid = n;
            }
            "symmetry-tol" => self.symmetry_tol = positive(key, parse_value(key, value)?)?,
            "sup-grid" => {
                let n: usize = parse_value(key, value)?;
                if n < 3 {
                    return Err("sup-grid must be >= 3".into());
                }
                self.sup_grid = n;
            }
            "sup-safety" => {
                let s: f64 = parse_value(key, value)?;
                if !(s >= 1.0 && s.is_finite()) {
                    return Err(format!("sup-safety must be >= 1, got {s}"));
                }
                self.sup_safety = s;
            }
            "oracle" => self.oracle = parse_value(key, value)?,
            "oracle-n" => {
                let n: usize = parse_value(key, value)?;
                if n < 1000 {
                    return Err("oracle-n must be >= 1000".into());
                }
                self.oracle_n = n;
            }
            "seed" => self.seed = parse_value(key, value)?,
            "strict-paper" => self.strict_paper = parse_value(key, value)?,
            "force" => self.force = parse_value(key, value)?,
            "variant" => self.variant = parse_value(key, value)?,
            "out" => self.out = parse_value(key, value)?,
            "jobs" => self.jobs = parse_value(key, value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn parse_str(text: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError { line: i + 1, message };
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            cfg.set(k.trim(), v.trim()).map_err(err)?;
        }
        Ok(cfg)
    }

    pub fn to_config_string(&self) -> String {
        let g = self.grid;
        format!(
            "abs-tol = {:e}\nrel-tol = {:e}\ngrid = {},{},{}\nsymmetry-grid = {}\nsymmetry-tol = {:e}\n\
             sup-grid = {}\nsup-safety = {}\noracle = {}\noracle-n = {}\nseed = {}\n\
             strict-paper = {}\nforce = {}\nvariant = {}\nout = {}\njobs = {}\n",
            self.tolerance.abs,
            self.tolerance.rel,
            g.nx,
            g.ny,
            g.nt,
            self.symmetry_grid,
            self.symmetry_tol,
            self.sup_grid,
            self.sup_safety,
            self.oracle,
            self.oracle_n,
            self.seed,
            self.strict_paper,
            self.force,
            self.variant.name(),
            self.out,
            self.jobs,
        )
    }
}
