use clap::{Args, Parser, Subcommand};
use hhfejer_core::catalog::CVariant;
use hhfejer_core::{Grid3, InequalityId, OutputFormat, RunConfig};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "hhfejer", version, about = "Check Hermite-Hadamard-Fejer inequalities for harmonically convex functions numerically")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one inequality and print its report.
    Verify(VerifyArgs),
    /// Randomized campaign over every inequality.
    Sweep(SweepArgs),
    /// Print a constant family, optionally against the oracle.
    Constants(ConstantsArgs),
    /// Grid-check harmonic (s-)convexity and the implication rules.
    Classify(ClassifyArgs),
}

/// Settings shared by every subcommand that evaluates statements. Each one
/// overrides the same key from `--config`.
#[derive(Args, Debug, Default)]
pub struct Common {
    /// key = value settings file; flags win over it
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<OutputFormat>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// convexity grid as nx,ny,nt
    #[arg(long)]
    pub grid: Option<Grid3>,
    #[arg(long)]
    pub symmetry_grid: Option<usize>,
    #[arg(long)]
    pub symmetry_tol: Option<f64>,
    #[arg(long)]
    pub sup_grid: Option<usize>,
    /// factor applied to the sampled sup of g
    #[arg(long)]
    pub sup_safety: Option<f64>,
    #[arg(long)]
    pub variant: Option<CVariant>,
    /// take the third constant along the lower path L instead of U
    #[arg(long)]
    pub strict_paper: bool,
    /// compute the sides even when a hypothesis fails
    #[arg(long)]
    pub force: bool,
    /// recompute intermediate integrals and constants with the oracle
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub oracle_n: Option<usize>,
}

impl Common {
    pub fn run_config(&self) -> Result<RunConfig, String> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                RunConfig::parse_str(&text).map_err(|e| format!("{}: {e}", p.display()))?
            }
            None => RunConfig::default(),
        };
        let mut set = |key: &str, v: Option<String>| -> Result<(), String> {
            match v {
                Some(v) => cfg.set(key, &v),
                None => Ok(()),
            }
        };
        set("out", self.out.map(|o| o.to_string()))?;
        set("abs-tol", self.abs_tol.map(|v| v.to_string()))?;
        set("rel-tol", self.rel_tol.map(|v| v.to_string()))?;
        set("grid", self.grid.map(|g| format!("{},{},{}", g.nx, g.ny, g.nt)))?;
        set("symmetry-grid", self.symmetry_grid.map(|v| v.to_string()))?;
        set("symmetry-tol", self.symmetry_tol.map(|v| v.to_string()))?;
        set("sup-grid", self.sup_grid.map(|v| v.to_string()))?;
        set("sup-safety", self.sup_safety.map(|v| v.to_string()))?;
        set("variant", self.variant.map(|v| v.name().to_string()))?;
        set("oracle-n", self.oracle_n.map(|v| v.to_string()))?;
        set("strict-paper", self.strict_paper.then(|| "true".into()))?;
        set("force", self.force.then(|| "true".into()))?;
        set("oracle", self.oracle.then(|| "true".into()))?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub ineq: InequalityId,
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// weight, used as given
    #[arg(long, allow_hyphen_values = true, conflicts_with = "g_symmetrize")]
    pub g: Option<String>,
    /// weight, replaced by its harmonically symmetric part
    #[arg(long, allow_hyphen_values = true)]
    pub g_symmetrize: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// exponent for lemma-1, in (0, 1]
    #[arg(long)]
    pub theta: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,1,1.5,2.5")]
    pub alpha_list: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1.2,2,3")]
    pub q_list: Vec<f64>,
    /// worker threads; 0 uses every core
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyArg {
    Zeta,
    CAlpha,
    CAlphaQ,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    /// exponent of the harmonic s-convexity weights, in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long)]
    pub grid: Option<Grid3>,
    #[arg(long)]
    pub out: Option<OutputFormat>,
}
