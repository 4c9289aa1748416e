//! Numerical verification of Hermite-Hadamard and Fejer type inequalities
//! for harmonically convex functions.
//!
//! Functions are given as text ([`expr`]), intervals and harmonic paths live
//! in [`harmonic`], grid certification of the hypotheses in [`convexity`],
//! integration in [`quad`], the statements themselves in [`catalog`], and a
//! deliberately naive cross-check in [`oracle`]. [`verify`] and [`sweep`]
//! turn all of that into [`VerificationReport`]s.

pub mod catalog;
pub mod config;
pub mod convexity;
pub mod expr;
pub mod func;
pub mod harmonic;
pub mod oracle;
pub mod quad;
pub mod report;
pub mod sweep;
pub mod verify;

pub use catalog::{BoundConstants, CVariant, CatalogError, InequalityId, SidesResult};
pub use config::{ConfigError, OutputFormat, RunConfig};
pub use convexity::{ConvexityReport, Grid3, PropositionReport};
pub use expr::{parse, EvalError, Expr};
pub use func::RealFn;
pub use harmonic::{DomainError, Interval};
pub use quad::{FracOrder, QuadError, QuadResult, Tolerance};
pub use report::{Status, VerificationReport};
pub use sweep::{SweepPlan, SweepSummary};
pub use verify::{run_case, CaseSpec, UsageError, WeightSpec};
