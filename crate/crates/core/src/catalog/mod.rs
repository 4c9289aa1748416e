//! Both (or all three) sides of every identity and inequality, each side an
//! independent numerical computation, plus the constant families.

mod bounds;
mod chains;
mod constants;
mod ids;
mod sup;

pub use bounds::{
    bound_frac_weighted, bound_special, bound_frac_weighted_q, bound_plain_q, bound_h_kernel,
    bound_h_kernel_q, identity_2_1, lemma1, SpecialCase, WeightOptions,
};
pub use chains::{fejer_chain, fejer_frac_chain, hh_chain, hh_frac_chain};
pub use constants::{
    alpha_kernel, c_alpha_constants, c_alpha_q_constants, c_alpha_q_unchecked, zeta_constants,
    BoundConstants, CVariant, ConstantFamily,
};
pub use ids::{InequalityId, Needs};
pub use sup::{sup_norm, SupNorm, DEFAULT_SUP_GRID, DEFAULT_SUP_SAFETY};

use crate::expr::EvalError;
use crate::harmonic::DomainError;
use crate::quad::QuadError;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    /// Bad parameters: a usage problem, not a numerical one.
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl CatalogError {
    pub fn is_usage(&self) -> bool {
        matches!(self, CatalogError::Domain(_) | CatalogError::Quad(QuadError::Domain(_)))
    }
}

/// How the sides relate when the statement holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs <= mid <= rhs`
    Chain,
    /// `lhs <= rhs`
    Bound,
    /// `lhs = rhs`
    Identity,
}

/// A named intermediate quantity, kept so it can be recomputed
/// independently.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Part {
    pub name: &'static str,
    pub value: f64,
    pub abs_error: f64,
}

impl Part {
    fn new(name: &'static str, r: crate::quad::QuadResult) -> Self {
        Part { name, value: r.value, abs_error: r.abs_error_estimate }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SidesResult {
    pub lhs: f64,
    pub mid: Option<f64>,
    pub rhs: f64,
    /// Propagated quadrature error estimates plus a rounding allowance on
    /// the assembled sides.
    pub quad_error_budget: f64,
    pub relation: Relation,
    #[serde(skip)]
    pub parts: Vec<Part>,
    #[serde(skip)]
    pub constants: Option<BoundConstants>,
}

/// Rounding allowance for sides assembled from a handful of terms.
pub(crate) fn rounding(terms: &[f64]) -> f64 {
    64.0 * f64::EPSILON * terms.iter().map(|t| t.abs()).sum::<f64>()
}

impl SidesResult {
    /// Minimum pairwise slack; for identities, minus the residual.
    pub fn margin(&self) -> f64 {
        match self.relation {
            Relation::Chain => {
                let mid = self.mid.unwrap_or(f64::NAN);
                (mid - self.lhs).min(self.rhs - mid)
            }
            Relation::Bound => self.rhs - self.lhs,
            Relation::Identity => -(self.lhs - self.rhs).abs(),
        }
    }

    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs
    }

    pub fn holds(&self) -> bool {
        self.margin() >= -self.quad_error_budget
    }

    pub fn is_finite(&self) -> bool {
        self.lhs.is_finite()
            && self.rhs.is_finite()
            && self.mid.is_none_or(f64::is_finite)
            && self.quad_error_budget.is_finite()
    }
}
