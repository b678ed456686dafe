//! Homogeneity analysis for nonlinear structural systems.
//!
//! The crate characterizes the nonlinearity of a positive-valued effect or
//! resistance function at a design point through its log-log sensitivities
//! (degrees of homogeneity), propagates partial safety factors through those
//! sensitivities, assembles reliability indexes with provable upper and lower
//! bounds, and calibrates nonlinearity-invariant critical partial safety
//! factors. A crude Monte Carlo oracle cross-checks every closed-form result
//! at desk scale.
//!
//! Modules:
//! - [`dist`] — probability primitives for normal, lognormal and Gumbel
//!   variables (moments, pdf/cdf/quantile, log-space statistics).
//! - [`expr`] — a small expression language so analyses are not limited to
//!   the built-in models.
//! - [`models`] — built-in nonlinear structural models with closed-form
//!   degrees of homogeneity, used as ground truth for the generic engine.
//! - [`homogeneity`] — the homogenization engine (PDH/DH/RPDH, safety-factor
//!   propagation, homogenized surrogate, remainder metric).
//! - [`reliability`] — reliability indexes, their nonlinearity-invariant
//!   bounds, critical partial safety factors, and reduction factors.
//! - [`oracle`] — deterministic Monte Carlo estimation of failure
//!   probability and reliability index.

use std::collections::BTreeMap;

pub mod dist;
pub mod expr;
pub mod homogeneity;
pub mod models;
pub mod oracle;
pub mod reliability;

/// Variable bindings: variable name to value.
///
/// A `BTreeMap` keeps iteration order deterministic, which matters for
/// reproducible reports and bit-stable CSV output.
pub type VarMap = BTreeMap<String, f64>;

/// Error produced when evaluating an effect or resistance model.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    /// A referenced variable has no bound value.
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    /// The inputs lie outside the model's valid domain.
    #[error("{model}: {detail}")]
    Domain { model: String, detail: String },
    /// Evaluation produced a non-finite value (division by zero, logarithm
    /// of a non-positive number, fractional power of a negative base, ...).
    #[error("non-finite result in `{expr}`")]
    NonFinite { expr: String },
    /// Internal numerical failure that should not occur for valid inputs.
    #[error("{0}")]
    Internal(String),
}

/// A positive-valued effect (or resistance) function of named variables.
///
/// Implementations are black-box evaluators: the homogeneity engine measures
/// sensitivities by probing `eval`, never through an analytic derivative
/// channel, so built-in and expression-defined models go through exactly the
/// same code path.
pub trait EffectModel {
    /// Free variables of the model, sorted by name.
    fn variables(&self) -> Vec<String>;

    /// Evaluate the model at the given variable values.
    fn eval(&self, values: &VarMap) -> Result<f64, ModelError>;

    /// Whether the point lies in the model's valid domain.
    ///
    /// The default accepts any point where evaluation succeeds with a
    /// positive value; built-in models override this with their closed-form
    /// domain predicates.
    fn in_domain(&self, values: &VarMap) -> bool {
        self.eval(values).map(|e| e > 0.0).unwrap_or(false)
    }
}

impl<M: EffectModel + ?Sized> EffectModel for &M {
    fn variables(&self) -> Vec<String> {
        (**self).variables()
    }
    fn eval(&self, values: &VarMap) -> Result<f64, ModelError> {
        (**self).eval(values)
    }
    fn in_domain(&self, values: &VarMap) -> bool {
        (**self).in_domain(values)
    }
}

/// Convenience constructor for a [`VarMap`] from `(name, value)` pairs.
pub fn var_map<I, S>(pairs: I) -> VarMap
where
    I: IntoIterator<Item = (S, f64)>,
    S: Into<String>,
{
    pairs.into_iter().map(|(k, v)| (k.into(), v)).collect()
}
