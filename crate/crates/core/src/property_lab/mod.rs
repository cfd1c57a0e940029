//! Bounded checks of theory properties and verified runs of the
//! constructions that establish them.
//!
//! A report either confirms a property up to a bound, refutes it with a
//! replayable counterexample, or records that a construction produced
//! members that were re-checked.

mod convexity;
mod cycle_models;
mod ray;
mod reproduce;
mod smoothness;
mod star_growth;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

pub use convexity::{check_convexity, replay_convexity_refutation, ConvexityBounds};
pub use cycle_models::{cycle_model, six_fold_models, SixFoldRow};
pub use ray::{check_stable_infiniteness, extend_with_ray, refute_stable_infiniteness};
pub use reproduce::{
    reproduce_table1, reproduce_venn, table1_markdown, venn_markdown, ReproduceBounds, PropertyRow, VennPlacement,
    VennRegion,
};
pub use smoothness::{check_finite_smoothness, find_assignment, grow_by_one, SmoothInput};
pub use star_growth::{check_not_smooth_star, grow_star, StarGrowth, StarModel};

use crate::finite_model::ModelError;
use crate::logic::LogicError;
use crate::minimal_model::MmError;
use crate::theories::TheoryError;
use crate::witness::WitnessError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropertyError {
    /// The construction is impossible: a loop forces a one-element model.
    #[error("cannot extend: {reason}; evidence `{evidence}`")]
    Refused { reason: String, evidence: String },
    #[error("`{0}` is not supported here")]
    Unsupported(String),
    #[error("the input is not a member of `{0}`")]
    NotAMember(String),
    #[error("the input does not satisfy the formula")]
    NotAModel,
    #[error("construction produced an invalid result: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Mm(#[from] MmError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Convexity,
    StableInfiniteness,
    FiniteSmoothness,
    NonSmoothness,
}

/// Concrete data that refutes a property and can be checked again.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub formula: String,
    /// For convexity: the disjuncts of the valid implication.
    pub disjuncts: Vec<String>,
    /// Interpretations in the JSON exchange format.
    pub models: Vec<Value>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    /// No counterexample within the bound; not a proof.
    HoldsAtBound,
    Refuted { counterexample: Counterexample },
    /// Every constructed model was re-checked for membership and
    /// satisfaction.
    ConstructionVerified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub theory: String,
    pub property: Property,
    pub verdict: Verdict,
    pub evidence: Vec<String>,
    /// Sizes of constructed or searched models, where relevant.
    pub sizes: Vec<usize>,
    pub bound: usize,
}

impl PropertyReport {
    pub fn is_refuted(&self) -> bool {
        matches!(self.verdict, Verdict::Refuted { .. })
    }
}
