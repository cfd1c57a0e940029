//! Witness functions and the model constructions behind them.
//!
//! A witness maps a quantifier-free formula to one with extra variables whose
//! models can be named by those variables. Everything here works on flat
//! conjunctions and is lifted to arbitrary quantifier-free input through
//! the syntactic DNF.

mod additive;
mod completion;
mod flat;
mod shiny;
mod t2n;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use additive::{is_flat_sort_conjunction, wit_double_prime, wit_prime};
pub use completion::{complete_to_witness_model, Completion, CompletionCase};
pub use flat::{flatten, is_flat_literal, FlatConjunction};
pub use shiny::{shiny_witness, verify_strong_witness, VerifyOptions, WitnessFailure, WitnessReport};
pub use t2n::{t2n_grow, t2n_shrink};

use crate::finite_model::ModelError;
use crate::logic::normal::{dnf, Literal};
use crate::logic::{Atom, Formula, FreshVars, LogicError, Signature, Term};
use crate::theories::{TheoryError, TheoryHandle, WitnessKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("expected a conjunction of literals, got `{0}`")]
    NotConjunction(String),
    #[error("literal `{0}` is not flat")]
    NotFlat(String),
    #[error("seed does not meet the precondition: {0}")]
    BadSeed(String),
    #[error("theory `{theory}` lacks {what}")]
    MissingCapability { theory: String, what: &'static str },
    #[error("target size {target} is below the current size {current}")]
    TargetTooSmall { current: usize, target: usize },
    #[error("interpretation is not a model: {0}")]
    NotAModel(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// What a witness is claimed to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strength {
    Plain,
    Strong,
    /// Strong, but computability of the map is not claimed.
    PreWitness,
}

type WitnessMap = dyn Fn(&Formula) -> Result<Formula, WitnessError> + Send + Sync;

/// A named map on quantifier-free formulas with its claimed properties.
///
/// Maps are deterministic: equal inputs give syntactically equal outputs.
#[derive(Clone)]
pub struct WitnessFn {
    name: String,
    map: Arc<WitnessMap>,
    strength: Strength,
    additive: bool,
    diagnostics: Vec<String>,
    /// For `wit′`, the witness it was built from.
    prime_of: Option<Box<WitnessFn>>,
}

impl WitnessFn {
    pub fn new(
        name: impl Into<String>,
        strength: Strength,
        map: impl Fn(&Formula) -> Result<Formula, WitnessError> + Send + Sync + 'static,
    ) -> Self {
        WitnessFn {
            name: name.into(),
            map: Arc::new(map),
            strength,
            additive: false,
            diagnostics: Vec::new(),
            prime_of: None,
        }
    }

    pub fn apply(&self, phi: &Formula) -> Result<Formula, WitnessError> {
        phi.require_quantifier_free()?;
        (self.map)(phi)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn strength(&self) -> Strength {
        self.strength
    }

    pub fn is_additive(&self) -> bool {
        self.additive
    }

    /// Notes attached during construction, e.g. why a guarantee is withheld.
    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }

    pub fn prime_of(&self) -> Option<&WitnessFn> {
        self.prime_of.as_deref()
    }
}

impl fmt::Debug for WitnessFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WitnessFn")
            .field("name", &self.name)
            .field("strength", &self.strength)
            .field("additive", &self.additive)
            .finish_non_exhaustive()
    }
}

/// Lifts a witness on flat conjunctions to all quantifier-free formulas:
/// the disjunction over DNF cubes of the witness of each flattened cube.
///
/// Fresh variables come from one generator, so cubes never share them. A
/// formula with no cubes becomes `false` conjoined with `v=v` for each of its
/// variables, which keeps `vars(φ) ⊆ vars(wit(φ))`.
pub fn dnf_lift(
    phi: &Formula,
    mut wit_on_flat: impl FnMut(FlatConjunction, &mut FreshVars) -> Result<FlatConjunction, WitnessError>,
) -> Result<Formula, WitnessError> {
    let cubes = dnf(phi)?;
    if cubes.is_empty() {
        return Ok(false_keeping_vars(phi));
    }
    let mut fresh = FreshVars::avoiding([phi]);
    let mut out = Vec::with_capacity(cubes.len());
    for cube in &cubes {
        let flat = flat::flatten_literals(cube, &mut fresh);
        out.push(wit_on_flat(flat, &mut fresh)?.to_formula());
    }
    Ok(Formula::disj(out))
}

pub(crate) fn false_keeping_vars(phi: &Formula) -> Formula {
    let mut parts = vec![Formula::False];
    parts.extend(phi.vars().iter().map(|v| Formula::var_eq(v, v)));
    Formula::And(parts)
}

/// The cycle-theory witness on a flat conjunction: unchanged, except that
/// each sort of `sig` without a variable gets a fresh `w=w`.
pub fn wit_ti(phi: &FlatConjunction, sig: &Signature, fresh: &mut FreshVars) -> FlatConjunction {
    let present: Vec<_> = phi.vars().iter().map(|v| v.sort().clone()).collect();
    let mut out = phi.clone();
    for sort in sig.sorts() {
        if !present.contains(sort) {
            let w = fresh.var(sort);
            out.push(Literal { positive: true, atom: Atom::Eq(Term::var(&w), Term::var(&w)) });
        }
    }
    out
}

/// `wit_ti` lifted to quantifier-free formulas over `sig`.
pub fn cycle_witness(sig: &Signature) -> WitnessFn {
    let sig = sig.clone();
    WitnessFn::new("cycle", Strength::Strong, move |phi| {
        dnf_lift(phi, |flat, fresh| Ok(wit_ti(&flat, &sig, fresh)))
    })
}

/// `wit(φ) = φ`; a witness only for theories whose models are always named
/// by the variables, and the standard counterexample otherwise.
pub fn identity_witness() -> WitnessFn {
    WitnessFn::new("identity", Strength::Plain, |phi| Ok(phi.clone()))
}

/// The witness a theory advertises, if any. `bound` caps the minimal-model
/// searches of the shiny construction.
pub fn theory_witness(t: &TheoryHandle, bound: usize) -> Result<WitnessFn, WitnessError> {
    match t.capabilities().strong_witness {
        Some(WitnessKind::Cycle) => Ok(cycle_witness(t.signature())),
        Some(WitnessKind::Shiny) => shiny_witness(t, bound),
        None => Err(WitnessError::MissingCapability { theory: t.name().to_string(), what: "a strong witness" }),
    }
}
