//! Minimal model functions and decisions, in both directions: minimal
//! models from a decision procedure plus a strong witness, and decisions
//! from a minimal model function.

mod arrangements;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use arrangements::consistent_arrangements;

use crate::finite_model::{
    brute_mm, extremal_elements, model_of_size, CardinalityVector, Extremum, MinimalModelSet, ModelError,
};
use crate::logic::normal::{as_literal_conjunction, dnf};
use crate::logic::{
    arrangement_formula, cycle_formula, distinct_formula, Formula, FreshVars, LogicError, Sort, Term, Var, FUNC_F,
};
use crate::theories::{is_prime, TheoryError, TheoryHandle};
use crate::witness::{theory_witness, WitnessError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MmError {
    #[error("theory `{theory}` lacks {what}")]
    MissingCapability { theory: String, what: &'static str },
    #[error("minimal model function returned no vectors for `{0}`; a total function must return some")]
    EmptyMm(String),
    #[error("{0} is not a prime ≥ 7")]
    NotPrime(u64),
    #[error("sort `{0}` is not in the minimal model set")]
    UnknownSort(Sort),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Where a minimal model function comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MmProvenance {
    /// Bounded search over finite structures.
    Brute,
    /// Satisfiable arrangements of the strong witness.
    FromDecision,
}

impl fmt::Display for MmProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MmProvenance::Brute => "brute",
            MmProvenance::FromDecision => "from-decision",
        })
    }
}

/// A minimal model function for one theory.
#[derive(Clone, Debug)]
pub struct MmCapability {
    theory: TheoryHandle,
    provenance: MmProvenance,
    fallback_bound: usize,
    cap: Option<usize>,
}

impl MmCapability {
    /// Bounded search at the theory's bound hint, or at `fallback_bound`
    /// per sort when it has none.
    pub fn brute(t: &TheoryHandle, fallback_bound: usize) -> Self {
        MmCapability { theory: t.clone(), provenance: MmProvenance::Brute, fallback_bound, cap: None }
    }

    /// [`mm_from_decision`]; needs a strong witness.
    pub fn from_decision(t: &TheoryHandle) -> Result<Self, MmError> {
        if t.capabilities().strong_witness.is_none() {
            return Err(MmError::MissingCapability { theory: t.name().to_string(), what: "a strong witness" });
        }
        Ok(MmCapability { theory: t.clone(), provenance: MmProvenance::FromDecision, fallback_bound: 8, cap: None })
    }

    /// Caps every per-sort search bound of the brute variant.
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = Some(cap);
        self
    }

    pub fn theory(&self) -> &TheoryHandle {
        &self.theory
    }

    pub fn provenance(&self) -> MmProvenance {
        self.provenance
    }

    /// The search bound the brute variant uses for `phi`.
    pub fn bound_for(&self, phi: &Formula) -> Result<CardinalityVector, MmError> {
        let sorts = self.theory.signature().sorts().len();
        let mut sizes = self.theory.bound_hint(phi).unwrap_or_else(|| vec![self.fallback_bound; sorts]);
        if let Some(cap) = self.cap {
            sizes.iter_mut().for_each(|k| *k = (*k).min(cap));
        }
        let sizes: Vec<u64> = sizes.into_iter().map(|k| k as u64).collect();
        Ok(CardinalityVector::finite(self.theory.signature(), &sizes)?)
    }

    pub fn compute(&self, phi: &Formula) -> Result<MinimalModelSet, MmError> {
        match self.provenance {
            MmProvenance::Brute => Ok(brute_mm(&self.theory, phi, &self.bound_for(phi)?)?),
            MmProvenance::FromDecision => mm_from_decision(&self.theory, phi),
        }
    }
}

/// Minimal models from the strong witness: for each cube of `wit(φ)` and
/// each arrangement `E` of its variables for which `cube ∧ δ_E` is
/// satisfiable, the vector `σ ↦ |V_σ/E|`; then the minimal vectors.
///
/// Satisfiability of `cube ∧ δ_E` is decided by searching for a model whose
/// domains are exactly the classes of `E`, which is complete because the
/// witness is strong. Arrangements that violate equality or congruence on
/// the cube's flat literals are never generated.
pub fn mm_from_decision(t: &TheoryHandle, phi: &Formula) -> Result<MinimalModelSet, MmError> {
    let caps = t.capabilities();
    if caps.decide.is_none() {
        return Err(MmError::MissingCapability { theory: t.name().to_string(), what: "a decision procedure" });
    }
    let wit = theory_witness(t, 8)?;
    let w = wit.apply(phi)?;
    let sorts = t.signature().sorts().to_vec();
    let mut found: Vec<CardinalityVector> = Vec::new();
    for cube in dnf(&w)? {
        let cube_formula = crate::logic::normal::cube_formula(&cube);
        let vars: Vec<Var> = cube_formula.vars().into_iter().collect();
        let mut candidates: Vec<(Vec<usize>, crate::logic::Arrangement)> = consistent_arrangements(&cube, &vars)
            .into_iter()
            .map(|e| {
                let counts = e.block_counts();
                (sorts.iter().map(|s| counts.get(s).copied().unwrap_or(0).max(1)).collect(), e)
            })
            .collect();
        candidates.sort_by_key(|(n, _)| n.iter().sum::<usize>());
        for (sizes, e) in candidates {
            let n = CardinalityVector::finite(t.signature(), &sizes.iter().map(|&k| k as u64).collect::<Vec<_>>())?;
            if found.iter().any(|m| m.le(&n)) {
                continue;
            }
            let psi = Formula::conj(vec![cube_formula.clone(), arrangement_formula(&e)]);
            if model_of_size(t, &psi, &sizes, &[])?.is_some() {
                found.push(n);
            }
        }
    }
    Ok(extremal_elements(&found, Extremum::Minimal).into_iter().collect())
}

/// Satisfiability through the strong witness: some cube has a satisfiable
/// arrangement.
pub fn decide_by_witness(t: &TheoryHandle, phi: &Formula) -> Result<bool, MmError> {
    Ok(!mm_from_decision(t, phi)?.is_empty())
}

/// `min { n(σ) | n ∈ mm }`.
pub fn mm_single_sort(mm: &MinimalModelSet, sort: &Sort) -> Result<u64, MmError> {
    if mm.is_empty() {
        return Err(MmError::EmptyMm("the empty set".into()));
    }
    mm.min_for_sort(sort).ok_or_else(|| MmError::UnknownSort(sort.clone()))
}

/// Decides `phi` with a minimal model function: with `σ` the least sort by
/// name and `k = MM′(φ)`, `φ` is satisfiable iff
/// `MM′(φ ∨ ≠(x₁,…,x_{k+1})) = k` for fresh `xᵢ` of sort `σ`.
///
/// The theory must be stably infinite and stably finite for `σ`. An empty
/// `mm(φ)` (the function may answer anything on unsatisfiable input) is read
/// as `k = 1`.
pub fn decide_from_mm(mm: &MmCapability, phi: &Formula) -> Result<bool, MmError> {
    phi.require_quantifier_free()?;
    let sigma = mm.theory().signature().sorts().iter().min_by_key(|s| s.name()).expect("signatures have sorts").clone();
    let first = mm.compute(phi)?;
    let k = if first.is_empty() { 1 } else { mm_single_sort(&first, &sigma)? };
    let mut fresh = FreshVars::avoiding([phi]);
    let xs: Vec<Var> = (0..=k).map(|_| fresh.var(&sigma)).collect();
    let widened = Formula::Or(vec![phi.clone(), distinct_formula(&xs)?]);
    let second = mm.compute(&widened)?;
    if second.is_empty() {
        return Err(MmError::EmptyMm(crate::textio::print_formula(&widened)));
    }
    Ok(mm_single_sort(&second, &sigma)? == k)
}

/// `cycle_n(x) ∧ f⁴(y) = y`.
pub fn s_membership_formula(n: u64) -> Result<Formula, MmError> {
    let sort = Sort::new(crate::logic::SIGMA1);
    let x = Var::new("x", sort.clone());
    let y = Var::new("y", sort);
    Ok(Formula::conj(vec![
        cycle_formula(n as usize, &x)?,
        Formula::eq(Term::iterate(FUNC_F, 4, Term::var(&y)), Term::var(&y)),
    ]))
}

/// Outcome of the `S`-membership reduction for one `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SMembership {
    pub n: u64,
    pub minimal_size: u64,
    pub in_s: bool,
}

/// `n ∈ S` iff the least model of `cycle_n(x) ∧ f⁴(y)=y` has `n + 4`
/// elements, for `mm` a minimal model function of a cycle theory.
pub fn decide_s_membership(mm: &MmCapability, n: u64) -> Result<SMembership, MmError> {
    if n < 7 || !is_prime(n) {
        return Err(MmError::NotPrime(n));
    }
    if mm.theory().cycle_base().is_none() {
        return Err(MmError::MissingCapability { theory: mm.theory().name().to_string(), what: "a cycle base" });
    }
    let phi = s_membership_formula(n)?;
    let set = mm.compute(&phi)?;
    let minimal_size = mm_single_sort(&set, &mm.theory().signature().sorts()[0])?;
    Ok(SMembership { n, minimal_size, in_s: minimal_size == n + 4 })
}

/// Whether `phi` is a conjunction of literals.
pub fn is_cube(phi: &Formula) -> bool {
    as_literal_conjunction(phi).is_some()
}
