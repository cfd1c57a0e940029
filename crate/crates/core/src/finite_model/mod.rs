//! Brute-force ground truth over finite structures: enumeration, bounded
//! satisfiability, minimal models and the empty-signature decision.

mod enumerate;
mod search;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

pub use enumerate::{canonical_key, enumerate_structures, StructureStream};
pub use search::{ModelSearch, PartialStructure, UNDEF};

use crate::logic::{
    enumerate_arrangements, FiniteInterpretation, Formula, LogicError, Signature, Sort, Var,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("bound contains aleph0; enumeration needs finite bounds")]
    InfiniteBound,
    #[error("cardinality vector does not match the signature's sorts")]
    SortsMismatch,
    #[error("signature has symbol families; instantiate a finite cut first")]
    LazyFamilies,
    #[error("formula uses function or predicate symbols; an empty signature is required")]
    NonEmptySignature,
    #[error("sort `{0}` appears twice in a cardinality vector")]
    DuplicateSort(Sort),
}

/// A domain cardinality: a positive integer or countably infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Card {
    Finite(u64),
    Aleph0,
}

impl Card {
    pub fn finite(self) -> Option<u64> {
        match self {
            Card::Finite(n) => Some(n),
            Card::Aleph0 => None,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Aleph0 => f.write_str("aleph0"),
        }
    }
}

/// One cardinality per sort, in signature order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CardinalityVector(Vec<(Sort, Card)>);

impl CardinalityVector {
    pub fn new(entries: Vec<(Sort, Card)>) -> Result<Self, ModelError> {
        for (i, (s, c)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(t, _)| t == s) {
                return Err(ModelError::DuplicateSort(s.clone()));
            }
            if *c == Card::Finite(0) {
                return Err(LogicError::ZeroCardinality.into());
            }
        }
        Ok(CardinalityVector(entries))
    }

    /// Finite sizes, one per sort of `sig`.
    pub fn finite(sig: &Signature, sizes: &[u64]) -> Result<Self, ModelError> {
        if sizes.len() != sig.sorts().len() {
            return Err(ModelError::SortsMismatch);
        }
        Self::new(sig.sorts().iter().cloned().zip(sizes.iter().map(|&n| Card::Finite(n))).collect())
    }

    /// The same size for every sort of `sig`.
    pub fn uniform(sig: &Signature, n: u64) -> Result<Self, ModelError> {
        Self::finite(sig, &vec![n; sig.sorts().len()])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sort, &Card)> {
        self.0.iter().map(|(s, c)| (s, c))
    }

    pub fn sorts(&self) -> impl Iterator<Item = &Sort> {
        self.0.iter().map(|(s, _)| s)
    }

    pub fn get(&self, sort: &Sort) -> Option<Card> {
        self.0.iter().find(|(s, _)| s == sort).map(|&(_, c)| c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise `≤`; vectors over different sorts are incomparable.
    pub fn le(&self, other: &CardinalityVector) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|((s, a), (t, b))| s == t && a <= b)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|(_, c)| matches!(c, Card::Finite(_)))
    }

    /// Sizes as `usize`, or `InfiniteBound` if any entry is aleph0.
    pub fn finite_sizes(&self) -> Result<Vec<usize>, ModelError> {
        self.0.iter().map(|(_, c)| c.finite().map(|n| n as usize).ok_or(ModelError::InfiniteBound)).collect()
    }

    fn matches(&self, sig: &Signature) -> bool {
        self.0.len() == sig.sorts().len() && self.0.iter().zip(sig.sorts()).all(|((s, _), t)| s == t)
    }
}

impl fmt::Display for CardinalityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(_, c)| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Which end of the componentwise order to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Minimal,
    Maximal,
}

/// Members of `tuples` not strictly below (`Maximal`) or above (`Minimal`)
/// another member.
pub fn extremal_elements<'a>(
    tuples: impl IntoIterator<Item = &'a CardinalityVector>,
    mode: Extremum,
) -> BTreeSet<CardinalityVector> {
    let all: BTreeSet<&CardinalityVector> = tuples.into_iter().collect();
    all.iter()
        .copied()
        .filter(|&v| {
            !all.iter().any(|&w| {
                w != v
                    && match mode {
                        Extremum::Minimal => w.le(v),
                        Extremum::Maximal => v.le(w),
                    }
            })
        })
        .cloned()
        .collect()
}

/// An antichain of finite cardinality vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MinimalModelSet(BTreeSet<CardinalityVector>);

impl MinimalModelSet {
    /// Keeps the minimal elements of `vectors`.
    pub fn from_vectors(vectors: impl IntoIterator<Item = CardinalityVector>) -> Self {
        let all: Vec<CardinalityVector> = vectors.into_iter().collect();
        MinimalModelSet(extremal_elements(&all, Extremum::Minimal))
    }

    pub fn iter(&self) -> impl Iterator<Item = &CardinalityVector> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &CardinalityVector) -> bool {
        self.0.contains(v)
    }

    /// Smallest entry for `sort` over all members.
    pub fn min_for_sort(&self, sort: &Sort) -> Option<u64> {
        self.0.iter().filter_map(|v| v.get(sort).and_then(Card::finite)).min()
    }

    pub fn is_antichain(&self) -> bool {
        self.0.iter().all(|a| self.0.iter().all(|b| a == b || !a.le(b)))
    }
}

impl FromIterator<CardinalityVector> for MinimalModelSet {
    fn from_iter<I: IntoIterator<Item = CardinalityVector>>(iter: I) -> Self {
        MinimalModelSet::from_vectors(iter)
    }
}

/// Outcome of a bounded satisfiability query.
// One verdict per query; boxing the model would only add an indirection.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatVerdict {
    Sat(FiniteInterpretation),
    UnsatUpTo(CardinalityVector),
    /// Only produced by complete procedures.
    Unsat,
}

impl SatVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatVerdict::Sat(_))
    }

    pub fn model(&self) -> Option<&FiniteInterpretation> {
        match self {
            SatVerdict::Sat(m) => Some(m),
            _ => None,
        }
    }
}

/// A class of finite structures with decidable membership.
///
/// `excludes_partial` and `admits_sizes` are pruning hooks: they may only
/// return `true` (resp. `false`) when no completion is a member.
pub trait ModelClass: Sync {
    fn signature(&self) -> &Signature;

    fn contains(&self, model: &FiniteInterpretation) -> bool;

    fn excludes_partial(&self, _partial: &PartialStructure<'_>) -> bool {
        false
    }

    fn admits_sizes(&self, _sizes: &[usize]) -> bool {
        true
    }
}

/// Every structure over a signature.
#[derive(Clone, Debug)]
pub struct AllStructures(pub Signature);

impl ModelClass for AllStructures {
    fn signature(&self) -> &Signature {
        &self.0
    }

    fn contains(&self, _model: &FiniteInterpretation) -> bool {
        true
    }
}

/// Size vectors below `bound` (each entry ≥ 1), by total size then
/// lexicographically.
pub fn size_vectors(bound: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        out = out.into_iter().flat_map(|prefix| (1..=b).map(move |k| [prefix.clone(), vec![k]].concat())).collect();
    }
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

fn checked_bound<C: ModelClass + ?Sized>(class: &C, bound: &CardinalityVector) -> Result<Vec<usize>, ModelError> {
    if !bound.matches(class.signature()) {
        return Err(ModelError::SortsMismatch);
    }
    bound.finite_sizes()
}

/// A model of `phi` in `class` with all sizes within `bound`, smallest total
/// size first.
pub fn sat_bounded<C: ModelClass + ?Sized>(
    class: &C,
    phi: &Formula,
    bound: &CardinalityVector,
) -> Result<SatVerdict, ModelError> {
    phi.require_quantifier_free()?;
    let limits = checked_bound(class, bound)?;
    for sizes in size_vectors(&limits) {
        if let Some(m) = ModelSearch::new(class, phi, &sizes, &[])?.first() {
            return Ok(SatVerdict::Sat(m));
        }
    }
    Ok(SatVerdict::UnsatUpTo(bound.clone()))
}

/// A model of `phi` of exactly these sizes, also assigning `extra_vars`.
pub fn model_of_size<C: ModelClass + ?Sized>(
    class: &C,
    phi: &Formula,
    sizes: &[usize],
    extra_vars: &[Var],
) -> Result<Option<FiniteInterpretation>, ModelError> {
    phi.require_quantifier_free()?;
    Ok(ModelSearch::new(class, phi, sizes, extra_vars)?.first())
}

/// Minimal realized size vectors of models of `phi` within `bound`.
pub fn brute_mm<C: ModelClass + ?Sized>(
    class: &C,
    phi: &Formula,
    bound: &CardinalityVector,
) -> Result<MinimalModelSet, ModelError> {
    phi.require_quantifier_free()?;
    let limits = checked_bound(class, bound)?;
    let sig = class.signature();
    let mut found: Vec<Vec<usize>> = Vec::new();
    for sizes in size_vectors(&limits) {
        if found.iter().any(|m| m.iter().zip(&sizes).all(|(a, b)| a <= b)) {
            continue;
        }
        if ModelSearch::new(class, phi, &sizes, &[])?.first().is_some() {
            found.push(sizes);
        }
    }
    found
        .into_iter()
        .map(|s| CardinalityVector::finite(sig, &s.iter().map(|&k| k as u64).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>, _>>()
        .map(MinimalModelSet::from_vectors)
}

/// All models of `phi` in `class` of exactly these sizes, up to the
/// symmetry reduction of the search.
pub fn for_each_model<C: ModelClass + ?Sized>(
    class: &C,
    phi: &Formula,
    sizes: &[usize],
    visit: impl FnMut(FiniteInterpretation) -> ControlFlow<()>,
) -> Result<(), ModelError> {
    ModelSearch::new(class, phi, sizes, &[])?.for_each(visit);
    Ok(())
}

/// Decides `phi` over the empty signature in the theory whose models are
/// exactly those with sizes dominated by some member of `spectrum_max`.
///
/// Sorts are taken from the spectrum vectors, which must all agree.
pub fn empty_sig_decide(spectrum_max: &[CardinalityVector], phi: &Formula) -> Result<bool, ModelError> {
    phi.require_quantifier_free()?;
    if !phi.function_symbols().is_empty() || !phi.predicate_symbols().is_empty() {
        return Err(ModelError::NonEmptySignature);
    }
    let Some(first) = spectrum_max.first() else {
        return Ok(false);
    };
    let sorts: Vec<Sort> = first.sorts().cloned().collect();
    if spectrum_max.iter().any(|v| !v.sorts().eq(sorts.iter())) {
        return Err(ModelError::SortsMismatch);
    }
    let mut sig = Signature::new();
    for s in &sorts {
        sig.add_sort(s.name())?;
    }
    let vars: Vec<Var> = phi.vars().into_iter().collect();
    for v in &vars {
        if !sorts.contains(v.sort()) {
            return Err(LogicError::UnknownSort(v.sort().name().to_string()).into());
        }
    }
    for e in enumerate_arrangements(&vars) {
        let counts = e.block_counts();
        let sizes: Vec<usize> = sorts.iter().map(|s| counts.get(s).copied().unwrap_or(0).max(1)).collect();
        let mut quotient = FiniteInterpretation::new(sig.clone(), &sizes)?;
        for v in &vars {
            let block = e.block_of(v).expect("arranged variable");
            let within_sort = e.blocks()[..block].iter().filter(|b| b[0].sort() == v.sort()).count();
            quotient.assign(v, within_sort)?;
        }
        if !quotient.evaluate(phi)? {
            continue;
        }
        let fits = spectrum_max.iter().any(|m| {
            sorts.iter().all(|s| {
                let need = counts.get(s).copied().unwrap_or(0) as u64;
                m.get(s).is_some_and(|c| Card::Finite(need) <= c)
            })
        });
        if fits {
            return Ok(true);
        }
    }
    Ok(false)
}
