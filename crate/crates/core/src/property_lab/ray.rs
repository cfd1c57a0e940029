//! Stable infiniteness of the cycle theories: a satisfying model grows by a
//! path of fresh elements, which creates no cycle; with a loop present in
//! `T3`/`T4` no growth is possible at all.
//!
//! The infinite ray is truncated to `c₁ → … → c_k`, and `c_k` feeds into the
//! existing element `0`. Closing the path on itself could create a
//! forbidden cycle length, feeding it into the old graph cannot.

use super::{Counterexample, Property, PropertyError, PropertyReport, Verdict};
use crate::corpus::{CorpusParams, FormulaGen};
use crate::finite_model::{model_of_size, sat_bounded, CardinalityVector};
use crate::logic::{FiniteInterpretation, Formula, Sort, Term, Var, FUNC_F};
use crate::textio::{interpretation_to_json, print_formula};
use crate::theories::{FunctionalGraph, TheoryHandle};

/// The sort carrying `f`.
fn graph_sort(t: &TheoryHandle) -> Sort {
    t.signature().sorts()[0].clone()
}

/// Appends `k` fresh elements `c₁ → … → c_k → 0` to the `f`-graph. The
/// result is re-checked for membership and for `phi`.
pub fn extend_with_ray(
    t: &TheoryHandle,
    interp: &FiniteInterpretation,
    k: usize,
    phi: &Formula,
) -> Result<FiniteInterpretation, PropertyError> {
    let (index, _) = t.cycle_base().ok_or_else(|| PropertyError::Unsupported(t.name().to_string()))?;
    if !t.membership(interp) {
        return Err(PropertyError::NotAMember(t.name().to_string()));
    }
    if !interp.evaluate(phi)? {
        return Err(PropertyError::NotAModel);
    }
    if k == 0 {
        return Ok(interp.clone());
    }
    let graph = FunctionalGraph::of_interpretation(interp)?;
    if index.loops_force_singleton() && (0..graph.len()).any(|v| graph.successor(v) == v) {
        return Err(PropertyError::Refused {
            reason: format!("in {index} a loop forces a one-element model"),
            evidence: "(= (f x) x)".into(),
        });
    }
    let n = graph.len();
    let mut succ = graph.successors().to_vec();
    succ.extend((n + 1..n + k).chain([0]));
    let mut sizes = interp.sizes();
    sizes[0] = n + k;
    let mut out = FiniteInterpretation::new(interp.signature().clone(), &sizes)?;
    out.set_function(FUNC_F, succ)?;
    for (v, &e) in interp.assignment() {
        out.assign(v, e)?;
    }
    if !t.membership(&out) || !out.evaluate(phi)? {
        return Err(PropertyError::Invalid(format!("ray of length {k} broke membership or the formula")));
    }
    Ok(out)
}

/// Runs [`extend_with_ray`] for `k = 1..=max_k` on the least model of each
/// satisfiable formula of a seeded corpus.
pub fn check_stable_infiniteness(
    t: &TheoryHandle,
    formulas: usize,
    max_k: usize,
    model_bound: usize,
    seed: u64,
) -> Result<PropertyReport, PropertyError> {
    if t.cycle_base().is_none() {
        return Err(PropertyError::Unsupported(t.name().to_string()));
    }
    let x = Var::new("x", graph_sort(t));
    // A loop first: it is what separates T1/T2 from T3/T4.
    let mut corpus = vec![Formula::eq(Term::iterate(FUNC_F, 1, Term::var(&x)), Term::var(&x))];
    let mut gen = FormulaGen::new(t.signature(), seed, CorpusParams { vars: 2, literals: 4, depth: 2 });
    corpus.extend((0..formulas).map(|_| gen.formula()));
    let bound = CardinalityVector::uniform(t.signature(), model_bound as u64)?;
    let mut sizes = Vec::new();
    let mut satisfiable = 0;
    for phi in &corpus {
        let Some(m) = sat_bounded(t, phi, &bound)?.model().cloned() else { continue };
        satisfiable += 1;
        for k in 1..=max_k {
            match extend_with_ray(t, &m, k, phi) {
                Ok(big) => sizes.push(big.total_size()),
                Err(PropertyError::Refused { .. }) => return refute_stable_infiniteness(t, model_bound),
                Err(e) => return Err(e),
            }
        }
    }
    sizes.sort_unstable();
    sizes.dedup();
    Ok(PropertyReport {
        theory: t.name().to_string(),
        property: Property::StableInfiniteness,
        verdict: Verdict::ConstructionVerified,
        evidence: vec![format!(
            "rays of length 1..={max_k} added to the least model of {satisfiable} satisfiable formulas; \
             each result re-checked"
        )],
        sizes,
        bound: model_bound,
    })
}

/// `f(x) = x` has a one-element model but none of size `2..=model_bound`.
pub fn refute_stable_infiniteness(t: &TheoryHandle, model_bound: usize) -> Result<PropertyReport, PropertyError> {
    let x = Var::new("x", graph_sort(t));
    let phi = Formula::eq(Term::iterate(FUNC_F, 1, Term::var(&x)), Term::var(&x));
    let mut base = vec![1; t.signature().sorts().len()];
    let small = model_of_size(t, &phi, &base, &[])?.ok_or_else(|| PropertyError::Invalid("no one-element loop".into()))?;
    for n in 2..=model_bound {
        base[0] = n;
        if model_of_size(t, &phi, &base, &[])?.is_some() {
            return Err(PropertyError::Invalid(format!("`f(x) = x` has a model of size {n}")));
        }
    }
    Ok(PropertyReport {
        theory: t.name().to_string(),
        property: Property::StableInfiniteness,
        verdict: Verdict::Refuted {
            counterexample: Counterexample {
                formula: print_formula(&phi),
                disjuncts: Vec::new(),
                models: vec![interpretation_to_json(&small)],
                note: format!("satisfiable only with one element; no model of size 2..={model_bound}"),
            },
        },
        evidence: vec!["a loop forces a one-element model".into()],
        sizes: vec![1],
        bound: model_bound,
    })
}
