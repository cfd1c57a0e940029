//! Convexity: whenever `φ → e₁ ∨ … ∨ eₖ` is valid for equalities `eᵢ`,
//! some single `φ → eᵢ` is valid.
//!
//! Validity is approximated by the absence of models up to a size bound.
//! A refutation additionally carries one explicit counter-model per
//! disjunct, so only its validity half is bounded.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{Counterexample, Property, PropertyError, PropertyReport, Verdict};
use crate::corpus::{CorpusParams, FormulaGen};
use crate::finite_model::{sat_bounded, CardinalityVector};
use crate::logic::{Atom, FiniteInterpretation, Formula, Term, Var, FUNC_F};
use crate::textio::{interpretation_from_json, interpretation_to_json, parse_formula, print_formula};
use crate::theories::TheoryHandle;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvexityBounds {
    /// Variables in a generated premise.
    pub vars: usize,
    /// Largest disjunction tried.
    pub disjuncts: usize,
    /// Per-sort size bound of every model search.
    pub model_bound: usize,
    /// Literals in a generated premise.
    pub literals: usize,
    /// Generated premises, on top of the `fᵃ(x) = x` family.
    pub premises: usize,
    pub seed: u64,
}

impl Default for ConvexityBounds {
    fn default() -> Self {
        ConvexityBounds { vars: 4, disjuncts: 2, model_bound: 8, literals: 5, premises: 40, seed: 0 }
    }
}

fn subterms(t: &Term, out: &mut BTreeSet<Term>) {
    out.insert(t.clone());
    if let Term::App { args, .. } = t {
        args.iter().for_each(|a| subterms(a, out));
    }
}

/// Equalities between distinct same-sort subterms of `phi`, shallowest
/// first.
fn candidate_equalities(phi: &Formula) -> Vec<Formula> {
    let mut terms = BTreeSet::new();
    phi.visit_atoms(&mut |a: &Atom| a.terms().into_iter().for_each(|t| subterms(t, &mut terms)));
    for v in phi.vars() {
        terms.insert(Term::var(&v));
    }
    let terms: Vec<Term> = terms.into_iter().collect();
    let mut eqs: Vec<(usize, usize, Formula)> = Vec::new();
    for (i, a) in terms.iter().enumerate() {
        for b in &terms[i + 1..] {
            if a.sort() == b.sort() {
                let (deep, shallow) = if a.depth() >= b.depth() { (a, b) } else { (b, a) };
                eqs.push((deep.depth(), shallow.depth(), Formula::eq(deep.clone(), shallow.clone())));
            }
        }
    }
    eqs.sort_by_cached_key(|x| (x.0, x.1, print_formula(&x.2)));
    eqs.into_iter().map(|(_, _, e)| e).collect()
}

/// `fᵃ(x) = x` for `a` in `1..=bound`, then seeded random conjunctions.
fn premises(t: &TheoryHandle, b: &ConvexityBounds) -> Vec<Formula> {
    let sig = t.signature();
    let mut out = Vec::new();
    if sig.function(FUNC_F).is_some() {
        let x = Var::new("x", sig.sorts()[0].clone());
        out.extend((1..=b.model_bound).map(|a| Formula::eq(Term::iterate(FUNC_F, a, Term::var(&x)), Term::var(&x))));
    }
    let per_sort = (b.vars / sig.sorts().len()).max(1);
    let mut gen = FormulaGen::new(sig, b.seed, CorpusParams { vars: per_sort, literals: b.literals, depth: 2 });
    out.extend((0..b.premises).map(|_| gen.conjunction()));
    out
}

fn model_within(t: &TheoryHandle, phi: &Formula, bound: &CardinalityVector) -> Result<Option<FiniteInterpretation>, PropertyError> {
    Ok(sat_bounded(t, phi, bound)?.model().cloned())
}

fn refute_with(t: &TheoryHandle, phi: &Formula, b: &ConvexityBounds) -> Result<Option<Counterexample>, PropertyError> {
    let bound = CardinalityVector::uniform(t.signature(), b.model_bound as u64)?;
    if model_within(t, phi, &bound)?.is_none() {
        return Ok(None);
    }
    // Equalities with a counter-model; valid ones cannot be in a refutation.
    let mut refutable: Vec<(Formula, FiniteInterpretation)> = Vec::new();
    for e in candidate_equalities(phi) {
        let neg = Formula::conj(vec![phi.clone(), Formula::not(e.clone())]);
        if let Some(m) = model_within(t, &neg, &bound)? {
            refutable.push((e, m));
        }
    }
    for k in 2..=b.disjuncts {
        for pick in combinations(refutable.len(), k) {
            let mut parts = vec![phi.clone()];
            parts.extend(pick.iter().map(|&i| Formula::not(refutable[i].0.clone())));
            if model_within(t, &Formula::conj(parts), &bound)?.is_none() {
                return Ok(Some(Counterexample {
                    formula: print_formula(phi),
                    disjuncts: pick.iter().map(|&i| print_formula(&refutable[i].0)).collect(),
                    models: pick.iter().map(|&i| interpretation_to_json(&refutable[i].1)).collect(),
                    note: format!("disjunction valid in all models up to size {}", b.model_bound),
                }));
            }
        }
    }
    Ok(None)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Searches for a non-convexity witness among the premises; the first one
/// in premise order wins, so the result is deterministic.
pub fn check_convexity(t: &TheoryHandle, b: &ConvexityBounds) -> Result<PropertyReport, PropertyError> {
    let pool = premises(t, b);
    let found = pool
        .par_iter()
        .map(|phi| refute_with(t, phi, b))
        .collect::<Result<Vec<_>, PropertyError>>()?
        .into_iter()
        .flatten()
        .next();
    let (verdict, evidence) = match found {
        Some(counterexample) => {
            let line = format!("{} → {}", counterexample.formula, counterexample.disjuncts.join(" ∨ "));
            (Verdict::Refuted { counterexample }, vec![line])
        }
        None => (
            Verdict::HoldsAtBound,
            vec![format!(
                "no refutation among {} premises, up to {} disjuncts, models up to size {}",
                pool.len(),
                b.disjuncts,
                b.model_bound
            )],
        ),
    };
    Ok(PropertyReport {
        theory: t.name().to_string(),
        property: Property::Convexity,
        verdict,
        evidence,
        sizes: Vec::new(),
        bound: b.model_bound,
    })
}

/// Re-checks a refutation: each model is a member satisfying the premise
/// and falsifying its disjunct, and the disjunction has no counter-model up
/// to `model_bound`.
pub fn replay_convexity_refutation(
    t: &TheoryHandle,
    cex: &Counterexample,
    model_bound: usize,
) -> Result<bool, PropertyError> {
    let sig = t.signature();
    let parse = |s: &str| parse_formula(s, sig).map_err(|e| PropertyError::Invalid(e.to_string()));
    let phi = parse(&cex.formula)?;
    let disjuncts = cex.disjuncts.iter().map(|d| parse(d)).collect::<Result<Vec<_>, _>>()?;
    if disjuncts.len() != cex.models.len() || disjuncts.len() < 2 {
        return Ok(false);
    }
    for (d, json) in disjuncts.iter().zip(&cex.models) {
        let m = interpretation_from_json(&json.to_string()).map_err(|e| PropertyError::Invalid(e.to_string()))?;
        if !t.membership(&m) || !m.evaluate(&phi)? || m.evaluate(d)? {
            return Ok(false);
        }
    }
    let mut parts = vec![phi];
    parts.extend(disjuncts.into_iter().map(Formula::not));
    let bound = CardinalityVector::uniform(sig, model_bound as u64)?;
    Ok(model_within(t, &Formula::conj(parts), &bound)?.is_none())
}
