//! The witness of a shiny theory, and an empirical check of the
//! strong-witness property for any witness.

use rayon::prelude::*;
use serde::Serialize;

use super::{false_keeping_vars, Strength, WitnessError, WitnessFn};
use crate::finite_model::{brute_mm, model_of_size, size_vectors, CardinalityVector, ModelClass};
use crate::logic::{
    arrangement_formula, distinct_formula, enumerate_arrangements, Formula, FreshVars, Var,
};
use crate::textio::print_formula;
use crate::theories::TheoryHandle;

/// Per-sort search bound for `phi`: the theory's hint, else `fallback`.
fn bound_for(t: &TheoryHandle, phi: &Formula, fallback: usize) -> Result<CardinalityVector, WitnessError> {
    let sizes = t.bound_hint(phi).unwrap_or_else(|| vec![fallback; t.signature().sorts().len()]);
    let sizes: Vec<u64> = sizes.into_iter().map(|k| k as u64).collect();
    Ok(CardinalityVector::finite(t.signature(), &sizes)?)
}

/// Witness from a minimal model function:
///
/// `wit(φ) = ⋁_E ⋁_{n ∈ mm(δ_E ∧ φ)} δ_E ∧ φ ∧ pad(n)`
///
/// over the arrangements `E` of `vars(φ)`, where `pad(n)` asserts
/// `n(σ)` distinct fresh variables of each sort `σ`. Fresh variables are
/// shared between disjuncts: the `k`-th padding variable of a sort has the
/// same name everywhere.
///
/// Minimal models are computed by bounded search at the theory's bound
/// hint, or at `bound` if it has none.
pub fn shiny_witness(t: &TheoryHandle, bound: usize) -> Result<WitnessFn, WitnessError> {
    let caps = t.capabilities();
    if caps.decide.is_none() || caps.mm.is_none() {
        return Err(WitnessError::MissingCapability { theory: t.name().to_string(), what: "decide and mm" });
    }
    let t = t.clone();
    Ok(WitnessFn::new("shiny", Strength::Strong, move |phi| {
        let vars: Vec<Var> = phi.vars().into_iter().collect();
        let sorts = t.signature().sorts().to_vec();
        let mut branches = Vec::new();
        for e in enumerate_arrangements(&vars) {
            let delta = arrangement_formula(&e);
            let psi = Formula::conj(vec![delta.clone(), phi.clone()]);
            let mm = brute_mm(&t, &psi, &bound_for(&t, &psi, bound)?)?;
            for n in mm.iter() {
                let sizes: Vec<usize> = n.iter().map(|(_, c)| c.finite().expect("bounded search") as usize).collect();
                branches.push((delta.clone(), sizes));
            }
        }
        if branches.is_empty() {
            return Ok(false_keeping_vars(phi));
        }
        let mut fresh = FreshVars::avoiding([phi]);
        let pads: Vec<Vec<Var>> = (0..sorts.len())
            .map(|i| {
                let most = branches.iter().map(|(_, n)| n[i]).max().unwrap_or(0);
                (0..most).map(|_| fresh.var(&sorts[i])).collect()
            })
            .collect();
        let disjuncts = branches
            .into_iter()
            .map(|(delta, sizes)| {
                let mut parts = Vec::new();
                if delta != Formula::True {
                    parts.push(delta);
                }
                parts.push(phi.clone());
                for (pad, &k) in pads.iter().zip(&sizes) {
                    parts.push(padding(&pad[..k])?);
                }
                Ok(Formula::And(parts))
            })
            .collect::<Result<Vec<_>, WitnessError>>()?;
        Ok(Formula::disj(disjuncts))
    }))
}

/// `≠(w₁,…,wₖ)`, or `w₁=w₁` when `k = 1`.
fn padding(ws: &[Var]) -> Result<Formula, WitnessError> {
    Ok(match ws {
        [w] => Formula::var_eq(w, w),
        _ => distinct_formula(ws)?,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Per-sort size bound of every model search.
    pub bound: usize,
    /// Extra variables of the first sort added to each arrangement.
    pub extra_vars: usize,
    /// Formulas whose witness has more variables (after the extras) are
    /// skipped.
    pub max_vars: usize,
    /// Also compare `φ ∧ δ` and `wit(φ) ∧ δ` size by size.
    pub check_equivalence: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { bound: 6, extra_vars: 0, max_vars: 7, check_equivalence: true }
    }
}

/// A concrete input on which a witness misbehaved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessFailure {
    pub formula: String,
    pub arrangement: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WitnessReport {
    pub theory: String,
    pub witness: String,
    pub bound: usize,
    pub formulas: usize,
    pub skipped: usize,
    pub pairs_checked: usize,
    pub satisfiable_pairs: usize,
    pub failures: Vec<WitnessFailure>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Default)]
struct Tally {
    skipped: usize,
    pairs: usize,
    sat: usize,
    failures: Vec<WitnessFailure>,
}

/// Checks the strong-witness conditions on each corpus formula, within the
/// bound:
///
/// * `vars(φ) ⊆ vars(wit(φ))`;
/// * for every arrangement `δ` of `vars(wit(φ))` (plus extras) such that
///   `wit(φ) ∧ δ` has a model, it has one whose domains are exactly the
///   variable classes;
/// * optionally, `φ ∧ δ` and `wit(φ) ∧ δ` have models of the same sizes for
///   every arrangement `δ` of `vars(φ)`.
pub fn verify_strong_witness(
    t: &TheoryHandle,
    wit: &WitnessFn,
    corpus: &[Formula],
    opts: VerifyOptions,
) -> Result<WitnessReport, WitnessError> {
    let tallies = corpus
        .par_iter()
        .map(|phi| verify_one(t, wit, phi, opts))
        .collect::<Result<Vec<Tally>, WitnessError>>()?;
    let mut report = WitnessReport {
        theory: t.name().to_string(),
        witness: wit.name().to_string(),
        bound: opts.bound,
        formulas: corpus.len(),
        ..WitnessReport::default()
    };
    for tally in tallies {
        report.skipped += tally.skipped;
        report.pairs_checked += tally.pairs;
        report.satisfiable_pairs += tally.sat;
        report.failures.extend(tally.failures);
    }
    Ok(report)
}

fn verify_one(t: &TheoryHandle, wit: &WitnessFn, phi: &Formula, opts: VerifyOptions) -> Result<Tally, WitnessError> {
    let mut tally = Tally::default();
    let w = wit.apply(phi)?;
    let fail = |tally: &mut Tally, arrangement: String, reason: &str| {
        tally.failures.push(WitnessFailure { formula: print_formula(phi), arrangement, reason: reason.to_string() })
    };
    let wvars = w.vars();
    if !phi.vars().is_subset(&wvars) {
        fail(&mut tally, String::new(), "wit(φ) lost a variable of φ");
        return Ok(tally);
    }
    let sorts = t.signature().sorts().to_vec();
    let mut vars: Vec<Var> = wvars.into_iter().collect();
    let mut fresh = FreshVars::avoiding([phi, &w]);
    vars.extend((0..opts.extra_vars).map(|_| fresh.var(&sorts[0])));
    if vars.len() > opts.max_vars {
        tally.skipped += 1;
        return Ok(tally);
    }
    let limits = vec![opts.bound; sorts.len()];
    for delta in enumerate_arrangements(&vars) {
        tally.pairs += 1;
        let psi = Formula::conj(vec![w.clone(), arrangement_formula(&delta)]);
        let counts = delta.block_counts();
        let exact: Vec<usize> = sorts.iter().map(|s| counts.get(s).copied().unwrap_or(0)).collect();
        if exact.iter().all(|&k| (1..=opts.bound).contains(&k)) && model_of_size(t, &psi, &exact, &[])?.is_some() {
            tally.sat += 1;
            continue;
        }
        if satisfiable_within(t, &psi, &limits)? {
            tally.sat += 1;
            fail(&mut tally, delta.to_string(), "satisfiable, but not with domains equal to the variable classes");
        }
    }
    if opts.check_equivalence {
        let base: Vec<Var> = phi.vars().into_iter().collect();
        for delta in enumerate_arrangements(&base) {
            let d = arrangement_formula(&delta);
            let lhs = Formula::conj(vec![phi.clone(), d.clone()]);
            let rhs = Formula::conj(vec![w.clone(), d]);
            for sizes in size_vectors(&limits) {
                let a = model_of_size(t, &lhs, &sizes, &[])?.is_some();
                let b = model_of_size(t, &rhs, &sizes, &[])?.is_some();
                if a != b {
                    let side = if a { "φ ∧ δ has a model" } else { "wit(φ) ∧ δ has a model" };
                    fail(&mut tally, delta.to_string(), &format!("{side} of sizes {sizes:?} and the other does not"));
                    break;
                }
            }
        }
    }
    Ok(tally)
}

fn satisfiable_within(t: &TheoryHandle, phi: &Formula, limits: &[usize]) -> Result<bool, WitnessError> {
    for sizes in size_vectors(limits) {
        if t.admits_sizes(&sizes) && model_of_size(t, phi, &sizes, &[])?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

