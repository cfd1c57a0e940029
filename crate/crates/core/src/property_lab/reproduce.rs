//! The property grid of the cycle theories and the placement of the
//! catalog theories among strongly polite, decidable and shiny, each cell
//! backed by a check from this module.

use rayon::prelude::*;
use serde::Serialize;

use super::{
    check_convexity, check_finite_smoothness, check_stable_infiniteness, ConvexityBounds, PropertyError,
    PropertyReport, SmoothInput,
};
use crate::corpus::{formula_corpus, CorpusParams};
use crate::finite_model::{model_of_size, sat_bounded, CardinalityVector};
use crate::logic::{Formula, Var};
use crate::minimal_model::{decide_s_membership, MmCapability, SMembership};
use crate::theories::{make_theory, HOracle, Provenance, SOracle, TheoryConfig, TheoryHandle, TheoryKind};
use crate::witness::{theory_witness, verify_strong_witness, VerifyOptions};

#[derive(Clone, Debug)]
pub struct ReproduceBounds {
    pub convexity: ConvexityBounds,
    /// Corpus size for the ray construction.
    pub si_formulas: usize,
    /// Longest ray added.
    pub si_max_k: usize,
    /// Corpus size for strong-witness verification.
    pub witness_formulas: usize,
    /// Primes fed to the `S`-membership reduction.
    pub reduction_primes: Vec<u64>,
    pub seed: u64,
}

impl Default for ReproduceBounds {
    fn default() -> Self {
        ReproduceBounds {
            convexity: ConvexityBounds::default(),
            si_formulas: 20,
            si_max_k: 3,
            witness_formulas: 30,
            reduction_primes: vec![7, 11],
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyRow {
    pub theory: String,
    pub one_sorted: bool,
    pub stably_infinite: bool,
    pub convex: bool,
    /// The cycle witness passed verification on a seeded corpus.
    pub strong_witness_verified: bool,
    /// Minimal sizes from the `S`-reduction: a minimal model function
    /// would decide `S`.
    pub s_reduction: Vec<SMembership>,
    pub stable_infiniteness: PropertyReport,
    pub convexity: PropertyReport,
}

fn display_name(name: &str) -> String {
    match name {
        "teq" => "T_EQ".into(),
        "teq1" => "T_=1".into(),
        "th" => "T<h>".into(),
        _ => match name.strip_prefix("adds-") {
            Some(inner) => format!("adds({})", inner.to_uppercase()),
            None => name.to_uppercase(),
        },
    }
}

fn witness_verified(t: &TheoryHandle, b: &ReproduceBounds) -> Result<bool, PropertyError> {
    let wit = theory_witness(t, 6)?;
    let corpus = formula_corpus(t.signature(), b.seed, b.witness_formulas, CorpusParams { vars: 2, literals: 3, depth: 1 });
    let opts = VerifyOptions { bound: 5, extra_vars: 0, max_vars: 6, check_equivalence: false };
    Ok(verify_strong_witness(t, &wit, &corpus, opts)?.passed())
}

fn table1_row(name: &str, b: &ReproduceBounds) -> Result<PropertyRow, PropertyError> {
    let t = make_theory(name, &TheoryConfig { s: Some(SOracle::new([7])?), h: None })?;
    let stable_infiniteness =
        check_stable_infiniteness(&t, b.si_formulas, b.si_max_k, b.convexity.model_bound, b.seed)?;
    let convexity = check_convexity(&t, &b.convexity)?;
    let mm = MmCapability::brute(&t, 8);
    let s_reduction =
        b.reduction_primes.iter().map(|&n| decide_s_membership(&mm, n)).collect::<Result<Vec<_>, _>>()?;
    Ok(PropertyRow {
        theory: display_name(name),
        one_sorted: t.signature().sorts().len() == 1,
        stably_infinite: !stable_infiniteness.is_refuted(),
        convex: !convexity.is_refuted(),
        strong_witness_verified: witness_verified(&t, b)?,
        s_reduction,
        stable_infiniteness,
        convexity,
    })
}

/// Rows for `T1`–`T4` and `adds(T1)`–`adds(T4)` with `S = {7}`.
pub fn reproduce_table1(b: &ReproduceBounds) -> Result<Vec<PropertyRow>, PropertyError> {
    const NAMES: [&str; 8] = ["t1", "t2", "t3", "t4", "adds-t1", "adds-t2", "adds-t3", "adds-t4"];
    NAMES.par_iter().map(|n| table1_row(n, b)).collect()
}

fn mark(b: bool) -> &'static str {
    if b {
        "✓"
    } else {
        "✗"
    }
}

/// The grid alone: theory, one-sorted, stably infinite, convex.
pub fn table1_markdown(rows: &[PropertyRow]) -> String {
    let mut out = String::from("| Theory | One Sorted | Stably Infinite | Convex |\n|---|---|---|---|\n");
    for r in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            r.theory,
            mark(r.one_sorted),
            mark(r.stably_infinite),
            mark(r.convex)
        ));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VennRegion {
    AllThree,
    StronglyPoliteOnly,
    DecidableOnly,
    ShinyOnly,
    StronglyPoliteAndDecidable,
    StronglyPoliteAndShiny,
    DecidableAndShiny,
    Outside,
}

impl VennRegion {
    pub fn of(strongly_polite: bool, decidable: bool, shiny: bool) -> Self {
        match (strongly_polite, decidable, shiny) {
            (true, true, true) => VennRegion::AllThree,
            (true, false, false) => VennRegion::StronglyPoliteOnly,
            (false, true, false) => VennRegion::DecidableOnly,
            (false, false, true) => VennRegion::ShinyOnly,
            (true, true, false) => VennRegion::StronglyPoliteAndDecidable,
            (true, false, true) => VennRegion::StronglyPoliteAndShiny,
            (false, true, true) => VennRegion::DecidableAndShiny,
            (false, false, false) => VennRegion::Outside,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VennPlacement {
    pub theory: String,
    pub strongly_polite: bool,
    pub decidable: bool,
    pub shiny: bool,
    pub region: VennRegion,
    pub evidence: Vec<String>,
}

/// Growth evidence: repeated one-element growth for `teq`, rays for the
/// cycle theories, and for the one-element theories the absence of a
/// two-element model of `x = x`.
fn smoothness_evidence(t: &TheoryHandle, b: &ReproduceBounds) -> Result<(bool, String), PropertyError> {
    if t.cycle_base().is_some() {
        let r = check_stable_infiniteness(t, b.si_formulas, b.si_max_k, b.convexity.model_bound, b.seed)?;
        return Ok((!r.is_refuted(), format!("smooth: {}", r.evidence.join("; "))));
    }
    let x = Var::new("x", t.signature().sorts()[0].clone());
    let phi = Formula::var_eq(&x, &x);
    let Some(start) = model_of_size(t, &phi, &[1], &[])? else {
        return Err(PropertyError::Invalid(format!("`{}` has no one-element model", t.name())));
    };
    match check_finite_smoothness(t, &SmoothInput::Plain(start), &phi, 6) {
        Ok(r) => Ok((true, format!("smooth: grown through sizes {:?}", r.sizes))),
        Err(PropertyError::Unsupported(_)) => {
            let two = model_of_size(t, &phi, &[2], &[])?.is_some();
            Ok((two, format!("not smooth: `x = x` has a one-element model and {} two-element model", if two { "a" } else { "no" })))
        }
        Err(e) => Err(e),
    }
}

fn decidability_evidence(t: &TheoryHandle) -> Result<(bool, String), PropertyError> {
    let decide = t.capabilities().decide;
    if decide == Some(Provenance::Computable) {
        return Ok((true, "decidable: bounded search at the theory's size hint is complete".into()));
    }
    if let Some(h) = h_of(t) {
        // Deciding `P_n` reads off `h(n)`.
        let sig = t.signature();
        let mut read = Vec::new();
        for n in 1..=4u64 {
            let name = format!("P_{n}");
            let phi = Formula::pred(&name, Vec::new());
            let inst = sig.instantiate_for(&phi)?;
            let bound = CardinalityVector::uniform(&inst, 1)?;
            let holds = sat_bounded(t, &phi, &bound)?.is_sat();
            if holds != h.value(n) {
                return Err(PropertyError::Invalid(format!("P_{n} disagrees with h")));
            }
            read.push(format!("h({n})={}", holds as u8));
        }
        return Ok((false, format!("not decidable: satisfiability of P_n computes h ({})", read.join(", "))));
    }
    let mm = MmCapability::brute(t, 8);
    let r = decide_s_membership(&mm, 7)?;
    Ok((
        false,
        format!("not decidable: a decision procedure computes S (least model of the 7-formula has {} elements)", r.minimal_size),
    ))
}

fn h_of(t: &TheoryHandle) -> Option<HOracle> {
    match t.kind() {
        TheoryKind::H(h) => Some(h.clone()),
        _ => None,
    }
}

fn venn_placement(name: &str, b: &ReproduceBounds) -> Result<VennPlacement, PropertyError> {
    let config = TheoryConfig { s: Some(SOracle::new([7])?), h: Some(HOracle::Parity) };
    let t = make_theory(name, &config)?;
    let mut evidence = Vec::new();
    let (smooth, line) = smoothness_evidence(&t, b)?;
    evidence.push(line);
    let witnessed = t.capabilities().strong_witness.is_some() && witness_verified(&t, b)?;
    evidence.push(if witnessed {
        "strong witness verified on a seeded corpus".to_string()
    } else {
        "no strong witness".to_string()
    });
    let (decidable, line) = decidability_evidence(&t)?;
    evidence.push(line);
    let computable_mm = t.capabilities().mm == Some(Provenance::Computable);
    evidence.push(if computable_mm {
        "minimal models computable by bounded search".to_string()
    } else {
        "minimal models depend on an oracle".to_string()
    });
    let strongly_polite = smooth && witnessed;
    let shiny = smooth && computable_mm;
    Ok(VennPlacement {
        theory: display_name(name),
        strongly_polite,
        decidable,
        shiny,
        region: VennRegion::of(strongly_polite, decidable, shiny),
        evidence,
    })
}

/// Placements of `T_EQ`, `T_=1`, `T<h>` (with `h` = parity), `T1`, `T2`.
pub fn reproduce_venn(b: &ReproduceBounds) -> Result<Vec<VennPlacement>, PropertyError> {
    const NAMES: [&str; 5] = ["teq", "teq1", "th", "t1", "t2"];
    NAMES.par_iter().map(|n| venn_placement(n, b)).collect()
}

pub fn venn_markdown(rows: &[VennPlacement]) -> String {
    let mut out =
        String::from("| Theory | Strongly Polite | Decidable | Shiny | Region |\n|---|---|---|---|---|\n");
    for r in rows {
        let region = serde_json::to_value(r.region).expect("unit variant").as_str().unwrap_or_default().to_string();
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            r.theory,
            mark(r.strongly_polite),
            mark(r.decidable),
            mark(r.shiny),
            region
        ));
    }
    out
}
