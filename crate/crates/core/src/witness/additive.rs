//! The additive witness construction: `wit′(φ) = φ ∧ wit(φ)`, and `wit″`,
//! which fixes everything already of the form `wit′(φ) ∧ ψ`.

use std::collections::BTreeSet;

use super::{Strength, WitnessError, WitnessFn};
use crate::logic::normal::as_literal_conjunction;
use crate::logic::{Atom, Formula, Sort, Term};
use crate::theories::TheoryHandle;

/// `φ ↦ φ ∧ wit(φ)` as a two-element conjunction, never collapsed, so that
/// the image is recognizable by shape.
pub fn wit_prime(wit: &WitnessFn) -> WitnessFn {
    let base = wit.clone();
    let mut out = WitnessFn::new(format!("{}′", wit.name()), wit.strength(), move |phi| {
        Ok(Formula::And(vec![phi.clone(), base.apply(phi)?]))
    });
    out.prime_of = Some(Box::new(wit.clone()));
    out
}

/// Whether `chi` is `wit′(φ)` for some `φ`: a two-element conjunction whose
/// second part is the witness of the first.
fn in_prime_image(base: &WitnessFn, chi: &Formula) -> bool {
    match chi {
        Formula::And(parts) if parts.len() == 2 => base.apply(&parts[0]).is_ok_and(|w| w == parts[1]),
        _ => false,
    }
}

/// A conjunction of literals whose terms are all variables of sorts in
/// `sorts`; `true` counts as the empty conjunction.
pub fn is_flat_sort_conjunction(psi: &Formula, sorts: &BTreeSet<Sort>) -> bool {
    let var_ok = |t: &Term| t.as_var().is_some_and(|v| sorts.contains(v.sort()));
    as_literal_conjunction(psi).is_some_and(|lits| {
        lits.iter().all(|l| match &l.atom {
            Atom::Eq(a, b) => var_ok(a) && var_ok(b),
            Atom::Pred { args, .. } => args.iter().all(var_ok),
        })
    })
}

/// `χ` is `wit′(φ) ∧ ψ₁ ∧ … ∧ ψₖ` (nested to the left, `k ≥ 0`) with each
/// `ψᵢ` a flat conjunction over `sorts`.
fn is_fixed(base: &WitnessFn, sorts: &BTreeSet<Sort>, chi: &Formula) -> bool {
    if in_prime_image(base, chi) {
        return true;
    }
    match chi {
        Formula::And(parts) if parts.len() == 2 => {
            is_flat_sort_conjunction(&parts[1], sorts) && is_fixed(base, sorts, &parts[0])
        }
        _ => false,
    }
}

/// The `sorts`-additive witness built from `wit_p = wit_prime(wit)`:
/// identity on formulas of the form `wit′(φ) ∧ ψ`, `wit′` elsewhere.
///
/// The strong-witness guarantee needs an algebraic signature; over a
/// signature with predicates the result is still built, as a plain witness
/// with a diagnostic.
pub fn wit_double_prime(t: &TheoryHandle, wit_p: &WitnessFn, sorts: &[Sort]) -> Result<WitnessFn, WitnessError> {
    let base = wit_p.prime_of().cloned().ok_or_else(|| WitnessError::MissingCapability {
        theory: t.name().to_string(),
        what: "a witness built by wit_prime",
    })?;
    let sorts: BTreeSet<Sort> = sorts.iter().cloned().collect();
    let prime = wit_p.clone();
    let algebraic = t.signature().is_algebraic();
    let strength = if algebraic { wit_p.strength() } else { Strength::Plain };
    let mut out = WitnessFn::new(format!("{}′", wit_p.name()), strength, move |chi| {
        if is_fixed(&base, &sorts, chi) {
            Ok(chi.clone())
        } else {
            prime.apply(chi)
        }
    });
    out.additive = true;
    if !algebraic {
        out.diagnostics.push(format!(
            "signature of `{}` has predicate symbols; the strong-witness property is not asserted",
            t.name()
        ));
    }
    Ok(out)
}
