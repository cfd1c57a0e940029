//! Size changes that keep a `T_2n`-model a model: grow by adding elements
//! outside `P`, shrink to the variables plus as many non-`P` elements as
//! there are variables in `P`.

use std::collections::BTreeSet;

use super::WitnessError;
use crate::logic::{FiniteInterpretation, Formula};

const PRED_P: &str = "P";

fn p_table(interp: &FiniteInterpretation) -> Result<&[bool], WitnessError> {
    interp
        .predicate_table(PRED_P)
        .ok_or_else(|| WitnessError::NotAModel("no unary predicate `P`".into()))
}

fn check_member(interp: &FiniteInterpretation) -> Result<(), WitnessError> {
    let p = p_table(interp)?.iter().filter(|&&b| b).count();
    if interp.signature().sorts().len() != 1 || 2 * p > interp.total_size() {
        return Err(WitnessError::NotAModel("not a T_2n-interpretation".into()));
    }
    Ok(())
}

/// Adjoins `target - size` elements outside `P`. Assignments are kept.
pub fn t2n_grow(interp: &FiniteInterpretation, target: usize) -> Result<FiniteInterpretation, WitnessError> {
    check_member(interp)?;
    let current = interp.total_size();
    if target < current {
        return Err(WitnessError::TargetTooSmall { current, target });
    }
    let mut p = p_table(interp)?.to_vec();
    p.resize(target, false);
    let mut out = FiniteInterpretation::new(interp.signature().clone(), &[target])?;
    out.set_predicate(PRED_P, p)?;
    for (v, &e) in interp.assignment() {
        out.assign(v, e)?;
    }
    Ok(out)
}

/// Restricts a model of `phi` to `X ∪ Y`, where `X` is the set of variable
/// values and `Y` holds `|X ∩ P|` elements outside `P`, taken from `X`
/// first. The result has at most `2·|vars(phi)|` elements (at least one).
pub fn t2n_shrink(interp: &FiniteInterpretation, phi: &Formula) -> Result<FiniteInterpretation, WitnessError> {
    check_member(interp)?;
    if !interp.evaluate(phi)? {
        return Err(WitnessError::NotAModel("the interpretation does not satisfy the formula".into()));
    }
    let p = p_table(interp)?;
    let x: BTreeSet<usize> = phi.vars().iter().map(|v| interp.value(v).expect("evaluated")).collect();
    let in_p = x.iter().filter(|&&e| p[e]).count();
    let outside = (0..p.len()).filter(|&e| !p[e]);
    // Non-P elements already in X cost nothing, so they come first.
    let (mut y, rest): (Vec<usize>, Vec<usize>) = outside.partition(|e| x.contains(e));
    y.extend(rest);
    let mut keep: BTreeSet<usize> = x;
    keep.extend(y.iter().take(in_p));
    if keep.is_empty() {
        // A member has a non-`P` element, since `2·|P| ≤ size`.
        keep.insert(y[0]);
    }
    let keep: Vec<usize> = keep.into_iter().collect();
    Ok(interp.restrict(&[keep])?)
}
