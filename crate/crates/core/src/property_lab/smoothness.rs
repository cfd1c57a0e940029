//! Finite smoothness by explicit growth: each step adds one element and the
//! result is re-checked for membership and for the formula.

use super::{grow_star, Property, PropertyError, PropertyReport, StarGrowth, StarModel, Verdict};
use crate::logic::{FiniteInterpretation, Formula, Var};
use crate::theories::{TheoryHandle, TheoryKind};
use crate::witness::t2n_grow;

/// A model to grow: a plain structure, or a star interpretation, whose
/// growth needs the tree shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothInput {
    Plain(FiniteInterpretation),
    Star(StarModel),
}

impl SmoothInput {
    pub fn interpretation(&self) -> Result<FiniteInterpretation, PropertyError> {
        match self {
            SmoothInput::Plain(m) => Ok(m.clone()),
            SmoothInput::Star(s) => s.to_interpretation(),
        }
    }
}

fn add_element(m: &FiniteInterpretation) -> Result<FiniteInterpretation, PropertyError> {
    let mut out = FiniteInterpretation::new(m.signature().clone(), &[m.total_size() + 1])?;
    for (v, &e) in m.assignment() {
        out.assign(v, e)?;
    }
    Ok(out)
}

/// One growth step: a fresh element for `teq`, a fresh non-`P` element for
/// `t2n`, Case I or II for `star`. The label names the step taken.
pub fn grow_by_one(t: &TheoryHandle, input: &SmoothInput) -> Result<(SmoothInput, String), PropertyError> {
    match (t.kind(), input) {
        (TheoryKind::Eq, SmoothInput::Plain(m)) => Ok((SmoothInput::Plain(add_element(m)?), "add-element".into())),
        (TheoryKind::T2n, SmoothInput::Plain(m)) => {
            Ok((SmoothInput::Plain(t2n_grow(m, m.total_size() + 1)?), "add-non-p-element".into()))
        }
        (TheoryKind::Star, SmoothInput::Star(s)) => {
            let (grown, case) = grow_star(s)?;
            let label = match case {
                StarGrowth::NewLevel => "new-level".to_string(),
                StarGrowth::AddLeaf { leaf } => format!("add-leaf {leaf}"),
            };
            Ok((SmoothInput::Star(grown), label))
        }
        _ => Err(PropertyError::Unsupported(format!("finite growth for `{}` from this input", t.name()))),
    }
}

/// Grows `input` one element at a time up to `max_size`, re-checking
/// membership and `phi` after every step.
pub fn check_finite_smoothness(
    t: &TheoryHandle,
    input: &SmoothInput,
    phi: &Formula,
    max_size: usize,
) -> Result<PropertyReport, PropertyError> {
    let start = input.interpretation()?;
    if !t.membership(&start) {
        return Err(PropertyError::NotAMember(t.name().to_string()));
    }
    if !start.evaluate(phi)? {
        return Err(PropertyError::NotAModel);
    }
    let mut current = input.clone();
    let mut sizes = vec![start.total_size()];
    let mut steps = Vec::new();
    while *sizes.last().expect("non-empty") < max_size {
        let (next, label) = grow_by_one(t, &current)?;
        let m = next.interpretation()?;
        if m.total_size() != sizes.last().expect("non-empty") + 1 {
            return Err(PropertyError::Invalid(format!("step `{label}` did not add exactly one element")));
        }
        if !t.membership(&m) || !m.evaluate(phi)? {
            return Err(PropertyError::Invalid(format!("step `{label}` broke membership or the formula")));
        }
        sizes.push(m.total_size());
        steps.push(label);
        current = next;
    }
    Ok(PropertyReport {
        theory: t.name().to_string(),
        property: Property::FiniteSmoothness,
        verdict: Verdict::ConstructionVerified,
        evidence: steps,
        sizes,
        bound: max_size,
    })
}

/// Some assignment of `phi`'s variables under which `interp` satisfies it,
/// by exhaustive search.
pub fn find_assignment(interp: &FiniteInterpretation, phi: &Formula) -> Result<Option<FiniteInterpretation>, PropertyError> {
    let vars: Vec<Var> = phi.vars().into_iter().collect();
    let limits = vars.iter().map(|v| interp.size_of(v.sort())).collect::<Result<Vec<_>, _>>()?;
    let mut m = interp.clone();
    let mut digits = vec![0usize; vars.len()];
    loop {
        for (v, &e) in vars.iter().zip(&digits) {
            m.assign(v, e)?;
        }
        if m.evaluate(phi)? {
            return Ok(Some(m));
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(None);
            }
            digits[i] += 1;
            if digits[i] < limits[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}
