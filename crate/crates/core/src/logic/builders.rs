use super::{Formula, LogicError, Sort, Term, Var, FUNC_F};

/// Pairwise disequalities `≠(x1,…,xn)`.
///
/// Fewer than two variables give the empty conjunction `true`.
pub fn distinct_formula(vars: &[Var]) -> Result<Formula, LogicError> {
    if let Some(first) = vars.first() {
        if let Some(other) = vars.iter().find(|v| v.sort() != first.sort()) {
            return Err(LogicError::MixedSorts(first.clone(), other.clone()));
        }
    }
    let mut parts = Vec::new();
    for (i, a) in vars.iter().enumerate() {
        for b in &vars[i + 1..] {
            parts.push(Formula::neq(Term::var(a), Term::var(b)));
        }
    }
    Ok(Formula::conj(parts))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CardKind {
    AtLeast,
    AtMost,
    Exactly,
}

/// Cardinality sentences over one sort.
///
/// `AtMost` is `∃x1…xn ∀y (y=x1 ∨ … ∨ y=xn)`; the `xi` are not required to
/// be distinct.
pub fn cardinality_sentence(kind: CardKind, sort: &Sort, n: usize) -> Result<Formula, LogicError> {
    if n == 0 {
        return Err(LogicError::ZeroCardinality);
    }
    let xs: Vec<Var> = (1..=n).map(|i| Var::new(format!("_x{i}"), sort.clone())).collect();
    let at_least = || -> Result<Formula, LogicError> {
        Ok(Formula::Exists(xs.clone(), Box::new(distinct_formula(&xs)?)))
    };
    let at_most = || {
        let y = Var::new("_y", sort.clone());
        let covered = Formula::disj(xs.iter().map(|x| Formula::var_eq(&y, x)).collect());
        Formula::Exists(xs.clone(), Box::new(Formula::Forall(vec![y], Box::new(covered))))
    };
    Ok(match kind {
        CardKind::AtLeast => at_least()?,
        CardKind::AtMost => at_most(),
        CardKind::Exactly => Formula::And(vec![at_least()?, at_most()]),
    })
}

/// `cycle_n(x)`: `x` lies on a cycle of length exactly `n` under `f`.
pub fn cycle_formula(n: usize, x: &Var) -> Result<Formula, LogicError> {
    cycle_formula_with(FUNC_F, n, x)
}

/// `func^n(x) = x` plus `func^m(x) ≠ x` for each proper divisor `m` of `n`.
pub fn cycle_formula_with(func: &str, n: usize, x: &Var) -> Result<Formula, LogicError> {
    if n == 0 {
        return Err(LogicError::ZeroCycle);
    }
    let base = Term::var(x);
    let mut parts = vec![Formula::eq(Term::iterate(func, n, base.clone()), base.clone())];
    for m in (1..n).filter(|&m| n.is_multiple_of(m)) {
        parts.push(Formula::neq(Term::iterate(func, m, base.clone()), base.clone()));
    }
    Ok(Formula::conj(parts))
}
