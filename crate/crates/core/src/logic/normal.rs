//! Negation and disjunctive normal forms of quantifier-free formulas.

use super::{Atom, Formula, LogicError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn to_formula(&self) -> Formula {
        let a = Formula::Atom(self.atom.clone());
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }
}

/// A conjunction of literals, as a formula.
pub fn cube_formula(cube: &[Literal]) -> Formula {
    Formula::conj(cube.iter().map(Literal::to_formula).collect())
}

/// Reads `phi` as a conjunction of literals; nested conjunctions are
/// flattened and `true` is the empty conjunction.
pub fn as_literal_conjunction(phi: &Formula) -> Option<Vec<Literal>> {
    let mut out = Vec::new();
    fn go(phi: &Formula, out: &mut Vec<Literal>) -> bool {
        match phi {
            Formula::True => true,
            Formula::Atom(a) => {
                out.push(Literal { positive: true, atom: a.clone() });
                true
            }
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(a) => {
                    out.push(Literal { positive: false, atom: a.clone() });
                    true
                }
                _ => false,
            },
            Formula::And(ps) => ps.iter().all(|p| go(p, out)),
            _ => false,
        }
    }
    go(phi, &mut out).then_some(out)
}

/// Cubes of the syntactic DNF; an empty list means `false`.
///
/// No simplification is performed: contradictory cubes are kept.
pub fn dnf(phi: &Formula) -> Result<Vec<Vec<Literal>>, LogicError> {
    phi.require_quantifier_free()?;
    Ok(dnf_signed(phi, true))
}

fn dnf_signed(phi: &Formula, positive: bool) -> Vec<Vec<Literal>> {
    match (phi, positive) {
        (Formula::True, true) | (Formula::False, false) => vec![Vec::new()],
        (Formula::True, false) | (Formula::False, true) => Vec::new(),
        (Formula::Atom(a), _) => vec![vec![Literal { positive, atom: a.clone() }]],
        (Formula::Not(p), _) => dnf_signed(p, !positive),
        (Formula::And(ps), true) | (Formula::Or(ps), false) => product(ps.iter().map(|p| dnf_signed(p, positive))),
        (Formula::Or(ps), true) | (Formula::And(ps), false) => {
            ps.iter().flat_map(|p| dnf_signed(p, positive)).collect()
        }
        (Formula::Implies(a, b), true) => {
            let mut out = dnf_signed(a, false);
            out.extend(dnf_signed(b, true));
            out
        }
        (Formula::Implies(a, b), false) => product([dnf_signed(a, true), dnf_signed(b, false)]),
        (Formula::Exists(..) | Formula::Forall(..), _) => unreachable!("checked quantifier-free"),
    }
}

fn product(parts: impl IntoIterator<Item = Vec<Vec<Literal>>>) -> Vec<Vec<Literal>> {
    let mut acc = vec![Vec::new()];
    for cubes in parts {
        let mut next = Vec::with_capacity(acc.len() * cubes.len());
        for a in &acc {
            for c in &cubes {
                let mut joined = a.clone();
                joined.extend(c.iter().cloned());
                next.push(joined);
            }
        }
        acc = next;
    }
    acc
}
