use std::collections::{BTreeMap, BTreeSet};

use super::WitnessError;
use crate::logic::normal::{as_literal_conjunction, cube_formula, Literal};
use crate::logic::{Atom, Formula, FreshVars, Term, Var};

/// A conjunction of flat literals: `f(v⃗)=w`, `v=w`, `v≠w`, `±P(v⃗)`.
///
/// Every fresh variable introduced by [`flatten`] is listed in
/// `definitions` with the flat application it names; its defining equation
/// is also one of the literals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FlatConjunction {
    literals: Vec<Literal>,
    definitions: Vec<(Var, Term)>,
}

impl FlatConjunction {
    /// Wraps already-flat literals; fails on the first nested one.
    pub fn from_literals(literals: Vec<Literal>) -> Result<Self, WitnessError> {
        if let Some(bad) = literals.iter().find(|l| !is_flat_literal(l)) {
            return Err(WitnessError::NotFlat(crate::textio::print_formula(&bad.to_formula())));
        }
        Ok(FlatConjunction { literals, definitions: Vec::new() })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn definitions(&self) -> &[(Var, Term)] {
        &self.definitions
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.to_formula().vars()
    }

    /// `true` for the empty conjunction.
    pub fn to_formula(&self) -> Formula {
        cube_formula(&self.literals)
    }

    pub(crate) fn push(&mut self, literal: Literal) {
        debug_assert!(is_flat_literal(&literal));
        self.literals.push(literal);
    }
}

/// At most one function application, on the left of a positive equation
/// whose right side is a variable; all other positions hold variables.
pub fn is_flat_literal(l: &Literal) -> bool {
    let all_vars = |ts: &[Term]| ts.iter().all(|t| t.as_var().is_some());
    match &l.atom {
        Atom::Pred { args, .. } => all_vars(args),
        Atom::Eq(Term::Var(_), Term::Var(_)) => true,
        Atom::Eq(Term::App { args, .. }, Term::Var(_)) => l.positive && all_vars(args),
        Atom::Eq(..) => false,
    }
}

/// Replaces every nested term by a fresh variable with a defining equation.
///
/// Definitions are emitted before the literal that needs them, and each
/// distinct subterm is named once.
pub fn flatten(phi: &Formula, fresh: &mut FreshVars) -> Result<FlatConjunction, WitnessError> {
    let literals = as_literal_conjunction(phi)
        .ok_or_else(|| WitnessError::NotConjunction(crate::textio::print_formula(phi)))?;
    Ok(flatten_literals(&literals, fresh))
}

pub(crate) fn flatten_literals(literals: &[Literal], fresh: &mut FreshVars) -> FlatConjunction {
    let mut fl = Flattener { fresh, names: BTreeMap::new(), out: FlatConjunction::default() };
    for l in literals {
        fl.literal(l);
    }
    fl.out
}

struct Flattener<'a> {
    fresh: &'a mut FreshVars,
    names: BTreeMap<Term, Var>,
    out: FlatConjunction,
}

impl Flattener<'_> {
    /// A variable denoting `t`.
    fn name(&mut self, t: &Term) -> Var {
        match t {
            Term::Var(v) => v.clone(),
            Term::App { sort, .. } => {
                if let Some(v) = self.names.get(t) {
                    return v.clone();
                }
                let app = self.shallow(t);
                let v = self.fresh.var(sort);
                self.names.insert(t.clone(), v.clone());
                self.out.definitions.push((v.clone(), app.clone()));
                self.out.push(Literal { positive: true, atom: Atom::Eq(app, Term::Var(v.clone())) });
                v
            }
        }
    }

    /// `t` with its arguments replaced by variables.
    fn shallow(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App { func, args, sort } => {
                let args = args.iter().map(|a| Term::Var(self.name(a))).collect();
                Term::App { func: func.clone(), args, sort: sort.clone() }
            }
        }
    }

    fn literal(&mut self, l: &Literal) {
        let atom = match (&l.atom, l.positive) {
            (Atom::Eq(a @ Term::App { .. }, b @ Term::Var(_)), true)
            | (Atom::Eq(b @ Term::Var(_), a @ Term::App { .. }), true) => Atom::Eq(self.shallow(a), b.clone()),
            (Atom::Eq(a, b), _) => Atom::Eq(Term::Var(self.name(a)), Term::Var(self.name(b))),
            (Atom::Pred { name, args }, _) => {
                Atom::Pred { name: name.clone(), args: args.iter().map(|a| Term::Var(self.name(a))).collect() }
            }
        };
        self.out.push(Literal { positive: l.positive, atom });
    }
}
