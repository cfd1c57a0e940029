use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LogicError;

/// Name of the primary sort in every built-in signature.
pub const SIGMA1: &str = "sigma1";
/// Name of the auxiliary sort added by the add-sort wrapper.
pub const SIGMA2: &str = "sigma2";
/// The unary function symbol of the functional-graph signatures.
pub const FUNC_F: &str = "f";
/// Prefix reserved for generated variables.
pub const FRESH_PREFIX: &str = "_w";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sort(String);

impl Sort {
    pub fn new(name: impl Into<String>) -> Self {
        Sort(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A variable; identity is the pair (name, sort).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: String,
    sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Var { name: name.into(), sort }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sort(&self) -> &Sort {
        &self.sort
    }

    /// Index `k` if this variable is named `_w<k>`.
    pub fn fresh_index(&self) -> Option<usize> {
        self.name.strip_prefix(FRESH_PREFIX)?.parse().ok()
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FuncDecl {
    pub name: String,
    pub args: Vec<Sort>,
    pub result: Sort,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredDecl {
    pub name: String,
    pub args: Vec<Sort>,
}

/// Lazily instantiated unary functions `<prefix>_<member>` over one sort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionFamily {
    pub prefix: String,
    pub sort: Sort,
}

/// Sorts, function and predicate symbols. Equality is implicit for every sort.
///
/// Two lazy families are supported: nullary predicates `<prefix>_<n>` for
/// positive `n`, and unary functions `<prefix>_<name>` over a fixed sort.
/// Members exist on demand; only those actually mentioned are ever
/// materialized, see [`Signature::instantiate`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Signature {
    sorts: Vec<Sort>,
    functions: Vec<FuncDecl>,
    predicates: Vec<PredDecl>,
    predicate_family: Option<String>,
    function_family: Option<FunctionFamily>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn add_sort(&mut self, name: &str) -> Result<Sort, LogicError> {
        let sort = Sort::new(name);
        if self.sorts.contains(&sort) {
            return Err(LogicError::DuplicateSymbol(name.to_string()));
        }
        self.sorts.push(sort.clone());
        Ok(sort)
    }

    pub fn add_function(&mut self, name: &str, args: &[&str], result: &str) -> Result<(), LogicError> {
        self.ensure_fresh_symbol(name)?;
        let args = args.iter().map(|a| self.require_sort(a)).collect::<Result<Vec<_>, _>>()?;
        let result = self.require_sort(result)?;
        self.functions.push(FuncDecl { name: name.to_string(), args, result });
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, args: &[&str]) -> Result<(), LogicError> {
        self.ensure_fresh_symbol(name)?;
        let args = args.iter().map(|a| self.require_sort(a)).collect::<Result<Vec<_>, _>>()?;
        self.predicates.push(PredDecl { name: name.to_string(), args });
        Ok(())
    }

    pub fn set_predicate_family(&mut self, prefix: &str) {
        self.predicate_family = Some(prefix.to_string());
    }

    /// Declares the unary family over the first declared sort.
    pub fn set_function_family(&mut self, prefix: &str) -> Result<(), LogicError> {
        let sort = self.sorts.first().cloned().ok_or(LogicError::NoSorts)?;
        self.function_family = Some(FunctionFamily { prefix: prefix.to_string(), sort });
        Ok(())
    }

    fn ensure_fresh_symbol(&self, name: &str) -> Result<(), LogicError> {
        let taken = self.functions.iter().any(|f| f.name == name)
            || self.predicates.iter().any(|p| p.name == name);
        if taken {
            Err(LogicError::DuplicateSymbol(name.to_string()))
        } else {
            Ok(())
        }
    }

    fn require_sort(&self, name: &str) -> Result<Sort, LogicError> {
        self.sort(name).cloned().ok_or_else(|| LogicError::UnknownSort(name.to_string()))
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn sort(&self, name: &str) -> Option<&Sort> {
        self.sorts.iter().find(|s| s.name() == name)
    }

    pub fn sort_index(&self, sort: &Sort) -> Option<usize> {
        self.sorts.iter().position(|s| s == sort)
    }

    /// Sort assigned to variables whose sort cannot be inferred from context.
    pub fn default_sort(&self) -> Option<&Sort> {
        self.sort(SIGMA1).or_else(|| self.sorts.first())
    }

    pub fn functions(&self) -> &[FuncDecl] {
        &self.functions
    }

    pub fn predicates(&self) -> &[PredDecl] {
        &self.predicates
    }

    pub fn predicate_family(&self) -> Option<&str> {
        self.predicate_family.as_deref()
    }

    pub fn function_family(&self) -> Option<&FunctionFamily> {
        self.function_family.as_ref()
    }

    /// Looks up a function, materializing a family member if the name matches.
    pub fn function(&self, name: &str) -> Option<FuncDecl> {
        if let Some(f) = self.functions.iter().find(|f| f.name == name) {
            return Some(f.clone());
        }
        let fam = self.function_family.as_ref()?;
        let member = name.strip_prefix(&fam.prefix)?.strip_prefix('_')?;
        if member.is_empty() {
            return None;
        }
        Some(FuncDecl { name: name.to_string(), args: vec![fam.sort.clone()], result: fam.sort.clone() })
    }

    /// Looks up a predicate, materializing `<prefix>_<n>` (n ≥ 1) family members.
    pub fn predicate(&self, name: &str) -> Option<PredDecl> {
        if let Some(p) = self.predicates.iter().find(|p| p.name == name) {
            return Some(p.clone());
        }
        family_index(self.predicate_family.as_deref()?, name)?;
        Some(PredDecl { name: name.to_string(), args: Vec::new() })
    }

    /// Index `n` of a predicate-family member name.
    pub fn predicate_family_index(&self, name: &str) -> Option<u64> {
        family_index(self.predicate_family.as_deref()?, name)
    }

    /// True when there are no predicate symbols at all.
    pub fn is_algebraic(&self) -> bool {
        self.predicates.is_empty() && self.predicate_family.is_none()
    }

    /// True when the signature has sorts only.
    pub fn is_empty_signature(&self) -> bool {
        self.is_algebraic() && self.functions.is_empty() && self.function_family.is_none()
    }

    pub fn has_families(&self) -> bool {
        self.predicate_family.is_some() || self.function_family.is_some()
    }

    /// A finite cut: the listed family members become ordinary symbols and
    /// the families are dropped.
    pub fn instantiate<'a>(
        &self,
        functions: impl IntoIterator<Item = &'a str>,
        predicates: impl IntoIterator<Item = &'a str>,
    ) -> Result<Signature, LogicError> {
        let mut cut = Signature {
            sorts: self.sorts.clone(),
            functions: self.functions.clone(),
            predicates: self.predicates.clone(),
            predicate_family: None,
            function_family: None,
        };
        for name in functions {
            if cut.functions.iter().any(|f| f.name == name) {
                continue;
            }
            let decl = self.function(name).ok_or_else(|| LogicError::UnknownFunction(name.to_string()))?;
            cut.functions.push(decl);
        }
        for name in predicates {
            if cut.predicates.iter().any(|p| p.name == name) {
                continue;
            }
            let decl = self.predicate(name).ok_or_else(|| LogicError::UnknownPredicate(name.to_string()))?;
            cut.predicates.push(decl);
        }
        Ok(cut)
    }

    /// The cut containing exactly the family members mentioned in `phi`.
    pub fn instantiate_for(&self, phi: &Formula) -> Result<Signature, LogicError> {
        let funcs = phi.function_symbols();
        let preds = phi.predicate_symbols();
        self.instantiate(funcs.iter().map(String::as_str), preds.iter().map(String::as_str))
    }

    /// One sort `sigma1`, no symbols.
    pub fn sigma_1() -> Self {
        let mut s = Signature::new();
        s.add_sort(SIGMA1).expect("fresh signature");
        s
    }

    /// One sort and a unary function `f`.
    pub fn sigma_f() -> Self {
        let mut s = Signature::sigma_1();
        s.add_function(FUNC_F, &[SIGMA1], SIGMA1).expect("fresh signature");
        s
    }

    /// `sigma_f` plus an unused second sort.
    pub fn sigma_f2() -> Self {
        let mut s = Signature::sigma_f();
        s.add_sort(SIGMA2).expect("fresh signature");
        s
    }

    /// One sort and a unary predicate `P`.
    pub fn sigma_p() -> Self {
        let mut s = Signature::sigma_1();
        s.add_predicate("P", &[SIGMA1]).expect("fresh signature");
        s
    }

    /// One sort and nullary predicates `P_1, P_2, …`.
    pub fn sigma_pn() -> Self {
        let mut s = Signature::sigma_1();
        s.set_predicate_family("P");
        s
    }

    /// Two sorts, no symbols.
    pub fn empty_two_sorted() -> Self {
        let mut s = Signature::sigma_1();
        s.add_sort(SIGMA2).expect("fresh signature");
        s
    }

    /// Unary `N`, `T`, binary `<` and the unary family `f_<name>`.
    pub fn sigma_star() -> Self {
        let mut s = Signature::sigma_1();
        s.add_predicate("N", &[SIGMA1]).expect("fresh signature");
        s.add_predicate("T", &[SIGMA1]).expect("fresh signature");
        s.add_predicate("<", &[SIGMA1, SIGMA1]).expect("fresh signature");
        s.set_function_family("f").expect("has a sort");
        s
    }
}

fn family_index(prefix: &str, name: &str) -> Option<u64> {
    let digits = name.strip_prefix(prefix)?.strip_prefix('_')?;
    if digits.starts_with('0') {
        return None;
    }
    let n: u64 = digits.parse().ok()?;
    (n >= 1).then_some(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App { func: String, args: Vec<Term>, sort: Sort },
}

impl Term {
    pub fn var(v: &Var) -> Term {
        Term::Var(v.clone())
    }

    /// Checked application: arity and argument sorts must match the declaration.
    pub fn app(sig: &Signature, func: &str, args: Vec<Term>) -> Result<Term, LogicError> {
        let decl = sig.function(func).ok_or_else(|| LogicError::UnknownFunction(func.to_string()))?;
        if decl.args.len() != args.len() {
            return Err(LogicError::Arity { symbol: func.to_string(), expected: decl.args.len(), found: args.len() });
        }
        for (expected, arg) in decl.args.iter().zip(&args) {
            if arg.sort() != expected {
                return Err(LogicError::SortMismatch { expected: expected.clone(), found: arg.sort().clone() });
            }
        }
        Ok(Term::App { func: func.to_string(), args, sort: decl.result })
    }

    /// `func^n(base)` for a unary endofunction on `base`'s sort.
    pub fn iterate(func: &str, n: usize, base: Term) -> Term {
        (0..n).fold(base, |t, _| {
            let sort = t.sort().clone();
            Term::App { func: func.to_string(), args: vec![t], sort }
        })
    }

    pub fn sort(&self) -> &Sort {
        match self {
            Term::Var(v) => v.sort(),
            Term::App { sort, .. } => sort,
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App { .. } => None,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    fn collect_functions(&self, out: &mut BTreeSet<String>) {
        if let Term::App { func, args, .. } = self {
            out.insert(func.clone());
            args.iter().for_each(|a| a.collect_functions(out));
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    fn check(&self, sig: &Signature) -> Result<(), LogicError> {
        match self {
            Term::Var(v) => {
                sig.sort_index(v.sort()).ok_or_else(|| LogicError::UnknownSort(v.sort().name().to_string()))?;
                Ok(())
            }
            Term::App { func, args, sort } => {
                for a in args {
                    a.check(sig)?;
                }
                let rebuilt = Term::app(sig, func, args.clone())?;
                if rebuilt.sort() != sort {
                    return Err(LogicError::SortMismatch { expected: rebuilt.sort().clone(), found: sort.clone() });
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Eq(Term, Term),
    Pred { name: String, args: Vec<Term> },
}

impl Atom {
    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Atom::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Atom::Pred { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Eq(a, b) => vec![a, b],
            Atom::Pred { args, .. } => args.iter().collect(),
        }
    }
}

/// First-order formulas. Quantifiers exist so that axioms can be evaluated
/// over finite domains; reasoning entry points accept only quantifier-free input.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
    Forall(Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::Eq(a, b))
    }

    pub fn var_eq(a: &Var, b: &Var) -> Formula {
        Formula::eq(Term::var(a), Term::var(b))
    }

    pub fn neq(a: Term, b: Term) -> Formula {
        Formula::not(Formula::eq(a, b))
    }

    pub fn pred(name: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom::Pred { name: name.to_string(), args })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(phi: Formula) -> Formula {
        Formula::Not(Box::new(phi))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Conjunction that collapses the 0- and 1-element cases.
    pub fn conj(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().expect("one element"),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction that collapses the 0- and 1-element cases.
    pub fn disj(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().expect("one element"),
            _ => Formula::Or(parts),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(p) => p.is_quantifier_free(),
            Formula::And(ps) | Formula::Or(ps) => ps.iter().all(Formula::is_quantifier_free),
            Formula::Implies(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn require_quantifier_free(&self) -> Result<(), LogicError> {
        if self.is_quantifier_free() {
            Ok(())
        } else {
            Err(LogicError::NotQuantifierFree)
        }
    }

    /// Free variables.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out, &mut Vec::new());
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>, bound: &mut Vec<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                let mut here = BTreeSet::new();
                a.collect_vars(&mut here);
                out.extend(here.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(p) => p.collect_free(out, bound),
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| p.collect_free(out, bound)),
            Formula::Implies(a, b) => {
                a.collect_free(out, bound);
                b.collect_free(out, bound);
            }
            Formula::Exists(vs, body) | Formula::Forall(vs, body) => {
                let depth = bound.len();
                bound.extend(vs.iter().cloned());
                body.collect_free(out, bound);
                bound.truncate(depth);
            }
        }
    }

    pub fn vars_by_sort(&self) -> BTreeMap<Sort, Vec<Var>> {
        let mut out: BTreeMap<Sort, Vec<Var>> = BTreeMap::new();
        for v in self.vars() {
            out.entry(v.sort().clone()).or_default().push(v);
        }
        out
    }

    pub fn function_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| a.terms().into_iter().for_each(|t| t.collect_functions(&mut out)));
        out
    }

    pub fn predicate_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            if let Atom::Pred { name, .. } = a {
                out.insert(name.clone());
            }
        });
        out
    }

    pub fn visit_atoms(&self, visit: &mut impl FnMut(&Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => visit(a),
            Formula::Not(p) | Formula::Exists(_, p) | Formula::Forall(_, p) => p.visit_atoms(visit),
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| p.visit_atoms(visit)),
            Formula::Implies(a, b) => {
                a.visit_atoms(visit);
                b.visit_atoms(visit);
            }
        }
    }

    /// Number of atom occurrences.
    pub fn literal_count(&self) -> usize {
        let mut n = 0;
        self.visit_atoms(&mut |_| n += 1);
        n
    }

    /// Well-sortedness against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<(), LogicError> {
        let mut err = None;
        self.visit_atoms(&mut |a| {
            if err.is_some() {
                return;
            }
            let r = match a {
                Atom::Eq(x, y) => x.check(sig).and_then(|_| y.check(sig)).and_then(|_| {
                    if x.sort() == y.sort() {
                        Ok(())
                    } else {
                        Err(LogicError::SortMismatch { expected: x.sort().clone(), found: y.sort().clone() })
                    }
                }),
                Atom::Pred { name, args } => check_pred(sig, name, args),
            };
            if let Err(e) = r {
                err = Some(e);
            }
        });
        err.map_or(Ok(()), Err)
    }
}

fn check_pred(sig: &Signature, name: &str, args: &[Term]) -> Result<(), LogicError> {
    let decl = sig.predicate(name).ok_or_else(|| LogicError::UnknownPredicate(name.to_string()))?;
    if decl.args.len() != args.len() {
        return Err(LogicError::Arity { symbol: name.to_string(), expected: decl.args.len(), found: args.len() });
    }
    for (expected, arg) in decl.args.iter().zip(args) {
        arg.check(sig)?;
        if arg.sort() != expected {
            return Err(LogicError::SortMismatch { expected: expected.clone(), found: arg.sort().clone() });
        }
    }
    Ok(())
}

/// Deterministic generator of `_w<k>` variables.
#[derive(Clone, Debug, Default)]
pub struct FreshVars {
    next: usize,
}

impl FreshVars {
    pub fn new() -> Self {
        FreshVars::default()
    }

    /// Starts past every `_w<k>` already used by the given formulas.
    pub fn avoiding<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut next = 0;
        for phi in formulas {
            let mut all = BTreeSet::new();
            phi.visit_atoms(&mut |a| a.collect_vars(&mut all));
            all.extend(phi.bound_vars());
            for v in all {
                if let Some(k) = v.fresh_index() {
                    next = next.max(k + 1);
                }
            }
        }
        FreshVars { next }
    }

    pub fn var(&mut self, sort: &Sort) -> Var {
        let v = Var::new(format!("{FRESH_PREFIX}{}", self.next), sort.clone());
        self.next += 1;
        v
    }

    pub fn peek(&self) -> usize {
        self.next
    }
}

impl Formula {
    fn bound_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        fn go(phi: &Formula, out: &mut Vec<Var>) {
            match phi {
                Formula::Exists(vs, b) | Formula::Forall(vs, b) => {
                    out.extend(vs.iter().cloned());
                    go(b, out);
                }
                Formula::Not(p) => go(p, out),
                Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| go(p, out)),
                Formula::Implies(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::True | Formula::False | Formula::Atom(_) => {}
            }
        }
        go(self, &mut out);
        out
    }
}
