use std::collections::BTreeMap;

use super::{Atom, Formula, FuncDecl, LogicError, PredDecl, Signature, Sort, Term, Var};

/// A finite structure together with a variable assignment.
///
/// Domains are `{0, …, k-1}` per sort, with optional display names.
/// Tables are row-major with the first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteInterpretation {
    signature: Signature,
    names: Vec<Vec<String>>,
    functions: BTreeMap<String, (FuncDecl, Vec<usize>)>,
    predicates: BTreeMap<String, (PredDecl, Vec<bool>)>,
    assignment: BTreeMap<Var, usize>,
}

impl FiniteInterpretation {
    /// Empty tables; `sizes` follows the signature's sort order.
    pub fn new(signature: Signature, sizes: &[usize]) -> Result<Self, LogicError> {
        if sizes.len() != signature.sorts().len() {
            return Err(LogicError::BadArrangement(format!(
                "{} sizes given for {} sorts",
                sizes.len(),
                signature.sorts().len()
            )));
        }
        for (sort, &k) in signature.sorts().iter().zip(sizes) {
            if k == 0 {
                return Err(LogicError::EmptyDomain(sort.clone()));
            }
        }
        let names = sizes.iter().map(|&k| (0..k).map(|i| i.to_string()).collect()).collect();
        Ok(FiniteInterpretation {
            signature,
            names,
            functions: BTreeMap::new(),
            predicates: BTreeMap::new(),
            assignment: BTreeMap::new(),
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn size_of(&self, sort: &Sort) -> Result<usize, LogicError> {
        let i = self.sort_index(sort)?;
        Ok(self.names[i].len())
    }

    /// Total number of elements over all sorts.
    pub fn total_size(&self) -> usize {
        self.names.iter().map(Vec::len).sum()
    }

    fn sort_index(&self, sort: &Sort) -> Result<usize, LogicError> {
        self.signature.sort_index(sort).ok_or_else(|| LogicError::UnknownSort(sort.name().to_string()))
    }

    pub fn element_names(&self, sort: &Sort) -> Result<&[String], LogicError> {
        Ok(&self.names[self.sort_index(sort)?])
    }

    pub fn set_element_names(&mut self, sort: &Sort, names: Vec<String>) -> Result<(), LogicError> {
        let i = self.sort_index(sort)?;
        if names.len() != self.names[i].len() {
            return Err(LogicError::TableSize {
                symbol: sort.name().to_string(),
                expected: self.names[i].len(),
                found: names.len(),
            });
        }
        self.names[i] = names;
        Ok(())
    }

    fn arg_count(&self, args: &[Sort]) -> Result<usize, LogicError> {
        args.iter().try_fold(1usize, |acc, s| Ok(acc * self.size_of(s)?))
    }

    fn row(&self, args: &[Sort], values: &[usize]) -> Result<usize, LogicError> {
        let mut idx = 0;
        for (s, &v) in args.iter().zip(values) {
            let k = self.size_of(s)?;
            if v >= k {
                return Err(LogicError::ElementOutOfRange { sort: s.clone(), element: v, size: k });
            }
            idx = idx * k + v;
        }
        Ok(idx)
    }

    pub fn set_function(&mut self, name: &str, table: Vec<usize>) -> Result<(), LogicError> {
        let decl = self.signature.function(name).ok_or_else(|| LogicError::UnknownFunction(name.to_string()))?;
        let expected = self.arg_count(&decl.args)?;
        if table.len() != expected {
            return Err(LogicError::TableSize { symbol: name.to_string(), expected, found: table.len() });
        }
        let k = self.size_of(&decl.result)?;
        if let Some(&bad) = table.iter().find(|&&v| v >= k) {
            return Err(LogicError::ElementOutOfRange { sort: decl.result.clone(), element: bad, size: k });
        }
        self.functions.insert(name.to_string(), (decl, table));
        Ok(())
    }

    pub fn set_predicate(&mut self, name: &str, table: Vec<bool>) -> Result<(), LogicError> {
        let decl = self.signature.predicate(name).ok_or_else(|| LogicError::UnknownPredicate(name.to_string()))?;
        let expected = self.arg_count(&decl.args)?;
        if table.len() != expected {
            return Err(LogicError::TableSize { symbol: name.to_string(), expected, found: table.len() });
        }
        self.predicates.insert(name.to_string(), (decl, table));
        Ok(())
    }

    pub fn assign(&mut self, var: &Var, element: usize) -> Result<(), LogicError> {
        let k = self.size_of(var.sort())?;
        if element >= k {
            return Err(LogicError::ElementOutOfRange { sort: var.sort().clone(), element, size: k });
        }
        self.assignment.insert(var.clone(), element);
        Ok(())
    }

    pub fn unassign_all(&mut self) {
        self.assignment.clear();
    }

    pub fn value(&self, var: &Var) -> Option<usize> {
        self.assignment.get(var).copied()
    }

    pub fn assignment(&self) -> &BTreeMap<Var, usize> {
        &self.assignment
    }

    pub fn function_table(&self, name: &str) -> Option<&[usize]> {
        self.functions.get(name).map(|(_, t)| t.as_slice())
    }

    pub fn predicate_table(&self, name: &str) -> Option<&[bool]> {
        self.predicates.get(name).map(|(_, t)| t.as_slice())
    }

    pub fn function_names(&self) -> impl Iterator<Item = &str> {
        self.functions.keys().map(String::as_str)
    }

    pub fn predicate_names(&self) -> impl Iterator<Item = &str> {
        self.predicates.keys().map(String::as_str)
    }

    pub fn apply(&self, func: &str, args: &[usize]) -> Result<usize, LogicError> {
        let (decl, table) = self.functions.get(func).ok_or_else(|| LogicError::MissingFunction(func.to_string()))?;
        if decl.args.len() != args.len() {
            return Err(LogicError::Arity { symbol: func.to_string(), expected: decl.args.len(), found: args.len() });
        }
        Ok(table[self.row(&decl.args, args)?])
    }

    pub fn holds(&self, pred: &str, args: &[usize]) -> Result<bool, LogicError> {
        let (decl, table) = self.predicates.get(pred).ok_or_else(|| LogicError::MissingPredicate(pred.to_string()))?;
        if decl.args.len() != args.len() {
            return Err(LogicError::Arity { symbol: pred.to_string(), expected: decl.args.len(), found: args.len() });
        }
        Ok(table[self.row(&decl.args, args)?])
    }

    /// Every explicitly declared symbol has a table.
    pub fn is_total(&self) -> bool {
        self.signature.functions().iter().all(|f| self.functions.contains_key(&f.name))
            && self.signature.predicates().iter().all(|p| self.predicates.contains_key(&p.name))
    }

    /// A copy restricted to the given sort-wise element lists, renumbered in
    /// list order. Function tables must stay closed under the restriction.
    pub fn restrict(&self, keep: &[Vec<usize>]) -> Result<FiniteInterpretation, LogicError> {
        let sizes: Vec<usize> = keep.iter().map(Vec::len).collect();
        let mut out = FiniteInterpretation::new(self.signature.clone(), &sizes)?;
        let renum: Vec<BTreeMap<usize, usize>> =
            keep.iter().map(|els| els.iter().enumerate().map(|(new, &old)| (old, new)).collect()).collect();
        for (i, els) in keep.iter().enumerate() {
            out.names[i] = els.iter().map(|&e| self.names[i][e].clone()).collect();
        }
        let sort_pos = |s: &Sort| self.signature.sort_index(s).expect("declared sort");
        for (name, (decl, _)) in &self.functions {
            let arg_lists: Vec<&Vec<usize>> = decl.args.iter().map(|s| &keep[sort_pos(s)]).collect();
            let rsort = sort_pos(&decl.result);
            let mut table = Vec::new();
            for tuple in tuples(&arg_lists) {
                let v = self.apply(name, &tuple)?;
                let nv = *renum[rsort].get(&v).ok_or_else(|| {
                    LogicError::BadArrangement(format!("restriction not closed under `{name}`"))
                })?;
                table.push(nv);
            }
            out.functions.insert(name.clone(), (decl.clone(), table));
        }
        for (name, (decl, _)) in &self.predicates {
            let arg_lists: Vec<&Vec<usize>> = decl.args.iter().map(|s| &keep[sort_pos(s)]).collect();
            let table = tuples(&arg_lists).map(|t| self.holds(name, &t)).collect::<Result<Vec<_>, _>>()?;
            out.predicates.insert(name.clone(), (decl.clone(), table));
        }
        for (var, &val) in &self.assignment {
            if let Some(&nv) = renum[sort_pos(var.sort())].get(&val) {
                out.assignment.insert(var.clone(), nv);
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, phi: &Formula) -> Result<bool, LogicError> {
        let mut env = Vec::new();
        self.eval_formula(phi, &mut env)
    }

    pub fn eval_term(&self, t: &Term) -> Result<usize, LogicError> {
        self.term_value(t, &[])
    }

    fn lookup(&self, v: &Var, env: &[(Var, usize)]) -> Result<usize, LogicError> {
        if let Some((_, val)) = env.iter().rev().find(|(w, _)| w == v) {
            return Ok(*val);
        }
        self.assignment.get(v).copied().ok_or_else(|| LogicError::Unassigned(v.clone()))
    }

    fn term_value(&self, t: &Term, env: &[(Var, usize)]) -> Result<usize, LogicError> {
        match t {
            Term::Var(v) => {
                self.sort_index(v.sort())?;
                self.lookup(v, env)
            }
            Term::App { func, args, sort } => {
                let vals = args.iter().map(|a| self.term_value(a, env)).collect::<Result<Vec<_>, _>>()?;
                let (decl, _) =
                    self.functions.get(func).ok_or_else(|| LogicError::MissingFunction(func.clone()))?;
                for (expected, arg) in decl.args.iter().zip(args) {
                    if arg.sort() != expected {
                        return Err(LogicError::SortMismatch { expected: expected.clone(), found: arg.sort().clone() });
                    }
                }
                if &decl.result != sort {
                    return Err(LogicError::SortMismatch { expected: decl.result.clone(), found: sort.clone() });
                }
                self.apply(func, &vals)
            }
        }
    }

    fn eval_formula(&self, phi: &Formula, env: &mut Vec<(Var, usize)>) -> Result<bool, LogicError> {
        Ok(match phi {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(Atom::Eq(a, b)) => {
                if a.sort() != b.sort() {
                    return Err(LogicError::SortMismatch { expected: a.sort().clone(), found: b.sort().clone() });
                }
                self.term_value(a, env)? == self.term_value(b, env)?
            }
            Formula::Atom(Atom::Pred { name, args }) => {
                let vals = args.iter().map(|a| self.term_value(a, env)).collect::<Result<Vec<_>, _>>()?;
                let (decl, _) =
                    self.predicates.get(name).ok_or_else(|| LogicError::MissingPredicate(name.clone()))?;
                for (expected, arg) in decl.args.iter().zip(args) {
                    if arg.sort() != expected {
                        return Err(LogicError::SortMismatch { expected: expected.clone(), found: arg.sort().clone() });
                    }
                }
                self.holds(name, &vals)?
            }
            Formula::Not(p) => !self.eval_formula(p, env)?,
            Formula::And(ps) => {
                for p in ps {
                    if !self.eval_formula(p, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(ps) => {
                for p in ps {
                    if self.eval_formula(p, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.eval_formula(a, env)? || self.eval_formula(b, env)?,
            Formula::Exists(vs, body) => self.quantify(vs, body, env, true)?,
            Formula::Forall(vs, body) => self.quantify(vs, body, env, false)?,
        })
    }

    /// Existential (`want = true`) or universal quantification over `vs`.
    fn quantify(&self, vs: &[Var], body: &Formula, env: &mut Vec<(Var, usize)>, want: bool) -> Result<bool, LogicError> {
        let Some((first, rest)) = vs.split_first() else {
            return self.eval_formula(body, env);
        };
        for e in 0..self.size_of(first.sort())? {
            env.push((first.clone(), e));
            let r = self.quantify(rest, body, env, want);
            env.pop();
            if r? == want {
                return Ok(want);
            }
        }
        Ok(!want)
    }
}

/// Truth value of `phi` in `interp` under its assignment.
pub fn evaluate(interp: &FiniteInterpretation, phi: &Formula) -> Result<bool, LogicError> {
    interp.evaluate(phi)
}

/// Cartesian product of element lists, first list most significant.
pub(crate) fn tuples<'a>(lists: &'a [&'a Vec<usize>]) -> impl Iterator<Item = Vec<usize>> + 'a {
    let total: usize = lists.iter().map(|l| l.len()).product();
    (0..total).map(move |mut idx| {
        let mut out = vec![0; lists.len()];
        for (i, l) in lists.iter().enumerate().rev() {
            out[i] = l[idx % l.len()];
            idx /= l.len();
        }
        out
    })
}
