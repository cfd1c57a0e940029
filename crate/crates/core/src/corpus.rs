//! Seeded random formulas, flat conjunctions and arrangements.
//!
//! All randomness goes through one `ChaCha8Rng`, so a seed and a parameter
//! set determine the output bit for bit on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logic::normal::Literal;
use crate::logic::{Arrangement, Atom, Formula, FuncDecl, Signature, Sort, Term, Var};
use crate::witness::FlatConjunction;

/// Shape limits for generated formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusParams {
    /// Variables per sort.
    pub vars: usize,
    /// Maximum number of literals (at least one is generated).
    pub literals: usize,
    /// Maximum function nesting inside a term.
    pub depth: usize,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { vars: 3, literals: 4, depth: 2 }
    }
}

/// Variable names per sort position: `x0, x1, …`, `y0, …`, then `z`, `u`, `v`.
pub fn corpus_vars(sig: &Signature, per_sort: usize) -> Vec<Var> {
    const PREFIXES: [&str; 5] = ["x", "y", "z", "u", "v"];
    sig.sorts()
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            let prefix = PREFIXES.get(i).copied().unwrap_or("v");
            (0..per_sort).map(move |k| Var::new(format!("{prefix}{k}"), s.clone()))
        })
        .collect()
}

pub struct FormulaGen {
    sig: Signature,
    vars: Vec<Var>,
    params: CorpusParams,
    rng: ChaCha8Rng,
}

impl FormulaGen {
    /// Only the concretely declared symbols of `sig` are used; families are
    /// ignored.
    pub fn new(sig: &Signature, seed: u64, params: CorpusParams) -> Self {
        FormulaGen {
            sig: sig.clone(),
            vars: corpus_vars(sig, params.vars.max(1)),
            params,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    fn var_of(&mut self, sort: &Sort) -> Var {
        let pool: Vec<&Var> = self.vars.iter().filter(|v| v.sort() == sort).collect();
        (*pool.choose(&mut self.rng).expect("every sort has variables")).clone()
    }

    fn functions_into(&self, sort: &Sort) -> Vec<FuncDecl> {
        self.sig.functions().iter().filter(|f| &f.result == sort).cloned().collect()
    }

    pub fn term(&mut self, sort: &Sort, depth: usize) -> Term {
        let funcs = self.functions_into(sort);
        if depth == 0 || funcs.is_empty() || self.rng.gen_bool(0.5) {
            return Term::Var(self.var_of(sort));
        }
        let decl = funcs.choose(&mut self.rng).expect("non-empty").clone();
        let args = decl.args.iter().map(|s| self.term(s, depth - 1)).collect();
        Term::App { func: decl.name.clone(), args, sort: decl.result.clone() }
    }

    pub fn literal(&mut self) -> Literal {
        let preds = self.sig.predicates().to_vec();
        let atom = if !preds.is_empty() && self.rng.gen_bool(0.4) {
            let decl = preds.choose(&mut self.rng).expect("non-empty").clone();
            let depth = self.params.depth;
            Atom::Pred { name: decl.name.clone(), args: decl.args.iter().map(|s| self.term(s, depth)).collect() }
        } else {
            let sort = self.sig.sorts().choose(&mut self.rng).expect("signature has sorts").clone();
            let depth = self.params.depth;
            Atom::Eq(self.term(&sort, depth), self.term(&sort, depth))
        };
        Literal { positive: self.rng.gen_bool(0.6), atom }
    }

    /// A conjunction of between one and `literals` literals.
    pub fn conjunction(&mut self) -> Formula {
        let n = self.rng.gen_range(1..=self.params.literals.max(1));
        Formula::conj((0..n).map(|_| self.literal().to_formula()).collect())
    }

    /// Literals combined by a random tree of `and`, `or` and `not`.
    pub fn formula(&mut self) -> Formula {
        let n = self.rng.gen_range(1..=self.params.literals.max(1));
        let mut parts: Vec<Formula> = (0..n).map(|_| self.literal().to_formula()).collect();
        while parts.len() > 1 {
            let i = self.rng.gen_range(0..parts.len() - 1);
            let b = parts.remove(i + 1);
            let a = parts.remove(i);
            let joined = match self.rng.gen_range(0..5) {
                0 | 1 => Formula::And(vec![a, b]),
                2 | 3 => Formula::Or(vec![a, b]),
                _ => Formula::not(Formula::And(vec![a, b])),
            };
            parts.insert(i, joined);
        }
        parts.pop().expect("one part")
    }

    /// A flat conjunction over unary functions and variables: literals
    /// `f(v)=w`, `v=w`, `v≠w` and `±P(v⃗)`.
    pub fn flat_conjunction(&mut self) -> FlatConjunction {
        let n = self.rng.gen_range(1..=self.params.literals.max(1));
        let lits = (0..n)
            .map(|_| {
                let funcs = self.sig.functions().to_vec();
                let preds = self.sig.predicates().to_vec();
                match self.rng.gen_range(0..4) {
                    0 | 1 if !funcs.is_empty() => {
                        let decl = funcs.choose(&mut self.rng).expect("non-empty").clone();
                        let args = decl.args.iter().map(|s| Term::Var(self.var_of(s))).collect();
                        let app = Term::App { func: decl.name.clone(), args, sort: decl.result.clone() };
                        Literal { positive: true, atom: Atom::Eq(app, Term::Var(self.var_of(&decl.result))) }
                    }
                    2 if !preds.is_empty() => {
                        let decl = preds.choose(&mut self.rng).expect("non-empty").clone();
                        let args = decl.args.iter().map(|s| Term::Var(self.var_of(s))).collect();
                        Literal { positive: self.rng.gen_bool(0.6), atom: Atom::Pred { name: decl.name, args } }
                    }
                    _ => {
                        let sort = self.sig.sorts().choose(&mut self.rng).expect("signature has sorts").clone();
                        let (a, b) = (self.var_of(&sort), self.var_of(&sort));
                        Literal { positive: self.rng.gen_bool(0.5), atom: Atom::Eq(Term::Var(a), Term::Var(b)) }
                    }
                }
            })
            .collect();
        FlatConjunction::from_literals(lits).expect("generated literals are flat")
    }

    /// A uniformly chosen restricted-growth labelling of `vars`, per sort.
    pub fn arrangement(&mut self, vars: &[Var]) -> Arrangement {
        let mut blocks: Vec<Vec<Var>> = Vec::new();
        for v in vars {
            let same_sort: Vec<usize> =
                (0..blocks.len()).filter(|&b| blocks[b][0].sort() == v.sort()).collect();
            let choice = self.rng.gen_range(0..=same_sort.len());
            match same_sort.get(choice) {
                Some(&b) => blocks[b].push(v.clone()),
                None => blocks.push(vec![v.clone()]),
            }
        }
        Arrangement::new(blocks).expect("sort-respecting by construction")
    }
}

/// `count` formulas from [`FormulaGen::formula`].
pub fn formula_corpus(sig: &Signature, seed: u64, count: usize, params: CorpusParams) -> Vec<Formula> {
    let mut g = FormulaGen::new(sig, seed, params);
    (0..count).map(|_| g.formula()).collect()
}
