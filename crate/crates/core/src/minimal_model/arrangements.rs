//! Arrangements of a cube's variables that respect its flat literals.

use crate::logic::normal::Literal;
use crate::logic::{Arrangement, Atom, Term, Var};

/// A literal over variable indices; literals that are not flat are ignored.
enum Constraint {
    Same(usize, usize),
    Apart(usize, usize),
    Def { func: String, args: Vec<usize>, value: usize },
    Pred { name: String, args: Vec<usize>, positive: bool },
}

impl Constraint {
    fn indices(&self) -> Vec<usize> {
        match self {
            Constraint::Same(a, b) | Constraint::Apart(a, b) => vec![*a, *b],
            Constraint::Def { args, value, .. } => args.iter().copied().chain([*value]).collect(),
            Constraint::Pred { args, .. } => args.clone(),
        }
    }
}

fn index_of(vars: &[Var], t: &Term) -> Option<usize> {
    t.as_var().and_then(|v| vars.iter().position(|w| w == v))
}

fn arg_indices(vars: &[Var], args: &[Term]) -> Option<Vec<usize>> {
    args.iter().map(|a| index_of(vars, a)).collect()
}

fn constraint(vars: &[Var], lit: &Literal) -> Option<Constraint> {
    match &lit.atom {
        Atom::Eq(a, b) => {
            if let (Some(i), Some(j)) = (index_of(vars, a), index_of(vars, b)) {
                return Some(if lit.positive { Constraint::Same(i, j) } else { Constraint::Apart(i, j) });
            }
            if !lit.positive {
                return None;
            }
            let (app, value) = match (a, b) {
                (Term::App { .. }, Term::Var(_)) => (a, b),
                (Term::Var(_), Term::App { .. }) => (b, a),
                _ => return None,
            };
            let Term::App { func, args, .. } = app else { return None };
            Some(Constraint::Def { func: func.clone(), args: arg_indices(vars, args)?, value: index_of(vars, value)? })
        }
        Atom::Pred { name, args } => {
            Some(Constraint::Pred { name: name.clone(), args: arg_indices(vars, args)?, positive: lit.positive })
        }
    }
}

struct Search<'a> {
    vars: &'a [Var],
    constraints: Vec<Constraint>,
    /// Block label per variable; labels are global, so sorts never share one.
    label: Vec<usize>,
    blocks: Vec<usize>,
    out: Vec<Arrangement>,
}

impl Search<'_> {
    fn same(&self, a: &[usize], b: &[usize]) -> bool {
        a.iter().zip(b).all(|(&x, &y)| self.label[x] == self.label[y])
    }

    /// Checks every constraint over `0..=upto` that mentions `upto`.
    fn consistent(&self, upto: usize) -> bool {
        let done = |c: &Constraint| c.indices().iter().all(|&i| i <= upto);
        let active: Vec<&Constraint> = self.constraints.iter().filter(|c| done(c)).collect();
        for (k, c) in active.iter().enumerate() {
            let touches = c.indices().contains(&upto);
            match c {
                Constraint::Same(a, b) if touches && self.label[*a] != self.label[*b] => return false,
                Constraint::Apart(a, b) if touches && self.label[*a] == self.label[*b] => return false,
                Constraint::Def { func, args, value } => {
                    for d in &active[k + 1..] {
                        if let Constraint::Def { func: g, args: brgs, value: w } = d {
                            if !touches && !d.indices().contains(&upto) {
                                continue;
                            }
                            if func == g && self.same(args, brgs) && self.label[*value] != self.label[*w] {
                                return false;
                            }
                        }
                    }
                }
                Constraint::Pred { name, args, positive } => {
                    for d in &active[k + 1..] {
                        if let Constraint::Pred { name: m, args: brgs, positive: p } = d {
                            if !touches && !d.indices().contains(&upto) {
                                continue;
                            }
                            if name == m && positive != p && self.same(args, brgs) {
                                return false;
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        true
    }

    fn run(&mut self, i: usize) {
        if i == self.vars.len() {
            let mut grouped: Vec<Vec<Var>> = vec![Vec::new(); self.blocks.len()];
            for (v, &l) in self.vars.iter().zip(&self.label) {
                grouped[l].push(v.clone());
            }
            self.out.push(Arrangement::new(grouped).expect("labels respect sorts"));
            return;
        }
        let sort = self.vars[i].sort();
        for l in 0..=self.blocks.len() {
            let fresh = l == self.blocks.len();
            if !fresh && self.vars[self.blocks[l]].sort() != sort {
                continue;
            }
            self.label[i] = l;
            if fresh {
                self.blocks.push(i);
            }
            if self.consistent(i) {
                self.run(i + 1);
            }
            if fresh {
                self.blocks.pop();
            }
        }
    }
}

/// Every arrangement of `vars` under which no flat literal of `cube` is
/// false by equality reasoning alone: `v = w` and `v ≠ w` are respected,
/// equal arguments give equal function values, and a predicate is not both
/// true and false on equal arguments.
pub fn consistent_arrangements(cube: &[Literal], vars: &[Var]) -> Vec<Arrangement> {
    let mut search = Search {
        vars,
        constraints: cube.iter().filter_map(|l| constraint(vars, l)).collect(),
        label: vec![0; vars.len()],
        blocks: Vec::new(),
        out: Vec::new(),
    };
    search.run(0);
    search.out
}
