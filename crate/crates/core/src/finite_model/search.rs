//! Backtracking search for models of a quantifier-free formula at fixed
//! domain sizes.
//!
//! Cells (variables, then table entries ordered by their largest argument)
//! are filled one at a time. A cell of sort `s` may only take values up to
//! one past the largest element of `s` mentioned so far, which keeps at
//! least one representative of every isomorphism class. After each
//! assignment the formula is evaluated three-valued and the model class may
//! veto the partial structure.

use std::collections::HashMap;
use std::ops::ControlFlow;

use super::{ModelClass, ModelError};
use crate::logic::{Atom, FiniteInterpretation, Formula, LogicError, Signature, Term, Var};

/// Marker for an unfilled function cell.
pub const UNDEF: usize = usize::MAX;
const PRED_UNDEF: u8 = 2;

/// Read-only view of a partially filled structure, handed to model classes
/// for pruning.
pub struct PartialStructure<'a> {
    sizes: &'a [usize],
    func_names: &'a [String],
    func_tables: &'a [Vec<usize>],
    pred_names: &'a [String],
    pred_tables: &'a [Vec<u8>],
}

impl PartialStructure<'_> {
    pub fn sizes(&self) -> &[usize] {
        self.sizes
    }

    /// Function table with [`UNDEF`] for unfilled cells.
    pub fn function(&self, name: &str) -> Option<&[usize]> {
        let i = self.func_names.iter().position(|n| n == name)?;
        Some(&self.func_tables[i])
    }

    /// Predicate entry, `None` when unfilled or unknown.
    pub fn predicate(&self, name: &str, row: usize) -> Option<bool> {
        let i = self.pred_names.iter().position(|n| n == name)?;
        match self.pred_tables[i][row] {
            PRED_UNDEF => None,
            b => Some(b == 1),
        }
    }

    pub fn predicate_len(&self, name: &str) -> Option<usize> {
        let i = self.pred_names.iter().position(|n| n == name)?;
        Some(self.pred_tables[i].len())
    }
}

#[derive(Clone, Debug)]
enum Node {
    Var(usize),
    App(usize, Vec<usize>),
}

#[derive(Clone, Debug)]
enum Cf {
    Const(bool),
    Eq(usize, usize),
    Pred(usize, Vec<usize>),
    Not(Box<Cf>),
    And(Vec<Cf>),
    Or(Vec<Cf>),
}

#[derive(Clone, Copy, Debug)]
enum Cell {
    Var(usize),
    Func(usize, usize),
    Pred(usize, usize),
}

struct Symbol {
    name: String,
    args: Vec<usize>,
    result: Option<usize>,
}

/// A compiled search problem.
pub struct ModelSearch<'a, C: ModelClass + ?Sized> {
    class: &'a C,
    sig: Signature,
    sizes: Vec<usize>,
    vars: Vec<Var>,
    var_sorts: Vec<usize>,
    funcs: Vec<Symbol>,
    preds: Vec<Symbol>,
    nodes: Vec<Node>,
    formula: Cf,
    cells: Vec<(Cell, isize)>,
}

impl<'a, C: ModelClass + ?Sized> ModelSearch<'a, C> {
    /// `extra_vars` are assigned in addition to the formula's variables.
    pub fn new(class: &'a C, phi: &Formula, sizes: &[usize], extra_vars: &[Var]) -> Result<Self, ModelError> {
        phi.require_quantifier_free()?;
        let sig = class.signature().instantiate_for(phi)?;
        phi.check(&sig)?;
        if sizes.len() != sig.sorts().len() {
            return Err(ModelError::SortsMismatch);
        }
        if sizes.contains(&0) {
            return Err(LogicError::ZeroCardinality.into());
        }
        let sort_ix = |s: &crate::logic::Sort| sig.sort_index(s).expect("checked sort");
        let mut vars: Vec<Var> = phi.vars().into_iter().collect();
        for v in extra_vars {
            sig.sort_index(v.sort()).ok_or_else(|| LogicError::UnknownSort(v.sort().name().to_string()))?;
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        let var_sorts = vars.iter().map(|v| sort_ix(v.sort())).collect();
        let funcs: Vec<Symbol> = sig
            .functions()
            .iter()
            .map(|f| Symbol {
                name: f.name.clone(),
                args: f.args.iter().map(sort_ix).collect(),
                result: Some(sort_ix(&f.result)),
            })
            .collect();
        let preds: Vec<Symbol> = sig
            .predicates()
            .iter()
            .map(|p| Symbol { name: p.name.clone(), args: p.args.iter().map(sort_ix).collect(), result: None })
            .collect();

        let mut search = ModelSearch {
            class,
            sizes: sizes.to_vec(),
            vars,
            var_sorts,
            funcs,
            preds,
            nodes: Vec::new(),
            formula: Cf::Const(true),
            cells: Vec::new(),
            sig,
        };
        let mut memo = HashMap::new();
        search.formula = search.compile(phi, &mut memo);
        search.cells = search.order_cells();
        Ok(search)
    }

    fn compile_term(&mut self, t: &Term, memo: &mut HashMap<Term, usize>) -> usize {
        if let Some(&id) = memo.get(t) {
            return id;
        }
        let node = match t {
            Term::Var(v) => Node::Var(self.vars.iter().position(|w| w == v).expect("collected variable")),
            Term::App { func, args, .. } => {
                let f = self.funcs.iter().position(|s| &s.name == func).expect("instantiated function");
                let ids = args.iter().map(|a| self.compile_term(a, memo)).collect();
                Node::App(f, ids)
            }
        };
        self.nodes.push(node);
        memo.insert(t.clone(), self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn compile(&mut self, phi: &Formula, memo: &mut HashMap<Term, usize>) -> Cf {
        match phi {
            Formula::True => Cf::Const(true),
            Formula::False => Cf::Const(false),
            Formula::Atom(Atom::Eq(a, b)) => Cf::Eq(self.compile_term(a, memo), self.compile_term(b, memo)),
            Formula::Atom(Atom::Pred { name, args }) => {
                let p = self.preds.iter().position(|s| &s.name == name).expect("instantiated predicate");
                Cf::Pred(p, args.iter().map(|a| self.compile_term(a, memo)).collect())
            }
            Formula::Not(p) => Cf::Not(Box::new(self.compile(p, memo))),
            Formula::And(ps) => Cf::And(ps.iter().map(|p| self.compile(p, memo)).collect()),
            Formula::Or(ps) => Cf::Or(ps.iter().map(|p| self.compile(p, memo)).collect()),
            Formula::Implies(a, b) => {
                Cf::Or(vec![Cf::Not(Box::new(self.compile(a, memo))), self.compile(b, memo)])
            }
            Formula::Exists(..) | Formula::Forall(..) => unreachable!("checked quantifier-free"),
        }
    }

    fn table_len(&self, args: &[usize]) -> usize {
        args.iter().map(|&s| self.sizes[s]).product()
    }

    fn decode_row(&self, args: &[usize], mut row: usize) -> Vec<usize> {
        let mut out = vec![0; args.len()];
        for (i, &s) in args.iter().enumerate().rev() {
            out[i] = row % self.sizes[s];
            row /= self.sizes[s];
        }
        out
    }

    fn order_cells(&self) -> Vec<(Cell, isize)> {
        let mut cells: Vec<(Cell, isize)> = (0..self.vars.len()).map(|v| (Cell::Var(v), -2)).collect();
        let mut rest = Vec::new();
        for (fi, f) in self.funcs.iter().enumerate() {
            for row in 0..self.table_len(&f.args) {
                let stage = self.decode_row(&f.args, row).into_iter().max().map_or(-1, |m| m as isize);
                rest.push((stage, 0, fi, row, Cell::Func(fi, row)));
            }
        }
        for (pi, p) in self.preds.iter().enumerate() {
            for row in 0..self.table_len(&p.args) {
                let stage = self.decode_row(&p.args, row).into_iter().max().map_or(-1, |m| m as isize);
                rest.push((stage, 1, pi, row, Cell::Pred(pi, row)));
            }
        }
        rest.sort_by_key(|&(stage, kind, sym, row, _)| (stage, kind, sym, row));
        cells.extend(rest.into_iter().map(|(stage, _, _, _, c)| (c, stage)));
        cells
    }

    /// Calls `visit` on every model found, until it breaks.
    pub fn for_each(&self, mut visit: impl FnMut(FiniteInterpretation) -> ControlFlow<()>) {
        if !self.class.admits_sizes(&self.sizes) {
            return;
        }
        let mut st = State {
            vals: vec![UNDEF; self.vars.len()],
            funcs: self.funcs.iter().map(|f| vec![UNDEF; self.table_len(&f.args)]).collect(),
            preds: self.preds.iter().map(|p| vec![PRED_UNDEF; self.table_len(&p.args)]).collect(),
            mdn: vec![-1; self.sizes.len()],
        };
        let func_names: Vec<String> = self.funcs.iter().map(|f| f.name.clone()).collect();
        let pred_names: Vec<String> = self.preds.iter().map(|p| p.name.clone()).collect();
        let names = (func_names, pred_names);
        let _ = self.dfs(0, &mut st, false, &names, &mut visit);
    }

    /// The first model found, if any.
    pub fn first(&self) -> Option<FiniteInterpretation> {
        let mut found = None;
        self.for_each(|m| {
            found = Some(m);
            ControlFlow::Break(())
        });
        found
    }

    fn dfs(
        &self,
        i: usize,
        st: &mut State,
        decided: bool,
        names: &(Vec<String>, Vec<String>),
        visit: &mut impl FnMut(FiniteInterpretation) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if i == self.cells.len() {
            let model = self.build(st);
            if self.class.contains(&model) {
                return visit(model);
            }
            return ControlFlow::Continue(());
        }
        let (cell, stage) = self.cells[i];
        let saved = st.mdn.clone();
        if stage >= 0 {
            for (s, m) in st.mdn.iter_mut().enumerate() {
                if self.sizes[s] as isize > stage {
                    *m = (*m).max(stage);
                }
            }
        }
        let result = match cell {
            Cell::Pred(p, row) => {
                let mut r = ControlFlow::Continue(());
                for b in [0u8, 1] {
                    st.preds[p][row] = b;
                    r = self.step(i, st, decided, names, visit);
                    if r.is_break() {
                        break;
                    }
                }
                st.preds[p][row] = PRED_UNDEF;
                r
            }
            Cell::Var(_) | Cell::Func(..) => {
                let sort = match cell {
                    Cell::Var(v) => self.var_sorts[v],
                    Cell::Func(f, _) => self.funcs[f].result.expect("function result"),
                    Cell::Pred(..) => unreachable!(),
                };
                let upper = ((st.mdn[sort] + 1) as usize).min(self.sizes[sort] - 1);
                let mut r = ControlFlow::Continue(());
                for v in 0..=upper {
                    match cell {
                        Cell::Var(x) => st.vals[x] = v,
                        Cell::Func(f, row) => st.funcs[f][row] = v,
                        Cell::Pred(..) => unreachable!(),
                    }
                    let before = st.mdn[sort];
                    st.mdn[sort] = before.max(v as isize);
                    r = self.step(i, st, decided, names, visit);
                    st.mdn[sort] = before;
                    if r.is_break() {
                        break;
                    }
                }
                match cell {
                    Cell::Var(x) => st.vals[x] = UNDEF,
                    Cell::Func(f, row) => st.funcs[f][row] = UNDEF,
                    Cell::Pred(..) => unreachable!(),
                }
                r
            }
        };
        st.mdn = saved;
        result
    }

    fn step(
        &self,
        i: usize,
        st: &mut State,
        decided: bool,
        names: &(Vec<String>, Vec<String>),
        visit: &mut impl FnMut(FiniteInterpretation) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let mut now_decided = decided;
        if !decided {
            match self.eval(&self.formula, st) {
                Some(false) => return ControlFlow::Continue(()),
                Some(true) => now_decided = true,
                None => {}
            }
        }
        let view = PartialStructure {
            sizes: &self.sizes,
            func_names: &names.0,
            func_tables: &st.funcs,
            pred_names: &names.1,
            pred_tables: &st.preds,
        };
        if self.class.excludes_partial(&view) {
            return ControlFlow::Continue(());
        }
        self.dfs(i + 1, st, now_decided, names, visit)
    }

    fn term(&self, id: usize, st: &State) -> Option<usize> {
        match &self.nodes[id] {
            Node::Var(v) => Some(st.vals[*v]).filter(|&x| x != UNDEF),
            Node::App(f, args) => {
                let sym = &self.funcs[*f];
                let mut row = 0;
                for (&a, &s) in args.iter().zip(&sym.args) {
                    row = row * self.sizes[s] + self.term(a, st)?;
                }
                Some(st.funcs[*f][row]).filter(|&x| x != UNDEF)
            }
        }
    }

    fn eval(&self, cf: &Cf, st: &State) -> Option<bool> {
        match cf {
            Cf::Const(b) => Some(*b),
            Cf::Eq(a, b) => Some(self.term(*a, st)? == self.term(*b, st)?),
            Cf::Pred(p, args) => {
                let sym = &self.preds[*p];
                let mut row = 0;
                for (&a, &s) in args.iter().zip(&sym.args) {
                    row = row * self.sizes[s] + self.term(a, st)?;
                }
                match st.preds[*p][row] {
                    PRED_UNDEF => None,
                    b => Some(b == 1),
                }
            }
            Cf::Not(p) => self.eval(p, st).map(|b| !b),
            Cf::And(ps) => {
                let mut all = Some(true);
                for p in ps {
                    match self.eval(p, st) {
                        Some(false) => return Some(false),
                        None => all = None,
                        Some(true) => {}
                    }
                }
                all
            }
            Cf::Or(ps) => {
                let mut any = Some(false);
                for p in ps {
                    match self.eval(p, st) {
                        Some(true) => return Some(true),
                        None => any = None,
                        Some(false) => {}
                    }
                }
                any
            }
        }
    }

    fn build(&self, st: &State) -> FiniteInterpretation {
        let mut m = FiniteInterpretation::new(self.sig.clone(), &self.sizes).expect("positive sizes");
        for (f, table) in self.funcs.iter().zip(&st.funcs) {
            m.set_function(&f.name, table.clone()).expect("complete table");
        }
        for (p, table) in self.preds.iter().zip(&st.preds) {
            m.set_predicate(&p.name, table.iter().map(|&b| b == 1).collect()).expect("complete table");
        }
        for (v, &val) in self.vars.iter().zip(&st.vals) {
            m.assign(v, val).expect("in range");
        }
        m
    }
}

struct State {
    vals: Vec<usize>,
    funcs: Vec<Vec<usize>>,
    preds: Vec<Vec<u8>>,
    mdn: Vec<isize>,
}
