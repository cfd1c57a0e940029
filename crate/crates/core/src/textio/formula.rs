use std::collections::{BTreeMap, BTreeSet};

use super::sexpr::{error, parse_all, Pos, SExpr};
use super::{ParseError, ParseErrorKind};
use crate::logic::{
    cardinality_sentence, cycle_formula, distinct_formula, Atom, CardKind, Formula, LogicError, Signature, Sort, Term, Var, FUNC_F,
    SIGMA1,
};

use ParseErrorKind::{Arity, Sort as SortErr, Syntax, UnknownSymbol};

const KEYWORDS: &[&str] =
    &["true", "false", "not", "and", "or", "=>", "=", "exists", "forall", "as", "cycle", "distinct", "card>=", "card<=", "card="];

/// Parses one formula in the S-expression syntax.
///
/// Free variables take their sort from an `(as x sort)` annotation, from an
/// argument position, or from an equation with a term of known sort; any
/// variable still unconstrained gets the signature's default sort.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let exprs = parse_all(text)?;
    let expr = match exprs.as_slice() {
        [one] => one,
        [] => return Err(error(ParseErrorKind::UnexpectedEof, Pos { line: 1, col: 1 }, "expected a formula")),
        [_, extra, ..] => return Err(error(Syntax, extra.pos(), "trailing input after formula")),
    };
    let mut inf = Inference::default();
    inf.formula(expr, sig, &mut Vec::new())?;
    let sorts = inf.resolve(sig)?;
    Builder { sig, free: sorts }.formula(expr, &mut Vec::new())
}

/// Byte-level entry point; invalid UTF-8 is reported with its position.
pub fn parse_formula_bytes(bytes: &[u8], sig: &Signature) -> Result<Formula, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_formula(text, sig),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).expect("valid prefix");
            let line = 1 + valid.matches('\n').count();
            let col = 1 + valid.rsplit('\n').next().map_or(0, |l| l.chars().count());
            Err(ParseError { kind: ParseErrorKind::InvalidUtf8, line, col, message: "invalid UTF-8".into() })
        }
    }
}

type Scope = Vec<(String, Sort)>;

fn bound_sort<'a>(scope: &'a Scope, name: &str) -> Option<&'a Sort> {
    scope.iter().rev().find(|(n, _)| n == name).map(|(_, s)| s)
}

fn atom_name(e: &SExpr) -> Option<&str> {
    e.as_atom()
}

fn list_head(items: &[SExpr]) -> Option<&str> {
    items.first().and_then(atom_name)
}

/// Constraint collection for free-variable sorts.
#[derive(Default)]
struct Inference {
    known: Vec<(String, Sort, Pos)>,
    links: Vec<(String, String)>,
    seen: BTreeSet<String>,
}

enum TermShape {
    Free(String),
    Known(Sort),
    Unknown,
}

impl Inference {
    fn shape(&mut self, e: &SExpr, sig: &Signature, scope: &Scope) -> TermShape {
        match e {
            SExpr::Atom(name, _) => {
                if let Some(s) = bound_sort(scope, name) {
                    TermShape::Known(s.clone())
                } else if let Some(decl) = sig.function(name).filter(|d| d.args.is_empty()) {
                    TermShape::Known(decl.result)
                } else {
                    self.seen.insert(name.clone());
                    TermShape::Free(name.clone())
                }
            }
            SExpr::List(items, _) => match list_head(items) {
                Some("as") if items.len() == 3 => match items[2].as_atom().and_then(|s| sig.sort(s)) {
                    Some(s) => TermShape::Known(s.clone()),
                    None => TermShape::Unknown,
                },
                Some(f) => sig.function(f).map_or(TermShape::Unknown, |d| TermShape::Known(d.result)),
                None => TermShape::Unknown,
            },
        }
    }

    fn expect(&mut self, e: &SExpr, sort: &Sort, sig: &Signature, scope: &Scope) -> Result<(), ParseError> {
        if let TermShape::Free(name) = self.shape(e, sig, scope) {
            self.known.push((name, sort.clone(), e.pos()));
        }
        self.term(e, sig, scope)
    }

    fn term(&mut self, e: &SExpr, sig: &Signature, scope: &Scope) -> Result<(), ParseError> {
        let SExpr::List(items, pos) = e else {
            self.shape(e, sig, scope);
            return Ok(());
        };
        let head = list_head(items).ok_or_else(|| error(Syntax, *pos, "expected a function symbol"))?;
        if head == "as" {
            let [_, var, sort] = items.as_slice() else {
                return Err(error(Syntax, *pos, "expected (as <var> <sort>)"));
            };
            let name = var.as_atom().ok_or_else(|| error(Syntax, var.pos(), "expected a variable"))?;
            let sname = sort.as_atom().ok_or_else(|| error(Syntax, sort.pos(), "expected a sort"))?;
            let s = sig.sort(sname).ok_or_else(|| error(UnknownSymbol, sort.pos(), format!("unknown sort `{sname}`")))?;
            if bound_sort(scope, name).is_none() {
                self.seen.insert(name.to_string());
                self.known.push((name.to_string(), s.clone(), var.pos()));
            }
            return Ok(());
        }
        if let Some(decl) = sig.function(head) {
            if decl.args.len() == items.len() - 1 {
                for (arg, s) in items[1..].iter().zip(&decl.args) {
                    self.expect(arg, s, sig, scope)?;
                }
                return Ok(());
            }
        }
        for arg in &items[1..] {
            self.term(arg, sig, scope)?;
        }
        Ok(())
    }

    fn relate(&mut self, a: &SExpr, b: &SExpr, sig: &Signature, scope: &Scope) {
        match (self.shape(a, sig, scope), self.shape(b, sig, scope)) {
            (TermShape::Free(x), TermShape::Free(y)) => self.links.push((x, y)),
            (TermShape::Free(x), TermShape::Known(s)) => self.known.push((x, s, a.pos())),
            (TermShape::Known(s), TermShape::Free(y)) => self.known.push((y, s, b.pos())),
            _ => {}
        }
    }

    fn formula(&mut self, e: &SExpr, sig: &Signature, scope: &mut Scope) -> Result<(), ParseError> {
        let SExpr::List(items, pos) = e else { return Ok(()) };
        let Some(head) = list_head(items) else { return Ok(()) };
        let args = &items[1..];
        match head {
            "not" | "and" | "or" | "=>" => {
                for a in args {
                    self.formula(a, sig, scope)?;
                }
            }
            "=" => {
                if let [a, b] = args {
                    self.relate(a, b, sig, scope);
                    self.term(a, sig, scope)?;
                    self.term(b, sig, scope)?;
                }
            }
            "exists" | "forall" => {
                if let [binders, body] = args {
                    let depth = scope.len();
                    for (name, sort) in parse_binders(binders, sig)? {
                        scope.push((name, sort));
                    }
                    self.formula(body, sig, scope)?;
                    scope.truncate(depth);
                }
            }
            "cycle" => {
                if let [_, x] = args {
                    let arg = sig.function(FUNC_F).and_then(|d| d.args.first().cloned());
                    let arg = arg.ok_or_else(|| error(UnknownSymbol, *pos, "`cycle` needs a unary function `f`"))?;
                    self.expect(x, &arg, sig, scope)?;
                }
            }
            "distinct" => {
                for w in args.windows(2) {
                    self.relate(&w[0], &w[1], sig, scope);
                }
                for a in args {
                    self.term(a, sig, scope)?;
                }
            }
            "card>=" | "card<=" | "card=" => {}
            p => {
                if let Some(decl) = sig.predicate(p) {
                    if decl.args.len() == args.len() {
                        for (arg, s) in args.iter().zip(&decl.args) {
                            self.expect(arg, s, sig, scope)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn resolve(self, sig: &Signature) -> Result<BTreeMap<String, Sort>, ParseError> {
        let names: Vec<String> = self.seen.iter().cloned().collect();
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut parent: Vec<usize> = (0..names.len()).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for (a, b) in &self.links {
            let (ra, rb) = (find(&mut parent, index[a.as_str()]), find(&mut parent, index[b.as_str()]));
            parent[ra] = rb;
        }
        let mut class_sort: BTreeMap<usize, Sort> = BTreeMap::new();
        for (name, sort, pos) in &self.known {
            let root = find(&mut parent, index[name.as_str()]);
            match class_sort.get(&root) {
                Some(prev) if prev != sort => {
                    return Err(error(SortErr, *pos, format!("`{name}` used at sorts {prev} and {sort}")));
                }
                _ => {
                    class_sort.insert(root, sort.clone());
                }
            }
        }
        let default = sig.default_sort().cloned();
        let mut out = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            let root = find(&mut parent, i);
            let sort = match class_sort.get(&root) {
                Some(s) => s.clone(),
                None => default.clone().ok_or_else(|| {
                    error(SortErr, Pos { line: 1, col: 1 }, "signature declares no sorts")
                })?,
            };
            out.insert(name.clone(), sort);
        }
        Ok(out)
    }
}

fn parse_binders(e: &SExpr, sig: &Signature) -> Result<Vec<(String, Sort)>, ParseError> {
    let SExpr::List(items, _) = e else {
        return Err(error(Syntax, e.pos(), "expected a binder list ((x sort) ...)"));
    };
    let mut out = Vec::new();
    for b in items {
        let SExpr::List(pair, pos) = b else {
            return Err(error(Syntax, b.pos(), "expected (x sort)"));
        };
        let [name, sort] = pair.as_slice() else {
            return Err(error(Syntax, *pos, "expected (x sort)"));
        };
        let name = name.as_atom().ok_or_else(|| error(Syntax, name.pos(), "expected a variable name"))?;
        check_var_name(name, b.pos())?;
        let sname = sort.as_atom().ok_or_else(|| error(Syntax, sort.pos(), "expected a sort name"))?;
        let s = sig.sort(sname).ok_or_else(|| error(UnknownSymbol, sort.pos(), format!("unknown sort `{sname}`")))?;
        out.push((name.to_string(), s.clone()));
    }
    Ok(out)
}

fn check_var_name(name: &str, pos: Pos) -> Result<(), ParseError> {
    if KEYWORDS.contains(&name) {
        return Err(error(Syntax, pos, format!("`{name}` is reserved")));
    }
    if name.parse::<i64>().is_ok() {
        return Err(error(Syntax, pos, format!("`{name}` is not a variable name")));
    }
    Ok(())
}

struct Builder<'a> {
    sig: &'a Signature,
    free: BTreeMap<String, Sort>,
}

impl Builder<'_> {
    fn var(&self, name: &str, pos: Pos, scope: &Scope) -> Result<Var, ParseError> {
        check_var_name(name, pos)?;
        if let Some(s) = bound_sort(scope, name) {
            return Ok(Var::new(name, s.clone()));
        }
        let s = self.free.get(name).ok_or_else(|| error(UnknownSymbol, pos, format!("unknown symbol `{name}`")))?;
        Ok(Var::new(name, s.clone()))
    }

    fn term(&self, e: &SExpr, scope: &Scope) -> Result<Term, ParseError> {
        match e {
            SExpr::Atom(name, pos) => {
                if bound_sort(scope, name).is_none() {
                    if let Some(decl) = self.sig.function(name) {
                        if !decl.args.is_empty() {
                            return Err(error(Arity, *pos, format!("`{name}` expects {} arguments", decl.args.len())));
                        }
                        return Ok(Term::App { func: name.clone(), args: Vec::new(), sort: decl.result });
                    }
                    if self.sig.predicate(name).is_some() {
                        return Err(error(Syntax, *pos, format!("predicate `{name}` used as a term")));
                    }
                }
                Ok(Term::Var(self.var(name, *pos, scope)?))
            }
            SExpr::List(items, pos) => {
                let head = list_head(items).ok_or_else(|| error(Syntax, *pos, "expected a function symbol"))?;
                if head == "as" {
                    let [_, var, sort] = items.as_slice() else {
                        return Err(error(Syntax, *pos, "expected (as <var> <sort>)"));
                    };
                    let name = var.as_atom().ok_or_else(|| error(Syntax, var.pos(), "expected a variable"))?;
                    let v = self.var(name, var.pos(), scope)?;
                    let sname = sort.as_atom().unwrap_or_default();
                    if v.sort().name() != sname {
                        return Err(error(SortErr, sort.pos(), format!("`{name}` has sort {}", v.sort())));
                    }
                    return Ok(Term::Var(v));
                }
                let decl = self
                    .sig
                    .function(head)
                    .ok_or_else(|| error(UnknownSymbol, items[0].pos(), format!("unknown function `{head}`")))?;
                let args = &items[1..];
                if decl.args.len() != args.len() {
                    return Err(error(
                        Arity,
                        *pos,
                        format!("`{head}` expects {} arguments, got {}", decl.args.len(), args.len()),
                    ));
                }
                let mut built = Vec::new();
                for (arg, expected) in args.iter().zip(&decl.args) {
                    let t = self.term(arg, scope)?;
                    if t.sort() != expected {
                        return Err(error(SortErr, arg.pos(), format!("expected sort {expected}, found {}", t.sort())));
                    }
                    built.push(t);
                }
                Ok(Term::App { func: head.to_string(), args: built, sort: decl.result })
            }
        }
    }

    fn number(&self, e: &SExpr) -> Result<usize, ParseError> {
        e.as_atom()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| error(Syntax, e.pos(), "expected a non-negative integer"))
    }

    fn formula(&self, e: &SExpr, scope: &mut Scope) -> Result<Formula, ParseError> {
        let (items, pos) = match e {
            SExpr::Atom(name, pos) => {
                return match name.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    _ => match self.sig.predicate(name) {
                        Some(d) if d.args.is_empty() => Ok(Formula::pred(name, Vec::new())),
                        Some(d) => Err(error(Arity, *pos, format!("`{name}` expects {} arguments", d.args.len()))),
                        None => Err(error(UnknownSymbol, *pos, format!("unknown predicate `{name}`"))),
                    },
                }
            }
            SExpr::List(items, pos) => (items, *pos),
        };
        let head = list_head(items).ok_or_else(|| error(Syntax, pos, "expected an operator"))?;
        let args = &items[1..];
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(error(Arity, pos, format!("`{head}` expects {n} arguments, got {}", args.len())))
            }
        };
        let sugar = |r: Result<Formula, LogicError>| {
            r.map_err(|err| {
                let kind = if matches!(err, LogicError::MixedSorts(..)) { SortErr } else { Syntax };
                error(kind, pos, err.to_string())
            })
        };
        match head {
            "not" => {
                arity(1)?;
                Ok(Formula::not(self.formula(&args[0], scope)?))
            }
            "and" | "or" => {
                let parts = args.iter().map(|a| self.formula(a, scope)).collect::<Result<Vec<_>, _>>()?;
                Ok(if head == "and" { Formula::And(parts) } else { Formula::Or(parts) })
            }
            "=>" => {
                arity(2)?;
                Ok(Formula::implies(self.formula(&args[0], scope)?, self.formula(&args[1], scope)?))
            }
            "=" => {
                arity(2)?;
                let a = self.term(&args[0], scope)?;
                let b = self.term(&args[1], scope)?;
                if a.sort() != b.sort() {
                    return Err(error(SortErr, pos, format!("equation between sorts {} and {}", a.sort(), b.sort())));
                }
                Ok(Formula::eq(a, b))
            }
            "exists" | "forall" => {
                arity(2)?;
                let binders = parse_binders(&args[0], self.sig)?;
                let vars: Vec<Var> = binders.iter().map(|(n, s)| Var::new(n.clone(), s.clone())).collect();
                let depth = scope.len();
                scope.extend(binders);
                let body = self.formula(&args[1], scope);
                scope.truncate(depth);
                let body = Box::new(body?);
                Ok(if head == "exists" { Formula::Exists(vars, body) } else { Formula::Forall(vars, body) })
            }
            "cycle" => {
                arity(2)?;
                let n = self.number(&args[0])?;
                let x = self.term(&args[1], scope)?;
                let x = x.as_var().ok_or_else(|| error(Syntax, args[1].pos(), "`cycle` expects a variable"))?;
                if self.sig.function(FUNC_F).map(|d| d.args) != Some(vec![x.sort().clone()]) {
                    return Err(error(SortErr, args[1].pos(), "`cycle` needs a unary `f` on the variable's sort"));
                }
                sugar(cycle_formula(n, x))
            }
            "distinct" => {
                let mut vars = Vec::new();
                for a in args {
                    let t = self.term(a, scope)?;
                    vars.push(t.as_var().cloned().ok_or_else(|| error(Syntax, a.pos(), "`distinct` expects variables"))?);
                }
                sugar(distinct_formula(&vars))
            }
            "card>=" | "card<=" | "card=" => {
                arity(2)?;
                let sname = args[0].as_atom().ok_or_else(|| error(Syntax, args[0].pos(), "expected a sort"))?;
                let sort = self
                    .sig
                    .sort(sname)
                    .ok_or_else(|| error(UnknownSymbol, args[0].pos(), format!("unknown sort `{sname}`")))?;
                let kind = match head {
                    "card>=" => CardKind::AtLeast,
                    "card<=" => CardKind::AtMost,
                    _ => CardKind::Exactly,
                };
                sugar(cardinality_sentence(kind, sort, self.number(&args[1])?))
            }
            p => {
                let decl = self
                    .sig
                    .predicate(p)
                    .ok_or_else(|| error(UnknownSymbol, items[0].pos(), format!("unknown predicate `{p}`")))?;
                arity(decl.args.len())?;
                let mut built = Vec::new();
                for (arg, expected) in args.iter().zip(&decl.args) {
                    let t = self.term(arg, scope)?;
                    if t.sort() != expected {
                        return Err(error(SortErr, arg.pos(), format!("expected sort {expected}, found {}", t.sort())));
                    }
                    built.push(t);
                }
                Ok(Formula::pred(p, built))
            }
        }
    }
}

/// Canonical text. Free variables of a sort other than `sigma1` that never
/// sit in an argument position are annotated with `(as x sort)` at their
/// first occurrence, which makes the output re-parse to the same formula.
pub fn print_formula(phi: &Formula) -> String {
    let mut positioned = BTreeSet::new();
    collect_positioned(phi, &mut Vec::new(), &mut positioned);
    let mut p = Printer { positioned, annotated: BTreeSet::new(), out: String::new() };
    p.formula(phi, &mut Vec::new());
    p.out
}

fn collect_positioned(phi: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    fn term(t: &Term, bound: &[Var], out: &mut BTreeSet<Var>) {
        if let Term::App { args, .. } = t {
            for a in args {
                if let Term::Var(v) = a {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
                term(a, bound, out);
            }
        }
    }
    match phi {
        Formula::True | Formula::False => {}
        Formula::Atom(Atom::Eq(a, b)) => {
            term(a, bound, out);
            term(b, bound, out);
        }
        Formula::Atom(Atom::Pred { args, .. }) => {
            for a in args {
                if let Term::Var(v) = a {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
                term(a, bound, out);
            }
        }
        Formula::Not(p) => collect_positioned(p, bound, out),
        Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| collect_positioned(p, bound, out)),
        Formula::Implies(a, b) => {
            collect_positioned(a, bound, out);
            collect_positioned(b, bound, out);
        }
        Formula::Exists(vs, body) | Formula::Forall(vs, body) => {
            let depth = bound.len();
            bound.extend(vs.iter().cloned());
            collect_positioned(body, bound, out);
            bound.truncate(depth);
        }
    }
}

struct Printer {
    positioned: BTreeSet<Var>,
    annotated: BTreeSet<Var>,
    out: String,
}

impl Printer {
    fn term(&mut self, t: &Term, bound: &[Var]) {
        match t {
            Term::Var(v) => {
                let free = !bound.contains(v);
                if free && v.sort().name() != SIGMA1 && !self.positioned.contains(v) && self.annotated.insert(v.clone()) {
                    self.out.push_str(&format!("(as {} {})", v.name(), v.sort()));
                } else {
                    self.out.push_str(v.name());
                }
            }
            Term::App { func, args, .. } => {
                if args.is_empty() {
                    self.out.push_str(func);
                    return;
                }
                self.out.push('(');
                self.out.push_str(func);
                for a in args {
                    self.out.push(' ');
                    self.term(a, bound);
                }
                self.out.push(')');
            }
        }
    }

    fn formula(&mut self, phi: &Formula, bound: &mut Vec<Var>) {
        match phi {
            Formula::True => self.out.push_str("true"),
            Formula::False => self.out.push_str("false"),
            Formula::Atom(Atom::Eq(a, b)) => {
                self.out.push_str("(= ");
                self.term(a, bound);
                self.out.push(' ');
                self.term(b, bound);
                self.out.push(')');
            }
            Formula::Atom(Atom::Pred { name, args }) => {
                if args.is_empty() {
                    self.out.push_str(name);
                    return;
                }
                self.out.push('(');
                self.out.push_str(name);
                for a in args {
                    self.out.push(' ');
                    self.term(a, bound);
                }
                self.out.push(')');
            }
            Formula::Not(p) => {
                self.out.push_str("(not ");
                self.formula(p, bound);
                self.out.push(')');
            }
            Formula::And(ps) | Formula::Or(ps) => {
                self.out.push_str(if matches!(phi, Formula::And(_)) { "(and" } else { "(or" });
                for p in ps {
                    self.out.push(' ');
                    self.formula(p, bound);
                }
                self.out.push(')');
            }
            Formula::Implies(a, b) => {
                self.out.push_str("(=> ");
                self.formula(a, bound);
                self.out.push(' ');
                self.formula(b, bound);
                self.out.push(')');
            }
            Formula::Exists(vs, body) | Formula::Forall(vs, body) => {
                self.out.push_str(if matches!(phi, Formula::Exists(..)) { "(exists (" } else { "(forall (" });
                let binders: Vec<String> = vs.iter().map(|v| format!("({} {})", v.name(), v.sort())).collect();
                self.out.push_str(&binders.join(" "));
                self.out.push_str(") ");
                let depth = bound.len();
                bound.extend(vs.iter().cloned());
                self.formula(body, bound);
                bound.truncate(depth);
                self.out.push(')');
            }
        }
    }
}
