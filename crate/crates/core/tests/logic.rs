use std::collections::BTreeSet;

use proptest::prelude::*;
use tclab_core::logic::{
    arrangement_formula, cardinality_sentence, cycle_formula, distinct_formula, enumerate_arrangements,
    induced_arrangement, Arrangement, CardKind, FiniteInterpretation, Formula, FreshVars, LogicError, Signature,
    Sort, Term, Var, FUNC_F, SIGMA1, SIGMA2,
};
use tclab_core::textio::print_formula;
use tclab_core::theories::FunctionalGraph;

fn s1() -> Sort {
    Sort::new(SIGMA1)
}

fn v(name: &str) -> Var {
    Var::new(name, s1())
}

fn graph(succ: Vec<usize>) -> FiniteInterpretation {
    FunctionalGraph::new(succ).unwrap().to_interpretation()
}

fn at(mut m: FiniteInterpretation, assignment: &[(&str, usize)]) -> FiniteInterpretation {
    for (name, e) in assignment {
        m.assign(&v(name), *e).unwrap();
    }
    m
}

#[test]
fn cycle_formula_lists_the_proper_divisors() {
    let x = v("x");
    assert_eq!(
        print_formula(&cycle_formula(6, &x).unwrap()),
        "(and (= (f (f (f (f (f (f x)))))) x) (not (= (f x) x)) (not (= (f (f x)) x)) (not (= (f (f (f x))) x)))"
    );
    assert_eq!(print_formula(&cycle_formula(1, &x).unwrap()), "(= (f x) x)");
    assert_eq!(
        print_formula(&cycle_formula(7, &x).unwrap()),
        "(and (= (f (f (f (f (f (f (f x))))))) x) (not (= (f x) x)))"
    );
    assert!(cycle_formula(0, &x).is_err());
}

#[test]
fn six_fold_return_holds_on_the_two_cycle_but_cycle_six_only_on_the_six_cycle() {
    let x = v("x");
    let six = Formula::eq(Term::iterate(FUNC_F, 6, Term::var(&x)), Term::var(&x));
    let a2 = at(FunctionalGraph::cycle(2).to_interpretation(), &[("x", 0)]);
    let a6 = at(FunctionalGraph::cycle(6).to_interpretation(), &[("x", 0)]);
    assert!(a2.evaluate(&six).unwrap());
    assert!(!a2.evaluate(&cycle_formula(6, &x).unwrap()).unwrap());
    assert!(a6.evaluate(&cycle_formula(6, &x).unwrap()).unwrap());
    assert!(a6.evaluate(&Formula::var_eq(&x, &x)).unwrap());
}

#[test]
fn distinct_formula_has_one_conjunct_per_pair() {
    let (x, y, z) = (v("x"), v("y"), v("z"));
    assert_eq!(print_formula(&distinct_formula(&[x.clone(), y.clone()]).unwrap()), "(not (= x y))");
    let three = distinct_formula(&[x, y, z]).unwrap();
    assert_eq!(print_formula(&three), "(and (not (= x y)) (not (= x z)) (not (= y z)))");
    let two = FiniteInterpretation::new(Signature::sigma_1(), &[2]).unwrap();
    let pigeonhole = (0..8).all(|code| {
        let m = at(two.clone(), &[("x", code & 1), ("y", code >> 1 & 1), ("z", code >> 2 & 1)]);
        !m.evaluate(&three).unwrap()
    });
    assert!(pigeonhole);
}

#[test]
fn distinct_formula_rejects_mixed_sorts() {
    let y = Var::new("y", Sort::new(SIGMA2));
    assert!(matches!(distinct_formula(&[v("x"), y]), Err(LogicError::MixedSorts(..))));
}

#[test]
fn cardinality_sentences_count_the_domain() {
    let sort = s1();
    for size in 1..=6 {
        let m = FiniteInterpretation::new(Signature::sigma_1(), &[size]).unwrap();
        for n in 1..=4 {
            let holds = |kind| m.evaluate(&cardinality_sentence(kind, &sort, n).unwrap()).unwrap();
            assert_eq!(holds(CardKind::AtLeast), size >= n, "≥{n} on {size}");
            assert_eq!(holds(CardKind::AtMost), size <= n, "≤{n} on {size}");
            assert_eq!(holds(CardKind::Exactly), size == n, "={n} on {size}");
        }
    }
    assert!(matches!(cardinality_sentence(CardKind::AtLeast, &sort, 0), Err(LogicError::ZeroCardinality)));
}

#[test]
fn arrangement_counts_are_bell_numbers() {
    const BELL: [usize; 7] = [1, 1, 2, 5, 15, 52, 203];
    for (k, &bell) in BELL.iter().enumerate() {
        let vars: Vec<Var> = (0..k).map(|i| v(&format!("v{i}"))).collect();
        let all: Vec<Arrangement> = enumerate_arrangements(&vars).collect();
        assert_eq!(all.len(), bell, "k = {k}");
        let distinct: BTreeSet<String> = all.iter().map(|a| print_formula(&arrangement_formula(a))).collect();
        assert_eq!(distinct.len(), bell, "duplicates at k = {k}");
    }
}

#[test]
fn arrangements_never_merge_across_sorts() {
    let vars = [v("x"), Var::new("y", Sort::new(SIGMA2))];
    let all: Vec<Arrangement> = enumerate_arrangements(&vars).collect();
    assert_eq!(all.len(), 1);
    assert_eq!(all[0].num_blocks(), 2);
    assert!(Arrangement::new(vec![vars.to_vec()]).is_err());
}

#[test]
fn arrangement_formula_examples() {
    let (x, y, z) = (v("x"), v("y"), v("z"));
    let text = |blocks: Vec<Vec<Var>>| print_formula(&arrangement_formula(&Arrangement::new(blocks).unwrap()));
    assert_eq!(text(vec![vec![x.clone(), y.clone()]]), "(= x y)");
    assert_eq!(text(vec![vec![x.clone()], vec![y.clone()]]), "(not (= x y))");
    assert_eq!(text(vec![vec![x, y], vec![z]]), "(and (= x y) (not (= x z)) (not (= y z)))");
    assert_eq!(arrangement_formula(&Arrangement::new(Vec::new()).unwrap()), Formula::True);
}

#[test]
fn induced_arrangement_groups_equal_values() {
    let (x, y, z) = (v("x"), v("y"), v("z"));
    let m = at(FunctionalGraph::cycle(3).to_interpretation(), &[("x", 1), ("y", 1), ("z", 2)]);
    let e = induced_arrangement(&m, &[x.clone(), y.clone(), z.clone()]).unwrap();
    assert_eq!(e.blocks(), &[vec![x.clone(), y.clone()], vec![z.clone()]]);
    let m = at(m, &[("y", 0)]);
    assert_eq!(induced_arrangement(&m, &[x.clone(), y.clone(), z.clone()]).unwrap().num_blocks(), 3);
    assert!(matches!(induced_arrangement(&m, &[v("w")]), Err(LogicError::Unassigned(_))));
}

#[test]
fn quantifiers_range_over_the_domain() {
    let sig = Signature::sigma_f();
    let x = v("x");
    let fx = Term::app(&sig, FUNC_F, vec![Term::var(&x)]).unwrap();
    let has_loop = Formula::Exists(vec![x.clone()], Box::new(Formula::eq(fx.clone(), Term::var(&x))));
    let all_loops = Formula::Forall(vec![x.clone()], Box::new(Formula::eq(fx, Term::var(&x))));
    let m = graph(vec![0, 2, 1]);
    assert!(m.evaluate(&has_loop).unwrap());
    assert!(!m.evaluate(&all_loops).unwrap());
    assert!(!has_loop.is_quantifier_free());
    assert!(has_loop.require_quantifier_free().is_err());
}

#[test]
fn terms_are_checked_against_the_signature() {
    let sig = Signature::sigma_f();
    let y = Var::new("y", Sort::new(SIGMA2));
    assert!(matches!(Term::app(&sig, "g", vec![Term::var(&v("x"))]), Err(LogicError::UnknownFunction(_))));
    assert!(matches!(Term::app(&sig, FUNC_F, vec![]), Err(LogicError::Arity { .. })));
    assert!(matches!(Term::app(&sig, FUNC_F, vec![Term::var(&y)]), Err(LogicError::SortMismatch { .. })));
}

#[test]
fn interpretations_reject_bad_tables_and_elements() {
    let mut m = FiniteInterpretation::new(Signature::sigma_f(), &[2]).unwrap();
    assert!(matches!(m.set_function(FUNC_F, vec![0]), Err(LogicError::TableSize { .. })));
    assert!(m.set_function(FUNC_F, vec![0, 2]).is_err());
    assert!(matches!(m.assign(&v("x"), 5), Err(LogicError::ElementOutOfRange { .. })));
    assert!(FiniteInterpretation::new(Signature::sigma_f(), &[0]).is_err());
    let unassigned = Formula::var_eq(&v("x"), &v("x"));
    assert!(matches!(m.evaluate(&unassigned), Err(LogicError::Unassigned(_))));
}

#[test]
fn fresh_variables_avoid_existing_names() {
    let taken = Formula::var_eq(&v("_w0"), &v("_w3"));
    let mut fresh = FreshVars::avoiding([&taken]);
    let a = fresh.var(&s1());
    let b = fresh.var(&s1());
    assert_eq!((a.name(), b.name()), ("_w4", "_w5"));
    assert_eq!(a.fresh_index(), Some(4));
    assert_eq!(v("x").fresh_index(), None);
}

/// Whether `start` lies on a cycle of length exactly `n`, by walking the map.
fn on_cycle_of_length(succ: &[usize], start: usize, n: usize) -> bool {
    let mut cur = succ[start];
    let mut period = 1;
    while cur != start && period <= succ.len() {
        cur = succ[cur];
        period += 1;
    }
    cur == start && period == n
}

fn arb_graph() -> impl Strategy<Value = Vec<usize>> {
    (1usize..=10).prop_flat_map(|n| proptest::collection::vec(0..n, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cycle_formula_matches_a_direct_walk(succ in arb_graph(), n in 1usize..=10) {
        let x = v("x");
        let phi = cycle_formula(n, &x).unwrap();
        let m = graph(succ.clone());
        for start in 0..succ.len() {
            let holds = at(m.clone(), &[("x", start)]).evaluate(&phi).unwrap();
            prop_assert_eq!(holds, on_cycle_of_length(&succ, start, n), "start {} in {:?}", start, succ);
        }
    }

    #[test]
    fn induced_arrangement_holds_where_it_was_read(succ in arb_graph(), picks in proptest::collection::vec(0usize..10, 0..6)) {
        let vars: Vec<Var> = (0..picks.len()).map(|i| v(&format!("v{i}"))).collect();
        let mut m = graph(succ.clone());
        for (var, p) in vars.iter().zip(&picks) {
            m.assign(var, p % succ.len()).unwrap();
        }
        let e = induced_arrangement(&m, &vars).unwrap();
        prop_assert!(m.evaluate(&arrangement_formula(&e)).unwrap());
        let values: BTreeSet<usize> = picks.iter().map(|p| p % succ.len()).collect();
        prop_assert_eq!(e.num_blocks(), values.len());
    }
}
