use proptest::prelude::*;
use tclab_core::corpus::{CorpusParams, FormulaGen};
use tclab_core::finite_model::{brute_mm, sat_bounded, CardinalityVector, MinimalModelSet};
use tclab_core::logic::{normal::Literal, Atom, Formula, Signature, Sort, Term, Var, SIGMA1};
use tclab_core::minimal_model::{
    consistent_arrangements, decide_by_witness, decide_from_mm, decide_s_membership, mm_from_decision,
    mm_single_sort, MmCapability, MmError, MmProvenance,
};
use tclab_core::textio::parse_formula;
use tclab_core::theories::{make_theory, SOracle, TheoryConfig, TheoryHandle};
use tclab_core::witness::theory_witness;

fn s7() -> TheoryConfig {
    TheoryConfig { s: Some(SOracle::new([7]).unwrap()), h: None }
}

fn theory(name: &str) -> TheoryHandle {
    make_theory(name, &s7()).unwrap()
}

fn fml(text: &str, t: &TheoryHandle) -> Formula {
    parse_formula(text, t.signature()).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn single(t: &TheoryHandle, n: u64) -> MinimalModelSet {
    MinimalModelSet::from_vectors([CardinalityVector::finite(t.signature(), &[n]).unwrap()])
}

#[test]
fn cycle_of_length_two_needs_two_elements() {
    let t1 = theory("t1");
    let phi = fml("(and (= (f (f x)) x) (not (= (f x) x)))", &t1);
    assert_eq!(mm_from_decision(&t1, &phi).unwrap(), single(&t1, 2));
}

#[test]
fn a_member_of_s_leaves_room_for_a_separate_four_cycle() {
    let t1 = theory("t1");
    let mm = MmCapability::from_decision(&t1).unwrap();
    let r = decide_s_membership(&mm, 7).unwrap();
    assert_eq!((r.minimal_size, r.in_s), (11, true));
    let r = decide_s_membership(&MmCapability::brute(&t1, 8), 11).unwrap();
    assert_eq!((r.minimal_size, r.in_s), (12, false));
}

#[test]
fn s_membership_rejects_small_or_composite_n() {
    let mm = MmCapability::brute(&theory("t1"), 8);
    for n in [2, 5, 9, 15] {
        assert_eq!(decide_s_membership(&mm, n).unwrap_err(), MmError::NotPrime(n));
    }
    let teq = make_theory("teq", &TheoryConfig::default()).unwrap();
    assert!(matches!(
        decide_s_membership(&MmCapability::brute(&teq, 8), 7),
        Err(MmError::MissingCapability { .. })
    ));
}

#[test]
fn equality_theory_collapses_equal_variables() {
    let teq = make_theory("teq", &TheoryConfig::default()).unwrap();
    assert_eq!(mm_from_decision(&teq, &fml("(= x y)", &teq)).unwrap(), single(&teq, 1));
    assert_eq!(mm_from_decision(&teq, &fml("(distinct x y z)", &teq)).unwrap(), single(&teq, 3));
}

#[test]
fn unsatisfiable_input_has_no_minimal_models() {
    let t3 = theory("t3");
    // In T3 a loop forces a one-element model.
    let phi = fml("(and (= (f x) x) (not (= x y)))", &t3);
    assert!(mm_from_decision(&t3, &phi).unwrap().is_empty());
    assert!(!decide_by_witness(&t3, &phi).unwrap());
    assert!(!decide_from_mm(&MmCapability::brute(&t3, 8), &phi).unwrap());
}

#[test]
fn from_decision_needs_a_strong_witness() {
    let star = make_theory("star", &TheoryConfig::default()).unwrap();
    assert!(matches!(MmCapability::from_decision(&star), Err(MmError::MissingCapability { .. })));
    let teq1 = make_theory("teq1", &TheoryConfig::default()).unwrap();
    assert!(mm_from_decision(&teq1, &Formula::True).is_err());
    let t1 = theory("t1");
    assert_eq!(MmCapability::from_decision(&t1).unwrap().provenance(), MmProvenance::FromDecision);
}

#[test]
fn single_sort_minimum_of_empty_set_is_an_error() {
    let sort = Sort::new(SIGMA1);
    assert!(matches!(mm_single_sort(&MinimalModelSet::default(), &sort), Err(MmError::EmptyMm(_))));
}

#[test]
fn two_sorted_minimal_models_form_an_antichain() {
    let adds = theory("adds-t1");
    let phi = fml("(and (= (f (f x)) x) (not (= (f x) x)) (distinct (as u1 sigma2) (as u2 sigma2) (as u3 sigma2)))", &adds);
    let mm = mm_from_decision(&adds, &phi).unwrap();
    assert_eq!(mm, MinimalModelSet::from_vectors([CardinalityVector::finite(adds.signature(), &[2, 3]).unwrap()]));
}

#[test]
fn arrangements_respect_congruence() {
    let v = |n: &str| Var::new(n, Sort::new(SIGMA1));
    let (a, b, c, d) = (v("a"), v("b"), v("c"), v("d"));
    let app = |x: &Var| Term::App { func: "f".into(), args: vec![Term::Var(x.clone())], sort: Sort::new(SIGMA1) };
    let cube = vec![
        Literal { positive: true, atom: Atom::Eq(app(&a), Term::Var(c.clone())) },
        Literal { positive: true, atom: Atom::Eq(app(&b), Term::Var(d.clone())) },
        Literal { positive: false, atom: Atom::Eq(Term::Var(c.clone()), Term::Var(d.clone())) },
    ];
    let vars = vec![a.clone(), b.clone(), c.clone(), d.clone()];
    let all = consistent_arrangements(&cube, &vars);
    // 10 of the 15 partitions keep c and d apart; 3 of those merge a and b.
    assert_eq!(all.len(), 7);
    assert!(all.iter().all(|e| !e.same_block(&c, &d) && !e.same_block(&a, &b)));
}

/// Random formulas whose cycle witness stays small enough to enumerate.
fn small_formula(sig: &Signature, seed: u64, t: &TheoryHandle) -> Option<Formula> {
    let params = CorpusParams { vars: 2, literals: 3, depth: 2 };
    let phi = FormulaGen::new(sig, seed, params).formula();
    let w = theory_witness(t, 6).ok()?.apply(&phi).ok()?;
    (w.vars().len() <= 7).then_some(phi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn from_decision_agrees_with_bounded_search(seed in any::<u64>(), i in 1u8..=4) {
        let t = theory(&format!("t{i}"));
        let phi = small_formula(t.signature(), seed, &t);
        prop_assume!(phi.is_some());
        let phi = phi.unwrap();
        let bound = CardinalityVector::finite(t.signature(), &[t.bound_hint(&phi).unwrap()[0] as u64]).unwrap();
        let oracle = brute_mm(&t, &phi, &bound).unwrap();
        prop_assert_eq!(mm_from_decision(&t, &phi).unwrap(), oracle.clone());
        prop_assert_eq!(decide_by_witness(&t, &phi).unwrap(), sat_bounded(&t, &phi, &bound).unwrap().is_sat());
        prop_assert!(oracle.is_antichain());
    }

    #[test]
    fn deciding_from_minimal_models_matches_bounded_search(seed in any::<u64>(), i in 1u8..=4) {
        let t = theory(&format!("t{i}"));
        let phi = small_formula(t.signature(), seed, &t);
        prop_assume!(phi.is_some());
        let phi = phi.unwrap();
        let bound = CardinalityVector::finite(t.signature(), &[t.bound_hint(&phi).unwrap()[0] as u64]).unwrap();
        let expected = sat_bounded(&t, &phi, &bound).unwrap().is_sat();
        prop_assert_eq!(decide_from_mm(&MmCapability::brute(&t, 8), &phi).unwrap(), expected);
    }
}
