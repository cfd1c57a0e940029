use std::collections::BTreeSet;

use proptest::prelude::*;
use tclab_core::corpus::{CorpusParams, FormulaGen};
use tclab_core::finite_model::{brute_mm, enumerate_structures, model_of_size, CardinalityVector};
use tclab_core::logic::{
    arrangement_formula, Arrangement, FiniteInterpretation, Formula, FreshVars, Signature, Sort, Var, SIGMA1,
};
use tclab_core::textio::{parse_formula, print_formula};
use tclab_core::theories::{cycle_lengths, make_theory, membership_ti, CycleIndex, FunctionalGraph, SOracle, TheoryConfig};
use tclab_core::witness::{
    complete_to_witness_model, cycle_witness, dnf_lift, flatten, identity_witness, is_flat_literal,
    shiny_witness, t2n_grow, t2n_shrink, verify_strong_witness, wit_double_prime, wit_prime, wit_ti,
    CompletionCase, FlatConjunction, VerifyOptions,
};

fn fml(text: &str, sig: &Signature) -> Formula {
    parse_formula(text, sig).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn x(name: &str) -> Var {
    Var::new(name, Sort::new(SIGMA1))
}

fn flat_text(phi: &Formula) -> String {
    print_formula(&flatten(phi, &mut FreshVars::avoiding([phi])).unwrap().to_formula())
}

#[test]
fn flatten_names_each_nesting_level() {
    let sig = Signature::sigma_f();
    assert_eq!(flat_text(&fml("(= (f (f x)) x)", &sig)), "(and (= (f x) _w0) (= (f _w0) x))");
    assert_eq!(flat_text(&fml("(not (= x y))", &sig)), "(not (= x y))");
    assert_eq!(
        flat_text(&fml("(= (f (f (f x))) x)", &sig)),
        "(and (= (f x) _w0) (= (f _w0) _w1) (= (f _w1) x))"
    );
}

#[test]
fn flatten_orients_and_shares_subterms() {
    let sig = Signature::sigma_f();
    let phi = fml("(and (= y (f x)) (not (= (f x) (f y))))", &sig);
    let flat = flatten(&phi, &mut FreshVars::new()).unwrap();
    assert!(flat.literals().iter().all(is_flat_literal));
    assert_eq!(print_formula(&flat.to_formula()), "(and (= (f x) y) (= (f x) _w0) (= (f y) _w1) (not (= _w0 _w1)))");
    assert_eq!(flat.definitions().len(), 2);
}

#[test]
fn flatten_rejects_disjunctions() {
    let sig = Signature::sigma_f();
    assert!(flatten(&fml("(or (= x y) (= (f x) x))", &sig), &mut FreshVars::new()).is_err());
}

#[test]
fn wit_ti_adds_a_variable_only_when_there_is_none() {
    let sig = Signature::sigma_f();
    let phi = flatten(&fml("(= (f x) y)", &sig), &mut FreshVars::new()).unwrap();
    assert_eq!(wit_ti(&phi, &sig, &mut FreshVars::new()), phi);
    let empty = FlatConjunction::default();
    let w = wit_ti(&empty, &sig, &mut FreshVars::new());
    assert_eq!(print_formula(&w.to_formula()), "(= _w0 _w0)");
}

#[test]
fn dnf_lift_keeps_cubes_apart() {
    let sig = Signature::sigma_f();
    let wit = cycle_witness(&sig);
    assert_eq!(print_formula(&wit.apply(&Formula::True).unwrap()), "(= _w0 _w0)");
    let phi = fml("(or (= (f (f x)) x) (= (f (f y)) y))", &sig);
    let out = wit.apply(&phi).unwrap();
    assert_eq!(print_formula(&out), "(or (and (= (f x) _w0) (= (f _w0) x)) (and (= (f y) _w1) (= (f _w1) y)))");
    let lit = fml("(not (= x y))", &sig);
    assert_eq!(dnf_lift(&lit, |c, _| Ok(c)).unwrap(), lit);
    let contradiction = fml("(and (= x x) false)", &sig);
    assert!(cycle_witness(&sig).apply(&contradiction).unwrap().vars().contains(&x("x")));
}

fn s7() -> SOracle {
    SOracle::new([7]).unwrap()
}

/// Completion from an explicit seed whose `f` is `table`; the `k`-th name
/// is assigned element `k`.
fn complete_from(i: u8, witphi: &FlatConjunction, names: &[&str], table: Vec<usize>) -> tclab_core::witness::Completion {
    let mut seed = FiniteInterpretation::new(Signature::sigma_f(), &[table.len()]).unwrap();
    seed.set_function("f", table).unwrap();
    for (k, n) in names.iter().enumerate() {
        seed.assign(&x(n), k).unwrap();
    }
    let delta = Arrangement::discrete(names.iter().map(|n| x(n)));
    complete_to_witness_model(CycleIndex::new(i).unwrap(), &s7(), witphi, &delta, &seed).unwrap()
}

#[test]
fn completion_closes_two_open_vertices_into_a_cycle() {
    let c = complete_from(1, &FlatConjunction::default(), &["x", "y"], vec![2, 3, 3, 2]);
    assert_eq!(c.case, CompletionCase::CloseOpenVertices);
    assert_eq!(c.model.function_table("f").unwrap(), &[1, 0]);
}

#[test]
fn completion_adds_a_back_edge() {
    let sig = Signature::sigma_f();
    let witphi = flatten(&fml("(= (f x) y)", &sig), &mut FreshVars::new()).unwrap();
    for i in 1..=4 {
        let c = complete_from(i, &witphi, &["x", "y"], vec![1, 2, 3, 2]);
        assert_eq!(c.case, CompletionCase::BackEdge);
        assert_eq!(c.model.function_table("f").unwrap(), &[1, 0]);
    }
}

#[test]
fn completion_attaches_open_vertices_to_an_inherited_cycle() {
    let sig = Signature::sigma_f();
    let witphi = flatten(&fml("(and (= (f x) y) (= (f y) x))", &sig), &mut FreshVars::new()).unwrap();
    let c = complete_from(1, &witphi, &["x", "y", "z"], vec![1, 0, 3, 3]);
    assert_eq!(c.case, CompletionCase::AttachToCycle);
    assert_eq!(c.model.function_table("f").unwrap(), &[1, 0, 0]);
}

#[test]
fn a_single_open_class_gets_a_loop() {
    let c = complete_from(3, &FlatConjunction::default(), &["x"], vec![1, 2, 1]);
    assert_eq!(c.case, CompletionCase::Loop);
    assert!(membership_ti(3, &s7(), &c.model).unwrap());
}

#[test]
fn six_open_vertices_become_two_triangles() {
    let names = ["a", "b", "c", "d", "e", "g"];
    let c = complete_from(2, &FlatConjunction::default(), &names, vec![6, 6, 6, 6, 6, 6, 7, 6]);
    assert_eq!(c.case, CompletionCase::CloseOpenVertices);
    let g = FunctionalGraph::of_interpretation(&c.model).unwrap();
    assert_eq!(cycle_lengths(&g), vec![3, 3]);
    assert!(membership_ti(2, &s7(), &c.model).unwrap());
}

#[test]
fn completion_rejects_a_seed_that_misses_the_formula() {
    let sig = Signature::sigma_f();
    let witphi = flatten(&fml("(= (f x) y)", &sig), &mut FreshVars::new()).unwrap();
    let mut seed = FiniteInterpretation::new(sig, &[2]).unwrap();
    seed.set_function("f", vec![0, 1]).unwrap();
    seed.assign(&x("x"), 0).unwrap();
    seed.assign(&x("y"), 1).unwrap();
    let delta = Arrangement::discrete([x("x"), x("y")]);
    assert!(complete_to_witness_model(CycleIndex::new(1).unwrap(), &s7(), &witphi, &delta, &seed).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The completed model is a member, has one element per class, and
    /// satisfies the formula and the arrangement.
    #[test]
    fn completion_is_a_witness_model(seed in any::<u64>(), i in 1u8..=4) {
        let sig = Signature::sigma_f();
        let mut g = FormulaGen::new(&sig, seed, CorpusParams { vars: 3, literals: 5, depth: 1 });
        let phi = g.flat_conjunction();
        let witphi = wit_ti(&phi, &sig, &mut FreshVars::avoiding([&phi.to_formula()]));
        let vars: Vec<Var> = witphi.vars().into_iter().collect();
        let delta = g.arrangement(&vars);
        let t = make_theory(&format!("t{i}"), &TheoryConfig { s: Some(s7()), h: None }).unwrap();
        let psi = Formula::conj(vec![witphi.to_formula(), arrangement_formula(&delta)]);
        // Largest seed first, so that completion has open vertices to close.
        let k = delta.num_blocks();
        if let Some(seed_model) = (k..=k + 2).rev().find_map(|n| model_of_size(&t, &psi, &[n], &[]).unwrap()) {
            let c = complete_to_witness_model(CycleIndex::new(i).unwrap(), &s7(), &witphi, &delta, &seed_model).unwrap();
            prop_assert!(membership_ti(i, &s7(), &c.model).unwrap());
            prop_assert_eq!(c.model.total_size(), delta.num_blocks());
            prop_assert!(c.model.evaluate(&psi).unwrap());
        }
    }

    /// Every model of the flat form restricts to a model of the input, and
    /// every model of the input extends to one of the flat form.
    #[test]
    fn flattening_preserves_models(seed in any::<u64>()) {
        let sig = Signature::sigma_f();
        let mut g = FormulaGen::new(&sig, seed, CorpusParams { vars: 2, literals: 3, depth: 3 });
        let phi = g.conjunction();
        let flat = flatten(&phi, &mut FreshVars::avoiding([&phi])).unwrap().to_formula();
        let orig_vars: Vec<Var> = phi.vars().into_iter().collect();
        let fresh: Vec<Var> = flat.vars().difference(&phi.vars().into_iter().collect::<BTreeSet<_>>()).cloned().collect();
        let bound = CardinalityVector::finite(&sig, &[3]).unwrap();
        for m in enumerate_structures(&sig, &bound, |_| true, false).unwrap() {
            let k = m.total_size();
            for base in 0..k.pow(orig_vars.len() as u32) {
                let mut a = m.clone();
                for (j, v) in orig_vars.iter().enumerate() {
                    a.assign(v, base / k.pow(j as u32) % k).unwrap();
                }
                let holds = a.evaluate(&phi).unwrap();
                let extends = (0..k.pow(fresh.len() as u32)).any(|ext| {
                    let mut b = a.clone();
                    for (j, v) in fresh.iter().enumerate() {
                        b.assign(v, ext / k.pow(j as u32) % k).unwrap();
                    }
                    b.evaluate(&flat).unwrap()
                });
                prop_assert_eq!(holds, extends);
            }
        }
    }

    /// `wit″(wit″(φ) ∧ ψ) = wit″(φ) ∧ ψ` for flat `ψ` over the chosen sorts.
    #[test]
    fn double_prime_is_additive(seed in any::<u64>()) {
        let sig = Signature::sigma_f();
        let t = make_theory("t1", &TheoryConfig { s: Some(s7()), h: None }).unwrap();
        let wpp = wit_double_prime(&t, &wit_prime(&cycle_witness(&sig)), &[Sort::new(SIGMA1)]).unwrap();
        prop_assert!(wpp.is_additive());
        let mut g = FormulaGen::new(&sig, seed, CorpusParams { vars: 3, literals: 3, depth: 2 });
        let phi = g.formula();
        let vars = g.vars().to_vec();
        let psi = arrangement_formula(&g.arrangement(&vars));
        let once = wpp.apply(&phi).unwrap();
        let joined = Formula::And(vec![once, psi]);
        prop_assert_eq!(wpp.apply(&joined).unwrap(), joined);
    }
}

#[test]
fn wit_prime_conjoins_and_is_recognized() {
    let sig = Signature::sigma_f();
    let wp = wit_prime(&cycle_witness(&sig));
    let phi = fml("(= (f x) y)", &sig);
    let out = wp.apply(&phi).unwrap();
    assert_eq!(out, Formula::And(vec![phi.clone(), phi.clone()]));
    let t = make_theory("t1", &TheoryConfig { s: Some(s7()), h: None }).unwrap();
    let wpp = wit_double_prime(&t, &wp, &[Sort::new(SIGMA1)]).unwrap();
    assert_eq!(wpp.apply(&out).unwrap(), out);
    assert_eq!(wpp.apply(&phi).unwrap(), out);
    let not_flat = Formula::And(vec![out.clone(), fml("(= (f x) x)", &sig)]);
    assert_ne!(wpp.apply(&not_flat).unwrap(), not_flat);
}

#[test]
fn double_prime_over_predicates_carries_a_diagnostic() {
    let t2n = make_theory("t2n", &TheoryConfig::default()).unwrap();
    let wp = wit_prime(&shiny_witness(&t2n, 6).unwrap());
    let wpp = wit_double_prime(&t2n, &wp, &[Sort::new(SIGMA1)]).unwrap();
    assert_eq!(wpp.diagnostics().len(), 1);
    assert!(wit_double_prime(&t2n, &identity_witness(), &[]).is_err());
}

#[test]
fn shiny_witness_pads_by_minimal_model_size() {
    let t2n = make_theory("t2n", &TheoryConfig::default()).unwrap();
    let wit = shiny_witness(&t2n, 6).unwrap();
    let phi = fml("(P x)", t2n.signature());
    assert_eq!(print_formula(&wit.apply(&phi).unwrap()), "(and (P x) (not (= _w0 _w1)))");
    let teq = make_theory("teq", &TheoryConfig::default()).unwrap();
    let out = shiny_witness(&teq, 4).unwrap().apply(&fml("(= x x)", teq.signature())).unwrap();
    assert_eq!(out.vars().len(), 2);
    assert!(make_theory("star", &TheoryConfig::default()).map(|t| shiny_witness(&t, 4).is_err()).unwrap());
}

#[test]
fn identity_fails_and_shiny_passes_strong_witness_check_for_t2n() {
    let t2n = make_theory("t2n", &TheoryConfig::default()).unwrap();
    let corpus = vec![fml("(P x)", t2n.signature())];
    let opts = VerifyOptions { bound: 4, ..VerifyOptions::default() };
    let bad = verify_strong_witness(&t2n, &identity_witness(), &corpus, opts).unwrap();
    assert!(!bad.passed());
    assert_eq!(bad.failures[0].arrangement, "x");
    let good = verify_strong_witness(&t2n, &shiny_witness(&t2n, 6).unwrap(), &corpus, opts).unwrap();
    assert!(good.passed(), "{:?}", good.failures);
}

#[test]
fn shiny_witness_passes_on_a_small_corpus() {
    let t2n = make_theory("t2n", &TheoryConfig::default()).unwrap();
    let mut g = FormulaGen::new(t2n.signature(), 11, CorpusParams { vars: 2, literals: 3, depth: 0 });
    let corpus: Vec<Formula> = (0..12).map(|_| g.formula()).collect();
    let opts = VerifyOptions { bound: 5, max_vars: 6, ..VerifyOptions::default() };
    let report = verify_strong_witness(&t2n, &shiny_witness(&t2n, 6).unwrap(), &corpus, opts).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
    assert!(report.pairs_checked > 0);
}

#[test]
fn cycle_witness_passes_for_t1() {
    let t1 = make_theory("t1", &TheoryConfig { s: Some(s7()), h: None }).unwrap();
    let mut g = FormulaGen::new(t1.signature(), 5, CorpusParams { vars: 2, literals: 2, depth: 2 });
    let corpus: Vec<Formula> = (0..10).map(|_| g.conjunction()).collect();
    let opts = VerifyOptions { bound: 4, max_vars: 5, ..VerifyOptions::default() };
    let report = verify_strong_witness(&t1, &cycle_witness(t1.signature()), &corpus, opts).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
}

/// With `n = |vars(wit(⊤))|`, more than `n` distinct `P`-elements force at
/// least `2n + 2` elements.
#[test]
fn additive_refutation_for_t2n() {
    let t2n = make_theory("t2n", &TheoryConfig::default()).unwrap();
    let wit = shiny_witness(&t2n, 6).unwrap().apply(&Formula::True).unwrap();
    let n = wit.vars().len();
    assert_eq!(n, 1);
    let mut fresh = FreshVars::avoiding([&wit]);
    let ws: Vec<Var> = (0..=n).map(|_| fresh.var(&Sort::new(SIGMA1))).collect();
    let mut parts = vec![wit, tclab_core::logic::distinct_formula(&ws).unwrap()];
    parts.extend(ws.iter().map(|w| Formula::pred("P", vec![tclab_core::logic::Term::var(w)])));
    let psi = Formula::conj(parts);
    let mm = brute_mm(&t2n, &psi, &CardinalityVector::finite(t2n.signature(), &[2 * n as u64 + 2]).unwrap()).unwrap();
    assert_eq!(mm.min_for_sort(&Sort::new(SIGMA1)), Some(2 * n as u64 + 2));
}

fn t2n_model(p: &[bool], assign: &[(&str, usize)]) -> FiniteInterpretation {
    let mut m = FiniteInterpretation::new(Signature::sigma_p(), &[p.len()]).unwrap();
    m.set_predicate("P", p.to_vec()).unwrap();
    for &(v, e) in assign {
        m.assign(&x(v), e).unwrap();
    }
    m
}

#[test]
fn t2n_grow_adds_elements_outside_p() {
    let t2n = make_theory("t2n", &TheoryConfig::default()).unwrap();
    let m = t2n_model(&[true, false, false], &[("x", 0)]);
    let big = t2n_grow(&m, 5).unwrap();
    assert_eq!(big.total_size(), 5);
    assert_eq!(big.predicate_table("P").unwrap().iter().filter(|&&b| b).count(), 1);
    assert!(t2n.membership(&big));
    assert_eq!(t2n_grow(&m, 3).unwrap(), m);
    assert!(t2n_grow(&m, 2).is_err());
}

#[test]
fn t2n_shrink_keeps_twice_the_variables() {
    let t2n = make_theory("t2n", &TheoryConfig::default()).unwrap();
    let phi = fml("(and (distinct w1 w2) (P w1) (P w2))", t2n.signature());
    let p = [true, true, false, false, false, false, false, false, false];
    let m = t2n_model(&p, &[("w1", 0), ("w2", 1)]);
    let small = t2n_shrink(&m, &phi).unwrap();
    assert_eq!(small.total_size(), 4);
    assert!(t2n.membership(&small));
    assert!(small.evaluate(&phi).unwrap());
    let none = t2n_shrink(&t2n_model(&[false, false], &[]), &Formula::True).unwrap();
    assert_eq!(none.total_size(), 1);
}

#[test]
fn complete_case_names_are_stable() {
    let c: BTreeSet<String> =
        [CompletionCase::Loop, CompletionCase::Inherited].iter().map(|c| serde_json::to_string(c).unwrap()).collect();
    assert!(c.contains("\"loop\""));
}
