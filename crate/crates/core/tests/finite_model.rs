use std::collections::BTreeSet;
use std::time::Instant;

use proptest::prelude::*;
use tclab_core::finite_model::{
    brute_mm, canonical_key, empty_sig_decide, enumerate_structures, extremal_elements, sat_bounded, AllStructures,
    Card, CardinalityVector, Extremum, SatVerdict,
};
use tclab_core::logic::{FiniteInterpretation, Formula, Signature, Sort, SIGMA1, SIGMA2};
use tclab_core::textio::parse_formula;
use tclab_core::theories::{cycle_theory, make_theory, membership_ti, SOracle, TheoryConfig};

fn fml(text: &str, sig: &Signature) -> Formula {
    parse_formula(text, sig).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn vec1(n: u64) -> CardinalityVector {
    CardinalityVector::finite(&Signature::sigma_1(), &[n]).unwrap()
}

fn mm_sizes(mm: &tclab_core::finite_model::MinimalModelSet) -> Vec<Vec<u64>> {
    mm.iter().map(|v| v.iter().map(|(_, c)| c.finite().unwrap()).collect()).collect()
}

fn t1_s7() -> tclab_core::theories::TheoryHandle {
    cycle_theory(1, SOracle::new([7]).unwrap()).unwrap()
}

#[test]
fn empty_signature_enumerates_one_structure_per_size() {
    let sig = Signature::sigma_1();
    let n = enumerate_structures(&sig, &vec1(2), |_| true, false).unwrap().count();
    assert_eq!(n, 2);
}

#[test]
fn unary_function_counts_are_k_to_the_k() {
    let sig = Signature::sigma_f();
    let count = |b| enumerate_structures(&sig, &vec1(b), |_| true, false).unwrap().count();
    assert_eq!(count(2), 1 + 4);
    assert_eq!(count(3), 1 + 4 + 27);
}

#[test]
fn t3_filter_keeps_the_loop_and_the_two_cycle() {
    let t3 = cycle_theory(3, SOracle::default()).unwrap();
    let kept: Vec<FiniteInterpretation> =
        enumerate_structures(&Signature::sigma_f(), &vec1(2), |m| t3.membership(m), false).unwrap().collect();
    assert_eq!(kept.len(), 2);
    assert_eq!(kept[0].function_table("f").unwrap(), &[0]);
    assert_eq!(kept[1].function_table("f").unwrap(), &[1, 0]);
}

/// Unlabeled functional graphs on k vertices: 1, 3, 7, 19, 47.
#[test]
fn canonical_enumeration_counts_functional_graphs() {
    let sig = Signature::sigma_f();
    let per_size: Vec<usize> = (1..=5)
        .map(|k| {
            enumerate_structures(&sig, &vec1(k), |m| m.total_size() == k as usize, true).unwrap().count()
        })
        .collect();
    assert_eq!(per_size, vec![1, 3, 7, 19, 47]);
}

/// Brute-force isomorphism test for small functional graphs.
fn isomorphic(a: &[usize], b: &[usize]) -> bool {
    fn permutations(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(k - 1) {
            for i in 0..k {
                let mut q = p.clone();
                q.insert(i, k - 1);
                out.push(q);
            }
        }
        out
    }
    a.len() == b.len() && permutations(a.len()).iter().any(|p| (0..a.len()).all(|v| p[a[v]] == b[p[v]]))
}

#[test]
fn canonical_key_agrees_with_brute_force_isomorphism() {
    let sig = Signature::sigma_f();
    let all: Vec<FiniteInterpretation> =
        enumerate_structures(&sig, &vec1(4), |m| m.total_size() == 4, false).unwrap().collect();
    let tables: Vec<Vec<usize>> = all.iter().map(|m| m.function_table("f").unwrap().to_vec()).collect();
    let keys: Vec<Vec<usize>> = all.iter().map(canonical_key).collect();
    for i in (0..all.len()).step_by(7) {
        for j in (0..all.len()).step_by(5) {
            assert_eq!(keys[i] == keys[j], isomorphic(&tables[i], &tables[j]), "{:?} vs {:?}", tables[i], tables[j]);
        }
    }
}

#[test]
fn infinite_bound_is_rejected() {
    let sig = Signature::sigma_1();
    let bound = CardinalityVector::new(vec![(Sort::new(SIGMA1), Card::Aleph0)]).unwrap();
    assert!(enumerate_structures(&sig, &bound, |_| true, false).is_err());
}

#[test]
fn singleton_theory_refutes_a_disequality() {
    let teq1 = make_theory("teq1", &TheoryConfig::default()).unwrap();
    let phi = fml("(not (= x y))", teq1.signature());
    assert_eq!(sat_bounded(&teq1, &phi, &vec1(4)).unwrap(), SatVerdict::UnsatUpTo(vec1(4)));
}

#[test]
fn seven_cycle_is_found_for_t1() {
    let t1 = t1_s7();
    let phi = fml("(cycle 7 x)", t1.signature());
    let v = sat_bounded(&t1, &phi, &vec1(7)).unwrap();
    let m = v.model().expect("sat");
    assert!(m.evaluate(&phi).unwrap());
    assert!(membership_ti(1, &SOracle::new([7]).unwrap(), m).unwrap());
    assert_eq!(m.total_size(), 7);
}

#[test]
fn trivial_equality_has_a_singleton_model() {
    let teq = make_theory("teq", &TheoryConfig::default()).unwrap();
    let phi = fml("(= x x)", teq.signature());
    let m = sat_bounded(&teq, &phi, &vec1(1)).unwrap();
    assert_eq!(m.model().unwrap().total_size(), 1);
}

#[test]
fn brute_mm_examples() {
    let teq = make_theory("teq", &TheoryConfig::default()).unwrap();
    let mm = brute_mm(&teq, &fml("(distinct x y)", teq.signature()), &vec1(4)).unwrap();
    assert_eq!(mm_sizes(&mm), vec![vec![2]]);

    let t2n = make_theory("t2n", &TheoryConfig::default()).unwrap();
    let phi = fml("(and (distinct w1 w2) (P w1) (P w2))", t2n.signature());
    assert_eq!(mm_sizes(&brute_mm(&t2n, &phi, &vec1(6)).unwrap()), vec![vec![4]]);

    let t1 = t1_s7();
    let phi = fml("(and (cycle 7 x) (= (f (f (f (f y)))) y))", t1.signature());
    let start = Instant::now();
    assert_eq!(mm_sizes(&brute_mm(&t1, &phi, &vec1(12)).unwrap()), vec![vec![11]]);
    eprintln!("cycle_7 ∧ f^4(y)=y in {:?}", start.elapsed());
}

#[test]
fn unsatisfiable_input_has_empty_minimal_model_set() {
    let teq = make_theory("teq", &TheoryConfig::default()).unwrap();
    let mm = brute_mm(&teq, &fml("(not (= x x))", teq.signature()), &vec1(3)).unwrap();
    assert!(mm.is_empty());
}

fn pair(a: u64, b: u64) -> CardinalityVector {
    CardinalityVector::finite(&Signature::empty_two_sorted(), &[a, b]).unwrap()
}

#[test]
fn extremal_examples() {
    let s = [pair(1, 3), pair(2, 2), pair(3, 1), pair(1, 1)];
    let max: BTreeSet<_> = [pair(1, 3), pair(2, 2), pair(3, 1)].into_iter().collect();
    assert_eq!(extremal_elements(&s, Extremum::Maximal), max);
    assert_eq!(extremal_elements(&s, Extremum::Minimal), [pair(1, 1)].into_iter().collect());
    assert_eq!(extremal_elements(&s[..1], Extremum::Minimal), [pair(1, 3)].into_iter().collect());
}

#[test]
fn empty_signature_examples() {
    let sig = Signature::sigma_1();
    assert!(empty_sig_decide(&[vec1(2)], &fml("(not (= x y))", &sig)).unwrap());
    assert!(!empty_sig_decide(&[vec1(2)], &fml("(distinct x y z)", &sig)).unwrap());
    assert!(empty_sig_decide(&[vec1(1)], &fml("(= x y)", &sig)).unwrap());
    let f = fml("(= (f x) x)", &Signature::sigma_f());
    assert!(empty_sig_decide(&[vec1(1)], &f).is_err());
}

#[test]
fn empty_signature_accepts_aleph0_components() {
    let sig = Signature::empty_two_sorted();
    let spectrum = CardinalityVector::new(vec![(Sort::new(SIGMA1), Card::Finite(1)), (Sort::new(SIGMA2), Card::Aleph0)])
        .unwrap();
    let phi = fml("(and (distinct (as a sigma2) b c) (= x y))", &sig);
    assert!(empty_sig_decide(std::slice::from_ref(&spectrum), &phi).unwrap());
    assert!(!empty_sig_decide(&[spectrum], &fml("(not (= x y))", &sig)).unwrap());
}

#[test]
fn search_over_all_structures_agrees_with_enumeration() {
    let sig = Signature::sigma_f();
    let class = AllStructures(sig.clone());
    let phi = fml("(and (= (f (f x)) x) (not (= (f x) x)) (= (f y) y))", &sig);
    let by_enum = enumerate_structures(&sig, &vec1(4), |_| true, false)
        .unwrap()
        .filter(|m| {
            let t = m.function_table("f").unwrap();
            (0..t.len()).any(|x| t[t[x]] == x && t[x] != x) && (0..t.len()).any(|y| t[y] == y)
        })
        .map(|m| m.total_size())
        .min();
    let by_search = sat_bounded(&class, &phi, &vec1(4)).unwrap().model().map(FiniteInterpretation::total_size);
    assert_eq!(by_enum, Some(3));
    assert_eq!(by_search, by_enum);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extremal_elements_are_undominated_members(raw in prop::collection::vec((1u64..5, 1u64..5), 1..8)) {
        let set: Vec<CardinalityVector> = raw.iter().map(|&(a, b)| pair(a, b)).collect();
        for mode in [Extremum::Minimal, Extremum::Maximal] {
            let ext = extremal_elements(&set, mode);
            prop_assert!(!ext.is_empty());
            for e in &ext {
                prop_assert!(set.contains(e));
                for s in &set {
                    if s != e {
                        let dominated = match mode {
                            Extremum::Minimal => s.le(e),
                            Extremum::Maximal => e.le(s),
                        };
                        prop_assert!(!dominated);
                    }
                }
            }
        }
    }
}
