//! The concrete theories: equality theories, the cycle theories `T1`–`T4`,
//! `T_2n`, the oracle theory `T⟨h⟩`, the star theory, add-sort lifts and
//! empty-signature spectrum theories.
//!
//! Every theory has a decidable membership test on finite structures. The
//! undecidable parameters (`S`, `h`) are injected as computable oracles.

mod graph;
mod oracles;
mod star;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use graph::{cycle_lengths, FunctionalGraph};
pub use oracles::{is_prime, HOracle, SOracle};
pub use star::{
    build_star, membership_star, Rho, StarElement, StarInterpretation, TreeNode, PRED_LT, PRED_N, PRED_T,
    STAR_FAMILY,
};

use crate::finite_model::{CardinalityVector, ModelClass, PartialStructure, UNDEF};
use crate::logic::{
    cardinality_sentence, cycle_formula, distinct_formula, CardKind, FiniteInterpretation, Formula, LogicError,
    Signature, Sort, Term, Var, FUNC_F, SIGMA2,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
    #[error("theory `{theory}` needs {what}")]
    MissingConfig { theory: String, what: &'static str },
    #[error("{0} is not a prime ≥ 7")]
    BadSMember(u64),
    #[error("cycle theory index must be 1..=4, got {0}")]
    BadIndex(u8),
    #[error("wrong signature: {0}")]
    WrongSignature(String),
    #[error("malformed star interpretation: {0}")]
    BadStar(String),
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Whether a capability is an actual algorithm or leans on an injected
/// oracle standing in for a non-computable parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Computable,
    OracleDependent,
}

/// Which witness construction a theory carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// Flatten, then add a variable if there is none.
    Cycle,
    /// Arrangement-indexed padding from a minimal model function.
    Shiny,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Capabilities {
    pub decide: Option<Provenance>,
    pub strong_witness: Option<WitnessKind>,
    pub mm: Option<Provenance>,
}

/// Expected properties; `None` means no claim is made.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PropertyFlags {
    pub one_sorted: Option<bool>,
    pub stably_infinite: Option<bool>,
    pub convex: Option<bool>,
    pub smooth: Option<bool>,
    pub finitely_smooth: Option<bool>,
    pub stably_finite: Option<bool>,
    pub strongly_finitely_witnessable: Option<bool>,
    pub strongly_polite: Option<bool>,
    pub additively_polite: Option<bool>,
    pub computable_mm: Option<bool>,
    pub shiny: Option<bool>,
    pub decidable: Option<bool>,
}

/// Index of a cycle theory `T1`–`T4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleIndex(u8);

impl CycleIndex {
    pub fn new(i: u8) -> Result<Self, TheoryError> {
        (1..=4).contains(&i).then_some(CycleIndex(i)).ok_or(TheoryError::BadIndex(i))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> [CycleIndex; 4] {
        [CycleIndex(1), CycleIndex(2), CycleIndex(3), CycleIndex(4)]
    }

    /// `T2`, `T4`: no 6-cycles.
    pub fn forbids_six(self) -> bool {
        self.0 == 2 || self.0 == 4
    }

    /// `T3`, `T4`: a loop forces a singleton.
    pub fn loops_force_singleton(self) -> bool {
        self.0 >= 3
    }
}

impl fmt::Display for CycleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoryKind {
    /// No axioms over one sort.
    Eq,
    /// Exactly one element.
    EqOne,
    /// Singletons deciding each `P_n` by `h`.
    H(HOracle),
    /// `|P| ≥ n` forces at least `2n` elements.
    T2n,
    Cycle { index: CycleIndex, s: SOracle },
    /// The wrapped theory on `sigma1` plus an unconstrained `sigma2`.
    AddSort(Box<TheoryHandle>),
    /// Empty signature; sizes dominated by a member of the list.
    Spectrum(Vec<CardinalityVector>),
    Star,
}

/// A theory: name, signature, membership and declared capabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryHandle {
    name: String,
    signature: Signature,
    kind: TheoryKind,
}

/// Parameters for [`make_theory`].
#[derive(Clone, Debug, Default)]
pub struct TheoryConfig {
    pub s: Option<SOracle>,
    pub h: Option<HOracle>,
}

/// Builds a theory by catalog name: `teq`, `teq1`, `th`, `t2n`, `t1`–`t4`,
/// `adds-t1`–`adds-t4`, `star`.
pub fn make_theory(name: &str, config: &TheoryConfig) -> Result<TheoryHandle, TheoryError> {
    let missing = |what| TheoryError::MissingConfig { theory: name.to_string(), what };
    if let Some(inner) = name.strip_prefix("adds-") {
        return Ok(add_sort(&make_theory(inner, config)?));
    }
    let (signature, kind) = match name {
        "teq" => (Signature::sigma_1(), TheoryKind::Eq),
        "teq1" => (Signature::sigma_1(), TheoryKind::EqOne),
        "th" => (Signature::sigma_pn(), TheoryKind::H(config.h.clone().ok_or_else(|| missing("an h oracle"))?)),
        "t2n" => (Signature::sigma_p(), TheoryKind::T2n),
        "t1" | "t2" | "t3" | "t4" => {
            let index = CycleIndex::new(name.as_bytes()[1] - b'0')?;
            let s = config.s.clone().ok_or_else(|| missing("an S set"))?;
            (Signature::sigma_f(), TheoryKind::Cycle { index, s })
        }
        "star" => (Signature::sigma_star(), TheoryKind::Star),
        _ => return Err(TheoryError::UnknownTheory(name.to_string())),
    };
    Ok(TheoryHandle { name: name.to_string(), signature, kind })
}

/// `T_i` with the given `S`.
pub fn cycle_theory(i: u8, s: SOracle) -> Result<TheoryHandle, TheoryError> {
    make_theory(&format!("t{i}"), &TheoryConfig { s: Some(s), h: None })
}

/// Lifts a one-sorted theory over `sigma1` to a two-sorted one whose second
/// sort is unconstrained.
pub fn add_sort(t: &TheoryHandle) -> TheoryHandle {
    let mut signature = t.signature.clone();
    if signature.add_sort(SIGMA2).is_err() {
        // Already two-sorted; lifting twice is the identity.
        return t.clone();
    }
    TheoryHandle { name: format!("adds-{}", t.name), signature, kind: TheoryKind::AddSort(Box::new(t.clone())) }
}

/// Empty-signature theory over `sorts` whose models are those with size
/// vectors dominated by a member of `spectrum_max`.
pub fn spectrum_theory(sorts: &[&str], spectrum_max: Vec<CardinalityVector>) -> Result<TheoryHandle, TheoryError> {
    let mut signature = Signature::new();
    for s in sorts {
        signature.add_sort(s)?;
    }
    if spectrum_max.iter().any(|v| !v.sorts().eq(signature.sorts().iter())) {
        return Err(TheoryError::BadConfig("spectrum vectors must list the theory's sorts in order".into()));
    }
    Ok(TheoryHandle { name: "spectrum".into(), signature, kind: TheoryKind::Spectrum(spectrum_max) })
}

impl TheoryHandle {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn kind(&self) -> &TheoryKind {
        &self.kind
    }

    /// The cycle theory underneath, looking through add-sort.
    pub fn cycle_base(&self) -> Option<(CycleIndex, &SOracle)> {
        match &self.kind {
            TheoryKind::Cycle { index, s } => Some((*index, s)),
            TheoryKind::AddSort(inner) => inner.cycle_base(),
            _ => None,
        }
    }

    pub fn is_add_sort(&self) -> bool {
        matches!(self.kind, TheoryKind::AddSort(_))
    }

    /// Membership of a finite structure.
    pub fn membership(&self, m: &FiniteInterpretation) -> bool {
        let sizes = m.sizes();
        match &self.kind {
            TheoryKind::Eq => true,
            TheoryKind::EqOne => m.total_size() == 1,
            TheoryKind::H(h) => {
                m.total_size() == 1
                    && m.predicate_names().all(|p| match self.signature.predicate_family_index(p) {
                        Some(n) => m.predicate_table(p).expect("listed")[0] == h.value(n),
                        None => true,
                    })
            }
            TheoryKind::T2n => {
                let p = m.predicate_table("P").map_or(0, |t| t.iter().filter(|&&b| b).count());
                sizes[0] >= 2 * p
            }
            TheoryKind::Cycle { index, s } => match FunctionalGraph::of_interpretation(m) {
                Ok(g) => cycle_member(*index, s, sizes[0], &cycle_lengths(&g)),
                Err(_) => false,
            },
            TheoryKind::AddSort(inner) => reduct(m, &inner.signature).is_some_and(|r| inner.membership(&r)),
            TheoryKind::Spectrum(max) => {
                max.iter().any(|v| v.iter().zip(&sizes).all(|((_, c), &k)| crate::finite_model::Card::Finite(k as u64) <= *c))
            }
            TheoryKind::Star => membership_star(m),
        }
    }

    /// The theory's axioms relevant to structures with at most `limit`
    /// elements, or `None` if the theory is not given by a first-order
    /// schema here. Schemas indexed by `n` are cut at `n ≤ limit`.
    pub fn axioms(&self, limit: usize) -> Option<Vec<Formula>> {
        let x = Var::new("_ax", self.signature.sorts()[0].clone());
        let y = Var::new("_ay", self.signature.sorts()[0].clone());
        let sort = self.signature.sorts()[0].clone();
        let exactly_one = || cardinality_sentence(CardKind::Exactly, &sort, 1).expect("positive");
        match &self.kind {
            TheoryKind::Eq => Some(Vec::new()),
            TheoryKind::EqOne => Some(vec![exactly_one()]),
            TheoryKind::H(h) => {
                let mut ax: Vec<Formula> = (1..=limit as u64)
                    .map(|n| {
                        let p = Formula::pred(&format!("P_{n}"), Vec::new());
                        if h.value(n) {
                            p
                        } else {
                            Formula::not(p)
                        }
                    })
                    .collect();
                ax.push(exactly_one());
                Some(ax)
            }
            TheoryKind::T2n => Some(
                (1..=limit)
                    .map(|n| {
                        let xs: Vec<Var> = (1..=n).map(|i| Var::new(format!("_p{i}"), sort.clone())).collect();
                        let mut body = vec![distinct_formula(&xs).expect("one sort")];
                        body.extend(xs.iter().map(|v| Formula::pred("P", vec![Term::var(v)])));
                        let psi = Formula::Exists(xs, Box::new(Formula::conj(body)));
                        let at_least = cardinality_sentence(CardKind::AtLeast, &sort, 2 * n).expect("positive");
                        Formula::implies(psi, at_least)
                    })
                    .collect(),
            ),
            TheoryKind::Cycle { index, s } => {
                let f = |t: Term| Term::iterate(FUNC_F, 1, t);
                let no_two_cycle = Formula::Forall(
                    vec![x.clone()],
                    Box::new(Formula::neq(Term::iterate(FUNC_F, 2, Term::var(&x)), Term::var(&x))),
                );
                let exists_cycle =
                    |n: usize| Formula::Exists(vec![x.clone()], Box::new(cycle_formula(n, &x).expect("positive")));
                let mut ax: Vec<Formula> = s
                    .members()
                    .filter(|&n| n as usize <= limit)
                    .map(|n| Formula::implies(exists_cycle(n as usize), no_two_cycle.clone()))
                    .collect();
                if index.forbids_six() {
                    ax.push(Formula::not(exists_cycle(6)));
                }
                if index.loops_force_singleton() {
                    let has_loop = Formula::Exists(vec![x.clone()], Box::new(Formula::eq(f(Term::var(&x)), Term::var(&x))));
                    let singleton = Formula::Forall(vec![x.clone(), y.clone()], Box::new(Formula::var_eq(&x, &y)));
                    ax.push(Formula::implies(has_loop, singleton));
                }
                Some(ax)
            }
            TheoryKind::AddSort(inner) => inner.axioms(limit),
            TheoryKind::Spectrum(_) | TheoryKind::Star => None,
        }
    }

    /// Per-sort size bound that suffices to decide `phi` by bounded search,
    /// or `None` when no such bound is known.
    ///
    /// Cycle theories: the completion of a strong-witness model has one
    /// element per variable of the flattened input, at most one per distinct
    /// subterm. `T_2n`: shrinking keeps the variables plus as many non-`P`
    /// elements as variables in `P`.
    pub fn bound_hint(&self, phi: &Formula) -> Option<Vec<usize>> {
        let terms = distinct_terms_by_sort(phi);
        let count = |i: usize| terms.get(&self.signature.sorts()[i]).copied().unwrap_or(0).max(1);
        match &self.kind {
            TheoryKind::Eq | TheoryKind::Cycle { .. } => Some(vec![count(0)]),
            TheoryKind::EqOne | TheoryKind::H(_) => Some(vec![1]),
            TheoryKind::T2n => Some(vec![2 * count(0)]),
            TheoryKind::Spectrum(_) => Some((0..self.signature.sorts().len()).map(count).collect()),
            TheoryKind::AddSort(inner) => {
                let mut hint = inner.bound_hint(phi)?;
                hint.push(count(1));
                Some(hint)
            }
            TheoryKind::Star => None,
        }
    }

    pub fn capabilities(&self) -> Capabilities {
        use Provenance::*;
        match &self.kind {
            TheoryKind::Eq | TheoryKind::T2n | TheoryKind::Spectrum(_) => Capabilities {
                decide: Some(Computable),
                strong_witness: Some(WitnessKind::Shiny),
                mm: Some(Computable),
            },
            TheoryKind::EqOne => Capabilities { decide: Some(Computable), strong_witness: None, mm: Some(Computable) },
            TheoryKind::H(_) => {
                Capabilities { decide: Some(OracleDependent), strong_witness: None, mm: Some(OracleDependent) }
            }
            TheoryKind::Cycle { .. } => Capabilities {
                decide: Some(OracleDependent),
                strong_witness: Some(WitnessKind::Cycle),
                mm: Some(OracleDependent),
            },
            TheoryKind::AddSort(inner) => inner.capabilities(),
            TheoryKind::Star => Capabilities::default(),
        }
    }

    /// Expected property flags of the theory itself.
    pub fn flags(&self) -> PropertyFlags {
        let yes = Some(true);
        let no = Some(false);
        match &self.kind {
            TheoryKind::Eq => PropertyFlags {
                one_sorted: yes,
                stably_infinite: yes,
                convex: yes,
                smooth: yes,
                finitely_smooth: yes,
                stably_finite: yes,
                strongly_finitely_witnessable: yes,
                strongly_polite: yes,
                additively_polite: yes,
                computable_mm: yes,
                shiny: yes,
                decidable: yes,
            },
            TheoryKind::EqOne => PropertyFlags {
                one_sorted: yes,
                stably_infinite: no,
                convex: yes,
                smooth: no,
                stably_finite: yes,
                strongly_polite: no,
                computable_mm: yes,
                shiny: no,
                decidable: yes,
                ..PropertyFlags::default()
            },
            TheoryKind::H(_) => PropertyFlags {
                one_sorted: yes,
                stably_infinite: no,
                convex: yes,
                smooth: no,
                stably_finite: yes,
                strongly_polite: no,
                computable_mm: no,
                shiny: no,
                decidable: no,
                ..PropertyFlags::default()
            },
            TheoryKind::T2n => PropertyFlags {
                one_sorted: yes,
                stably_infinite: yes,
                smooth: yes,
                finitely_smooth: yes,
                stably_finite: yes,
                strongly_finitely_witnessable: yes,
                strongly_polite: yes,
                additively_polite: no,
                computable_mm: yes,
                shiny: yes,
                decidable: yes,
                ..PropertyFlags::default()
            },
            TheoryKind::Cycle { index, .. } => {
                let si = !index.loops_force_singleton();
                PropertyFlags {
                    one_sorted: yes,
                    stably_infinite: Some(si),
                    convex: Some(!index.forbids_six()),
                    smooth: Some(si),
                    stably_finite: yes,
                    strongly_finitely_witnessable: yes,
                    strongly_polite: Some(si),
                    computable_mm: no,
                    shiny: no,
                    decidable: no,
                    ..PropertyFlags::default()
                }
            }
            TheoryKind::AddSort(inner) => PropertyFlags { one_sorted: no, ..inner.flags() },
            TheoryKind::Spectrum(_) => PropertyFlags { decidable: yes, ..PropertyFlags::default() },
            TheoryKind::Star => PropertyFlags {
                one_sorted: yes,
                smooth: no,
                finitely_smooth: yes,
                stably_finite: yes,
                ..PropertyFlags::default()
            },
        }
    }
}

impl fmt::Display for TheoryHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Number of distinct terms (including subterms) of each sort in `phi`.
fn distinct_terms_by_sort(phi: &Formula) -> BTreeMap<Sort, usize> {
    fn walk(t: &Term, seen: &mut BTreeSet<Term>) {
        if seen.insert(t.clone()) {
            if let Term::App { args, .. } = t {
                args.iter().for_each(|a| walk(a, seen));
            }
        }
    }
    let mut seen = BTreeSet::new();
    phi.visit_atoms(&mut |a| a.terms().into_iter().for_each(|t| walk(t, &mut seen)));
    let mut out = BTreeMap::new();
    for t in &seen {
        *out.entry(t.sort().clone()).or_insert(0) += 1;
    }
    out
}

/// `T_i` membership from the cycle lengths of the graph of `f`.
fn cycle_member(index: CycleIndex, s: &SOracle, size: usize, lens: &[usize]) -> bool {
    let has_s = lens.iter().any(|&l| s.contains(l as u64));
    let has_short = lens.iter().any(|&l| l <= 2);
    let t1 = !has_s || !has_short;
    let six_ok = !index.forbids_six() || !lens.contains(&6);
    let loop_ok = !index.loops_force_singleton() || !lens.contains(&1) || size == 1;
    t1 && six_ok && loop_ok
}

/// Whether `interp` (over `Σ_f`) is a `T_i`-interpretation.
pub fn membership_ti(i: u8, s: &SOracle, interp: &FiniteInterpretation) -> Result<bool, TheoryError> {
    let index = CycleIndex::new(i)?;
    if interp.signature().function(FUNC_F).is_none_or(|d| d.args.len() != 1) {
        return Err(TheoryError::WrongSignature("expected a unary `f`".into()));
    }
    let g = FunctionalGraph::of_interpretation(interp)?;
    Ok(cycle_member(index, s, interp.size_of(&interp.signature().sorts()[0])?, &cycle_lengths(&g)))
}

/// The part of `m` over the sorts and symbols of `sig` (a prefix of `m`'s
/// sorts).
fn reduct(m: &FiniteInterpretation, sig: &Signature) -> Option<FiniteInterpretation> {
    let sizes = m.sizes();
    let n = sig.sorts().len();
    if sizes.len() < n || m.signature().sorts()[..n] != *sig.sorts() {
        return None;
    }
    let funcs: Vec<&str> = m.function_names().filter(|f| sig.function(f).is_some()).collect();
    let preds: Vec<&str> = m.predicate_names().filter(|p| sig.predicate(p).is_some()).collect();
    let cut = sig.instantiate(funcs.iter().copied(), preds.iter().copied()).ok()?;
    let mut r = FiniteInterpretation::new(cut, &sizes[..n]).ok()?;
    for f in funcs {
        r.set_function(f, m.function_table(f)?.to_vec()).ok()?;
    }
    for p in preds {
        r.set_predicate(p, m.predicate_table(p)?.to_vec()).ok()?;
    }
    for (v, &e) in m.assignment() {
        if sig.sort_index(v.sort()).is_some() {
            r.assign(v, e).ok()?;
        }
    }
    Some(r)
}

impl ModelClass for TheoryHandle {
    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn contains(&self, model: &FiniteInterpretation) -> bool {
        self.membership(model)
    }

    fn excludes_partial(&self, partial: &PartialStructure<'_>) -> bool {
        match &self.kind {
            TheoryKind::Cycle { index, s } => {
                let Some(f) = partial.function(FUNC_F) else { return false };
                let mut lens = Vec::new();
                graph::closed_cycle_lengths(f, UNDEF, |l| lens.push(l));
                !cycle_member(*index, s, partial.sizes()[0], &lens)
            }
            TheoryKind::T2n => {
                let Some(len) = partial.predicate_len("P") else { return false };
                let p = (0..len).filter(|&r| partial.predicate("P", r) == Some(true)).count();
                2 * p > partial.sizes()[0]
            }
            TheoryKind::AddSort(inner) => inner.excludes_partial(partial),
            _ => false,
        }
    }

    fn admits_sizes(&self, sizes: &[usize]) -> bool {
        match &self.kind {
            TheoryKind::EqOne | TheoryKind::H(_) => sizes.iter().all(|&k| k == 1),
            TheoryKind::Spectrum(max) => {
                max.iter().any(|v| v.iter().zip(sizes).all(|((_, c), &k)| crate::finite_model::Card::Finite(k as u64) <= *c))
            }
            TheoryKind::AddSort(inner) => inner.admits_sizes(&sizes[..1]),
            _ => true,
        }
    }
}
