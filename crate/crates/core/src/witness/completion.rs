//! Shrinking a `T_i`-model of a flat conjunction and an arrangement to one
//! whose domain is exactly the variable classes.

use super::{FlatConjunction, WitnessError};
use crate::logic::{arrangement_formula, Arrangement, FiniteInterpretation, Formula, Signature, FUNC_F};
use crate::theories::{membership_ti, CycleIndex, SOracle};

/// How the vertices without an inherited edge were closed off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletionCase {
    /// Every class already had its successor among the classes.
    Inherited,
    /// The inherited edges contain a cycle; open vertices point into it.
    AttachToCycle,
    /// Acyclic with at least two open vertices: they form one cycle, or two
    /// 3-cycles when there are exactly six.
    CloseOpenVertices,
    /// Acyclic with one open vertex `v` and some `w → v`: add `v → w`.
    BackEdge,
    /// A single class: a loop.
    Loop,
}

#[derive(Clone, Debug)]
pub struct Completion {
    pub model: FiniteInterpretation,
    pub case: CompletionCase,
}

/// Builds a `T_i`-model of `witphi ∧ δ` whose domain is `V/E`, from a seed
/// model of the same formula.
///
/// Vertex `k` of the result is the `k`-th block of `delta`. Edges between
/// blocks are copied from the seed; blocks whose seed successor is not the
/// value of any block are closed according to [`CompletionCase`].
pub fn complete_to_witness_model(
    index: CycleIndex,
    s: &SOracle,
    witphi: &FlatConjunction,
    delta: &Arrangement,
    seed: &FiniteInterpretation,
) -> Result<Completion, WitnessError> {
    let bad = |msg: String| Err(WitnessError::BadSeed(msg));
    if !membership_ti(index.get(), s, seed)? {
        return bad(format!("seed is not a {index}-interpretation"));
    }
    if let Some(v) = witphi.vars().iter().find(|v| delta.block_of(v).is_none()) {
        return bad(format!("variable `{v}` is not arranged"));
    }
    if delta.num_blocks() == 0 {
        return bad("the arrangement has no variables".into());
    }
    let check = Formula::conj(vec![witphi.to_formula(), arrangement_formula(delta)]);
    if !seed.evaluate(&check)? {
        return bad("seed does not satisfy the formula and the arrangement".into());
    }

    let values: Vec<usize> =
        delta.blocks().iter().map(|b| seed.value(&b[0]).expect("assigned: evaluation succeeded")).collect();
    let f = seed.function_table(FUNC_F).expect("checked by membership");
    let mut succ: Vec<Option<usize>> = values.iter().map(|&a| values.iter().position(|&b| b == f[a])).collect();
    let case = close(&mut succ);

    let succ: Vec<usize> = succ.into_iter().map(|s| s.expect("closed")).collect();
    let mut model = FiniteInterpretation::new(Signature::sigma_f(), &[succ.len()])?;
    model.set_function(FUNC_F, succ)?;
    for (k, block) in delta.blocks().iter().enumerate() {
        for v in block {
            model.assign(v, k)?;
        }
    }
    Ok(Completion { model, case })
}

/// Adds out-edges to the vertices that lack one.
fn close(succ: &mut [Option<usize>]) -> CompletionCase {
    let open: Vec<usize> = (0..succ.len()).filter(|&v| succ[v].is_none()).collect();
    if open.is_empty() {
        return CompletionCase::Inherited;
    }
    if let Some(target) = inherited_cycle_vertex(succ) {
        for &v in &open {
            succ[v] = Some(target);
        }
        return CompletionCase::AttachToCycle;
    }
    match open.len() {
        1 if succ.len() == 1 => {
            succ[0] = Some(0);
            CompletionCase::Loop
        }
        1 => {
            // Acyclic with a single sink: every path ends at `v`, so some
            // `w → v` exists.
            let v = open[0];
            let w = (0..succ.len()).find(|&w| succ[w] == Some(v)).expect("acyclic graph with one sink");
            succ[v] = Some(w);
            CompletionCase::BackEdge
        }
        6 => {
            for group in open.chunks(3) {
                for (i, &v) in group.iter().enumerate() {
                    succ[v] = Some(group[(i + 1) % 3]);
                }
            }
            CompletionCase::CloseOpenVertices
        }
        k => {
            for (i, &v) in open.iter().enumerate() {
                succ[v] = Some(open[(i + 1) % k]);
            }
            CompletionCase::CloseOpenVertices
        }
    }
}

/// The least vertex on a cycle of the partial graph, if there is a cycle.
fn inherited_cycle_vertex(succ: &[Option<usize>]) -> Option<usize> {
    (0..succ.len()).find(|&start| {
        let mut v = start;
        for _ in 0..succ.len() {
            match succ[v] {
                Some(next) if next == start => return true,
                Some(next) => v = next,
                None => return false,
            }
        }
        false
    })
}
