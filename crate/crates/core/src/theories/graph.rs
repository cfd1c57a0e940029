use crate::logic::{FiniteInterpretation, Signature, FUNC_F};

use super::TheoryError;

/// The directed graph of a unary function: every vertex has out-degree 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionalGraph {
    succ: Vec<usize>,
}

impl FunctionalGraph {
    pub fn new(succ: Vec<usize>) -> Result<Self, TheoryError> {
        if succ.is_empty() {
            return Err(TheoryError::WrongSignature("a functional graph needs at least one vertex".into()));
        }
        if let Some(&bad) = succ.iter().find(|&&v| v >= succ.len()) {
            return Err(TheoryError::WrongSignature(format!("successor {bad} out of range")));
        }
        Ok(FunctionalGraph { succ })
    }

    /// A single cycle `0 → 1 → … → n-1 → 0`.
    pub fn cycle(n: usize) -> Self {
        FunctionalGraph { succ: (0..n).map(|i| (i + 1) % n).collect() }
    }

    /// Disjoint union; the vertices of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &FunctionalGraph) -> Self {
        let k = self.succ.len();
        let mut succ = self.succ.clone();
        succ.extend(other.succ.iter().map(|&v| v + k));
        FunctionalGraph { succ }
    }

    /// The graph of `f` on the first sort.
    pub fn of_interpretation(interp: &FiniteInterpretation) -> Result<Self, TheoryError> {
        let table = interp
            .function_table(FUNC_F)
            .ok_or_else(|| TheoryError::WrongSignature("no unary function `f`".into()))?;
        FunctionalGraph::new(table.to_vec())
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn successor(&self, v: usize) -> usize {
        self.succ[v]
    }

    pub fn successors(&self) -> &[usize] {
        &self.succ
    }

    /// Each cycle once, rotated to start at its least vertex, sorted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut cycles = Vec::new();
        let mut state = vec![0u8; self.succ.len()];
        for start in 0..self.succ.len() {
            let mut path = Vec::new();
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                path.push(v);
                v = self.succ[v];
            }
            if state[v] == 1 {
                let at = path.iter().position(|&u| u == v).expect("on path");
                let mut cycle = path[at..].to_vec();
                let min_at = cycle.iter().enumerate().min_by_key(|&(_, &u)| u).map(|(i, _)| i).expect("non-empty");
                cycle.rotate_left(min_at);
                cycles.push(cycle);
            }
            for u in path {
                state[u] = 2;
            }
        }
        cycles.sort();
        cycles
    }

    /// Σ_f-structure with this graph as `f`.
    pub fn to_interpretation(&self) -> FiniteInterpretation {
        let mut m = FiniteInterpretation::new(Signature::sigma_f(), &[self.succ.len()]).expect("non-empty");
        m.set_function(FUNC_F, self.succ.clone()).expect("in range");
        m
    }
}

/// Lengths of all cycles, ascending.
pub fn cycle_lengths(g: &FunctionalGraph) -> Vec<usize> {
    let mut lens: Vec<usize> = g.cycles().iter().map(Vec::len).collect();
    lens.sort_unstable();
    lens
}

/// Cycle lengths already closed in a partial successor table, where
/// `undef` marks unfilled entries.
pub(crate) fn closed_cycle_lengths(succ: &[usize], undef: usize, mut visit: impl FnMut(usize)) {
    let mut state = vec![0u8; succ.len()];
    let mut path = Vec::new();
    for start in 0..succ.len() {
        path.clear();
        let mut v = start;
        while v != undef && state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = succ[v];
        }
        if v != undef && state[v] == 1 {
            let at = path.iter().position(|&u| u == v).expect("on path");
            visit(path.len() - at);
        }
        for &u in &path {
            state[u] = 2;
        }
    }
}
