use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{FiniteInterpretation, Formula, LogicError, Sort, Term, Var};

/// A sort-respecting partition of a finite variable set.
///
/// Canonical form: variables sorted, each block sorted, blocks ordered by
/// their least variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrangement {
    vars: Vec<Var>,
    blocks: Vec<Vec<Var>>,
}

impl Arrangement {
    pub fn new(blocks: Vec<Vec<Var>>) -> Result<Self, LogicError> {
        let mut seen = BTreeSet::new();
        let mut canon = Vec::new();
        for mut block in blocks {
            if block.is_empty() {
                return Err(LogicError::BadArrangement("empty block".into()));
            }
            block.sort();
            block.dedup();
            if let Some(v) = block.iter().find(|v| v.sort() != block[0].sort()) {
                return Err(LogicError::MixedSorts(block[0].clone(), v.clone()));
            }
            for v in &block {
                if !seen.insert(v.clone()) {
                    return Err(LogicError::BadArrangement(format!("`{v}` occurs in two blocks")));
                }
            }
            canon.push(block);
        }
        canon.sort();
        Ok(Arrangement { vars: seen.into_iter().collect(), blocks: canon })
    }

    /// Every variable in its own block.
    pub fn discrete(vars: impl IntoIterator<Item = Var>) -> Self {
        let set: BTreeSet<Var> = vars.into_iter().collect();
        let blocks = set.iter().map(|v| vec![v.clone()]).collect();
        Arrangement { vars: set.into_iter().collect(), blocks }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn blocks(&self) -> &[Vec<Var>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, v: &Var) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(v))
    }

    pub fn same_block(&self, a: &Var, b: &Var) -> bool {
        matches!((self.block_of(a), self.block_of(b)), (Some(x), Some(y)) if x == y)
    }

    /// `|V_σ/E|` for every sort that has variables.
    pub fn block_counts(&self) -> BTreeMap<Sort, usize> {
        let mut out = BTreeMap::new();
        for b in &self.blocks {
            *out.entry(b[0].sort().clone()).or_insert(0) += 1;
        }
        out
    }

    /// Restricted-growth labels in variable order.
    fn labels(&self) -> Vec<usize> {
        self.vars.iter().map(|v| self.block_of(v).expect("variable in some block")).collect()
    }
}

/// `x=y;z`: blocks separated by `;`, members of a block by `=`.
impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> =
            self.blocks.iter().map(|b| b.iter().map(Var::name).collect::<Vec<_>>().join("=")).collect();
        f.write_str(&blocks.join(";"))
    }
}

/// All sort-respecting partitions of `vars`, each exactly once.
///
/// Order: fewer blocks first; ties broken by the restricted-growth label
/// sequence over the sorted variables.
pub fn enumerate_arrangements(vars: &[Var]) -> impl Iterator<Item = Arrangement> {
    let set: BTreeSet<Var> = vars.iter().cloned().collect();
    let mut by_sort: BTreeMap<Sort, Vec<Var>> = BTreeMap::new();
    for v in &set {
        by_sort.entry(v.sort().clone()).or_default().push(v.clone());
    }
    let groups: Vec<Vec<Var>> = by_sort.into_values().collect();
    let per_group: Vec<Vec<Vec<usize>>> = groups.iter().map(|g| restricted_growth(g.len())).collect();

    let mut all = Vec::new();
    let mut choice = vec![0usize; groups.len()];
    loop {
        let mut blocks = Vec::new();
        for (gi, (g, &c)) in groups.iter().zip(&choice).enumerate() {
            let rgs = &per_group[gi][c];
            let n = rgs.iter().copied().max().map_or(0, |m| m + 1);
            let mut bs = vec![Vec::new(); n];
            for (v, &l) in g.iter().zip(rgs) {
                bs[l].push(v.clone());
            }
            blocks.extend(bs);
        }
        let arr = Arrangement::new(blocks).expect("generated partition is valid");
        all.push((arr.num_blocks(), arr.labels(), arr));
        // odometer over groups
        let mut i = groups.len();
        loop {
            if i == 0 {
                all.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
                return all.into_iter().map(|(_, _, a)| a);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < per_group[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// All restricted-growth strings of length `n`.
fn restricted_growth(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let limit = if cur.is_empty() { 0 } else { max + 1 };
        for l in 0..=limit {
            cur.push(l);
            go(n, cur, max.max(l), out);
            cur.pop();
        }
    }
    go(n, &mut cur, 0, &mut out);
    out
}

/// `δ_V^E`: `x=y` for same-block pairs, `¬(x=y)` for same-sort pairs in
/// different blocks, in variable order.
pub fn arrangement_formula(delta: &Arrangement) -> Formula {
    let vars = delta.vars();
    let mut parts = Vec::new();
    for (i, a) in vars.iter().enumerate() {
        for b in &vars[i + 1..] {
            if a.sort() != b.sort() {
                continue;
            }
            let atom = Formula::eq(Term::var(a), Term::var(b));
            parts.push(if delta.same_block(a, b) { atom } else { Formula::not(atom) });
        }
    }
    Formula::conj(parts)
}

/// Partition of `vars` by the values `interp` assigns them.
pub fn induced_arrangement(interp: &FiniteInterpretation, vars: &[Var]) -> Result<Arrangement, LogicError> {
    let mut classes: BTreeMap<(Sort, usize), Vec<Var>> = BTreeMap::new();
    for v in vars {
        let val = interp.value(v).ok_or_else(|| LogicError::Unassigned(v.clone()))?;
        classes.entry((v.sort().clone(), val)).or_default().push(v.clone());
    }
    Arrangement::new(classes.into_values().collect())
}
