//! Star interpretations: an initial segment of numbers `[0, n-1]` coupled
//! with a binary tree through path functions `f_ρ`.
//!
//! Each `ρ` is represented by a finite bit prefix (at least `n-2` bits) and
//! an explicit value at the top number `n-1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::TheoryError;
use crate::logic::{FiniteInterpretation, Signature};

pub const PRED_N: &str = "N";
pub const PRED_T: &str = "T";
pub const PRED_LT: &str = "<";
pub const STAR_FAMILY: &str = "f";

/// A finite bit string; a node of the tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeNode(pub Vec<bool>);

impl TreeNode {
    pub fn root() -> Self {
        TreeNode(Vec::new())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Accepts `ε` (or the empty string) and strings over `0`/`1`.
    pub fn parse(text: &str) -> Result<Self, TheoryError> {
        if text == "ε" {
            return Ok(TreeNode::root());
        }
        text.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(TheoryError::BadStar(format!("`{text}` is not a bit string"))),
            })
            .collect::<Result<Vec<bool>, _>>()
            .map(TreeNode)
    }

    /// All strings of length exactly `len`, in lexicographic order.
    pub fn all_of_length(len: usize) -> Vec<TreeNode> {
        (0..1u64 << len)
            .map(|code| TreeNode((0..len).map(|i| code >> (len - 1 - i) & 1 == 1).collect()))
            .collect()
    }
}

impl fmt::Display for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// An element of a star interpretation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StarElement {
    Num(usize),
    Node(TreeNode),
}

impl fmt::Display for StarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarElement::Num(m) => write!(f, "n{m}"),
            StarElement::Node(t) => write!(f, "{t}"),
        }
    }
}

/// One path function: bits of `ρ` and the chosen value at the top number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rho {
    pub prefix: Vec<bool>,
    pub top: StarElement,
}

impl Rho {
    /// `ρ` given as a bit string such as `"0000"`.
    pub fn from_bits(bits: &str, top: StarElement) -> Result<Self, TheoryError> {
        Ok(Rho { prefix: TreeNode::parse(bits)?.0, top })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarInterpretation {
    levels: usize,
    leaves: BTreeSet<TreeNode>,
    rhos: BTreeMap<String, Rho>,
}

/// Validates and builds a star interpretation with `n` numbers.
pub fn build_star(
    n: usize,
    leaves: impl IntoIterator<Item = TreeNode>,
    rhos: impl IntoIterator<Item = (String, Rho)>,
) -> Result<StarInterpretation, TheoryError> {
    if n < 2 {
        return Err(TheoryError::BadStar(format!("need at least 2 levels, got {n}")));
    }
    let leaves: BTreeSet<TreeNode> = leaves.into_iter().collect();
    if let Some(bad) = leaves.iter().find(|l| l.depth() != n - 1) {
        return Err(TheoryError::BadStar(format!("leaf {bad} does not have length {}", n - 1)));
    }
    let star = StarInterpretation { levels: n, leaves, rhos: BTreeMap::new() };
    let mut rho_map = BTreeMap::new();
    for (name, rho) in rhos {
        if name.is_empty() {
            return Err(TheoryError::BadStar("empty path-function name".into()));
        }
        if rho.prefix.len() < n - 2 {
            return Err(TheoryError::BadStar(format!("ρ `{name}` needs at least {} bits", n - 2)));
        }
        if !star.in_tree(&rho.top) {
            return Err(TheoryError::BadStar(format!("f_{name}({}) = {} is not a tree element", n - 1, rho.top)));
        }
        rho_map.insert(name, rho);
    }
    Ok(StarInterpretation { rhos: rho_map, ..star })
}

impl StarInterpretation {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn leaves(&self) -> &BTreeSet<TreeNode> {
        &self.leaves
    }

    pub fn rhos(&self) -> &BTreeMap<String, Rho> {
        &self.rhos
    }

    /// Every string of length `n-1` is a leaf.
    pub fn is_full(&self) -> bool {
        self.leaves.len() == 1usize << (self.levels - 1)
    }

    pub fn in_tree(&self, e: &StarElement) -> bool {
        match e {
            StarElement::Num(_) => false,
            StarElement::Node(t) => t.depth() + 2 <= self.levels || self.leaves.contains(t),
        }
    }

    /// Numbers, then inner nodes by depth, then leaves.
    pub fn domain(&self) -> Vec<StarElement> {
        let mut out: Vec<StarElement> = (0..self.levels).map(StarElement::Num).collect();
        for d in 0..self.levels - 1 {
            out.extend(TreeNode::all_of_length(d).into_iter().map(StarElement::Node));
        }
        out.extend(self.leaves.iter().cloned().map(StarElement::Node));
        out
    }

    pub fn size(&self) -> usize {
        self.levels + (1 << (self.levels - 1)) - 1 + self.leaves.len()
    }

    pub fn index_of(&self, e: &StarElement) -> Option<usize> {
        match e {
            StarElement::Num(m) => (*m < self.levels).then_some(*m),
            StarElement::Node(t) if t.depth() + 2 <= self.levels => {
                let code = t.0.iter().fold(0usize, |acc, &b| acc * 2 + b as usize);
                Some(self.levels + (1 << t.depth()) - 1 + code)
            }
            StarElement::Node(t) => {
                let pos = self.leaves.iter().position(|l| l == t)?;
                Some(self.levels + (1 << (self.levels - 1)) - 1 + pos)
            }
        }
    }

    /// `f_ρ(e)`, or `None` for an unknown `ρ` or element.
    pub fn apply(&self, rho: &str, e: &StarElement) -> Option<StarElement> {
        let r = self.rhos.get(rho)?;
        match e {
            StarElement::Num(m) if *m + 2 <= self.levels => Some(StarElement::Node(TreeNode(r.prefix[..*m].to_vec()))),
            StarElement::Num(m) if *m + 1 == self.levels => Some(r.top.clone()),
            StarElement::Num(_) => None,
            StarElement::Node(_) => self.in_tree(e).then(|| e.clone()),
        }
    }

    pub fn function_name(rho: &str) -> String {
        format!("{STAR_FAMILY}_{rho}")
    }

    /// The structure over the finite cut with one `f_ρ` per configured `ρ`.
    pub fn to_interpretation(&self) -> FiniteInterpretation {
        let names: Vec<String> = self.rhos.keys().map(|r| Self::function_name(r)).collect();
        let sig = Signature::sigma_star()
            .instantiate(names.iter().map(String::as_str), [])
            .expect("family members");
        let domain = self.domain();
        let k = domain.len();
        let mut m = FiniteInterpretation::new(sig.clone(), &[k]).expect("non-empty");
        let sort = sig.sorts()[0].clone();
        m.set_element_names(&sort, domain.iter().map(ToString::to_string).collect()).expect("sized");
        let is_num: Vec<bool> = domain.iter().map(|e| matches!(e, StarElement::Num(_))).collect();
        m.set_predicate(PRED_N, is_num.clone()).expect("sized");
        m.set_predicate(PRED_T, is_num.iter().map(|b| !b).collect()).expect("sized");
        let mut lt = vec![false; k * k];
        for a in 0..self.levels {
            for b in a + 1..self.levels {
                lt[a * k + b] = true;
            }
        }
        m.set_predicate(PRED_LT, lt).expect("sized");
        for (rho, name) in self.rhos.keys().zip(&names) {
            let table = domain
                .iter()
                .map(|e| self.index_of(&self.apply(rho, e).expect("total")).expect("in domain"))
                .collect();
            m.set_function(name, table).expect("in range");
        }
        m
    }
}

/// Whether a finite structure over a cut of the star signature is (up to
/// isomorphism) a star interpretation restricted to the cut's `f_ρ`s.
pub fn membership_star(interp: &FiniteInterpretation) -> bool {
    let k = interp.total_size();
    let (Some(n_tab), Some(t_tab), Some(lt)) =
        (interp.predicate_table(PRED_N), interp.predicate_table(PRED_T), interp.predicate_table(PRED_LT))
    else {
        return false;
    };
    if interp.signature().sorts().len() != 1 || n_tab.iter().zip(t_tab).any(|(a, b)| a == b) {
        return false;
    }
    let numbers: Vec<usize> = (0..k).filter(|&e| n_tab[e]).collect();
    let tree: Vec<usize> = (0..k).filter(|&e| t_tab[e]).collect();
    let n = numbers.len();
    if n < 2 {
        return false;
    }
    let inner = (1usize << (n - 1)) - 1;
    if tree.len() < inner || tree.len() > inner + (1 << (n - 1)) {
        return false;
    }
    // `<` is a strict total order on N and empty elsewhere; rank = number of
    // predecessors.
    let mut rank = vec![usize::MAX; k];
    for a in 0..k {
        for b in 0..k {
            if lt[a * k + b] && !(n_tab[a] && n_tab[b]) {
                return false;
            }
        }
    }
    for &a in &numbers {
        let preds = numbers.iter().filter(|&&b| lt[b * k + a]).count();
        rank[a] = preds;
    }
    let mut by_rank = vec![usize::MAX; n];
    for &a in &numbers {
        if by_rank[rank[a]] != usize::MAX {
            return false;
        }
        by_rank[rank[a]] = a;
    }
    for &a in &numbers {
        for &b in &numbers {
            if lt[a * k + b] != (rank[a] < rank[b]) {
                return false;
            }
        }
    }
    // Path functions: fix T pointwise, map the top into T, and the lower
    // numbers along consistent prefix chains.
    let mut depth = vec![usize::MAX; k];
    let mut parent = vec![usize::MAX; k];
    let mut root = usize::MAX;
    for name in interp.function_names() {
        let f = interp.function_table(name).expect("listed");
        if tree.iter().any(|&t| f[t] != t) || !t_tab[f[by_rank[n - 1]]] {
            return false;
        }
        for m in 0..n - 1 {
            let node = f[by_rank[m]];
            if !t_tab[node] || (depth[node] != usize::MAX && depth[node] != m) {
                return false;
            }
            depth[node] = m;
            if m == 0 {
                if root != usize::MAX && root != node {
                    return false;
                }
                root = node;
            } else {
                let up = f[by_rank[m - 1]];
                if parent[node] != usize::MAX && parent[node] != up {
                    return false;
                }
                parent[node] = up;
            }
        }
    }
    let mut children = vec![0usize; k];
    for &p in parent.iter().filter(|&&p| p != usize::MAX) {
        children[p] += 1;
    }
    children.iter().all(|&c| c <= 2)
}
