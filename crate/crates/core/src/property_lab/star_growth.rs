//! Growing a star interpretation by one element while keeping every
//! flat literal, and the finite shadow of non-smoothness: distinct path
//! functions must disagree on the numbers below the top.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{Property, PropertyError, PropertyReport, Verdict};
use crate::logic::{FiniteInterpretation, Var};
use crate::theories::{build_star, Rho, StarElement, StarInterpretation, TreeNode};

/// A star interpretation with variables assigned to its elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarModel {
    pub star: StarInterpretation,
    pub assignment: BTreeMap<Var, StarElement>,
}

impl StarModel {
    pub fn to_interpretation(&self) -> Result<FiniteInterpretation, PropertyError> {
        let mut m = self.star.to_interpretation();
        for (v, e) in &self.assignment {
            let i = self
                .star
                .index_of(e)
                .ok_or_else(|| PropertyError::Invalid(format!("{v} is assigned {e}, which is not an element")))?;
            m.assign(v, i)?;
        }
        Ok(m)
    }
}

/// Which growth step was taken.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum StarGrowth {
    /// The tree was full: a new top number, the old leaves become inner
    /// nodes and the new level has no leaves yet.
    NewLevel,
    /// A missing leaf was added.
    AddLeaf { leaf: String },
}

/// One more element. A full tree gains a number `k` with
/// `f_ρ(k) = old f_ρ(k-1)` and variables at `k-1` move to `k`; otherwise
/// the lexicographically least missing leaf is added and nothing moves.
///
/// Bits of `ρ` past its stored prefix are unconstrained, so the new bit a
/// level needs is taken as `0`.
pub fn grow_star(m: &StarModel) -> Result<(StarModel, StarGrowth), PropertyError> {
    let star = &m.star;
    let k = star.levels();
    if star.is_full() {
        let rhos: Vec<(String, Rho)> = star
            .rhos()
            .iter()
            .map(|(name, r)| {
                let mut prefix = r.prefix.clone();
                if prefix.len() < k - 1 {
                    prefix.resize(k - 1, false);
                }
                (name.clone(), Rho { prefix, top: r.top.clone() })
            })
            .collect();
        let grown = build_star(k + 1, [], rhos)?;
        let assignment = m
            .assignment
            .iter()
            .map(|(v, e)| {
                let moved = match e {
                    StarElement::Num(top) if *top == k - 1 => StarElement::Num(k),
                    other => other.clone(),
                };
                (v.clone(), moved)
            })
            .collect();
        return Ok((StarModel { star: grown, assignment }, StarGrowth::NewLevel));
    }
    let leaf = TreeNode::all_of_length(k - 1)
        .into_iter()
        .find(|s| !star.leaves().contains(s))
        .expect("a tree that is not full misses a leaf");
    let mut leaves: BTreeSet<TreeNode> = star.leaves().clone();
    leaves.insert(leaf.clone());
    let grown = build_star(k, leaves, star.rhos().iter().map(|(n, r)| (n.clone(), r.clone())))?;
    Ok((StarModel { star: grown, assignment: m.assignment.clone() }, StarGrowth::AddLeaf { leaf: leaf.to_string() }))
}

fn first_difference(a: &[bool], b: &[bool]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y)
}

/// For each level `n` in `levels`, builds the full star over the family and
/// checks that `f_ρ(m) ≠ f_τ(m)` whenever `ρ` and `τ` first differ at bit
/// `m - 1 ≤ n - 3`. Reports how many distinct values the family takes at
/// the highest number below the top.
pub fn check_not_smooth_star(family: &[(String, Vec<bool>)], levels: &[usize]) -> Result<PropertyReport, PropertyError> {
    let distinct: BTreeSet<&Vec<bool>> = family.iter().map(|(_, bits)| bits).collect();
    if distinct.len() < 2 {
        return Err(PropertyError::Unsupported("a family with fewer than two distinct path functions".into()));
    }
    let mut evidence = Vec::new();
    let mut sizes = Vec::new();
    for &n in levels {
        let rhos = family
            .iter()
            .map(|(name, bits)| (name.clone(), Rho { prefix: bits.clone(), top: StarElement::Node(TreeNode::root()) }));
        let star = build_star(n, TreeNode::all_of_length(n - 1), rhos)?;
        let mut pairs = 0;
        for (i, (r, rb)) in family.iter().enumerate() {
            for (t, tb) in &family[i + 1..] {
                let Some(p) = first_difference(rb, tb) else { continue };
                let m = p + 1;
                if m + 2 > n {
                    continue;
                }
                pairs += 1;
                if star.apply(r, &StarElement::Num(m)) == star.apply(t, &StarElement::Num(m)) {
                    return Err(PropertyError::Invalid(format!("f_{r}({m}) = f_{t}({m}) at level {n}")));
                }
            }
        }
        let layer = StarElement::Num(n - 2);
        let values: BTreeSet<StarElement> = family.iter().filter_map(|(r, _)| star.apply(r, &layer)).collect();
        evidence.push(format!(
            "n={n}: {pairs} distinguished pairs; {} distinct values of f_ρ({})",
            values.len(),
            n - 2
        ));
        sizes.push(star.size());
    }
    Ok(PropertyReport {
        theory: "star".into(),
        property: Property::NonSmoothness,
        verdict: Verdict::ConstructionVerified,
        evidence,
        sizes,
        bound: levels.iter().copied().max().unwrap_or(0),
    })
}
