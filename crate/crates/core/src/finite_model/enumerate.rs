//! Labeled enumeration of all structures up to a size bound, with optional
//! isomorphism reduction by canonical form.

use std::collections::HashSet;

use super::{size_vectors, CardinalityVector, ModelError};
use crate::logic::{FiniteInterpretation, Signature};

/// Iterator over structures; see [`enumerate_structures`].
pub struct StructureStream<'f> {
    sig: Signature,
    size_queue: std::vec::IntoIter<Vec<usize>>,
    current: Option<Odometer>,
    filter: Box<dyn Fn(&FiniteInterpretation) -> bool + 'f>,
    seen: Option<HashSet<Vec<usize>>>,
}

struct Odometer {
    sizes: Vec<usize>,
    /// Radix of each digit; functions first, then predicates.
    radix: Vec<usize>,
    digits: Vec<usize>,
    /// `(is_function, symbol index, start, len)`.
    layout: Vec<(bool, usize, usize, usize)>,
    done: bool,
}

impl Odometer {
    fn new(sig: &Signature, sizes: Vec<usize>) -> Self {
        let size_of = |s| sizes[sig.sort_index(s).expect("own sort")];
        let mut radix = Vec::new();
        let mut layout = Vec::new();
        for (i, f) in sig.functions().iter().enumerate() {
            let len: usize = f.args.iter().map(size_of).product();
            layout.push((true, i, radix.len(), len));
            radix.extend(std::iter::repeat_n(size_of(&f.result), len));
        }
        for (i, p) in sig.predicates().iter().enumerate() {
            let len: usize = p.args.iter().map(size_of).product();
            layout.push((false, i, radix.len(), len));
            radix.extend(std::iter::repeat_n(2, len));
        }
        let digits = vec![0; radix.len()];
        Odometer { sizes, radix, digits, layout, done: false }
    }

    fn current(&self, sig: &Signature) -> FiniteInterpretation {
        let mut m = FiniteInterpretation::new(sig.clone(), &self.sizes).expect("positive sizes");
        for &(is_fn, i, start, len) in &self.layout {
            let cells = &self.digits[start..start + len];
            if is_fn {
                m.set_function(&sig.functions()[i].name, cells.to_vec()).expect("in range");
            } else {
                m.set_predicate(&sig.predicates()[i].name, cells.iter().map(|&b| b == 1).collect()).expect("sized");
            }
        }
        m
    }

    /// Last digit varies fastest.
    fn advance(&mut self) {
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.radix[i] {
                return;
            }
            self.digits[i] = 0;
        }
        self.done = true;
    }
}

impl Iterator for StructureStream<'_> {
    type Item = FiniteInterpretation;

    fn next(&mut self) -> Option<FiniteInterpretation> {
        loop {
            let odo = match &mut self.current {
                Some(o) if !o.done => o,
                _ => {
                    let sizes = self.size_queue.next()?;
                    self.current = Some(Odometer::new(&self.sig, sizes));
                    continue;
                }
            };
            let m = odo.current(&self.sig);
            odo.advance();
            if let Some(seen) = &mut self.seen {
                if !seen.insert(canonical_key(&m)) {
                    continue;
                }
            }
            if (self.filter)(&m) {
                return Some(m);
            }
        }
    }
}

/// Every structure over `sig` with sizes within `bound`, ordered by size
/// vector and then table contents. With `canonical`, only the first member
/// of each isomorphism class is kept.
pub fn enumerate_structures<'f>(
    sig: &Signature,
    bound: &CardinalityVector,
    filter: impl Fn(&FiniteInterpretation) -> bool + 'f,
    canonical: bool,
) -> Result<StructureStream<'f>, ModelError> {
    if sig.has_families() {
        return Err(ModelError::LazyFamilies);
    }
    if !bound.sorts().eq(sig.sorts().iter()) {
        return Err(ModelError::SortsMismatch);
    }
    let limits = bound.finite_sizes()?;
    Ok(StructureStream {
        sig: sig.clone(),
        size_queue: size_vectors(&limits).into_iter(),
        current: None,
        filter: Box::new(filter),
        seen: canonical.then(HashSet::new),
    })
}

/// Flattened view of a structure's tables over global element ids.
struct Tables {
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    /// `(symbol id, argument ids, value)`; predicates use value 0/1 and ids
    /// above the functions.
    entries: Vec<(usize, Vec<usize>, usize)>,
    func_count: usize,
    sort_of: Vec<usize>,
}

impl Tables {
    fn of(m: &FiniteInterpretation) -> Self {
        let sig = m.signature();
        let sizes = m.sizes();
        let mut offsets = Vec::new();
        let mut sort_of = Vec::new();
        for (s, &k) in sizes.iter().enumerate() {
            offsets.push(sort_of.len());
            sort_of.extend(std::iter::repeat_n(s, k));
        }
        let gid = |sort: &crate::logic::Sort, e: usize| offsets[sig.sort_index(sort).expect("own sort")] + e;
        let mut entries = Vec::new();
        let decode = |args: &[crate::logic::Sort], mut row: usize| {
            let mut out = vec![0; args.len()];
            for (i, s) in args.iter().enumerate().rev() {
                let k = sizes[sig.sort_index(s).expect("own sort")];
                out[i] = gid(s, row % k);
                row /= k;
            }
            out
        };
        for (fi, f) in sig.functions().iter().enumerate() {
            for (row, &v) in m.function_table(&f.name).expect("total").iter().enumerate() {
                entries.push((fi, decode(&f.args, row), gid(&f.result, v)));
            }
        }
        let func_count = sig.functions().len();
        for (pi, p) in sig.predicates().iter().enumerate() {
            for (row, &b) in m.predicate_table(&p.name).expect("total").iter().enumerate() {
                entries.push((func_count + pi, decode(&p.args, row), b as usize));
            }
        }
        Tables { offsets, sizes, entries, func_count, sort_of }
    }

    /// Iso-invariant colors by iterated refinement.
    fn colors(&self) -> Vec<usize> {
        let n = self.sort_of.len();
        let mut colors = self.sort_of.clone();
        let mut classes = distinct(&colors);
        loop {
            let mut profile: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
            for (sym, args, val) in &self.entries {
                let is_fn = *sym < self.func_count;
                let mut shape: Vec<usize> = args.iter().map(|&a| colors[a]).collect();
                shape.push(if is_fn { colors[*val] } else { *val });
                for (pos, &a) in args.iter().enumerate() {
                    profile[a].push([vec![*sym, pos], shape.clone()].concat());
                }
                if is_fn {
                    profile[*val].push([vec![*sym, usize::MAX], shape].concat());
                }
            }
            let keyed: Vec<(usize, Vec<Vec<usize>>)> = profile
                .into_iter()
                .enumerate()
                .map(|(e, mut p)| {
                    p.sort();
                    (colors[e], p)
                })
                .collect();
            let mut ranks: Vec<&(usize, Vec<Vec<usize>>)> = keyed.iter().collect();
            ranks.sort();
            ranks.dedup();
            let next: Vec<usize> = keyed.iter().map(|k| ranks.binary_search(&k).expect("present")).collect();
            let next_classes = distinct(&next);
            colors = next;
            if next_classes == classes {
                return colors;
            }
            classes = next_classes;
        }
    }

    fn encode(&self, relabel: &[usize]) -> Vec<usize> {
        let mut out = self.sizes.clone();
        let base = out.len();
        out.resize(base + self.entries.len(), 0);
        // Entries of one symbol are contiguous; a relabeled row stays inside
        // its symbol's span.
        let mut span_start = 0;
        for (i, (sym, args, val)) in self.entries.iter().enumerate() {
            if i > 0 && self.entries[i - 1].0 != *sym {
                span_start = i;
            }
            let mut row = 0;
            for &a in args {
                let s = self.sort_of[a];
                row = row * self.sizes[s] + (relabel[a] - self.offsets[s]);
            }
            out[base + span_start + row] =
                if *sym < self.func_count { relabel[*val] - self.offsets[self.sort_of[*val]] } else { *val };
        }
        out
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// A key equal for two structures iff they are isomorphic (assignments are
/// ignored).
pub fn canonical_key(m: &FiniteInterpretation) -> Vec<usize> {
    let tables = Tables::of(m);
    let colors = tables.colors();
    // Per sort, elements grouped by color; the labeling fixes group order and
    // tries every order within a group.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_sort = Vec::new();
    for (s, &k) in tables.sizes.iter().enumerate() {
        let mut elems: Vec<usize> = (tables.offsets[s]..tables.offsets[s] + k).collect();
        elems.sort_by_key(|&e| colors[e]);
        for chunk in elems.chunk_by(|&a, &b| colors[a] == colors[b]) {
            groups.push(chunk.to_vec());
            group_sort.push(s);
        }
    }
    let mut relabel = vec![0; tables.sort_of.len()];
    let mut best: Option<Vec<usize>> = None;
    let mut next_slot: Vec<usize> = tables.offsets.clone();
    let mut bases = Vec::new();
    for (g, &s) in groups.iter().zip(&group_sort) {
        bases.push(next_slot[s]);
        next_slot[s] += g.len();
    }
    search_labelings(&tables, &mut groups, &bases, 0, &mut relabel, &mut best);
    best.expect("at least one labeling")
}

fn search_labelings(
    tables: &Tables,
    groups: &mut [Vec<usize>],
    bases: &[usize],
    g: usize,
    relabel: &mut [usize],
    best: &mut Option<Vec<usize>>,
) {
    if g == groups.len() {
        let code = tables.encode(relabel);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    }
    let mut perm = groups[g].clone();
    perm.sort_unstable();
    loop {
        for (i, &e) in perm.iter().enumerate() {
            relabel[e] = bases[g] + i;
        }
        search_labelings(tables, groups, bases, g + 1, relabel, best);
        if !next_permutation(&mut perm) {
            break;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}
