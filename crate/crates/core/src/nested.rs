//! Chains of absent receivers ordered by strict inclusion.

use serde::Serialize;

use crate::instance::{PliableInstance, ReceiverSet};

/// Absent receivers `H_1 ⊊ H_2 ⊊ ⋯`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NestedChain {
    links: Vec<ReceiverSet>,
}

impl NestedChain {
    /// Panics when the links are not strictly nested.
    pub fn new(links: Vec<ReceiverSet>) -> Self {
        assert!(
            links.windows(2).all(|w| w[0].is_strict_subset(w[1])),
            "chain links must be strictly nested"
        );
        NestedChain { links }
    }

    pub fn links(&self) -> &[ReceiverSet] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

/// Length of the longest absent chain starting at each absent receiver,
/// indexed like `inst.absent()`.
pub(crate) fn upward_lengths(inst: &PliableInstance) -> Vec<usize> {
    let absent = inst.absent();
    let mut up = vec![1usize; absent.len()];
    // A strict superset has a strictly larger mask, so a reverse sweep sees
    // every superset before its subsets.
    for i in (0..absent.len()).rev() {
        for j in (i + 1)..absent.len() {
            if absent[i].is_strict_subset(absent[j]) {
                up[i] = up[i].max(up[j] + 1);
            }
        }
    }
    up
}

/// A longest chain of absent receivers. Ties go to the lexicographically
/// smallest sequence of bitmasks. Empty when there are no absent receivers.
pub fn longest_nested_chain(inst: &PliableInstance) -> NestedChain {
    let absent = inst.absent();
    let up = upward_lengths(inst);
    let Some(&best) = up.iter().max() else {
        return NestedChain::default();
    };
    let mut links = Vec::with_capacity(best);
    let mut cur = up.iter().position(|&u| u == best).expect("maximum exists");
    links.push(absent[cur]);
    while up[cur] > 1 {
        cur = ((cur + 1)..absent.len())
            .find(|&j| absent[cur].is_strict_subset(absent[j]) && up[j] + 1 == up[cur])
            .expect("longest chain continues");
        links.push(absent[cur]);
    }
    NestedChain::new(links)
}

/// `L_max`, the length of the longest absent chain.
pub fn longest_chain_length(inst: &PliableInstance) -> usize {
    upward_lengths(inst).into_iter().max().unwrap_or(0)
}

/// Every inclusion-maximal chain of absent receivers with at least `min_len`
/// links, in lexicographic order of bitmask sequences.
pub fn all_maximal_chains(inst: &PliableInstance, min_len: usize) -> Vec<NestedChain> {
    let absent = inst.absent();
    let n = absent.len();
    // covers[i]: absent receivers immediately above absent[i].
    let covers: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (i + 1..n)
                .filter(|&j| absent[i].is_strict_subset(absent[j]))
                .filter(|&j| {
                    !(i + 1..j).any(|k| {
                        absent[i].is_strict_subset(absent[k]) && absent[k].is_strict_subset(absent[j])
                    })
                })
                .collect()
        })
        .collect();
    let minimal = (0..n).filter(|&i| !(0..i).any(|k| absent[k].is_strict_subset(absent[i])));

    let mut out = Vec::new();
    let mut path = Vec::new();
    for start in minimal {
        extend_maximal(absent, &covers, start, &mut path, min_len, &mut out);
    }
    out
}

fn extend_maximal(
    absent: &[ReceiverSet],
    covers: &[Vec<usize>],
    at: usize,
    path: &mut Vec<ReceiverSet>,
    min_len: usize,
    out: &mut Vec<NestedChain>,
) {
    path.push(absent[at]);
    if covers[at].is_empty() {
        if path.len() >= min_len {
            out.push(NestedChain::new(path.clone()));
        }
    } else {
        for &next in &covers[at] {
            extend_maximal(absent, covers, next, path, min_len, out);
        }
    }
    path.pop();
}

/// Every chain of absent receivers with exactly `len` links (not necessarily
/// maximal), in lexicographic order.
pub fn chains_of_length(inst: &PliableInstance, len: usize) -> Vec<NestedChain> {
    fn grow(absent: &[ReceiverSet], path: &mut Vec<usize>, len: usize, out: &mut Vec<NestedChain>) {
        if path.len() == len {
            out.push(NestedChain::new(path.iter().map(|&i| absent[i]).collect()));
            return;
        }
        let from = path.last().map_or(0, |&i| i + 1);
        for j in from..absent.len() {
            if path.last().is_none_or(|&i| absent[i].is_strict_subset(absent[j])) {
                path.push(j);
                grow(absent, path, len, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    if len > 0 {
        grow(inst.absent(), &mut Vec::new(), len, &mut out);
    }
    out
}

/// For every mask `c` in `0..2^m`: the longest absent chain whose links all
/// contain `c`. Bounds the number of absent receivers any run of the
/// decoding-chain algorithm can still hit once its chain equals `c`.
pub(crate) fn superset_chain_table(inst: &PliableInstance) -> Vec<u8> {
    let m = inst.m();
    let size = 1usize << m;
    let mut table = vec![0u8; size];
    for (h, up) in inst.absent().iter().zip(upward_lengths(inst)) {
        table[h.mask() as usize] = up as u8;
    }
    for c in (0..size).rev() {
        let mut best = table[c];
        let mut missing = !(c as u32) & (size as u32 - 1);
        while missing != 0 {
            let b = missing & missing.wrapping_neg();
            best = best.max(table[c | b as usize]);
            missing &= missing - 1;
        }
        table[c] = best;
    }
    table
}

/// Longest absent chain whose links all contain `c`, without a lookup table.
pub fn longest_chain_above(inst: &PliableInstance, c: ReceiverSet) -> usize {
    let absent = inst.absent();
    upward_lengths(inst)
        .into_iter()
        .zip(absent)
        .filter(|(_, h)| c.is_subset(**h))
        .map(|(u, _)| u)
        .max()
        .unwrap_or(0)
}
