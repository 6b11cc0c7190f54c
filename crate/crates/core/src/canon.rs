//! Canonical forms of instances under message relabeling.

use crate::instance::{relabel_mask, PliableInstance, ReceiverSet};

/// Largest `m` for which the exact minimum over all `m!` relabelings is used.
pub const EXACT_CANON_MAX_M: usize = 8;

/// A relabeling of `[1:m]`. `images()[i]` is the new label of message `i + 1`
/// (both 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation((0..m).collect())
    }

    /// From 1-based images.
    pub fn from_images(images: &[usize]) -> Self {
        let zero_based: Vec<usize> = images.iter().map(|&x| x - 1).collect();
        let mut seen = vec![false; images.len()];
        for &x in &zero_based {
            assert!(x < images.len() && !seen[x], "not a permutation: {images:?}");
            seen[x] = true;
        }
        Permutation(zero_based)
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    pub(crate) fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, h: ReceiverSet) -> ReceiverSet {
        ReceiverSet::from_mask(relabel_mask(h.mask(), &self.0))
    }

    pub fn apply_instance(&self, inst: &PliableInstance) -> PliableInstance {
        inst.relabel(&self.0)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Permutation(inv)
    }
}

/// Returns the lexicographically least relabeling of `inst` (absent masks
/// sorted ascending, compared as tuples) and a permutation reaching it.
///
/// For `m > EXACT_CANON_MAX_M` the result comes from a degree-refinement
/// ordering and is idempotent but not guaranteed minimal.
pub fn canonicalize(inst: &PliableInstance) -> (PliableInstance, Permutation) {
    let m = inst.m();
    let perm = if m <= EXACT_CANON_MAX_M {
        exact_minimizer(inst)
    } else {
        refinement_order(inst)
    };
    (inst.relabel(perm.as_slice()), perm)
}

/// True when `inst` already equals its canonical form.
pub fn is_canonical(inst: &PliableInstance) -> bool {
    canonicalize(inst).0 == *inst
}

fn exact_minimizer(inst: &PliableInstance) -> Permutation {
    let m = inst.m();
    let masks: Vec<u32> = inst.absent().iter().map(|h| h.mask()).collect();
    let mut best_key: Vec<u32> = masks.clone();
    let mut best = (0..m).collect::<Vec<_>>();
    let mut key = vec![0u32; masks.len()];
    let mut perm: Vec<usize> = (0..m).collect();
    // Lexicographic permutation order, so ties resolve to the smallest witness.
    loop {
        for (k, &h) in key.iter_mut().zip(&masks) {
            *k = relabel_mask(h, &perm);
        }
        key.sort_unstable();
        if key < best_key {
            best_key.copy_from_slice(&key);
            best.copy_from_slice(&perm);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Permutation(best)
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Orders messages by how they sit in the absent family: more memberships
/// first, then by the multiset of sizes of the sets containing them, then by
/// current index. Sorting is stable, so a relabeled output maps to itself.
fn refinement_order(inst: &PliableInstance) -> Permutation {
    let m = inst.m();
    let signature = |msg: u32| {
        let mut sizes: Vec<usize> = inst
            .absent()
            .iter()
            .filter(|h| h.mask() >> msg & 1 == 1)
            .map(|h| h.len())
            .collect();
        sizes.sort_unstable();
        (std::cmp::Reverse(sizes.len()), sizes)
    };
    let mut order: Vec<u32> = (0..m as u32).collect();
    order.sort_by_cached_key(|&msg| signature(msg));
    let mut perm = vec![0; m];
    for (new, &old) in order.iter().enumerate() {
        perm[old as usize] = new;
    }
    Permutation(perm)
}

/// Precomputed relabeling tables for all `m!` permutations, for enumerating
/// canonical families at small `m`.
pub(crate) struct RelabelTables {
    tables: Vec<Vec<u32>>,
}

impl RelabelTables {
    pub(crate) fn new(m: usize) -> Self {
        let size = 1usize << m;
        let mut perm: Vec<usize> = (0..m).collect();
        let mut tables = Vec::new();
        loop {
            tables.push((0..size as u32).map(|mask| relabel_mask(mask, &perm)).collect());
            if !next_permutation(&mut perm) {
                break;
            }
        }
        RelabelTables { tables }
    }

    /// `masks` must be sorted ascending.
    pub(crate) fn is_canonical(&self, masks: &[u32]) -> bool {
        let mut key = vec![0u32; masks.len()];
        for table in &self.tables {
            for (k, &h) in key.iter_mut().zip(masks) {
                *k = table[h as usize];
            }
            key.sort_unstable();
            if key.as_slice() < masks {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_relabels_to_one() {
        let inst = PliableInstance::from_lists(3, &[&[2]]).unwrap();
        let (canon, perm) = canonicalize(&inst);
        assert_eq!(canon, PliableInstance::from_lists(3, &[&[1]]).unwrap());
        assert_eq!(perm.images(), vec![2, 1, 3]);
    }

    #[test]
    fn canonical_input_is_fixed() {
        let inst = PliableInstance::from_lists(3, &[&[1]]).unwrap();
        let (canon, perm) = canonicalize(&inst);
        assert_eq!(canon, inst);
        assert_eq!(perm, Permutation::identity(3));
        assert!(is_canonical(&inst));
    }

    #[test]
    fn permutation_inverse_round_trip() {
        let p = Permutation::from_images(&[3, 1, 2, 5, 4]);
        let h = ReceiverSet::from_indices([1, 4]);
        assert_eq!(p.apply(h), ReceiverSet::from_indices([3, 5]));
        assert_eq!(p.inverse().apply(p.apply(h)), h);
    }

    #[test]
    fn refinement_is_idempotent_for_large_m() {
        let inst = PliableInstance::from_lists(
            10,
            &[&[9], &[1, 9, 10], &[2, 3, 9], &[4, 5, 6, 7, 8, 9]],
        )
        .unwrap();
        let (once, _) = canonicalize(&inst);
        let (twice, perm) = canonicalize(&once);
        assert_eq!(once, twice);
        assert_eq!(perm, Permutation::identity(10));
    }

    #[test]
    fn relabel_tables_agree_with_canonicalize() {
        let tables = RelabelTables::new(4);
        for a in 0u32..15 {
            for b in (a + 1)..15 {
                let inst = PliableInstance::new(4, [ReceiverSet::from_mask(a), ReceiverSet::from_mask(b)]).unwrap();
                assert_eq!(tables.is_canonical(&[a, b]), is_canonical(&inst));
            }
        }
    }
}
