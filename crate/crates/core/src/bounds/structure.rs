use std::collections::BTreeMap;

use serde::Serialize;

use crate::achievability::Partition;
use crate::canon::Permutation;
use crate::instance::{PliableInstance, ReceiverSet};

/// Recognized shapes of the absent family. Partitions are reported with
/// `P_1..P_L` ordered by smallest message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureClass {
    None,
    PerfectNested { l: usize, partition: Partition },
    TruncatedNested { t: usize, l: usize, partition: Partition },
    /// Perfect family with `H_Q` replaced by `shrunk ⊊ H_Q`; `q` lists the
    /// part indices of `Q`.
    SlightlyImperfect { l: usize, partition: Partition, q: Vec<usize>, shrunk: ReceiverSet },
    /// `H1 ⊊ H2 ∩ H3` and `H2 ∪ H3 = [1:m]`.
    Prop1Triple { h1: ReceiverSet, h2: ReceiverSet, h3: ReceiverSet },
}

impl StructureClass {
    pub fn tag(&self) -> &'static str {
        match self {
            StructureClass::None => "none",
            StructureClass::PerfectNested { .. } => "perfect_nested",
            StructureClass::TruncatedNested { .. } => "truncated_nested",
            StructureClass::SlightlyImperfect { .. } => "slightly_imperfect",
            StructureClass::Prop1Triple { .. } => "prop1_triple",
        }
    }

    /// The same structure after relabeling messages by `perm`.
    pub fn relabeled(&self, perm: &Permutation) -> Self {
        let move_partition = |p: &Partition| {
            Partition::new(p.m(), perm.apply(p.p0()), p.parts().iter().map(|&s| perm.apply(s)).collect())
                .expect("relabeling keeps a partition valid")
        };
        match self {
            StructureClass::None => StructureClass::None,
            StructureClass::PerfectNested { l, partition } => {
                StructureClass::PerfectNested { l: *l, partition: move_partition(partition).normalized() }
            }
            StructureClass::TruncatedNested { t, l, partition } => {
                StructureClass::TruncatedNested { t: *t, l: *l, partition: move_partition(partition).normalized() }
            }
            StructureClass::SlightlyImperfect { l, partition, q, shrunk } => {
                let moved = move_partition(partition);
                let h = moved.h_q(moved.q_mask(q).expect("valid part set"));
                let normalized = moved.normalized();
                StructureClass::SlightlyImperfect {
                    l: *l,
                    q: parts_inside(&normalized, h),
                    partition: normalized,
                    shrunk: perm.apply(*shrunk),
                }
            }
            StructureClass::Prop1Triple { h1, h2, h3 } => {
                let (mut a, mut b) = (perm.apply(*h2), perm.apply(*h3));
                if b < a {
                    std::mem::swap(&mut a, &mut b);
                }
                StructureClass::Prop1Triple { h1: perm.apply(*h1), h2: a, h3: b }
            }
        }
    }
}

/// Part indices `i ≥ 1` with `P_i ⊆ h`.
fn parts_inside(p: &Partition, h: ReceiverSet) -> Vec<usize> {
    (1..=p.l()).filter(|&i| p.part(i).is_subset(h)).collect()
}

/// The only partition a nested family built from parts can use:
/// `P_0` is the common intersection, and the other parts group messages by
/// which members contain them.
fn recover_partition(m: usize, family: &[ReceiverSet]) -> Option<Partition> {
    let full = ReceiverSet::full(m);
    let p0 = family.iter().fold(full, |acc, &h| acc.intersection(h));
    let mut classes: BTreeMap<Vec<bool>, ReceiverSet> = BTreeMap::new();
    for x in full.difference(p0).iter() {
        let key = family.iter().map(|h| h.contains(x)).collect();
        let class = classes.entry(key).or_insert(ReceiverSet::EMPTY);
        *class = class.with(x);
    }
    let parts = classes.into_values().collect();
    Partition::new(m, p0, parts).ok().map(|p| p.normalized())
}

fn sorted(family: &[ReceiverSet]) -> Vec<ReceiverSet> {
    let mut v = family.to_vec();
    v.sort_unstable();
    v
}

/// Partition on which `family` is perfect `L`-nested, if any.
pub fn perfect_partition(m: usize, family: &[ReceiverSet]) -> Option<Partition> {
    if family.is_empty() {
        return None;
    }
    let p = recover_partition(m, family)?;
    if p.l() >= 32 || family.len() as u64 != (1u64 << p.l()) - 1 {
        return None;
    }
    (p.perfect_family() == sorted(family)).then_some(p)
}

/// `(T, partition)` for which `family` is `T`-truncated `L`-nested, with the
/// smallest such `T`.
pub fn truncated_partition(m: usize, family: &[ReceiverSet]) -> Option<(usize, Partition)> {
    if family.is_empty() {
        return None;
    }
    let p = recover_partition(m, family)?;
    let l = p.l();
    let mut count = 0u64;
    let mut binom = 1u64;
    for t in 0..l {
        count += binom;
        binom = binom * (l - t) as u64 / (t + 1) as u64;
        if count == family.len() as u64 {
            return (p.truncated_family(t) == sorted(family)).then_some((t, p));
        }
        if count > family.len() as u64 {
            break;
        }
    }
    None
}

/// `(partition, Q, shrunk)` when `family` is a perfect `L`-nested family
/// with `L ≥ 2` and exactly one member `H_Q` shrunk to a strict subset.
pub fn imperfect_structure(m: usize, family: &[ReceiverSet]) -> Option<(Partition, Vec<usize>, ReceiverSet)> {
    let family = sorted(family);
    for (j, &shrunk) in family.iter().enumerate() {
        let mut rest = family.clone();
        rest.remove(j);
        if rest.is_empty() {
            continue;
        }
        let Some(p) = recover_partition(m, &rest) else { continue };
        if p.l() < 2 || p.l() >= 32 || family.len() as u64 != (1u64 << p.l()) - 1 {
            continue;
        }
        let missing: Vec<ReceiverSet> = p.perfect_family().into_iter().filter(|g| rest.binary_search(g).is_err()).collect();
        if let [h] = missing[..] {
            if shrunk.is_strict_subset(h) {
                let q = parts_inside(&p, h);
                return Some((p, q, shrunk));
            }
        }
    }
    None
}

/// `(H1, H2, H3)` with `H1 ⊊ H2 ∩ H3` and `H2 ∪ H3 = [1:m]`, `H2 < H3` by
/// bitmask.
pub fn prop1_triple(m: usize, family: &[ReceiverSet]) -> Option<(ReceiverSet, ReceiverSet, ReceiverSet)> {
    let family = sorted(family);
    if family.len() != 3 {
        return None;
    }
    let full = ReceiverSet::full(m);
    (0..3).find_map(|i| {
        let (h2, h3) = match i {
            0 => (family[1], family[2]),
            1 => (family[0], family[2]),
            _ => (family[0], family[1]),
        };
        let h1 = family[i];
        (h1.is_strict_subset(h2.intersection(h3)) && h2.union(h3) == full).then_some((h1, h2, h3))
    })
}

/// Detects, in order: perfect nested, truncated nested, the three-receiver
/// shape `H1 ⊊ H2 ∩ H3` with `H2 ∪ H3 = [1:m]`, a slightly imperfect nested
/// family, and otherwise `None`.
pub fn classify_structure(inst: &PliableInstance) -> StructureClass {
    let m = inst.m();
    let family = inst.absent();
    if let Some(partition) = perfect_partition(m, family) {
        return StructureClass::PerfectNested { l: partition.l(), partition };
    }
    if let Some((t, partition)) = truncated_partition(m, family) {
        return StructureClass::TruncatedNested { t, l: partition.l(), partition };
    }
    if let Some((h1, h2, h3)) = prop1_triple(m, family) {
        return StructureClass::Prop1Triple { h1, h2, h3 };
    }
    if let Some((partition, q, shrunk)) = imperfect_structure(m, family) {
        return StructureClass::SlightlyImperfect { l: partition.l(), partition, q, shrunk };
    }
    StructureClass::None
}

fn has_perfect_two_nested_triple(m: usize, family: &[ReceiverSet]) -> bool {
    let n = family.len();
    (0..n).any(|a| {
        (a + 1..n).any(|b| {
            (b + 1..n).any(|c| perfect_partition(m, &[family[a], family[b], family[c]]).is_some_and(|p| p.l() == 2))
        })
    })
}

/// `β_q` for the families with a known closed form, else `None`.
pub fn closed_form_beta(inst: &PliableInstance) -> Option<usize> {
    let m = inst.m();
    let family = inst.absent();
    match family.len() {
        0 => Some(m),
        1 | 2 => Some(m - 1),
        3 => Some(if perfect_partition(m, family).is_some_and(|p| p.l() == 2) { m - 2 } else { m - 1 }),
        4 => {
            let truncated = truncated_partition(m, family).is_some_and(|(t, p)| t == 1 && p.l() == 3);
            Some(if truncated || has_perfect_two_nested_triple(m, family) { m - 2 } else { m - 1 })
        }
        _ => match classify_structure(inst) {
            StructureClass::PerfectNested { l, .. } => Some(m - l),
            StructureClass::TruncatedNested { t, .. } => Some(m - t - 1),
            StructureClass::SlightlyImperfect { l, .. } => Some(m - l + 1),
            StructureClass::Prop1Triple { .. } => Some(m - 1),
            StructureClass::None => None,
        },
    }
}

/// True when `closed_form_beta` is `m − 2` because of a perfect 2-nested or
/// 1-truncated 3-nested subfamily (three or four absent receivers only).
pub fn has_two_level_subfamily(inst: &PliableInstance) -> bool {
    let m = inst.m();
    let family = inst.absent();
    match family.len() {
        3 => has_perfect_two_nested_triple(m, family),
        4 => {
            truncated_partition(m, family).is_some_and(|(t, p)| t == 1 && p.l() == 3)
                || has_perfect_two_nested_triple(m, family)
        }
        _ => false,
    }
}
