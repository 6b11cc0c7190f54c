use serde::Serialize;

use super::AchievabilityError;
use crate::instance::{bits, full_mask, PliableInstance, ReceiverSet};

/// Messages split into `P_0, P_1, …, P_L`; only `P_0` may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    m: usize,
    parts: Vec<ReceiverSet>,
}

impl Partition {
    /// `parts` lists `P_1..P_L` in the order that defines their indices.
    pub fn new(m: usize, p0: ReceiverSet, parts: Vec<ReceiverSet>) -> Result<Self, AchievabilityError> {
        let bad = |why: &str| Err(AchievabilityError::InvalidPartition(why.to_string()));
        if parts.is_empty() {
            return bad("needs at least one part besides P0");
        }
        let mut seen = p0.mask();
        for p in &parts {
            if p.is_empty() {
                return bad("only P0 may be empty");
            }
            if seen & p.mask() != 0 {
                return bad("parts overlap");
            }
            seen |= p.mask();
        }
        if seen != full_mask(m) {
            return bad("parts do not cover exactly [1:m]");
        }
        let mut all = vec![p0];
        all.extend(parts);
        Ok(Partition { m, parts: all })
    }

    /// From 1-based index lists.
    pub fn from_lists(m: usize, p0: &[usize], parts: &[&[usize]]) -> Result<Self, AchievabilityError> {
        let set = |l: &[usize]| -> Result<ReceiverSet, AchievabilityError> {
            if l.iter().any(|&i| i == 0 || i > m) {
                return Err(AchievabilityError::InvalidPartition(format!("index outside [1:{m}]")));
            }
            let s = ReceiverSet::from_indices(l.iter().copied());
            if s.len() != l.len() {
                return Err(AchievabilityError::InvalidPartition("repeated index".into()));
            }
            Ok(s)
        };
        let parts = parts.iter().map(|p| set(p)).collect::<Result<Vec<_>, _>>()?;
        Self::new(m, set(p0)?, parts)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of non-`P_0` parts.
    pub fn l(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn p0(&self) -> ReceiverSet {
        self.parts[0]
    }

    /// `P_i` for `i` in `0..=L`.
    pub fn part(&self, i: usize) -> ReceiverSet {
        self.parts[i]
    }

    /// `P_1..P_L`.
    pub fn parts(&self) -> &[ReceiverSet] {
        &self.parts[1..]
    }

    /// Same partition with `P_1..P_L` sorted by smallest message.
    pub fn normalized(&self) -> Self {
        let mut parts = self.parts[1..].to_vec();
        parts.sort_by_key(|p| p.mask().trailing_zeros());
        let mut all = vec![self.parts[0]];
        all.extend(parts);
        Partition { m: self.m, parts: all }
    }

    /// `H_Q = P_0 ∪ ⋃_{i∈Q} P_i`, where bit `i-1` of `q_mask` selects `P_i`.
    pub fn h_q(&self, q_mask: u64) -> ReceiverSet {
        let mut h = self.parts[0];
        for i in 1..=self.l() {
            if q_mask >> (i - 1) & 1 == 1 {
                h = h.union(self.parts[i]);
            }
        }
        h
    }

    /// Bit mask of part indices `Q`; errors on an index outside `[1:L]`.
    pub fn q_mask(&self, q_parts: &[usize]) -> Result<u64, AchievabilityError> {
        let mut mask = 0u64;
        for &i in q_parts {
            if !(1..=self.l()).contains(&i) {
                return Err(AchievabilityError::InvalidPartSet(format!("part index {i} outside [1:{}]", self.l())));
            }
            mask |= 1 << (i - 1);
        }
        Ok(mask)
    }

    /// `{H_Q : Q ⊊ [1:L], |Q| ≤ t}`, sorted by bitmask.
    pub fn truncated_family(&self, t: usize) -> Vec<ReceiverSet> {
        let l = self.l();
        let mut family: Vec<ReceiverSet> = (0..(1u64 << l) - 1)
            .filter(|q| (q.count_ones() as usize) <= t)
            .map(|q| self.h_q(q))
            .collect();
        family.sort_unstable();
        family
    }

    /// `{H_Q : Q ⊊ [1:L]}`, sorted by bitmask.
    pub fn perfect_family(&self) -> Vec<ReceiverSet> {
        self.truncated_family(self.l())
    }

    /// The instance whose absent receivers are perfect `L`-nested on this
    /// partition.
    pub fn perfect_instance(&self) -> PliableInstance {
        PliableInstance::new(self.m, self.perfect_family()).expect("perfect family is valid")
    }

    pub fn truncated_instance(&self, t: usize) -> PliableInstance {
        PliableInstance::new(self.m, self.truncated_family(t)).expect("truncated family is valid")
    }

    /// The perfect family with `H_Q` replaced by `shrunk`. Errors unless
    /// `shrunk ⊊ H_Q` and the result has no repeated receiver.
    pub fn imperfect_instance(&self, q_parts: &[usize], shrunk: ReceiverSet) -> Result<PliableInstance, AchievabilityError> {
        let q = self.q_mask(q_parts)?;
        if q == (1u64 << self.l()) - 1 {
            return Err(AchievabilityError::InvalidPartSet("Q must be a strict subset of the parts".into()));
        }
        let h = self.h_q(q);
        if !shrunk.is_strict_subset(h) {
            return Err(AchievabilityError::InvalidPartSet(format!("{shrunk} is not a strict subset of {h}")));
        }
        let family = self.perfect_family().into_iter().map(|g| if g == h { shrunk } else { g });
        PliableInstance::new(self.m, family).map_err(|e| AchievabilityError::InvalidPartSet(e.to_string()))
    }

    /// Every partition of `[1:m]` into `P_0` and exactly `l` unlabeled
    /// nonempty parts, with parts ordered by smallest message.
    pub fn all(m: usize, l: usize) -> Vec<Partition> {
        let full = full_mask(m);
        let mut out = Vec::new();
        if l == 0 {
            return out;
        }
        for p0 in 0..=full {
            let rest: Vec<u32> = bits(full & !p0).collect();
            if rest.len() < l {
                continue;
            }
            // Restricted growth strings over the remaining messages.
            let mut block = vec![0usize; rest.len()];
            loop {
                if block.iter().max().map_or(0, |&b| b + 1) == l {
                    let mut parts = vec![ReceiverSet::EMPTY; l];
                    for (&msg, &b) in rest.iter().zip(&block) {
                        parts[b] = ReceiverSet::from_mask(parts[b].mask() | 1 << msg);
                    }
                    out.push(Partition::new(m, ReceiverSet::from_mask(p0), parts).expect("valid partition"));
                }
                if !next_growth_string(&mut block, l) {
                    break;
                }
            }
        }
        out
    }
}

fn next_growth_string(block: &mut [usize], l: usize) -> bool {
    // Increment from the right, keeping block[i] ≤ 1 + max(block[..i]) and < l.
    for i in (1..block.len()).rev() {
        let prefix_max = block[..i].iter().copied().max().unwrap_or(0);
        if block[i] <= prefix_max && block[i] + 1 < l {
            block[i] += 1;
            for x in block[i + 1..].iter_mut() {
                *x = 0;
            }
            return true;
        }
    }
    false
}

#[derive(Serialize)]
struct PartitionView<'a> {
    p0: ReceiverSet,
    parts: &'a [ReceiverSet],
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PartitionView { p0: self.p0(), parts: self.parts() }.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Stirling numbers of the second kind.
    fn stirling2(n: usize, k: usize) -> usize {
        match (n, k) {
            (0, 0) => 1,
            (_, 0) | (0, _) => 0,
            _ => k * stirling2(n - 1, k) + stirling2(n - 1, k - 1),
        }
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn enumeration_counts() {
        for m in 1..=6 {
            for l in 1..=3 {
                let expected: usize = (0..=m).map(|z| binom(m, z) * stirling2(m - z, l)).sum();
                assert_eq!(Partition::all(m, l).len(), expected, "m={m} l={l}");
            }
        }
    }

    #[test]
    fn perfect_family_of_two_parts() {
        let p = Partition::from_lists(4, &[], &[&[1, 2], &[3, 4]]).unwrap();
        let fam: Vec<Vec<usize>> = p.perfect_family().iter().map(|h| h.to_indices()).collect();
        assert_eq!(fam, vec![vec![], vec![1, 2], vec![3, 4]]);
        assert_eq!(p.truncated_family(0), vec![ReceiverSet::EMPTY]);
    }

    #[test]
    fn validation() {
        assert!(Partition::from_lists(3, &[1], &[&[2]]).is_err());
        assert!(Partition::from_lists(3, &[1], &[&[2], &[]]).is_err());
        assert!(Partition::from_lists(3, &[1, 2], &[&[2, 3]]).is_err());
        assert!(Partition::from_lists(3, &[1], &[]).is_err());
        let p = Partition::from_lists(3, &[1], &[&[2], &[3]]).unwrap();
        assert!(p.imperfect_instance(&[1, 2], ReceiverSet::EMPTY).is_err());
        assert!(p.imperfect_instance(&[1], ReceiverSet::from_indices([1, 2])).is_err());
        // Shrinking {1,2} to {1} would repeat H_∅.
        assert!(p.imperfect_instance(&[1], ReceiverSet::from_indices([1])).is_err());
        assert!(p.imperfect_instance(&[1], ReceiverSet::from_indices([2])).is_ok());
    }

    #[test]
    fn serializes_as_index_lists() {
        let p = Partition::from_lists(5, &[1], &[&[2, 3], &[4, 5]]).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"p0":[1],"parts":[[2,3],[4,5]]}"#);
    }
}
