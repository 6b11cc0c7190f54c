//! Problem instances: messages, receivers and the family of absent receivers.
//!
//! A receiver is identified with its side-information set, stored as a
//! bitmask where bit `i - 1` stands for message `i`. An instance only records
//! the absent receivers; every other proper subset of `[1:m]` is present.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported message count. Keeps every receiver in one `u32`.
pub const MAX_MESSAGES: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("malformed instance JSON: {0}")]
    Json(String),
    #[error("message count {0} is outside the supported range 1..={MAX_MESSAGES}")]
    MessageCount(usize),
    #[error("message index {index} is out of range for m = {m}")]
    IndexOutOfRange { index: i64, m: usize },
    #[error("message index {0} is repeated inside one receiver set")]
    RepeatedIndex(usize),
    #[error("the full message set cannot be an absent receiver")]
    FullSetAbsent,
    #[error("absent receiver {0} is listed more than once")]
    DuplicateAbsent(ReceiverSet),
}

/// A 1-based message index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MessageIndex(u8);

impl MessageIndex {
    /// Panics if `index` is zero or above [`MAX_MESSAGES`].
    pub fn new(index: usize) -> Self {
        assert!(
            (1..=MAX_MESSAGES).contains(&index),
            "message index {index} out of range"
        );
        MessageIndex(index as u8)
    }

    pub(crate) fn from_bit(bit: u32) -> Self {
        MessageIndex(bit as u8 + 1)
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Zero-based bit position of this message in a [`ReceiverSet`].
    pub fn bit(self) -> u32 {
        self.0 as u32 - 1
    }

    pub fn mask(self) -> u32 {
        1 << self.bit()
    }
}

impl fmt::Display for MessageIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of messages, used as a receiver label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReceiverSet(u32);

impl ReceiverSet {
    pub const EMPTY: ReceiverSet = ReceiverSet(0);

    pub fn from_mask(mask: u32) -> Self {
        ReceiverSet(mask)
    }

    /// `[1:m]`.
    pub fn full(m: usize) -> Self {
        ReceiverSet(full_mask(m))
    }

    /// Builds a set from 1-based indices. Panics on index 0 or above 32.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut mask = 0u32;
        for i in indices {
            assert!((1..=32).contains(&i), "message index {i} out of range");
            mask |= 1 << (i - 1);
        }
        ReceiverSet(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, message: MessageIndex) -> bool {
        self.0 & message.mask() != 0
    }

    pub fn with(self, message: MessageIndex) -> Self {
        ReceiverSet(self.0 | message.mask())
    }

    pub fn union(self, other: Self) -> Self {
        ReceiverSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ReceiverSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ReceiverSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset(self, other: Self) -> bool {
        self.is_subset(other) && self.0 != other.0
    }

    /// Messages in ascending order.
    pub fn iter(self) -> impl Iterator<Item = MessageIndex> {
        bits(self.0).map(MessageIndex::from_bit)
    }

    pub fn to_indices(self) -> Vec<usize> {
        self.iter().map(MessageIndex::get).collect()
    }

    /// Smallest message in the set.
    pub fn first(self) -> Option<MessageIndex> {
        (self.0 != 0).then(|| MessageIndex::from_bit(self.0.trailing_zeros()))
    }
}

impl fmt::Display for ReceiverSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for ReceiverSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(MessageIndex::get))
    }
}

impl<'de> Deserialize<'de> for ReceiverSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        if let Some(bad) = indices.iter().find(|&&i| !(1..=32).contains(&i)) {
            return Err(serde::de::Error::custom(format!(
                "message index {bad} out of range"
            )));
        }
        Ok(ReceiverSet::from_indices(indices))
    }
}

pub(crate) fn full_mask(m: usize) -> u32 {
    if m >= 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

/// Iterates the set bit positions of `mask`, lowest first.
pub(crate) fn bits(mut mask: u32) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros();
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// A pliable index coding problem given by `m` and its absent receivers.
///
/// The absent family is kept sorted by bitmask; present receivers are never
/// materialized.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PliableInstance {
    m: usize,
    absent: Vec<ReceiverSet>,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    m: usize,
    absent: Vec<Vec<i64>>,
}

impl PliableInstance {
    pub fn new<I: IntoIterator<Item = ReceiverSet>>(m: usize, absent: I) -> Result<Self, InstanceError> {
        if !(1..=MAX_MESSAGES).contains(&m) {
            return Err(InstanceError::MessageCount(m));
        }
        let full = full_mask(m);
        let mut sets: Vec<ReceiverSet> = Vec::new();
        for h in absent {
            if h.mask() & !full != 0 {
                let top = 32 - h.mask().leading_zeros();
                return Err(InstanceError::IndexOutOfRange { index: top as i64, m });
            }
            if h.mask() == full {
                return Err(InstanceError::FullSetAbsent);
            }
            sets.push(h);
        }
        sets.sort_unstable();
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            return Err(InstanceError::DuplicateAbsent(w[0]));
        }
        Ok(PliableInstance { m, absent: sets })
    }

    /// Convenience constructor from 1-based index lists.
    pub fn from_lists(m: usize, absent: &[&[usize]]) -> Result<Self, InstanceError> {
        let mut sets = Vec::with_capacity(absent.len());
        for list in absent {
            sets.push(set_from_list(list.iter().map(|&i| i as i64), m)?);
        }
        Self::new(m, sets)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn full(&self) -> ReceiverSet {
        ReceiverSet::full(self.m)
    }

    /// The absent receivers, sorted by bitmask.
    pub fn absent(&self) -> &[ReceiverSet] {
        &self.absent
    }

    pub fn absent_count(&self) -> usize {
        self.absent.len()
    }

    pub fn is_absent(&self, h: ReceiverSet) -> bool {
        self.absent.binary_search(&h).is_ok()
    }

    /// A receiver `H` is present iff `H ≠ [1:m]` and it is not absent.
    pub fn is_present(&self, h: ReceiverSet) -> bool {
        h.mask() & !full_mask(self.m) == 0 && h != self.full() && !self.is_absent(h)
    }

    /// Number of present receivers, `2^m - 1 - |absent|`.
    pub fn present_count(&self) -> u64 {
        (1u64 << self.m) - 1 - self.absent.len() as u64
    }

    /// Applies a message relabeling; `perm[i]` is the new 0-based position of
    /// message `i + 1`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let absent = self
            .absent
            .iter()
            .map(|h| ReceiverSet(relabel_mask(h.mask(), perm)))
            .collect::<Vec<_>>();
        Self::new(self.m, absent).expect("relabeling preserves validity")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_value()).expect("instance serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "absent": self.absent.iter().map(|h| h.to_indices()).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn relabel_mask(mask: u32, perm: &[usize]) -> u32 {
    bits(mask).fold(0, |acc, b| acc | 1 << perm[b as usize])
}

fn set_from_list<I: IntoIterator<Item = i64>>(list: I, m: usize) -> Result<ReceiverSet, InstanceError> {
    let mut mask = 0u32;
    for index in list {
        if index < 1 || index > m as i64 {
            return Err(InstanceError::IndexOutOfRange { index, m });
        }
        let bit = 1u32 << (index - 1);
        if mask & bit != 0 {
            return Err(InstanceError::RepeatedIndex(index as usize));
        }
        mask |= bit;
    }
    Ok(ReceiverSet(mask))
}

/// Parses the instance interchange format `{"m": .., "absent": [[..], ..]}`.
pub fn parse_instance(text: &str) -> Result<PliableInstance, InstanceError> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))?;
    if !(1..=MAX_MESSAGES).contains(&file.m) {
        return Err(InstanceError::MessageCount(file.m));
    }
    let sets = file
        .absent
        .into_iter()
        .map(|list| set_from_list(list, file.m))
        .collect::<Result<Vec<_>, _>>()?;
    PliableInstance::new(file.m, sets)
}

impl Serialize for PliableInstance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_value().serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_p1() {
        let inst = parse_instance(r#"{"m":6,"absent":[[3],[1,2,3,4],[3,4,5,6]]}"#).unwrap();
        assert_eq!(inst.m(), 6);
        assert_eq!(inst.absent_count(), 3);
        assert!(inst.is_absent(ReceiverSet::from_indices([4, 3, 2, 1])));
        assert!(inst.is_present(ReceiverSet::EMPTY));
        assert!(!inst.is_present(inst.full()));
    }

    #[test]
    fn empty_family_and_empty_set() {
        let inst = parse_instance(r#"{"m":3,"absent":[]}"#).unwrap();
        assert_eq!(inst.absent_count(), 0);
        assert_eq!(inst.present_count(), 7);
        let inst = parse_instance(r#"{"m":2,"absent":[[]]}"#).unwrap();
        assert!(inst.is_absent(ReceiverSet::EMPTY));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_instance("{"), Err(InstanceError::Json(_))));
        assert_eq!(
            parse_instance(r#"{"m":3,"absent":[[1,2,3]]}"#),
            Err(InstanceError::FullSetAbsent)
        );
        assert_eq!(
            parse_instance(r#"{"m":3,"absent":[[1,2],[2,1]]}"#),
            Err(InstanceError::DuplicateAbsent(ReceiverSet::from_indices([1, 2])))
        );
        assert_eq!(
            parse_instance(r#"{"m":3,"absent":[[4]]}"#),
            Err(InstanceError::IndexOutOfRange { index: 4, m: 3 })
        );
        assert_eq!(
            parse_instance(r#"{"m":3,"absent":[[0]]}"#),
            Err(InstanceError::IndexOutOfRange { index: 0, m: 3 })
        );
        assert_eq!(parse_instance(r#"{"m":0,"absent":[]}"#), Err(InstanceError::MessageCount(0)));
        assert_eq!(parse_instance(r#"{"m":25,"absent":[]}"#), Err(InstanceError::MessageCount(25)));
        assert_eq!(
            parse_instance(r#"{"m":3,"absent":[[1,1]]}"#),
            Err(InstanceError::RepeatedIndex(1))
        );
    }

    #[test]
    fn json_output_reparses() {
        let inst = PliableInstance::from_lists(5, &[&[1, 2], &[1, 2, 4], &[1, 3], &[1, 3, 5]]).unwrap();
        assert_eq!(parse_instance(&inst.to_json()).unwrap(), inst);
    }

    #[test]
    fn display_and_iteration() {
        let h = ReceiverSet::from_indices([4, 1, 3]);
        assert_eq!(h.to_string(), "{1,3,4}");
        assert_eq!(h.first(), Some(MessageIndex::new(1)));
        assert_eq!(ReceiverSet::EMPTY.to_string(), "{}");
    }
}
