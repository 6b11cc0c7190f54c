//! Decoding chains with skip and avoid options, and the adversarial skip
//! count `L* = max_D min_S |S|`.

mod certificate;
mod game;
mod run;
mod skips;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{bits, MessageIndex, PliableInstance, ReceiverSet};

pub use certificate::{acyclic_certificate, Certificate};
pub use game::{
    compute_l_star, compute_l_star_capped, l_star_option1_only, l_star_witness, l_star_witness_capped, L_STAR_MAX_M,
};
pub use run::{run_chain, AbsentMove, ChainPolicy, ChainStep, ChainTrace, LookAhead, PolicyKind, SkipSmallest, StepKind};
pub use skips::{min_skips, min_skips_option1_only};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("decoding choice has no value for present receiver {0}")]
    Unassigned(ReceiverSet),
    #[error("receiver {receiver} cannot decode message {message}: it is absent, full, or already has it")]
    InvalidChoice { receiver: ReceiverSet, message: MessageIndex },
    #[error("policy skipped message {message}, which is already in the chain {chain}")]
    SkipInChain { message: MessageIndex, chain: ReceiverSet },
    #[error("policy chose to avoid via {via} at {chain}, but it is not a present strict subset with a new decoded message")]
    NoAvoidReceiver { via: ReceiverSet, chain: ReceiverSet },
    #[error("m = {m} exceeds the search cap of {cap}")]
    TooLarge { m: usize, cap: usize },
    #[error("trace is inconsistent with the decoding choice: {0}")]
    InconsistentTrace(String),
}

/// A (possibly partial) decoding choice `D`: present receiver `H` decodes
/// `D(H) ∉ H`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecodingChoice {
    map: BTreeMap<ReceiverSet, MessageIndex>,
}

impl DecodingChoice {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `D(h) = message` after checking that `h` is present and does
    /// not already hold `message`.
    pub fn assign(
        &mut self,
        inst: &PliableInstance,
        h: ReceiverSet,
        message: MessageIndex,
    ) -> Result<(), ChainError> {
        if !inst.is_present(h) || h.contains(message) || message.get() > inst.m() {
            return Err(ChainError::InvalidChoice { receiver: h, message });
        }
        self.map.insert(h, message);
        Ok(())
    }

    /// Builder form of [`assign`](Self::assign) for 1-based index lists.
    /// Panics on an invalid assignment.
    pub fn with(mut self, inst: &PliableInstance, h: &[usize], message: usize) -> Self {
        self.assign(inst, ReceiverSet::from_indices(h.iter().copied()), MessageIndex::new(message))
            .expect("valid decoding choice");
        self
    }

    pub(crate) fn insert_unchecked(&mut self, h: ReceiverSet, message: MessageIndex) {
        self.map.insert(h, message);
    }

    pub fn get(&self, h: ReceiverSet) -> Option<MessageIndex> {
        self.map.get(&h).copied()
    }

    pub(crate) fn require(&self, h: ReceiverSet) -> Result<MessageIndex, ChainError> {
        self.get(h).ok_or(ChainError::Unassigned(h))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ReceiverSet, MessageIndex)> + '_ {
        self.map.iter().map(|(&h, &x)| (h, x))
    }

    /// True when every present receiver has a value.
    pub fn is_total(&self, inst: &PliableInstance) -> bool {
        self.map.len() as u64 == inst.present_count()
    }

    /// Fills every unassigned present receiver with its smallest missing
    /// message.
    pub fn complete_with_smallest(mut self, inst: &PliableInstance) -> Self {
        let full = inst.full().mask();
        for mask in 0..full {
            let h = ReceiverSet::from_mask(mask);
            if inst.is_present(h) {
                self.map
                    .entry(h)
                    .or_insert_with(|| MessageIndex::from_bit((!mask & full).trailing_zeros()));
            }
        }
        self
    }

    /// The choice where every present receiver decodes its smallest missing
    /// message.
    pub fn smallest_missing(inst: &PliableInstance) -> Self {
        Self::new().complete_with_smallest(inst)
    }

    /// Checks every stored entry against `inst`.
    pub fn validate(&self, inst: &PliableInstance) -> Result<(), ChainError> {
        for (h, x) in self.iter() {
            if !inst.is_present(h) || h.contains(x) || x.get() > inst.m() {
                return Err(ChainError::InvalidChoice { receiver: h, message: x });
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ChoiceEntry {
    receiver: ReceiverSet,
    message: MessageIndex,
}

impl Serialize for DecodingChoice {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|(receiver, message)| ChoiceEntry { receiver, message }))
    }
}

impl<'de> Deserialize<'de> for DecodingChoice {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entries = Vec::<ChoiceEntry>::deserialize(deserializer)?;
        let mut choice = DecodingChoice::new();
        for e in entries {
            if e.message.get() == 0 {
                return Err(serde::de::Error::custom("message index 0"));
            }
            choice.insert_unchecked(e.receiver, e.message);
        }
        Ok(choice)
    }
}

/// Present strict subsets `B ⊊ c`, ascending by mask.
pub(crate) fn present_strict_subsets(inst: &PliableInstance, c: u32) -> impl Iterator<Item = ReceiverSet> + '_ {
    let mut sub = 0u32;
    let mut done = false;
    std::iter::from_fn(move || loop {
        if done || sub == c {
            return None;
        }
        let cur = sub;
        sub = sub.wrapping_sub(c) & c;
        if sub == 0 {
            done = true;
        }
        let b = ReceiverSet::from_mask(cur);
        if !inst.is_absent(b) {
            return Some(b);
        }
    })
}

pub(crate) fn missing_messages(inst: &PliableInstance, c: u32) -> impl Iterator<Item = MessageIndex> {
    bits(!c & inst.full().mask()).map(MessageIndex::from_bit)
}
