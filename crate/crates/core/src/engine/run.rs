use std::str::FromStr;

use serde::Serialize;

use super::{missing_messages, present_strict_subsets, ChainError, DecodingChoice};
use crate::bounds::{look_ahead_case, LookAheadCase};
use crate::instance::{MessageIndex, PliableInstance, ReceiverSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// The chain was a present receiver, which decoded the message.
    Decode,
    /// Option 1: the chain hit an absent receiver and the message was skipped.
    Skip,
    /// Option 2: the chain hit an absent receiver and a present strict subset
    /// supplied the message.
    Avoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub kind: StepKind,
    pub message: MessageIndex,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via: Option<ReceiverSet>,
}

/// A completed run of the decoding-chain algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainTrace {
    pub steps: Vec<ChainStep>,
    pub skipped: ReceiverSet,
    /// Absent receivers the chain equalled, in order.
    pub hits: Vec<ReceiverSet>,
}

impl ChainTrace {
    /// Messages in chain order.
    pub fn order(&self) -> Vec<MessageIndex> {
        self.steps.iter().map(|s| s.message).collect()
    }

    pub fn skip_count(&self) -> usize {
        self.skipped.len()
    }

    /// `{"order": .., "skipped": .., "hits": .., "steps": ..}`.
    pub fn to_value(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order(),
            "skipped": self.skipped,
            "hits": self.hits,
            "steps": self.steps,
        })
    }
}

/// What to do when the chain equals an absent receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsentMove {
    Skip(MessageIndex),
    Avoid(ReceiverSet),
}

/// Deterministic choice rule for absent hits.
pub trait ChainPolicy {
    fn on_absent(&mut self, inst: &PliableInstance, d: &DecodingChoice, chain: ReceiverSet) -> AbsentMove;
}

impl<F> ChainPolicy for F
where
    F: FnMut(&PliableInstance, &DecodingChoice, ReceiverSet) -> AbsentMove,
{
    fn on_absent(&mut self, inst: &PliableInstance, d: &DecodingChoice, chain: ReceiverSet) -> AbsentMove {
        self(inst, d, chain)
    }
}

/// Always Option 1, skipping the smallest message not yet in the chain.
#[derive(Debug, Clone, Copy, Default)]
pub struct SkipSmallest;

impl ChainPolicy for SkipSmallest {
    fn on_absent(&mut self, inst: &PliableInstance, _d: &DecodingChoice, chain: ReceiverSet) -> AbsentMove {
        AbsentMove::Skip(smallest_missing(inst, chain))
    }
}

/// Avoids skipping whenever a present strict subset decodes something new;
/// otherwise picks the skipped message by looking ahead at the absent
/// supersets of the chain.
#[derive(Debug, Clone, Copy, Default)]
pub struct LookAhead;

impl ChainPolicy for LookAhead {
    fn on_absent(&mut self, inst: &PliableInstance, d: &DecodingChoice, chain: ReceiverSet) -> AbsentMove {
        if let Some(b) = present_strict_subsets(inst, chain.mask())
            .find(|&b| d.get(b).is_some_and(|x| !chain.contains(x)))
        {
            return AbsentMove::Avoid(b);
        }
        let above: Vec<ReceiverSet> = inst
            .absent()
            .iter()
            .copied()
            .filter(|&h| chain.is_strict_subset(h))
            .collect();
        let minimal: Vec<ReceiverSet> = above
            .iter()
            .copied()
            .filter(|&h| !above.iter().any(|&g| g.is_strict_subset(h)))
            .collect();
        for family in [&above, &minimal] {
            if family.is_empty() {
                continue;
            }
            if let Some(a) = look_ahead_skip(inst, d, chain, family) {
                return AbsentMove::Skip(a);
            }
        }
        AbsentMove::Skip(smallest_missing(inst, chain))
    }
}

fn look_ahead_skip(
    inst: &PliableInstance,
    d: &DecodingChoice,
    chain: ReceiverSet,
    family: &[ReceiverSet],
) -> Option<MessageIndex> {
    let union = family.iter().fold(ReceiverSet::EMPTY, |u, &h| u.union(h));
    let (t, candidates): (ReceiverSet, Vec<ReceiverSet>) = match look_ahead_case(inst, chain, family).ok()? {
        LookAheadCase::Case1 => return inst.full().difference(union).first(),
        LookAheadCase::Case2 { t } => (t, family.to_vec()),
        LookAheadCase::Case3 { t, pair } => (t, vec![pair.0, pair.1]),
        LookAheadCase::None => return None,
    };
    let x = d.get(t)?;
    let target = candidates.into_iter().find(|h| !h.contains(x))?;
    let others = family
        .iter()
        .filter(|&&h| h != target)
        .fold(ReceiverSet::EMPTY, |u, &h| u.union(h));
    target.difference(others).first()
}

fn smallest_missing(inst: &PliableInstance, chain: ReceiverSet) -> MessageIndex {
    missing_messages(inst, chain.mask())
        .next()
        .expect("chain is not the full set")
}

/// The built-in policies, selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    Option1,
    LookAhead,
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "option1" => Ok(PolicyKind::Option1),
            "lookahead" => Ok(PolicyKind::LookAhead),
            other => Err(format!("unknown policy `{other}` (expected option1 or lookahead)")),
        }
    }
}

impl ChainPolicy for PolicyKind {
    fn on_absent(&mut self, inst: &PliableInstance, d: &DecodingChoice, chain: ReceiverSet) -> AbsentMove {
        match self {
            PolicyKind::Option1 => SkipSmallest.on_absent(inst, d, chain),
            PolicyKind::LookAhead => LookAhead.on_absent(inst, d, chain),
        }
    }
}

/// Runs the decoding-chain algorithm from the empty chain until it holds
/// every message. Present chains extend by `D(C)`; absent chains defer to
/// `policy`.
pub fn run_chain<P: ChainPolicy + ?Sized>(
    inst: &PliableInstance,
    d: &DecodingChoice,
    policy: &mut P,
) -> Result<ChainTrace, ChainError> {
    let full = inst.full();
    let mut chain = ReceiverSet::EMPTY;
    let mut steps = Vec::with_capacity(inst.m());
    let mut skipped = ReceiverSet::EMPTY;
    let mut hits = Vec::new();
    while chain != full {
        let step = if inst.is_present(chain) {
            let x = d.require(chain)?;
            if chain.contains(x) {
                return Err(ChainError::InvalidChoice { receiver: chain, message: x });
            }
            ChainStep { kind: StepKind::Decode, message: x, via: None }
        } else {
            hits.push(chain);
            match policy.on_absent(inst, d, chain) {
                AbsentMove::Skip(a) => {
                    if chain.contains(a) || a.get() > inst.m() {
                        return Err(ChainError::SkipInChain { message: a, chain });
                    }
                    skipped = skipped.with(a);
                    ChainStep { kind: StepKind::Skip, message: a, via: None }
                }
                AbsentMove::Avoid(b) => {
                    let x = (b.is_strict_subset(chain) && inst.is_present(b))
                        .then(|| d.get(b))
                        .flatten()
                        .filter(|&x| !chain.contains(x))
                        .ok_or(ChainError::NoAvoidReceiver { via: b, chain })?;
                    ChainStep { kind: StepKind::Avoid, message: x, via: Some(b) }
                }
            }
        };
        chain = chain.with(step.message);
        steps.push(step);
    }
    Ok(ChainTrace { steps, skipped, hits })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> PliableInstance {
        PliableInstance::from_lists(6, &[&[3], &[1, 2, 3, 4], &[3, 4, 5, 6]]).unwrap()
    }

    fn set(v: &[usize]) -> ReceiverSet {
        ReceiverSet::from_indices(v.iter().copied())
    }

    #[test]
    fn p1_option1_hits_two_absent_receivers() {
        let inst = p1();
        let d = DecodingChoice::new()
            .with(&inst, &[], 3)
            .with(&inst, &[1, 3], 2)
            .with(&inst, &[1, 2, 3], 4)
            .complete_with_smallest(&inst);
        let trace = run_chain(&inst, &d, &mut SkipSmallest).unwrap();
        assert_eq!(trace.hits, vec![set(&[3]), set(&[1, 2, 3, 4])]);
        assert_eq!(trace.skip_count(), 2);
        assert_eq!(trace.skipped, set(&[1, 5]));
        let order: Vec<usize> = trace.order().iter().map(|m| m.get()).collect();
        assert_eq!(order, vec![3, 1, 2, 4, 5, 6]);
    }

    #[test]
    fn p1_lookahead_skips_once() {
        let inst = p1();
        let d = DecodingChoice::new()
            .with(&inst, &[], 3)
            .with(&inst, &[1, 3], 2)
            .with(&inst, &[1, 2, 3], 4)
            .with(&inst, &[3, 4], 1)
            .complete_with_smallest(&inst);
        let trace = run_chain(&inst, &d, &mut LookAhead).unwrap();
        assert_eq!(trace.skip_count(), 1);
        // D({3,4}) = 1 lies in H2, so the look-ahead skips inside H3 \ H2.
        assert_eq!(trace.skipped, set(&[5]));
    }

    #[test]
    fn no_absent_receivers_means_no_skips() {
        let inst = PliableInstance::from_lists(4, &[]).unwrap();
        let d = DecodingChoice::smallest_missing(&inst);
        let trace = run_chain(&inst, &d, &mut SkipSmallest).unwrap();
        assert_eq!(trace.skip_count(), 0);
        assert!(trace.hits.is_empty());
        assert!(trace.steps.iter().all(|s| s.kind == StepKind::Decode));
    }

    #[test]
    fn bad_policy_moves_are_errors() {
        let inst = PliableInstance::from_lists(3, &[&[]]).unwrap();
        let d = DecodingChoice::smallest_missing(&inst);
        let mut avoid_empty = |_: &PliableInstance, _: &DecodingChoice, c: ReceiverSet| AbsentMove::Avoid(c);
        assert!(matches!(
            run_chain(&inst, &d, &mut avoid_empty),
            Err(ChainError::NoAvoidReceiver { .. })
        ));

        let inst = PliableInstance::from_lists(3, &[&[1]]).unwrap();
        let d = DecodingChoice::new().with(&inst, &[], 1).complete_with_smallest(&inst);
        let mut skip_one = |_: &PliableInstance, _: &DecodingChoice, _: ReceiverSet| AbsentMove::Skip(MessageIndex::new(1));
        assert!(matches!(run_chain(&inst, &d, &mut skip_one), Err(ChainError::SkipInChain { .. })));
    }

    #[test]
    fn missing_choice_is_reported() {
        let inst = PliableInstance::from_lists(2, &[]).unwrap();
        assert_eq!(
            run_chain(&inst, &DecodingChoice::new(), &mut SkipSmallest),
            Err(ChainError::Unassigned(ReceiverSet::EMPTY))
        );
    }

    #[test]
    fn trace_json_shape() {
        let inst = p1();
        let d = DecodingChoice::new().with(&inst, &[], 3).complete_with_smallest(&inst);
        let trace = run_chain(&inst, &d, &mut LookAhead).unwrap();
        let v = trace.to_value();
        assert_eq!(v["order"][0], 3);
        assert_eq!(v["hits"][0], serde_json::json!([3]));
        assert_eq!(v["steps"][0]["kind"], "decode");
        assert!(v["steps"][0].get("via").is_none());
    }

    #[test]
    fn policy_names_parse() {
        assert_eq!("option1".parse::<PolicyKind>(), Ok(PolicyKind::Option1));
        assert_eq!("lookahead".parse::<PolicyKind>(), Ok(PolicyKind::LookAhead));
        assert!("greedy".parse::<PolicyKind>().is_err());
    }
}
