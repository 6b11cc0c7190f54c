use std::collections::HashMap;

use super::{missing_messages, present_strict_subsets, ChainError, DecodingChoice};
use crate::instance::PliableInstance;

/// Fewest skipped messages over every run of the decoding-chain algorithm
/// under the fixed choice `d`, with both the skip and the avoid option
/// available at absent receivers.
///
/// Fails with [`ChainError::Unassigned`] if some run queries a present
/// receiver that `d` leaves open.
pub fn min_skips(inst: &PliableInstance, d: &DecodingChoice) -> Result<usize, ChainError> {
    MinSkips::new(inst, d, true).solve()
}

/// Like [`min_skips`] but with only the skip option at absent receivers.
pub fn min_skips_option1_only(inst: &PliableInstance, d: &DecodingChoice) -> Result<usize, ChainError> {
    MinSkips::new(inst, d, false).solve()
}

struct MinSkips<'a> {
    inst: &'a PliableInstance,
    d: &'a DecodingChoice,
    allow_avoid: bool,
    full: u32,
    memo: HashMap<u32, usize>,
}

impl<'a> MinSkips<'a> {
    fn new(inst: &'a PliableInstance, d: &'a DecodingChoice, allow_avoid: bool) -> Self {
        MinSkips { inst, d, allow_avoid, full: inst.full().mask(), memo: HashMap::new() }
    }

    fn solve(mut self) -> Result<usize, ChainError> {
        self.from(0)
    }

    fn from(&mut self, c: u32) -> Result<usize, ChainError> {
        if c == self.full {
            return Ok(0);
        }
        if let Some(&v) = self.memo.get(&c) {
            return Ok(v);
        }
        let inst = self.inst;
        let set = crate::instance::ReceiverSet::from_mask(c);
        let value = if inst.is_present(set) {
            let x = self.d.require(set)?;
            if set.contains(x) {
                return Err(ChainError::InvalidChoice { receiver: set, message: x });
            }
            self.from(c | x.mask())?
        } else {
            let mut best = usize::MAX;
            if self.allow_avoid {
                for b in present_strict_subsets(inst, c) {
                    let x = self.d.require(b)?;
                    if c & x.mask() == 0 {
                        best = best.min(self.from(c | x.mask())?);
                        if best == 0 {
                            break;
                        }
                    }
                }
            }
            if best > 0 {
                for a in missing_messages(inst, c) {
                    best = best.min(1 + self.from(c | a.mask())?);
                }
            }
            best
        };
        self.memo.insert(c, value);
        Ok(value)
    }
}
