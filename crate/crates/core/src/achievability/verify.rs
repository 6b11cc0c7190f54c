use super::code::{rref, LinearCode};
use super::AchievabilityError;
use crate::engine::DecodingChoice;
use crate::instance::{MessageIndex, PliableInstance, ReceiverSet};

/// Smallest message outside `h` that a receiver holding `h` can recover from
/// the code, if any.
///
/// Known messages are cancelled by dropping their columns; `x_i` is then
/// recoverable iff `e_i` lies in the row space of what is left, which in
/// reduced echelon form means some row equals `e_i`.
pub fn decodable_message(code: &LinearCode, h: ReceiverSet) -> Option<MessageIndex> {
    let cols: Vec<usize> = (0..code.m()).filter(|&c| !h.contains(MessageIndex::new(c + 1))).collect();
    if cols.is_empty() || code.is_empty() {
        return None;
    }
    let mut rows: Vec<Vec<u32>> = code.rows().iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
    let pivots = rref(code.field(), &mut rows);
    pivots
        .iter()
        .zip(&rows)
        .find(|(&p, row)| row.iter().enumerate().all(|(j, &v)| j == p || v == 0))
        .map(|(&p, _)| MessageIndex::new(cols[p] + 1))
}

/// Checks that every present receiver can decode some new message. Returns
/// the decoding choice (smallest decodable message per receiver) on success
/// and `None` as soon as one receiver fails.
pub fn verify_code(inst: &PliableInstance, code: &LinearCode) -> Result<Option<DecodingChoice>, AchievabilityError> {
    check_length(inst, code)?;
    let mut d = DecodingChoice::new();
    for mask in 0..inst.full().mask() {
        let h = ReceiverSet::from_mask(mask);
        if inst.is_absent(h) {
            continue;
        }
        match decodable_message(code, h) {
            Some(x) => d.insert_unchecked(h, x),
            None => return Ok(None),
        }
    }
    Ok(Some(d))
}

/// The smallest present receiver that cannot decode anything, if any.
pub fn first_failure(inst: &PliableInstance, code: &LinearCode) -> Result<Option<ReceiverSet>, AchievabilityError> {
    check_length(inst, code)?;
    Ok((0..inst.full().mask())
        .map(ReceiverSet::from_mask)
        .find(|&h| !inst.is_absent(h) && decodable_message(code, h).is_none()))
}

fn check_length(inst: &PliableInstance, code: &LinearCode) -> Result<(), AchievabilityError> {
    if code.m() != inst.m() {
        return Err(AchievabilityError::MessageCount { code: code.m(), instance: inst.m() });
    }
    Ok(())
}
