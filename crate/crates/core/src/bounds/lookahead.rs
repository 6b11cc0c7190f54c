use serde::Serialize;

use super::BoundsError;
use crate::instance::{PliableInstance, ReceiverSet};

/// Which look-ahead argument applies after hitting `H` with candidate
/// supersets `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum LookAheadCase {
    /// `⋃A ≠ [1:m]`: skip a message outside the union.
    Case1,
    /// `A` is a minimal cover and `T = ⋂A ⊋ H` is present.
    Case2 { t: ReceiverSet },
    /// `A` is a minimal cover with `⋂A = H`, and the pair's intersection
    /// `T ⊋ H` is present.
    Case3 { t: ReceiverSet, pair: (ReceiverSet, ReceiverSet) },
    None,
}

/// Classifies `(H, A)` with precedence case 1, case 2, case 3. For case 3 the
/// first qualifying pair in the order of `A` is reported.
pub fn look_ahead_case(
    inst: &PliableInstance,
    h: ReceiverSet,
    a: &[ReceiverSet],
) -> Result<LookAheadCase, BoundsError> {
    if !inst.is_absent(h) {
        return Err(BoundsError::NotAbsent(h));
    }
    for (i, &g) in a.iter().enumerate() {
        if !inst.is_absent(g) {
            return Err(BoundsError::NotAbsent(g));
        }
        if !h.is_strict_subset(g) {
            return Err(BoundsError::NotAbove { h, g });
        }
        if a[..i].contains(&g) {
            return Err(BoundsError::Repeated(g));
        }
    }
    let full = inst.full();
    let union = a.iter().fold(ReceiverSet::EMPTY, |acc, &g| acc.union(g));
    if union != full {
        return Ok(LookAheadCase::Case1);
    }
    let minimal = (0..a.len()).all(|skip| {
        let rest = a.iter().enumerate().filter(|&(j, _)| j != skip).fold(ReceiverSet::EMPTY, |acc, (_, &g)| acc.union(g));
        rest != full
    });
    if !minimal {
        return Ok(LookAheadCase::None);
    }
    let t = a.iter().fold(full, |acc, &g| acc.intersection(g));
    if h.is_strict_subset(t) && inst.is_present(t) {
        return Ok(LookAheadCase::Case2 { t });
    }
    if t == h {
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                let t = a[i].intersection(a[j]);
                if h.is_strict_subset(t) && inst.is_present(t) {
                    return Ok(LookAheadCase::Case3 { t, pair: (a[i], a[j]) });
                }
            }
        }
    }
    Ok(LookAheadCase::None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> ReceiverSet {
        ReceiverSet::from_indices(v.iter().copied())
    }

    #[test]
    fn p1_is_case2() {
        let inst = PliableInstance::from_lists(6, &[&[3], &[1, 2, 3, 4], &[3, 4, 5, 6]]).unwrap();
        let case = look_ahead_case(&inst, set(&[3]), &[set(&[1, 2, 3, 4]), set(&[3, 4, 5, 6])]).unwrap();
        assert_eq!(case, LookAheadCase::Case2 { t: set(&[3, 4]) });
    }

    #[test]
    fn proper_union_is_case1() {
        let inst = PliableInstance::from_lists(3, &[&[1], &[1, 2]]).unwrap();
        assert_eq!(look_ahead_case(&inst, set(&[1]), &[set(&[1, 2])]).unwrap(), LookAheadCase::Case1);
    }

    #[test]
    fn case3_via_pair() {
        let inst = PliableInstance::from_lists(4, &[&[], &[1, 2], &[1, 3], &[4]]).unwrap();
        let a = [set(&[1, 2]), set(&[1, 3]), set(&[4])];
        assert_eq!(
            look_ahead_case(&inst, ReceiverSet::EMPTY, &a).unwrap(),
            LookAheadCase::Case3 { t: set(&[1]), pair: (set(&[1, 2]), set(&[1, 3])) }
        );
    }

    #[test]
    fn redundant_cover_is_none() {
        // Any two of the three pairs already cover [1:3].
        let inst = PliableInstance::from_lists(3, &[&[], &[1, 2], &[1, 3], &[2, 3]]).unwrap();
        let a = [set(&[1, 2]), set(&[1, 3]), set(&[2, 3])];
        assert_eq!(look_ahead_case(&inst, ReceiverSet::EMPTY, &a).unwrap(), LookAheadCase::None);
    }

    #[test]
    fn truncated_shape_is_none() {
        // ⋂A = H and every pairwise intersection is H itself.
        let inst = PliableInstance::from_lists(3, &[&[], &[1], &[2], &[3]]).unwrap();
        let a = [set(&[1]), set(&[2]), set(&[3])];
        assert_eq!(look_ahead_case(&inst, ReceiverSet::EMPTY, &a).unwrap(), LookAheadCase::None);
    }

    #[test]
    fn absent_intersection_is_not_case2() {
        let inst = PliableInstance::from_lists(4, &[&[1], &[1, 2], &[1, 2, 3], &[1, 2, 4]]).unwrap();
        let a = [set(&[1, 2, 3]), set(&[1, 2, 4])];
        assert_eq!(look_ahead_case(&inst, set(&[1]), &a).unwrap(), LookAheadCase::None);
    }

    #[test]
    fn precondition_errors() {
        let inst = PliableInstance::from_lists(3, &[&[1], &[1, 2], &[2]]).unwrap();
        assert!(matches!(look_ahead_case(&inst, set(&[3]), &[]), Err(BoundsError::NotAbsent(_))));
        assert!(matches!(look_ahead_case(&inst, set(&[1]), &[set(&[2])]), Err(BoundsError::NotAbove { .. })));
        assert!(matches!(look_ahead_case(&inst, set(&[1]), &[set(&[1, 3])]), Err(BoundsError::NotAbsent(_))));
    }
}
