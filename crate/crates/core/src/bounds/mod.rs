//! Lower bounds on the broadcast rate from the absent family, structure
//! classes with closed-form rates, and the combined bound report.

mod lookahead;
mod report;
mod structure;

use thiserror::Error;

use crate::engine::{compute_l_star, ChainError};
use crate::instance::{PliableInstance, ReceiverSet};
use crate::nested::{chains_of_length, longest_chain_length, upward_lengths};

pub use lookahead::{look_ahead_case, LookAheadCase};
pub use report::{best_construction, bound_report, BoundReport, Construction, ConstructionKind, VERIFY_MAX_M};
pub use structure::{
    classify_structure, closed_form_beta, has_two_level_subfamily, imperfect_structure, perfect_partition,
    prop1_triple, truncated_partition, StructureClass,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{0} is not an absent receiver")]
    NotAbsent(ReceiverSet),
    #[error("{g} is not a strict superset of {h}")]
    NotAbove { h: ReceiverSet, g: ReceiverSet },
    #[error("{0} is listed twice")]
    Repeated(ReceiverSet),
    #[error("chain length must be at least 1")]
    ZeroLength,
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// `m − L_max`.
pub fn longest_chain_bound(inst: &PliableInstance) -> usize {
    inst.m() - longest_chain_length(inst)
}

/// `m − L*`.
pub fn algorithmic_bound(inst: &PliableInstance) -> Result<usize, ChainError> {
    Ok(inst.m() - compute_l_star(inst)?)
}

/// Whether every absent chain `H_1 ⊊ ⋯ ⊊ H_L` admits some `k ≤ L − 1` and
/// `a ∉ H_k` such that no absent chain of `L − k` links sits above
/// `H_k ∪ {a}`. When it holds, `L* ≤ L − 1`.
///
/// Chains longer than `L` are covered through their length-`L` prefixes, so
/// only chains of exactly `L` links are checked.
pub fn improved_nested_bound(inst: &PliableInstance, l: usize) -> Result<bool, BoundsError> {
    if l == 0 {
        return Err(BoundsError::ZeroLength);
    }
    let absent = inst.absent();
    let up = upward_lengths(inst);
    let above = |c: ReceiverSet| {
        absent.iter().zip(&up).filter(|(h, _)| c.is_subset(**h)).map(|(_, &u)| u).max().unwrap_or(0)
    };
    let full = inst.full();
    Ok(chains_of_length(inst, l).iter().all(|chain| {
        chain.links()[..l - 1].iter().enumerate().any(|(k0, &hk)| {
            let k = k0 + 1;
            full.difference(hk).iter().any(|a| above(hk.with(a)) < l - k)
        })
    }))
}

/// `m − (L − 1)` for the smallest `L` at which [`improved_nested_bound`]
/// holds. At `L = L_max + 1` it holds vacuously, so this is never below
/// [`longest_chain_bound`].
pub fn improved_lower_bound(inst: &PliableInstance) -> usize {
    let l_max = longest_chain_length(inst);
    let l = (1..=l_max + 1)
        .find(|&l| improved_nested_bound(inst, l).expect("l ≥ 1"))
        .expect("holds vacuously past the longest chain");
    inst.m() - (l - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> PliableInstance {
        PliableInstance::from_lists(6, &[&[3], &[1, 2, 3, 4], &[3, 4, 5, 6]]).unwrap()
    }

    fn p2() -> PliableInstance {
        PliableInstance::from_lists(5, &[&[1, 2], &[1, 2, 4], &[1, 3], &[1, 3, 5]]).unwrap()
    }

    #[test]
    fn chain_bounds() {
        assert_eq!(longest_chain_bound(&p1()), 4);
        assert_eq!(longest_chain_bound(&p2()), 3);
        assert_eq!(longest_chain_bound(&PliableInstance::from_lists(4, &[]).unwrap()), 4);
    }

    #[test]
    fn algorithmic_bounds() {
        assert_eq!(algorithmic_bound(&p1()).unwrap(), 5);
        assert_eq!(algorithmic_bound(&p2()).unwrap(), 4);
        assert_eq!(algorithmic_bound(&PliableInstance::from_lists(3, &[]).unwrap()).unwrap(), 3);
    }

    #[test]
    fn improved_bound_examples() {
        assert!(improved_nested_bound(&p2(), 2).unwrap());
        assert!(!improved_nested_bound(&p1(), 2).unwrap());
        assert!(improved_nested_bound(&PliableInstance::from_lists(3, &[]).unwrap(), 1).unwrap());
        assert_eq!(improved_nested_bound(&p1(), 0), Err(BoundsError::ZeroLength));
        assert_eq!(improved_lower_bound(&p2()), 4);
        assert_eq!(improved_lower_bound(&p1()), 4);
    }
}
