use serde::Serialize;

use super::structure::{classify_structure, closed_form_beta, imperfect_structure, perfect_partition, truncated_partition};
use super::{improved_lower_bound, longest_chain_bound, StructureClass};
use crate::achievability::{
    cyclic_partition_code, first_failure, imperfect_patch_code, truncated_code, AchievabilityError, FieldChoice,
    LinearCode, Partition,
};
use crate::engine::compute_l_star_capped;
use crate::instance::{PliableInstance, ReceiverSet};

/// Largest `m` for which constructions are checked receiver by receiver.
pub const VERIFY_MAX_M: usize = 14;

/// Largest absent family whose subfamilies are searched for structure.
const SUBFAMILY_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    Identity,
    /// Cyclic code on `P_0 = H`, `P_1 = [1:m] \ H` for one absent `H`.
    SingleAbsent,
    Cyclic,
    Truncated,
    Patch,
}

#[derive(Debug, Clone, Serialize)]
pub struct Construction {
    pub kind: ConstructionKind,
    pub length: usize,
    /// False when `m` is above [`VERIFY_MAX_M`] and the code was not checked.
    pub verified: bool,
    #[serde(serialize_with = "code_as_json")]
    pub code: LinearCode,
}

fn code_as_json<S: serde::Serializer>(code: &LinearCode, s: S) -> Result<S::Ok, S::Error> {
    code.to_value().serialize(s)
}

fn candidates(inst: &PliableInstance, q: FieldChoice) -> Vec<(ConstructionKind, LinearCode)> {
    let m = inst.m();
    let fixed = match q {
        FieldChoice::Auto => 2,
        FieldChoice::Prime(q) => q,
    };
    let mut out = Vec::new();
    let mut push = |kind, code: Result<LinearCode, AchievabilityError>| {
        if let Ok(code) = code {
            out.push((kind, code));
        }
    };
    let full = inst.full();
    push(ConstructionKind::Identity, LinearCode::identity(fixed, m));
    if let Some(&h) = inst.absent().first() {
        let p = Partition::new(m, h, vec![full.difference(h)]);
        push(ConstructionKind::SingleAbsent, p.and_then(|p| cyclic_partition_code(&p, fixed)));
    }
    let structured = |family: &[ReceiverSet]| {
        let mut found = Vec::new();
        if let Some(p) = perfect_partition(m, family) {
            found.push((ConstructionKind::Cyclic, cyclic_partition_code(&p, fixed)));
        } else if let Some((t, p)) = truncated_partition(m, family) {
            found.push((ConstructionKind::Truncated, truncated_code(&p, t, q)));
        } else if let Some((p, qs, _)) = imperfect_structure(m, family) {
            found.push((ConstructionKind::Patch, imperfect_patch_code(&p, &qs, fixed)));
        }
        found
    };
    let absent = inst.absent();
    let mut found = structured(absent);
    // A code for a subfamily also serves the whole family: absent receivers
    // only remove decoding requirements.
    if absent.len() <= SUBFAMILY_MAX {
        for sub in 1u32..(1 << absent.len()) - 1 {
            if sub.count_ones() >= 2 {
                let family: Vec<ReceiverSet> =
                    (0..absent.len()).filter(|&i| sub >> i & 1 == 1).map(|i| absent[i]).collect();
                found.extend(structured(&family));
            }
        }
    }
    for (kind, code) in found {
        push(kind, code);
    }
    out
}

/// Shortest construction that serves every present receiver. The identity
/// code always qualifies, so this only fails on an invalid field size.
pub fn best_construction(inst: &PliableInstance, q: FieldChoice) -> Result<Construction, AchievabilityError> {
    if let FieldChoice::Prime(p) = q {
        crate::achievability::PrimeField::new(p)?;
    }
    let mut all = candidates(inst, q);
    all.sort_by_key(|(_, code)| code.len());
    let check = inst.m() <= VERIFY_MAX_M;
    for (kind, code) in all {
        if !check || first_failure(inst, &code)?.is_none() {
            return Ok(Construction { kind, length: code.len(), verified: check, code });
        }
    }
    unreachable!("the identity code serves every receiver")
}

/// Every bound the library can compute for one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub m: usize,
    pub lb_longest_chain: usize,
    /// `None` when `m` exceeds the search cap for `L*`.
    pub lb_algorithmic: Option<usize>,
    pub lb_improved: Option<usize>,
    pub closed_form: Option<usize>,
    pub ub_construction: Option<usize>,
    /// Set when the best lower bound meets the construction length.
    pub beta_confirmed: Option<usize>,
    pub structure: StructureClass,
}

/// Builds a [`BoundReport`]; `l_star_cap` limits the `L*` search (use
/// [`L_STAR_MAX_M`](crate::engine::L_STAR_MAX_M) for the default).
pub fn bound_report(inst: &PliableInstance, l_star_cap: usize, q: FieldChoice) -> Result<BoundReport, AchievabilityError> {
    let lb_longest_chain = longest_chain_bound(inst);
    let lb_algorithmic = compute_l_star_capped(inst, l_star_cap).ok().map(|l| inst.m() - l);
    let lb_improved = Some(improved_lower_bound(inst));
    let construction = best_construction(inst, q)?;
    let ub = construction.length;
    let best_lb = [Some(lb_longest_chain), lb_algorithmic, lb_improved].into_iter().flatten().max().expect("chain bound");
    Ok(BoundReport {
        m: inst.m(),
        lb_longest_chain,
        lb_algorithmic,
        lb_improved,
        closed_form: closed_form_beta(inst),
        ub_construction: Some(ub),
        beta_confirmed: (best_lb == ub).then_some(ub),
        structure: classify_structure(inst),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::L_STAR_MAX_M;

    #[test]
    fn p1_report() {
        let inst = PliableInstance::from_lists(6, &[&[3], &[1, 2, 3, 4], &[3, 4, 5, 6]]).unwrap();
        let r = bound_report(&inst, L_STAR_MAX_M, FieldChoice::Auto).unwrap();
        assert_eq!(r.lb_longest_chain, 4);
        assert_eq!(r.lb_algorithmic, Some(5));
        assert_eq!(r.closed_form, Some(5));
        assert_eq!(r.ub_construction, Some(5));
        assert_eq!(r.beta_confirmed, Some(5));
    }

    #[test]
    fn perfect_family_gets_cyclic_code() {
        let p = Partition::from_lists(5, &[1], &[&[2, 3], &[4, 5]]).unwrap();
        let c = best_construction(&p.perfect_instance(), FieldChoice::Auto).unwrap();
        assert_eq!(c.kind, ConstructionKind::Cyclic);
        assert_eq!(c.length, 3);
        assert!(c.verified);
    }

    #[test]
    fn empty_family_gets_identity() {
        let inst = PliableInstance::from_lists(3, &[]).unwrap();
        let c = best_construction(&inst, FieldChoice::Prime(3)).unwrap();
        assert_eq!(c.kind, ConstructionKind::Identity);
        assert_eq!(c.code.q(), 3);
        assert!(best_construction(&inst, FieldChoice::Prime(4)).is_err());
    }

    #[test]
    fn above_cap_leaves_algorithmic_bound_empty() {
        let inst = PliableInstance::from_lists(6, &[&[1]]).unwrap();
        let r = bound_report(&inst, 4, FieldChoice::Auto).unwrap();
        assert_eq!(r.lb_algorithmic, None);
        assert_eq!(r.beta_confirmed, Some(5));
    }
}
