use std::fmt;
use std::str::FromStr;

use super::code::{unit_row, LinearCode};
use super::field::{next_prime, PrimeField};
use super::partition::Partition;
use super::AchievabilityError;

/// Field size requested by a caller: a fixed prime, or the smallest prime
/// that the construction admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldChoice {
    #[default]
    Auto,
    Prime(u32),
}

impl FieldChoice {
    fn resolve(self, smallest: u32) -> u32 {
        match self {
            FieldChoice::Auto => smallest,
            FieldChoice::Prime(q) => q,
        }
    }
}

impl FromStr for FieldChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(FieldChoice::Auto);
        }
        s.parse::<u32>().map(FieldChoice::Prime).map_err(|_| format!("expected a prime or `auto`, got `{s}`"))
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Auto => f.write_str("auto"),
            FieldChoice::Prime(q) => write!(f, "{q}"),
        }
    }
}

fn cyclic_rows(p: &Partition) -> Vec<Vec<u32>> {
    let m = p.m();
    let mut rows: Vec<Vec<u32>> = p.p0().iter().map(|x| unit_row(m, x.get() - 1)).collect();
    for part in p.parts() {
        let members: Vec<usize> = part.iter().map(|x| x.get() - 1).collect();
        for w in members.windows(2) {
            let mut row = vec![0; m];
            row[w[0]] = 1;
            row[w[1]] = 1;
            rows.push(row);
        }
    }
    rows
}

/// `P_0` uncoded, then the consecutive sums `Z_{i,j} + Z_{i,j+1}` inside each
/// part. Length `m − L`.
pub fn cyclic_partition_code(p: &Partition, q: u32) -> Result<LinearCode, AchievabilityError> {
    LinearCode::new(q, p.m(), cyclic_rows(p))
}

/// Smallest prime that [`truncated_code`] accepts for `(L, T)`: two or more
/// augmentation rows need `L` distinct powers of the primitive root.
pub fn truncated_min_prime(l: usize, t: usize) -> u32 {
    if l.saturating_sub(1 + t) >= 2 {
        next_prime(l as u32 + 1)
    } else {
        2
    }
}

/// The cyclic code plus rows `V_{L-k} = Σ_i γ^{(k-1)i} Z_{i,1}` for
/// `k = 1..L-1-T`, where `Z_{i,1}` is the smallest message of `P_i` and `γ`
/// the smallest primitive root. Length `m − T − 1`.
pub fn truncated_code(p: &Partition, t: usize, q: FieldChoice) -> Result<LinearCode, AchievabilityError> {
    let l = p.l();
    if t >= l {
        return Err(AchievabilityError::Truncation { t, l });
    }
    let q = q.resolve(truncated_min_prime(l, t));
    let field = PrimeField::new(q)?;
    let extra = l - 1 - t;
    if extra >= 2 && (q as usize) - 1 < l {
        return Err(AchievabilityError::FieldTooSmall { q, l });
    }
    let gamma = field.primitive_root();
    let mut rows = cyclic_rows(p);
    for k in 1..=extra {
        let mut row = vec![0; p.m()];
        for (i, part) in p.parts().iter().enumerate() {
            let leader = part.first().expect("parts are nonempty").get() - 1;
            row[leader] = field.pow(gamma, ((k - 1) * (i + 1)) as u64);
        }
        rows.push(row);
    }
    LinearCode::new(q, p.m(), rows)
}

/// The cyclic code plus the smallest message of `P_k`, where `k` is the
/// smallest part index outside `Q`. Length `m − L + 1`.
pub fn imperfect_patch_code(p: &Partition, q_parts: &[usize], q: u32) -> Result<LinearCode, AchievabilityError> {
    let q_mask = p.q_mask(q_parts)?;
    let k = (1..=p.l())
        .find(|&k| q_mask >> (k - 1) & 1 == 0)
        .ok_or_else(|| AchievabilityError::InvalidPartSet("Q covers every part".into()))?;
    let a = p.part(k).first().expect("parts are nonempty").get() - 1;
    let mut rows = cyclic_rows(p);
    rows.push(unit_row(p.m(), a));
    LinearCode::new(q, p.m(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_rows_for_two_parts() {
        let p = Partition::from_lists(5, &[1], &[&[2, 3], &[4, 5]]).unwrap();
        let code = cyclic_partition_code(&p, 2).unwrap();
        assert_eq!(code.rows(), &[vec![1, 0, 0, 0, 0], vec![0, 1, 1, 0, 0], vec![0, 0, 0, 1, 1]]);
    }

    #[test]
    fn single_part_is_a_path_of_sums() {
        let p = Partition::from_lists(4, &[], &[&[1, 2, 3, 4]]).unwrap();
        let code = cyclic_partition_code(&p, 3).unwrap();
        assert_eq!(code.len(), 3);
        assert_eq!(code.rows()[2], vec![0, 0, 1, 1]);
    }

    #[test]
    fn truncated_single_row() {
        let p = Partition::from_lists(3, &[], &[&[1], &[2], &[3]]).unwrap();
        let code = truncated_code(&p, 1, FieldChoice::Prime(2)).unwrap();
        assert_eq!(code.rows(), &[vec![1, 1, 1]]);
        assert_eq!(truncated_code(&p, 2, FieldChoice::Auto).unwrap(), cyclic_partition_code(&p, 2).unwrap());
        assert!(truncated_code(&p, 3, FieldChoice::Auto).is_err());
    }

    #[test]
    fn truncated_vandermonde_rows() {
        let p = Partition::from_lists(4, &[], &[&[1], &[2], &[3], &[4]]).unwrap();
        assert_eq!(truncated_min_prime(4, 0), 5);
        let code = truncated_code(&p, 0, FieldChoice::Auto).unwrap();
        assert_eq!(code.q(), 5);
        // γ = 2 mod 5: rows γ^{0·i}, γ^{1·i}, γ^{2·i} for i = 1..4.
        assert_eq!(code.rows(), &[vec![1, 1, 1, 1], vec![2, 4, 3, 1], vec![4, 1, 4, 1]]);
        assert!(matches!(
            truncated_code(&p, 0, FieldChoice::Prime(3)),
            Err(AchievabilityError::FieldTooSmall { q: 3, l: 4 })
        ));
    }

    #[test]
    fn patch_adds_leader_of_first_free_part() {
        let p = Partition::from_lists(4, &[], &[&[1, 2], &[3, 4]]).unwrap();
        let code = imperfect_patch_code(&p, &[1], 2).unwrap();
        assert_eq!(code.rows(), &[vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 1, 0]]);
        assert!(imperfect_patch_code(&p, &[1, 2], 2).is_err());
    }

    #[test]
    fn field_choice_parsing() {
        assert_eq!("auto".parse::<FieldChoice>().unwrap(), FieldChoice::Auto);
        assert_eq!("7".parse::<FieldChoice>().unwrap(), FieldChoice::Prime(7));
        assert!("x".parse::<FieldChoice>().is_err());
    }
}
