use super::OracleError;
use crate::achievability::{decodable_message, LinearCode, PrimeField};
use crate::instance::{PliableInstance, ReceiverSet};

/// Default limit on the number of generator matrices one search may visit.
pub const DEFAULT_MAX_MATRICES: u64 = 10_000_000;

/// Number of `ℓ`-dimensional subspaces of `GF(q)^m` (the Gaussian binomial),
/// saturating at `u64::MAX`.
pub fn subspace_count(m: usize, l: usize, q: u32) -> u64 {
    if l > m {
        return 0;
    }
    // After step i the running value is the Gaussian binomial [m, i+1]_q.
    let exact = (0..l).try_fold(1u128, |acc, i| {
        let a = (q as u128).checked_pow((m - i) as u32)? - 1;
        let b = (q as u128).checked_pow((i + 1) as u32)? - 1;
        Some(acc.checked_mul(a)? / b)
    });
    exact.and_then(|v| u64::try_from(v).ok()).unwrap_or(u64::MAX)
}

/// Smallest `ℓ ≤ l_max` for which some `ℓ × m` code over `GF(q)` serves
/// every present receiver of `inst`.
pub fn min_linear_length(inst: &PliableInstance, q: u32, l_max: usize) -> Result<Option<usize>, OracleError> {
    Ok(min_linear_code(inst, q, l_max, DEFAULT_MAX_MATRICES)?.map(|c| c.len()))
}

/// Like [`min_linear_length`] but returns the first code found, with an
/// explicit matrix budget.
///
/// Each row space is visited once, as a full-rank matrix in reduced row
/// echelon form: pivot columns are chosen first, then the entries right of
/// each pivot in the non-pivot columns. Lengths are tried from `ℓ = 0`
/// upwards.
pub fn min_linear_code(
    inst: &PliableInstance,
    q: u32,
    l_max: usize,
    max_matrices: u64,
) -> Result<Option<LinearCode>, OracleError> {
    let field = PrimeField::new(q).map_err(|_| OracleError::NotPrime(q))?;
    let m = inst.m();
    if l_max > m {
        return Err(OracleError::LengthAboveM { l_max, m });
    }
    let total = (0..=l_max).fold(0u64, |acc, l| acc.saturating_add(subspace_count(m, l, q)));
    if total > max_matrices {
        return Err(OracleError::SearchSpace { count: total, cap: max_matrices });
    }
    let present: Vec<ReceiverSet> =
        (0..inst.full().mask()).map(ReceiverSet::from_mask).filter(|&h| !inst.is_absent(h)).collect();
    for l in 0..=l_max {
        if let Some(code) = search_length(field, m, l, &present) {
            return Ok(Some(code));
        }
    }
    Ok(None)
}

fn search_length(field: PrimeField, m: usize, l: usize, present: &[ReceiverSet]) -> Option<LinearCode> {
    let q = field.q();
    let serves = |code: &LinearCode| present.iter().all(|&h| decodable_message(code, h).is_some());
    for pivots in combinations(m, l) {
        // Free positions: (row, column) right of the row's pivot and not a pivot column.
        let free: Vec<(usize, usize)> = (0..l)
            .flat_map(|r| ((pivots[r] + 1)..m).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut values = vec![0u32; free.len()];
        loop {
            let mut rows = vec![vec![0u32; m]; l];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&values) {
                rows[r][c] = v;
            }
            let code = LinearCode::new(q, m, rows).expect("entries are in range");
            if serves(&code) {
                return Some(code);
            }
            if !increment(&mut values, q) {
                break;
            }
        }
    }
    None
}

fn increment(values: &mut [u32], q: u32) -> bool {
    for v in values.iter_mut() {
        *v += 1;
        if *v < q {
            return true;
        }
        *v = 0;
    }
    false
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(subspace_count(5, 1, 2), 31);
        assert_eq!(subspace_count(5, 2, 2), 155);
        assert_eq!(subspace_count(5, 2, 3), 1210);
        assert_eq!(subspace_count(4, 0, 7), 1);
        assert_eq!(subspace_count(3, 4, 2), 0);
    }

    #[test]
    fn matrix_enumeration_visits_each_subspace_once() {
        for (m, q) in [(3, 2), (4, 2), (3, 3)] {
            for l in 0..=m {
                let mut count = 0u64;
                for pivots in combinations(m, l) {
                    let free: usize = (0..l).map(|r| ((pivots[r] + 1)..m).filter(|c| !pivots.contains(c)).count()).sum();
                    count += (q as u64).pow(free as u32);
                }
                assert_eq!(count, subspace_count(m, l, q), "m={m} l={l} q={q}");
            }
        }
    }

    #[test]
    fn small_instances() {
        let empty = PliableInstance::from_lists(3, &[]).unwrap();
        assert_eq!(min_linear_length(&empty, 2, 3).unwrap(), Some(3));
        assert_eq!(min_linear_length(&empty, 2, 2).unwrap(), None);
        let truncated = PliableInstance::from_lists(3, &[&[], &[1], &[2], &[3]]).unwrap();
        assert_eq!(min_linear_length(&truncated, 2, 3).unwrap(), Some(1));
    }

    #[test]
    fn caps_and_errors() {
        let inst = PliableInstance::from_lists(3, &[]).unwrap();
        assert!(matches!(min_linear_length(&inst, 4, 2), Err(OracleError::NotPrime(4))));
        assert!(matches!(min_linear_length(&inst, 2, 4), Err(OracleError::LengthAboveM { .. })));
        assert!(matches!(min_linear_code(&inst, 2, 3, 5), Err(OracleError::SearchSpace { .. })));
    }
}
