use super::OracleError;
use crate::instance::{bits, PliableInstance};

/// Largest `m` accepted by [`brute_force_l_star`].
pub const BRUTE_MAX_M: usize = 4;

/// `L* = max_D min_S |S|` by enumerating every total decoding choice and,
/// for each, every run of the decoding-chain algorithm. No memoization and no
/// pruning.
pub fn brute_force_l_star(inst: &PliableInstance) -> Result<usize, OracleError> {
    let m = inst.m();
    if m > BRUTE_MAX_M {
        return Err(OracleError::TooLarge { m, cap: BRUTE_MAX_M });
    }
    let full = inst.full().mask();
    let present: Vec<u32> = (0..full).filter(|&h| inst.is_present(crate::instance::ReceiverSet::from_mask(h))).collect();
    let options: Vec<Vec<u32>> = present.iter().map(|&h| bits(full & !h).collect()).collect();
    // d[h] is the 0-based message decoded by present receiver h.
    let mut d = vec![u32::MAX; 1 << m];
    let mut pick = vec![0usize; present.len()];
    let mut best = 0;
    loop {
        for (i, &h) in present.iter().enumerate() {
            d[h as usize] = options[i][pick[i]];
        }
        best = best.max(fewest_skips(inst, &d, 0));
        // Odometer over the choice of every present receiver.
        let mut i = 0;
        loop {
            if i == present.len() {
                return Ok(best);
            }
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn fewest_skips(inst: &PliableInstance, d: &[u32], c: u32) -> usize {
    let full = inst.full().mask();
    if c == full {
        return 0;
    }
    if d[c as usize] != u32::MAX {
        return fewest_skips(inst, d, c | 1 << d[c as usize]);
    }
    let mut best = usize::MAX;
    // Avoid: any present strict subset whose message is new to the chain.
    for b in 0..full {
        if b & c == b && b != c && d[b as usize] != u32::MAX && c >> d[b as usize] & 1 == 0 {
            best = best.min(fewest_skips(inst, d, c | 1 << d[b as usize]));
        }
    }
    for a in bits(full & !c) {
        best = best.min(1 + fewest_skips(inst, d, c | 1 << a));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let nested_pair = PliableInstance::from_lists(3, &[&[1], &[1, 2]]).unwrap();
        assert_eq!(brute_force_l_star(&nested_pair).unwrap(), 1);
        assert_eq!(brute_force_l_star(&PliableInstance::from_lists(4, &[]).unwrap()).unwrap(), 0);
        let perfect = PliableInstance::from_lists(4, &[&[], &[1, 2], &[3, 4]]).unwrap();
        assert_eq!(brute_force_l_star(&perfect).unwrap(), 2);
        assert!(brute_force_l_star(&PliableInstance::from_lists(5, &[]).unwrap()).is_err());
    }
}
