use super::AchievabilityError;

/// Trial-division primality test.
pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let q = q as u64;
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `p ≥ at_least`.
pub fn next_prime(at_least: u32) -> u32 {
    (at_least.max(2)..).find(|&p| is_prime(p)).expect("primes are unbounded")
}

/// Arithmetic modulo a prime `q`. Field elements are plain `u32` residues in
/// `0..q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self, AchievabilityError> {
        if !is_prime(q) {
            return Err(AchievabilityError::NotPrime(q));
        }
        Ok(PrimeField { q })
    }

    pub fn q(self) -> u32 {
        self.q
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.q as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.q as u64 - b as u64) % self.q as u64) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.q;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.q), "zero has no inverse");
        self.pow(a, self.q as u64 - 2)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(self, a: u32) -> u32 {
        let mut x = a % self.q;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Smallest generator of the multiplicative group, found by checking
    /// orders in increasing order of candidates.
    pub fn primitive_root(self) -> u32 {
        if self.q == 2 {
            return 1;
        }
        (2..self.q).find(|&g| self.order(g) == self.q - 1).expect("prime fields are cyclic")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u32> = (0..30).filter(|&q| is_prime(q)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(next_prime(0), 2);
        assert_eq!(next_prime(8), 11);
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn primitive_roots() {
        let roots: Vec<u32> = [2, 3, 5, 7, 11, 13].iter().map(|&q| PrimeField::new(q).unwrap().primitive_root()).collect();
        assert_eq!(roots, vec![1, 2, 2, 3, 2, 2]);
    }

    #[test]
    fn inverses() {
        let f = PrimeField::new(31).unwrap();
        for a in 1..31 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.sub(3, 5), 29);
    }
}
