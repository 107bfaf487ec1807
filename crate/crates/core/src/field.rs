//! Prime field arithmetic with a runtime modulus.
//!
//! Scalars are plain `u64` values kept in `[0, p)`. The field context is a
//! small `Copy` struct so it can ride along inside forms and matrices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The default modulus, the Mersenne prime 2^31 - 1.
pub const DEFAULT_PRIME: u64 = (1 << 31) - 1;

const MERSENNE31: u64 = (1 << 31) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} must be an odd prime below 2^31")]
    OutOfRange(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = FieldError;
    fn try_from(p: u64) -> Result<Self, FieldError> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl PrimeField {
    /// Products of two reduced scalars must fit comfortably in a `u64`
    /// together with an accumulated addend, hence the 2^31 bound.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p < 3 || p > MERSENNE31 {
            return Err(FieldError::OutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduce any `u64` below 2^63 into `[0, p)`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        if self.p == MERSENNE31 {
            let r = (x & MERSENNE31) + (x >> 31);
            let r = (r & MERSENNE31) + (r >> 31);
            if r >= MERSENNE31 {
                r - MERSENNE31
            } else {
                r
            }
        } else {
            x % self.p
        }
    }

    /// `acc[i] += a * row[i]`, leaving each entry congruent to the true value
    /// and below `2^34`; finish with `reduce`. Entries of `row` and `a`
    /// must be reduced.
    pub fn axpy(&self, acc: &mut [u64], a: u64, row: &[u64]) {
        if self.p == MERSENNE31 {
            for (x, &r) in acc.iter_mut().zip(row) {
                let y = *x + a * r;
                *x = (y & MERSENNE31) + (y >> 31);
            }
        } else {
            let p = self.p;
            for (x, &r) in acc.iter_mut().zip(row) {
                *x = (*x + a * r) % p;
            }
        }
    }

    /// Fully reduce a vector produced by `axpy`.
    pub fn reduce_all(&self, v: &mut [u64]) {
        for x in v.iter_mut() {
            *x = self.reduce(*x);
        }
    }

    /// Map a signed integer into the field.
    pub fn from_i64(&self, x: i64) -> u64 {
        let r = x.rem_euclid(self.p as i64);
        r as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base = self.reduce(base);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero, which is always a caller bug.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    /// Representative in `(-p/2, p/2]`, used for readable output.
    pub fn centered(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_composites_and_two() {
        assert_eq!(PrimeField::new(2), Err(FieldError::OutOfRange(2)));
        assert_eq!(PrimeField::new(91), Err(FieldError::NotPrime(91)));
        assert!(PrimeField::new(101).is_ok());
    }

    #[test]
    fn inverse_roundtrip_small_prime() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    proptest! {
        #[test]
        fn mersenne_reduce_matches_modulo(x in 0u64..(1u64 << 63)) {
            let f = PrimeField::default();
            prop_assert_eq!(f.reduce(x), x % DEFAULT_PRIME);
        }

        #[test]
        fn mul_is_consistent(a in 0u64..DEFAULT_PRIME, b in 0u64..DEFAULT_PRIME) {
            let f = PrimeField::default();
            prop_assert_eq!(f.mul(a, b) as u128, (a as u128 * b as u128) % DEFAULT_PRIME as u128);
        }
    }
}
