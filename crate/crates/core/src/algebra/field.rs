use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field F_b, identified with {0, .., b-1}.
///
/// Elements are plain `u8` residues; the field is a small `Copy` handle that
/// every polynomial and series carries. Primes are limited to `b < 256` so
/// that digits and coefficients fit a byte.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    b: u8,
}

impl Field {
    pub fn new(b: u32) -> Result<Self> {
        if !(2..256).contains(&b) || !is_prime(b) {
            return Err(Error::NotPrime(b));
        }
        Ok(Self { b: b as u8 })
    }

    #[inline]
    pub fn order(self) -> u32 {
        self.b as u32
    }

    #[inline]
    pub fn reduce(self, v: u64) -> u8 {
        (v % self.b as u64) as u8
    }

    /// Reduces an arbitrary signed integer into the field.
    pub fn from_i64(self, v: i64) -> u8 {
        v.rem_euclid(self.b as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, c: u8) -> u8 {
        let s = a as u16 + c as u16;
        if s >= self.b as u16 {
            (s - self.b as u16) as u8
        } else {
            s as u8
        }
    }

    #[inline]
    pub fn sub(self, a: u8, c: u8) -> u8 {
        self.add(a, self.neg(c))
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.b - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, c: u8) -> u8 {
        ((a as u16 * c as u16) % self.b as u16) as u8
    }

    pub fn pow(self, a: u8, mut e: u64) -> u8 {
        let mut base = a % self.b;
        let mut acc = 1u8 % self.b;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inv(self, a: u8) -> Option<u8> {
        if a % self.b == 0 {
            None
        } else {
            Some(self.pow(a, self.b as u64 - 2))
        }
    }

    pub fn check_same(self, other: Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: self.order(),
                right: other.order(),
            })
        }
    }
}

impl TryFrom<u32> for Field {
    type Error = Error;

    fn try_from(b: u32) -> Result<Self> {
        Field::new(b)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.order()
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(Field::new(4).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(0).is_err());
        assert!(Field::new(257).is_err());
        assert!(Field::new(251).is_ok());
    }

    #[test]
    fn inverse_and_fermat() {
        for b in [2u32, 3, 5, 7, 13] {
            let f = Field::new(b).unwrap();
            for a in 1..b as u8 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                // a^b = a
                assert_eq!(f.pow(a, b as u64), a);
            }
            assert_eq!(f.inv(0), None);
        }
    }

    #[test]
    fn signed_reduction() {
        let f = Field::new(3).unwrap();
        assert_eq!(f.from_i64(-1), 2);
        assert_eq!(f.from_i64(7), 1);
    }
}
