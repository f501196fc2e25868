use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::zn::{is_prime, mul_mod};

/// Exact arithmetic in a field whose elements have a canonical representation.
///
/// Equality of `Elem` values is field equality.
pub trait FieldOps: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// The rational numbers with arbitrary-precision normalized fractions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl FieldOps for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_int(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// The prime field `F_p`, elements stored as residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Reduces an integer-valued rational; fails if the denominator vanishes mod p.
    pub fn reduce_rational(&self, v: &BigRational) -> Result<u64> {
        let p = BigInt::from(self.p);
        let num = mod_big(v.numer(), &p);
        let den = mod_big(v.denom(), &p);
        self.div(&num, &den)
    }
}

fn mod_big(v: &BigInt, p: &BigInt) -> u64 {
    let r = v % p;
    let r = if r.is_negative() { r + p } else { r };
    r.try_into().expect("residue fits in u64")
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_int(&self, v: i64) -> u64 {
        self.reduce(v)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }

    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        // Fermat
        Ok(self.pow(a, (self.p - 2) as u128))
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(&3).unwrap(), 5);
        assert_eq!(f.inv(&0), Err(Error::DivisionByZero));
        assert_eq!(f.from_int(-1), 6);
        assert_eq!(f.neg(&0), 0);
        assert!(PrimeField::new(9).is_err());
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.reduce_rational(&half).unwrap(), 4);
    }

    #[test]
    fn rational_division_by_zero() {
        assert_eq!(Rationals.inv(&Rationals.zero()), Err(Error::DivisionByZero));
        let two = Rationals.from_int(2);
        assert_eq!(
            Rationals.mul(&two, &Rationals.inv(&two).unwrap()),
            Rationals.one()
        );
    }
}
