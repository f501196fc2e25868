//! Dense univariate polynomials. Index `i` holds the coefficient of `x^i`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldOps;

/// A polynomial with trailing zero coefficients stripped (the zero polynomial has no coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T> Poly<T> {
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }
}

impl<T: Clone + PartialEq> Poly<T> {
    pub fn new<F: FieldOps<Elem = T>>(f: &F, mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| f.is_zero(c)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant<F: FieldOps<Elem = T>>(f: &F, c: T) -> Self {
        Self::new(f, vec![c])
    }

    /// `x^d`.
    pub fn monomial<F: FieldOps<Elem = T>>(f: &F, d: usize) -> Self {
        let mut c = vec![f.zero(); d + 1];
        c[d] = f.one();
        Self { coeffs: c }
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one<F: FieldOps<Elem = T>>(f: &F, n: usize) -> Self {
        let mut p = Self::monomial(f, n);
        p.coeffs[0] = f.sub(&p.coeffs[0], &f.one());
        Self::new(f, p.coeffs)
    }

    pub fn from_ints<F: FieldOps<Elem = T>>(f: &F, c: &[i64]) -> Self {
        Self::new(f, c.iter().map(|&v| f.from_int(v)).collect())
    }

    pub fn coeff<F: FieldOps<Elem = T>>(&self, f: &F, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn add<F: FieldOps<Elem = T>>(&self, f: &F, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..len)
                .map(|i| f.add(&self.coeff(f, i), &other.coeff(f, i)))
                .collect(),
        )
    }

    pub fn sub<F: FieldOps<Elem = T>>(&self, f: &F, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..len)
                .map(|i| f.sub(&self.coeff(f, i), &other.coeff(f, i)))
                .collect(),
        )
    }

    pub fn scale<F: FieldOps<Elem = T>>(&self, f: &F, c: &T) -> Self {
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn mul<F: FieldOps<Elem = T>>(&self, f: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem<F: FieldOps<Elem = T>>(&self, f: &F, divisor: &Self) -> Result<(Self, Self)> {
        let dlen = divisor.coeffs.len();
        if dlen == 0 {
            return Err(Error::DivisionByZero);
        }
        let lead_inv = f.inv(&divisor.coeffs[dlen - 1])?;
        let mut rem = self.coeffs.clone();
        if rem.len() < dlen {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dlen + 1];
        for i in (0..quot.len()).rev() {
            let c = f.mul(&rem[i + dlen - 1], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(&rem[i + j], &f.mul(&c, d));
            }
            quot[i] = c;
        }
        rem.truncate(dlen - 1);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem<F: FieldOps<Elem = T>>(&self, f: &F, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(f, divisor)?.1)
    }

    /// Scales to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic<F: FieldOps<Elem = T>>(&self, f: &F) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(lead) => self.scale(f, &f.inv(lead).expect("leading coefficient is nonzero")),
        }
    }

    pub fn eval<F: FieldOps<Elem = T>>(&self, f: &F, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod<F: FieldOps<Elem = T>>(
        &self,
        f: &F,
        mut e: u128,
        modulus: &Self,
    ) -> Result<Self> {
        let mut base = self.rem(f, modulus)?;
        let mut acc = Self::constant(f, f.one()).rem(f, modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base).rem(f, modulus)?;
            }
        }
        Ok(acc)
    }

    pub fn derivative<F: FieldOps<Elem = T>>(&self, f: &F) -> Self {
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(&f.from_int(i as i64), c))
                .collect(),
        )
    }
}

impl Poly<i64> {
    /// An integer polynomial, trailing zeros stripped.
    pub fn integer(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }
}

/// Monic greatest common divisor by the Euclidean algorithm. `gcd(0, 0) = 0`.
pub fn poly_gcd<F: FieldOps>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(f, &b).expect("divisor is nonzero");
        a = b;
        b = r;
    }
    a.monic(f)
}

/// Returns `(g, s)` with `g = gcd(a, m)` monic and `s*a ≡ g (mod m)`.
pub fn poly_ext_gcd<F: FieldOps>(
    f: &F,
    a: &Poly<F::Elem>,
    m: &Poly<F::Elem>,
) -> (Poly<F::Elem>, Poly<F::Elem>) {
    let (mut r0, mut r1) = (m.clone(), a.clone());
    let (mut s0, mut s1) = (Poly::zero(), Poly::constant(f, f.one()));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(f, &r1).expect("divisor is nonzero");
        let s = s0.sub(f, &q.mul(f, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    match r0.leading().cloned() {
        None => (Poly::zero(), Poly::zero()),
        Some(lead) => {
            let li = f.inv(&lead).expect("nonzero");
            (r0.scale(f, &li), s0.scale(f, &li))
        }
    }
}

impl<T: fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return out.write_str("0");
        }
        out.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.write_str(", ")?;
            }
            write!(out, "{c}")?;
        }
        out.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn gcd_examples() {
        let f2 = PrimeField::new(2).unwrap();
        let f = Poly::from_ints(&f2, &[1, 1, 0, 1]);
        assert_eq!(poly_gcd(&f2, &f, &Poly::zero()), f);
        let x7 = Poly::x_pow_minus_one(&f2, 7);
        assert_eq!(poly_gcd(&f2, &f, &x7), f);

        let q = Rationals;
        let a = Poly::from_ints(&q, &[-1, 0, 1]);
        let b = Poly::from_ints(&q, &[-1, 0, 0, 1]);
        assert_eq!(poly_gcd(&q, &a, &b), Poly::from_ints(&q, &[-1, 1]));
        // monic output even when inputs are not
        let c = Poly::from_ints(&q, &[-3, 3]);
        assert_eq!(
            poly_gcd(&q, &c, &Poly::zero()),
            Poly::from_ints(&q, &[-1, 1])
        );
    }

    #[test]
    fn x7_minus_1_over_f2_factors() {
        let f2 = PrimeField::new(2).unwrap();
        let prod = Poly::from_ints(&f2, &[1, 1])
            .mul(&f2, &Poly::from_ints(&f2, &[1, 1, 0, 1]))
            .mul(&f2, &Poly::from_ints(&f2, &[1, 0, 1, 1]));
        assert_eq!(prod, Poly::x_pow_minus_one(&f2, 7));
    }

    #[test]
    fn division_identity() {
        let f = PrimeField::new(5).unwrap();
        let a = Poly::from_ints(&f, &[3, 0, 2, 4, 1, 1]);
        let b = Poly::from_ints(&f, &[1, 2, 3]);
        let (q, r) = a.div_rem(&f, &b).unwrap();
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(q.mul(&f, &b).add(&f, &r), a);
        assert_eq!(a.div_rem(&f, &Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn ext_gcd_gives_inverse() {
        let f = PrimeField::new(3).unwrap();
        let m = Poly::from_ints(&f, &[1, 0, 1]); // x^2 + 1, irreducible mod 3
        let a = Poly::from_ints(&f, &[1, 1]);
        let (g, s) = poly_ext_gcd(&f, &a, &m);
        assert_eq!(g, Poly::constant(&f, 1));
        assert_eq!(s.mul(&f, &a).rem(&f, &m).unwrap(), Poly::constant(&f, 1));
    }
}
