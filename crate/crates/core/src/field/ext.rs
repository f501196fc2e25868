use crate::error::{Error, Result};
use crate::field::poly::{poly_ext_gcd, Poly};
use crate::field::FieldOps;

/// The quotient `B[x] / (modulus)` for a monic irreducible `modulus`.
///
/// Elements are coefficient vectors of length exactly `deg(modulus)`, so
/// structural equality is field equality.
#[derive(Debug, Clone)]
pub struct ExtensionField<B: FieldOps> {
    base: B,
    modulus: Poly<B::Elem>,
    degree: usize,
}

impl<B: FieldOps> ExtensionField<B> {
    /// `modulus` must be irreducible over `base`; this is not checked here.
    pub fn new(base: B, modulus: Poly<B::Elem>) -> Result<Self> {
        let degree = modulus
            .degree()
            .filter(|&d| d >= 1)
            .ok_or(Error::DivisionByZero)?;
        let modulus = modulus.monic(&base);
        Ok(Self {
            base,
            modulus,
            degree,
        })
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn modulus(&self) -> &Poly<B::Elem> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Residue class of an arbitrary polynomial.
    pub fn from_poly(&self, p: &Poly<B::Elem>) -> Vec<B::Elem> {
        let r = p
            .rem(&self.base, &self.modulus)
            .expect("modulus is nonzero");
        self.pad(r.into_coeffs())
    }

    /// Residue class of the polynomial with the given integer coefficients.
    pub fn from_int_coeffs(&self, c: &[i64]) -> Vec<B::Elem> {
        self.from_poly(&Poly::from_ints(&self.base, c))
    }

    /// The class of `x`.
    pub fn generator(&self) -> Vec<B::Elem> {
        self.from_poly(&Poly::monomial(&self.base, 1))
    }

    pub fn embed(&self, c: B::Elem) -> Vec<B::Elem> {
        let mut v = vec![self.base.zero(); self.degree];
        v[0] = c;
        v
    }

    pub fn to_poly(&self, a: &[B::Elem]) -> Poly<B::Elem> {
        Poly::new(&self.base, a.to_vec())
    }

    /// The base-field value of an element lying in the prime subfield embedding, if it does.
    pub fn as_base(&self, a: &[B::Elem]) -> Option<B::Elem> {
        if a[1..].iter().all(|c| self.base.is_zero(c)) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    fn pad(&self, mut c: Vec<B::Elem>) -> Vec<B::Elem> {
        c.resize(self.degree, self.base.zero());
        c
    }
}

impl<B: FieldOps> FieldOps for ExtensionField<B> {
    type Elem = Vec<B::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.degree]
    }

    fn one(&self) -> Self::Elem {
        self.embed(self.base.one())
    }

    fn from_int(&self, v: i64) -> Self::Elem {
        self.embed(self.base.from_int(v))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let f = &self.base;
        let m = self.degree;
        let mut prod = vec![f.zero(); 2 * m - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !f.is_zero(y) {
                    prod[i + j] = f.add(&prod[i + j], &f.mul(x, y));
                }
            }
        }
        // the modulus is monic: x^m = -(c_0 + .. + c_{m-1} x^{m-1})
        let md = self.modulus.coeffs();
        for top in (m..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[top], f.zero());
            if f.is_zero(&c) {
                continue;
            }
            for j in 0..m {
                prod[top - m + j] = f.sub(&prod[top - m + j], &f.mul(&c, &md[j]));
            }
        }
        prod.truncate(m);
        prod
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let p = self.to_poly(a);
        if p.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s) = poly_ext_gcd(&self.base, &p, &self.modulus);
        if g.degree() != Some(0) {
            // only possible if the modulus is reducible
            return Err(Error::DivisionByZero);
        }
        Ok(self.from_poly(&s))
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }
}
