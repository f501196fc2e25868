//! Exact coefficient fields: `Q`, `F_p`, the cyclotomic field `Q(ω)`, and the
//! splitting field `F_{p^m}` of `x^n - 1`, each optionally carrying a primitive
//! `n`-th root of unity `ω`.

mod base;
pub mod cyclotomic;
mod ext;
pub mod poly;

use std::fmt;

use num_rational::BigRational;

pub use base::{FieldOps, PrimeField, Rationals};
pub use cyclotomic::cyclotomic_polynomial;
pub use ext::ExtensionField;
pub use poly::{poly_gcd, Poly};

use crate::error::{Error, Result};
use crate::zn::{gcd, multiplicative_order};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Prime(u64),
    CyclotomicRational(u64),
    CyclotomicPrime(u64, u64),
}

#[derive(Debug, Clone)]
enum Repr {
    Q(Rationals),
    Fp(PrimeField),
    QOmega(ExtensionField<Rationals>),
    FpExt(ExtensionField<PrimeField>),
}

/// An element of some [`FieldCtx`]. The representation is always reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(BigRational),
    Fp(u64),
    QOmega(Vec<BigRational>),
    FpExt(Vec<u64>),
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn poly<T: fmt::Display>(f: &mut fmt::Formatter<'_>, c: &[T]) -> fmt::Result {
            f.write_str("[")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")
        }
        match self {
            FieldElem::Q(q) => write!(f, "{q}"),
            FieldElem::Fp(v) => write!(f, "{v}"),
            FieldElem::QOmega(c) => poly(f, c),
            FieldElem::FpExt(c) => poly(f, c),
        }
    }
}

/// A coefficient field together with, when present, a distinguished primitive
/// `n`-th root of unity `ω`.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    kind: FieldKind,
    repr: Repr,
    /// `ω^0, .., ω^(n-1)`
    omega_powers: Option<Vec<FieldElem>>,
}

impl FieldCtx {
    pub fn rational() -> Self {
        Self {
            kind: FieldKind::Rational,
            repr: Repr::Q(Rationals),
            omega_powers: None,
        }
    }

    pub fn prime(p: u64) -> Result<Self> {
        Ok(Self {
            kind: FieldKind::Prime(p),
            repr: Repr::Fp(PrimeField::new(p)?),
            omega_powers: None,
        })
    }

    /// `Q[x]/Φ_n` with `ω` the class of `x`.
    pub fn rational_cyclotomic(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSet(format!(
                "cyclotomic field needs n >= 2, got {n}"
            )));
        }
        let q = Rationals;
        let phi = Poly::from_ints(&q, cyclotomic_polynomial(n).coeffs());
        let ext = ExtensionField::new(q, phi)?;
        let omega = FieldElem::QOmega(ext.generator());
        Self::with_root(
            FieldKind::CyclotomicRational(n),
            Repr::QOmega(ext),
            omega,
            n,
        )
    }

    /// The smallest extension of `F_p` containing the `n`-th roots of unity.
    ///
    /// With `m = ord_n(p) > 1` this is `F_p[x]/(g)` for the irreducible factor `g`
    /// of `Φ_n mod p` with the smallest coefficient sequence, and `ω = x`. When
    /// `m = 1` it is `F_p` itself with `ω` the smallest residue of order `n`.
    pub fn splitting_field(p: u64, n: u64) -> Result<Self> {
        let fp = PrimeField::new(p)?;
        if n == 0 || gcd(p, n) != 1 {
            return Err(Error::NotCoprime {
                what: "p and n",
                a: p,
                b: n,
            });
        }
        let m = multiplicative_order(p, n).expect("p is a unit mod n");
        if m == 1 {
            let root = cyclotomic::smallest_primitive_root_of_unity(p, n).expect("n divides p - 1");
            return Self::with_root(FieldKind::Prime(p), Repr::Fp(fp), FieldElem::Fp(root), n);
        }
        let factors = cyclotomic::factor_cyclotomic_mod_p(p, n)?;
        let modulus = factors.into_iter().next().expect("Φ_n has a factor");
        if !cyclotomic::passes_irreducibility_check(&fp, &modulus)
            || modulus.degree() != Some(m as usize)
        {
            return Err(Error::AssertionFailed(format!(
                "factor {modulus} of Φ_{n} mod {p} is not irreducible of degree {m}"
            )));
        }
        let ext = ExtensionField::new(fp, modulus)?;
        let omega = FieldElem::FpExt(ext.generator());
        Self::with_root(FieldKind::CyclotomicPrime(p, n), Repr::FpExt(ext), omega, n)
    }

    fn with_root(kind: FieldKind, repr: Repr, omega: FieldElem, n: u64) -> Result<Self> {
        let mut ctx = Self {
            kind,
            repr,
            omega_powers: None,
        };
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = ctx.one();
        for _ in 0..n {
            powers.push(cur.clone());
            cur = ctx.mul(&cur, &omega);
        }
        if cur != ctx.one() || powers.iter().skip(1).any(|w| *w == ctx.one()) {
            return Err(Error::AssertionFailed(format!("ω does not have order {n}")));
        }
        ctx.omega_powers = Some(powers);
        Ok(ctx)
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// Order `n` of the distinguished root of unity, if any.
    pub fn root_order(&self) -> Option<u64> {
        self.omega_powers.as_ref().map(|p| p.len() as u64)
    }

    pub fn omega(&self) -> Result<FieldElem> {
        self.e(1)
    }

    /// `e(x) = ω^x`, exponent reduced mod `n`.
    pub fn e(&self, x: i64) -> Result<FieldElem> {
        let powers = self.omega_powers.as_ref().ok_or(Error::NoRootOfUnity)?;
        Ok(powers[x.rem_euclid(powers.len() as i64) as usize].clone())
    }

    /// Degree over the prime field (or over `Q`).
    pub fn degree(&self) -> usize {
        match &self.repr {
            Repr::Q(_) | Repr::Fp(_) => 1,
            Repr::QOmega(e) => e.degree(),
            Repr::FpExt(e) => e.degree(),
        }
    }

    /// Defining polynomial over `F_p` for `F_{p^m}` contexts.
    pub fn modulus_fp(&self) -> Option<&Poly<u64>> {
        match &self.repr {
            Repr::FpExt(e) => Some(e.modulus()),
            _ => None,
        }
    }

    /// Defining polynomial over `Q` for `Q(ω)` contexts.
    pub fn modulus_q(&self) -> Option<&Poly<BigRational>> {
        match &self.repr {
            Repr::QOmega(e) => Some(e.modulus()),
            _ => None,
        }
    }

    /// `Q` or `F_p` underlying this context, without a root of unity.
    pub fn prime_subfield(&self) -> FieldCtx {
        match self.characteristic() {
            0 => FieldCtx::rational(),
            p => FieldCtx::prime(p).expect("characteristic is prime"),
        }
    }

    pub fn contains(&self, a: &FieldElem) -> bool {
        match (&self.repr, a) {
            (Repr::Q(_), FieldElem::Q(_)) => true,
            (Repr::Fp(f), FieldElem::Fp(v)) => *v < f.p(),
            (Repr::QOmega(e), FieldElem::QOmega(c)) => c.len() == e.degree(),
            (Repr::FpExt(e), FieldElem::FpExt(c)) => {
                c.len() == e.degree() && c.iter().all(|&v| v < e.base().p())
            }
            _ => false,
        }
    }

    /// Checked division reporting mismatched operands instead of panicking.
    pub fn try_div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::FieldMismatch);
        }
        self.div(a, b)
    }

    /// Element given by integer coefficients in the power basis of `ω`
    /// (only the constant term is used for prime fields and `Q`).
    pub fn from_int_coeffs(&self, c: &[i64]) -> FieldElem {
        match &self.repr {
            Repr::Q(q) => FieldElem::Q(q.from_int(c.first().copied().unwrap_or(0))),
            Repr::Fp(f) => FieldElem::Fp(f.from_int(c.first().copied().unwrap_or(0))),
            Repr::QOmega(e) => FieldElem::QOmega(e.from_int_coeffs(c)),
            Repr::FpExt(e) => FieldElem::FpExt(e.from_int_coeffs(c)),
        }
    }

    /// Converts an element to an `F_p` residue when it lies in the prime subfield.
    pub fn as_prime_residue(&self, a: &FieldElem) -> Option<u64> {
        match (&self.repr, a) {
            (Repr::Fp(_), FieldElem::Fp(v)) => Some(*v),
            (Repr::FpExt(e), FieldElem::FpExt(c)) => e.as_base(c),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self.kind {
            FieldKind::Rational => "Q".to_string(),
            FieldKind::Prime(p) => match self.root_order() {
                Some(n) => format!(
                    "F_{p} (ω of order {n} = {})",
                    self.e(1).expect("root present")
                ),
                None => format!("F_{p}"),
            },
            FieldKind::CyclotomicRational(n) => format!("Q(ω_{n})"),
            FieldKind::CyclotomicPrime(p, n) => {
                format!(
                    "F_{p}^{} ⊇ μ_{n}, modulus {}",
                    self.degree(),
                    self.modulus_fp().expect("extension")
                )
            }
        }
    }
}

macro_rules! unary {
    ($self:ident, $a:ident, $op:ident) => {
        match (&$self.repr, $a) {
            (Repr::Q(f), FieldElem::Q(x)) => FieldElem::Q(f.$op(x)),
            (Repr::Fp(f), FieldElem::Fp(x)) => FieldElem::Fp(f.$op(x)),
            (Repr::QOmega(f), FieldElem::QOmega(x)) => FieldElem::QOmega(f.$op(x)),
            (Repr::FpExt(f), FieldElem::FpExt(x)) => FieldElem::FpExt(f.$op(x)),
            _ => panic!("element {:?} does not belong to {:?}", $a, $self.kind),
        }
    };
}

macro_rules! binary {
    ($self:ident, $a:ident, $b:ident, $op:ident) => {
        match (&$self.repr, $a, $b) {
            (Repr::Q(f), FieldElem::Q(x), FieldElem::Q(y)) => FieldElem::Q(f.$op(x, y)),
            (Repr::Fp(f), FieldElem::Fp(x), FieldElem::Fp(y)) => FieldElem::Fp(f.$op(x, y)),
            (Repr::QOmega(f), FieldElem::QOmega(x), FieldElem::QOmega(y)) => {
                FieldElem::QOmega(f.$op(x, y))
            }
            (Repr::FpExt(f), FieldElem::FpExt(x), FieldElem::FpExt(y)) => {
                FieldElem::FpExt(f.$op(x, y))
            }
            _ => panic!(
                "operands {:?}, {:?} do not belong to {:?}",
                $a, $b, $self.kind
            ),
        }
    };
}

impl FieldOps for FieldCtx {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        self.from_int(0)
    }

    fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    fn from_int(&self, v: i64) -> FieldElem {
        match &self.repr {
            Repr::Q(f) => FieldElem::Q(f.from_int(v)),
            Repr::Fp(f) => FieldElem::Fp(f.from_int(v)),
            Repr::QOmega(f) => FieldElem::QOmega(f.from_int(v)),
            Repr::FpExt(f) => FieldElem::FpExt(f.from_int(v)),
        }
    }

    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        binary!(self, a, b, add)
    }

    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        binary!(self, a, b, sub)
    }

    fn neg(&self, a: &FieldElem) -> FieldElem {
        unary!(self, a, neg)
    }

    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        binary!(self, a, b, mul)
    }

    fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        Ok(match (&self.repr, a) {
            (Repr::Q(f), FieldElem::Q(x)) => FieldElem::Q(f.inv(x)?),
            (Repr::Fp(f), FieldElem::Fp(x)) => FieldElem::Fp(f.inv(x)?),
            (Repr::QOmega(f), FieldElem::QOmega(x)) => FieldElem::QOmega(f.inv(x)?),
            (Repr::FpExt(f), FieldElem::FpExt(x)) => FieldElem::FpExt(f.inv(x)?),
            _ => return Err(Error::FieldMismatch),
        })
    }

    fn characteristic(&self) -> u64 {
        match &self.repr {
            Repr::Q(_) | Repr::QOmega(_) => 0,
            Repr::Fp(f) => f.p(),
            Repr::FpExt(f) => f.base().p(),
        }
    }

    fn is_zero(&self, a: &FieldElem) -> bool {
        match (&self.repr, a) {
            (Repr::Q(f), FieldElem::Q(x)) => f.is_zero(x),
            (Repr::Fp(_), FieldElem::Fp(x)) => *x == 0,
            (Repr::QOmega(f), FieldElem::QOmega(x)) => f.is_zero(x),
            (Repr::FpExt(f), FieldElem::FpExt(x)) => f.is_zero(x),
            _ => panic!("element {a:?} does not belong to {:?}", self.kind),
        }
    }
}

/// `F_{p^m}` containing a primitive `n`-th root of unity; see [`FieldCtx::splitting_field`].
pub fn splitting_field(p: u64, n: u64) -> Result<FieldCtx> {
    FieldCtx::splitting_field(p, n)
}

/// `Q(ω)` realized as `Q[x]/Φ_n`.
pub fn rational_cyclotomic_field(n: u64) -> Result<FieldCtx> {
    FieldCtx::rational_cyclotomic(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn::is_prime;

    fn all_test_contexts() -> Vec<FieldCtx> {
        let mut v = vec![
            FieldCtx::rational(),
            FieldCtx::prime(2).unwrap(),
            FieldCtx::prime(13).unwrap(),
        ];
        for n in [2, 3, 4, 6, 7, 9, 11] {
            v.push(FieldCtx::rational_cyclotomic(n).unwrap());
        }
        for &(p, n) in &[
            (2, 7),
            (3, 2),
            (11, 10),
            (2, 9),
            (3, 7),
            (5, 11),
            (13, 9),
            (2, 31),
        ] {
            v.push(FieldCtx::splitting_field(p, n).unwrap());
        }
        v
    }

    #[test]
    fn splitting_field_examples() {
        let f8 = splitting_field(2, 7).unwrap();
        assert_eq!(f8.kind(), FieldKind::CyclotomicPrime(2, 7));
        assert_eq!(f8.degree(), 3);
        let fp = PrimeField::new(2).unwrap();
        // x^3+x^2+1 = [1,0,1,1] sorts before x^3+x+1 = [1,1,0,1]
        assert_eq!(
            f8.modulus_fp().unwrap(),
            &Poly::from_ints(&fp, &[1, 0, 1, 1])
        );

        let f3 = splitting_field(3, 2).unwrap();
        assert_eq!(f3.kind(), FieldKind::Prime(3));
        assert_eq!(f3.omega().unwrap(), FieldElem::Fp(2));

        let f11 = splitting_field(11, 10).unwrap();
        assert_eq!(f11.kind(), FieldKind::Prime(11));
        assert_eq!(f11.omega().unwrap(), FieldElem::Fp(2));

        assert!(matches!(
            splitting_field(2, 6),
            Err(Error::NotCoprime { .. })
        ));
        assert!(matches!(splitting_field(4, 7), Err(Error::NotPrime(4))));
    }

    #[test]
    fn splitting_field_is_deterministic() {
        for &(p, n) in &[(2, 7), (3, 11), (13, 11), (2, 31)] {
            let a = splitting_field(p, n).unwrap();
            let b = splitting_field(p, n).unwrap();
            assert_eq!(a.modulus_fp(), b.modulus_fp());
        }
    }

    #[test]
    fn cyclotomic_field_examples() {
        let q2 = rational_cyclotomic_field(2).unwrap();
        assert_eq!(q2.degree(), 1);
        assert_eq!(q2.omega().unwrap(), q2.from_int(-1));
        assert_eq!(rational_cyclotomic_field(7).unwrap().degree(), 6);
        let q4 = rational_cyclotomic_field(4).unwrap();
        assert_eq!(q4.degree(), 2);
        assert_eq!(q4.e(2).unwrap(), q4.from_int(-1));
        assert_eq!(q4.e(0).unwrap(), q4.one());
        assert_eq!(q4.e(4).unwrap(), q4.one());
        assert_eq!(q4.e(-1).unwrap(), q4.e(3).unwrap());
        assert_eq!(FieldCtx::rational().e(1), Err(Error::NoRootOfUnity));
    }

    #[test]
    fn omega_has_exact_order() {
        for ctx in all_test_contexts() {
            let Some(n) = ctx.root_order() else { continue };
            let w = ctx.omega().unwrap();
            assert_eq!(ctx.pow(&w, n as u128), ctx.one());
            for d in (1..n).filter(|d| n % d == 0) {
                assert_ne!(
                    ctx.pow(&w, d as u128),
                    ctx.one(),
                    "{} d={d}",
                    ctx.describe()
                );
            }
            for x in 0..n as i64 {
                for y in 0..n as i64 {
                    assert_eq!(
                        ctx.mul(&ctx.e(x).unwrap(), &ctx.e(y).unwrap()),
                        ctx.e(x + y).unwrap()
                    );
                }
            }
            if ctx.characteristic() != 0 {
                assert!(is_prime(ctx.characteristic()));
                assert_ne!(n % ctx.characteristic(), 0);
            }
        }
    }

    #[test]
    fn mismatched_operands_are_reported() {
        let q = FieldCtx::rational();
        assert_eq!(
            q.try_div(&FieldElem::Fp(1), &q.one()),
            Err(Error::FieldMismatch)
        );
        assert_eq!(q.try_div(&q.one(), &q.zero()), Err(Error::DivisionByZero));
    }
}
