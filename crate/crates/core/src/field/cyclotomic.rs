//! Cyclotomic polynomials and their factorization over prime fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::poly::{poly_gcd, Poly};
use crate::field::PrimeField;
use crate::zn::{gcd, multiplicative_order};

/// Integer cyclotomic polynomial `Φ_n`, by dividing `x^n - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u64) -> Poly<i64> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        num = exact_div_monic(&num, cyclotomic_polynomial(d).coeffs());
    }
    Poly::integer(num)
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dl = den.len();
    debug_assert_eq!(den[dl - 1], 1);
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dl + 1];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dl - 1];
        quot[i] = c;
        for j in 0..dl {
            rem[i + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// `Φ_n` reduced mod `p`.
pub fn cyclotomic_mod_p(f: &PrimeField, n: u64) -> Poly<u64> {
    Poly::from_ints(f, cyclotomic_polynomial(n).coeffs())
}

/// All monic irreducible factors of `Φ_n` over `F_p`, sorted by coefficient sequence (constant term first).
///
/// Every factor has degree `ord_n(p)`. Splitting uses Cantor-Zassenhaus with
/// a fixed-seed generator; the sorted result does not depend on the seed.
pub fn factor_cyclotomic_mod_p(p: u64, n: u64) -> Result<Vec<Poly<u64>>> {
    let f = PrimeField::new(p)?;
    if gcd(p, n) != 1 {
        return Err(Error::NotCoprime {
            what: "p and n",
            a: p,
            b: n,
        });
    }
    let m = multiplicative_order(p, n).expect("p is a unit mod n") as usize;
    let phi = cyclotomic_mod_p(&f, n);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (p << 20) ^ n);
    let mut out = Vec::new();
    equal_degree_split(&f, phi, m, &mut rng, &mut out)?;
    out.sort();
    Ok(out)
}

fn equal_degree_split(
    f: &PrimeField,
    poly: Poly<u64>,
    m: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Poly<u64>>,
) -> Result<()> {
    let d = poly.degree().expect("nonzero");
    if d == m {
        out.push(poly.monic(f));
        return Ok(());
    }
    debug_assert_eq!(d % m, 0);
    let p = f.p();
    loop {
        let a = Poly::new(f, (0..d).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = poly_gcd(f, &a, &poly);
        let candidate = if g.degree() != Some(0) {
            g
        } else if p == 2 {
            // trace map a + a^2 + .. + a^(2^(m-1))
            let mut t = a.rem(f, &poly)?;
            let mut acc = t.clone();
            for _ in 1..m {
                t = t.mul(f, &t).rem(f, &poly)?;
                acc = acc.add(f, &t);
            }
            poly_gcd(f, &acc, &poly)
        } else {
            let e = (p as u128)
                .checked_pow(m as u32)
                .ok_or(Error::TooLarge {
                    n: p,
                    limit: u64::MAX,
                })?
                .saturating_sub(1)
                / 2;
            let b = a.pow_mod(f, e, &poly)?.sub(f, &Poly::constant(f, 1));
            poly_gcd(f, &b, &poly)
        };
        let cd = candidate.degree().unwrap_or(0);
        if cd > 0 && cd < d {
            let (rest, r) = poly.div_rem(f, &candidate)?;
            debug_assert!(r.is_zero());
            equal_degree_split(f, candidate, m, rng, out)?;
            return equal_degree_split(f, rest, m, rng, out);
        }
    }
}

/// True iff the degree-`m` polynomial has no factor in common with `x^(p^i) - x` for `1 <= i < m`.
pub fn passes_irreducibility_check(f: &PrimeField, poly: &Poly<u64>) -> bool {
    let Some(m) = poly.degree() else { return false };
    if m == 0 {
        return false;
    }
    let x = Poly::monomial(f, 1);
    let mut frob = x.rem(f, poly).expect("nonzero");
    for _ in 1..m {
        frob = frob.pow_mod(f, f.p() as u128, poly).expect("nonzero");
        if poly_gcd(f, &frob.sub(f, &x), poly).degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Smallest residue in `F_p` of multiplicative order exactly `n`.
pub fn smallest_primitive_root_of_unity(p: u64, n: u64) -> Option<u64> {
    (1..p).find(|&r| multiplicative_order(r, p) == Some(n))
}
