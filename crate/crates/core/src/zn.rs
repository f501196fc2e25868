//! Arithmetic in the cyclic group `Z_n` and subsets of it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::subsets::KSubsets;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    // deterministic Miller-Rabin: these witnesses cover all of u64
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &w in &WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// `b^e mod m`.
pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Multiplicative order of `a` modulo `n`, or `None` if `a` is not a unit.
pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if gcd(a % n, n) != 1 {
        return None;
    }
    let mut x = a % n;
    let mut ord = 1;
    while x != 1 {
        x = mul_mod(x, a, n);
        ord += 1;
    }
    Some(ord)
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// Inverse of `a` modulo `n` by the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, n: u64) -> Result<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { a, n });
    }
    Ok(s0.rem_euclid(n as i128) as u64)
}

/// A subset of `Z_n` stored as strictly increasing canonical residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZSet {
    n: u64,
    elems: Vec<u64>,
}

impl ZSet {
    /// Builds a set from residues in any order. Values are reduced mod `n`; duplicates are rejected.
    pub fn new(n: u64, elems: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSet("modulus must be positive".into()));
        }
        let mut elems: Vec<u64> = elems.into_iter().map(|x| x % n).collect();
        elems.sort_unstable();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSet(format!(
                "duplicate residues in {elems:?} mod {n}"
            )));
        }
        Ok(Self { n, elems })
    }

    /// Builds a set from an already sorted, duplicate-free, in-range slice.
    pub(crate) fn from_sorted(n: u64, elems: Vec<u64>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]) && elems.iter().all(|&x| x < n));
        Self { n, elems }
    }

    pub fn from_mask(n: u64, mask: u64) -> Self {
        Self::from_sorted(n, (0..n).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn full(n: u64) -> Self {
        Self::from_sorted(n, (0..n).collect())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn elems(&self) -> &[u64] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&(x % self.n)).is_ok()
    }

    pub fn sum_mod(&self) -> u64 {
        self.elems.iter().fold(0, |acc, &x| (acc + x) % self.n)
    }

    /// Bit `i` set iff `i` is in the set. Requires `n <= 64`.
    pub fn mask(&self) -> u64 {
        debug_assert!(self.n <= 64);
        self.elems.iter().fold(0, |m, &x| m | 1 << x)
    }

    /// The shift `S + l`.
    pub fn shift(&self, l: u64) -> Self {
        Self::new(self.n, self.elems.iter().map(|&x| x + l % self.n)).expect("shift is a bijection")
    }

    /// Parses `"a0,a1,..."` (whitespace tolerated) as a subset of `Z_n`.
    pub fn parse(n: u64, s: &str) -> Result<Self> {
        let mut elems = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let v = u64::from_str(tok).map_err(|e| Error::Parse(format!("{tok:?}: {e}")))?;
            if v >= n {
                return Err(Error::InvalidSet(format!("{v} is not a residue mod {n}")));
            }
            elems.push(v);
        }
        Self::new(n, elems)
    }
}

impl fmt::Display for ZSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// The bijection `x -> alpha*x + beta` of `Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineMap {
    alpha: u64,
    beta: u64,
    n: u64,
}

impl AffineMap {
    pub fn new(alpha: u64, beta: u64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSet("modulus must be positive".into()));
        }
        let alpha = alpha % n;
        if gcd(alpha, n) != 1 {
            return Err(Error::NotCoprime {
                what: "affine multiplier",
                a: alpha,
                b: n,
            });
        }
        Ok(Self {
            alpha,
            beta: beta % n,
            n,
        })
    }

    pub fn identity(n: u64) -> Self {
        Self {
            alpha: 1 % n,
            beta: 0,
            n,
        }
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Image of a single vertex.
    pub fn apply(&self, x: u64) -> u64 {
        (mul_mod(self.alpha, x, self.n) + self.beta) % self.n
    }

    /// Vertex-wise image of a set.
    pub fn apply_set(&self, s: &ZSet) -> ZSet {
        ZSet::new(self.n, s.elems().iter().map(|&x| self.apply(x)))
            .expect("affine map is a bijection")
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        debug_assert_eq!(self.n, other.n);
        AffineMap {
            alpha: mul_mod(self.alpha, other.alpha, self.n),
            beta: self.apply(other.beta),
            n: self.n,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = mod_inverse(self.alpha, self.n).expect("alpha is a unit");
        let beta = mul_mod(inv, (self.n - self.beta) % self.n, self.n);
        AffineMap {
            alpha: inv,
            beta,
            n: self.n,
        }
    }

    /// Every valid map on `Z_n`, alpha-major.
    pub fn all(n: u64) -> impl Iterator<Item = AffineMap> {
        (0..n)
            .filter(move |&a| gcd(a, n) == 1)
            .flat_map(move |alpha| (0..n).map(move |beta| AffineMap { alpha, beta, n }))
    }
}

/// True iff `s` is `{c, c+d, .., c+(|s|-1)d}` mod n for some `c, d`.
///
/// For prime `n` this uses the shift characterization: a proper subset is a
/// progression iff some shift moves exactly one element out of it. For
/// composite `n` it searches all `(c, d)` directly.
pub fn is_arithmetic_progression(s: &ZSet) -> Result<bool> {
    check_proper(s)?;
    if is_prime(s.n()) {
        Ok(shift_test(s))
    } else {
        Ok(ap_parameters(s).is_some())
    }
}

fn check_proper(s: &ZSet) -> Result<()> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if s.len() as u64 == s.n() {
        return Err(Error::FullSet(s.n()));
    }
    Ok(())
}

/// `|(S + l) \ S| == 1` for some `l != 0`.
pub fn shift_test(s: &ZSet) -> bool {
    let n = s.n();
    (1..n).any(|l| s.elems().iter().filter(|&&x| !s.contains(x + l)).count() == 1)
}

/// A start and common difference `(c, d)` with `d` in `1..n` enumerating `s`, found by direct search.
///
/// The smallest `d` is returned, and for it the start `c` that makes the
/// progression `c, c+d, ..` hit every element exactly once.
pub fn ap_parameters(s: &ZSet) -> Option<(u64, u64)> {
    let n = s.n();
    let len = s.len() as u64;
    if len == 0 {
        return None;
    }
    for d in 1..n.max(2) {
        for &c in s.elems() {
            let mut ok = true;
            let mut seen = Vec::with_capacity(len as usize);
            for i in 0..len {
                let x = (c + mul_mod(i, d, n)) % n;
                if !s.contains(x) || seen.contains(&x) {
                    ok = false;
                    break;
                }
                seen.push(x);
            }
            if ok {
                return Some((c, d % n));
            }
        }
    }
    None
}

/// `{alpha*a + (k+1)*beta : a in A}`, the sum-class relabeling induced by a vertex map.
pub fn affine_image(a: &ZSet, phi: &AffineMap, k: usize) -> Result<ZSet> {
    let n = a.n();
    if a.len() != k + 1 {
        return Err(Error::SizeMismatch {
            expected: k + 1,
            got: a.len(),
        });
    }
    if phi.n() != n {
        return Err(Error::InvalidSet(format!(
            "map is on Z_{} but set is in Z_{n}",
            phi.n()
        )));
    }
    let shift = mul_mod((k + 1) as u64 % n, phi.beta(), n);
    ZSet::new(
        n,
        a.elems()
            .iter()
            .map(|&x| (mul_mod(phi.alpha(), x, n) + shift) % n),
    )
}

/// Lexicographically smallest set in the affine orbit of `A`.
pub fn canonical_form(a: &ZSet, k: usize) -> Result<ZSet> {
    let n = a.n();
    if a.len() != k + 1 {
        return Err(Error::SizeMismatch {
            expected: k + 1,
            got: a.len(),
        });
    }
    if gcd((k + 1) as u64, n) != 1 {
        return Err(Error::NotCoprime {
            what: "k+1 and n",
            a: (k + 1) as u64,
            b: n,
        });
    }
    let best = AffineMap::all(n)
        .map(|phi| affine_image(a, &phi, k).expect("sizes already checked"))
        .min()
        .expect("identity map is always present");
    Ok(best)
}

/// The family of `(k+1)`-subsets of `Z_n` containing 0, lexicographically.
pub fn enumerate_b(n: u64, k: usize) -> impl Iterator<Item = ZSet> {
    let rest = if (k as u64) < n {
        Some(KSubsets::new(n - 1, k))
    } else {
        None
    };
    rest.into_iter().flatten().map(move |rest| {
        ZSet::from_sorted(
            n,
            std::iter::once(0)
                .chain(rest.into_iter().map(|x| x + 1))
                .collect(),
        )
    })
}

/// All `r`-subsets of `Z_n` as [`ZSet`]s, lexicographically.
pub fn all_subsets(n: u64, r: usize) -> impl Iterator<Item = ZSet> {
    KSubsets::new(n, r).map(move |s| ZSet::from_sorted(n, s))
}
