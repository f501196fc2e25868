//! The character-table side: submatrices `M_{A,B}` of `M(a, b) = ω^{-ab}`,
//! the kernel-dimension formula for `h_{k-1}`, and the closed forms for `A = {0,1,3}`.

use rayon::prelude::*;

use crate::complex::validate_params;
use crate::error::{Error, Result};
use crate::field::poly::{poly_gcd, Poly};
use crate::field::{FieldCtx, FieldElem, FieldOps};
use crate::homology::FieldMatrix;
use crate::subsets::KSubsets;
use crate::zn::{enumerate_b, gcd, is_prime, mul_mod, pow_mod, ZSet};

/// `M_{A,B}`: rows indexed by `A`, columns by `B`, both ascending.
#[derive(Debug, Clone)]
pub struct FourierSubmatrix {
    ctx: FieldCtx,
    a: ZSet,
    b: ZSet,
    m: FieldMatrix<FieldCtx>,
}

impl FourierSubmatrix {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn rows(&self) -> &ZSet {
        &self.a
    }

    pub fn cols(&self) -> &ZSet {
        &self.b
    }

    pub fn matrix(&self) -> &FieldMatrix<FieldCtx> {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElem {
        self.m.get(i, j)
    }

    pub fn rank(&self) -> usize {
        self.m.rank()
    }

    pub fn nullity(&self) -> usize {
        self.m.nullity()
    }

    /// Basis of `{c : c^T M = 0}`, i.e. coefficient vectors indexed by `A`.
    pub fn left_kernel(&self) -> Vec<Vec<FieldElem>> {
        self.m.transpose().kernel_basis()
    }
}

fn require_root(ctx: &FieldCtx, n: u64) -> Result<()> {
    if ctx.root_order() != Some(n) {
        return Err(Error::NoRootOfUnity);
    }
    Ok(())
}

pub fn fourier_submatrix(ctx: &FieldCtx, a: &ZSet, b: &ZSet) -> Result<FourierSubmatrix> {
    let n = a.n();
    if b.n() != n {
        return Err(Error::InvalidSet(format!(
            "B is a subset of Z_{}, expected Z_{n}",
            b.n()
        )));
    }
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    require_root(ctx, n)?;
    let rows = a
        .elems()
        .iter()
        .map(|&x| {
            b.elems()
                .iter()
                .map(|&y| ctx.e(-(mul_mod(x, y, n) as i64)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FourierSubmatrix {
        ctx: ctx.clone(),
        a: a.clone(),
        b: b.clone(),
        m: FieldMatrix::new(ctx.clone(), rows),
    })
}

/// A context over the same prime field as `ctx` that contains a primitive `n`-th root of unity.
fn with_root_of_order(ctx: &FieldCtx, n: u64) -> Result<FieldCtx> {
    if ctx.root_order() == Some(n) {
        return Ok(ctx.clone());
    }
    match ctx.characteristic() {
        0 => FieldCtx::rational_cyclotomic(n),
        p => FieldCtx::splitting_field(p, n),
    }
}

/// `dim ker M_{A,B}` for every `B` in the family of `(k+1)`-sets containing 0.
///
/// A context without a root of order `n` is replaced by `Q(ω)` or the
/// splitting field of `x^n - 1` over its prime field.
pub fn theorem1_kernel_dims(
    n: u64,
    k: usize,
    a: &ZSet,
    ctx: &FieldCtx,
) -> Result<Vec<(ZSet, usize)>> {
    validate_params(n, k, a)?;
    let c = ctx.characteristic();
    if c != 0 && n % c == 0 {
        return Err(Error::BadCharacteristic { char: c, n });
    }
    let ctx = with_root_of_order(ctx, n)?;
    let bs: Vec<ZSet> = enumerate_b(n, k).collect();
    if ctx.characteristic() == 0 {
        // generic arithmetic in Q(ω) is slow; reduction mod split primes gives the same ranks
        let ranker = ModularRanker::new(n);
        if ranker.bound_holds(k + 1) {
            return Ok(bs
                .into_par_iter()
                .map(|b| {
                    let d = k + 1 - ranker.rank(a.elems(), b.elems());
                    (b, d)
                })
                .collect());
        }
    }
    bs.into_par_iter()
        .map(|b| {
            let d = fourier_submatrix(&ctx, a, &b)?.nullity();
            Ok((b, d))
        })
        .collect()
}

/// `h_{k-1}(X_A) = h_k(X_A)` as `(1/(k+1)) Σ_B dim ker M_{A,B}`.
pub fn theorem1_betti(n: u64, k: usize, a: &ZSet, ctx: &FieldCtx) -> Result<u64> {
    let total: u64 = theorem1_kernel_dims(n, k, a, ctx)?
        .iter()
        .map(|(_, d)| *d as u64)
        .sum();
    let divisor = k as u64 + 1;
    if total % divisor != 0 {
        return Err(Error::DivisibilityViolation {
            sum: total,
            divisor,
        });
    }
    Ok(total / divisor)
}

/// Outcome of [`chebotarev_scan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChebotarevReport {
    pub n: u64,
    pub max_order: usize,
    /// Square submatrices examined, including the empty one.
    pub checked: u64,
    /// `(rows, cols)` of every singular submatrix, in lexicographic order.
    pub singular: Vec<(ZSet, ZSet)>,
}

pub fn default_max_order(n: u64) -> usize {
    if n <= 11 {
        n as usize
    } else {
        4
    }
}

/// Largest prime `q ≡ 1 (mod n)` below `2^61`, with an element of order exactly `n` mod `q`.
fn splitting_prime(n: u64) -> (u64, u64) {
    let top = (1u64 << 61) / n;
    let q = (1..=top)
        .rev()
        .map(|t| t * n + 1)
        .find(|&q| is_prime(q))
        .expect("Dirichlet");
    let prime_factors: Vec<u64> = (2..=n).filter(|&l| n % l == 0 && is_prime(l)).collect();
    let root = (2..q)
        .map(|g| pow_mod(g, (q - 1) / n, q))
        .find(|&h| prime_factors.iter().all(|&l| pow_mod(h, n / l, q) != 1))
        .expect("F_q^* is cyclic");
    (q, root)
}

/// Ranks of submatrices `[ω^{-rc}]` over `Q(ω)` by reduction modulo the primes above a split prime `q`.
///
/// Every minor is an algebraic integer whose conjugates have absolute value
/// at most `j^{j/2}`. A minor vanishing modulo every prime above `q` is
/// divisible by `q`, and a nonzero multiple of `q` has norm at least `q^φ(n)`.
/// So once `q > j^{j/2}` the rank over `Q(ω)` is the largest rank among the
/// `φ(n)` reductions.
pub(crate) struct ModularRanker {
    n: u64,
    q: u64,
    /// `tables[t][e]` is the image of `ω^e` under the `t`-th reduction
    tables: Vec<Vec<u64>>,
}

impl ModularRanker {
    pub(crate) fn new(n: u64) -> Self {
        let (q, w) = splitting_prime(n);
        let tables = (1..=n)
            .filter(|&t| gcd(t, n) == 1)
            .map(|t| {
                let wt = pow_mod(w, t, q);
                (0..n).map(|e| pow_mod(wt, e, q)).collect()
            })
            .collect();
        Self { n, q, tables }
    }

    /// Hadamard's bound `j^{j/2} < q`, checked as `j^j < q^2`.
    pub(crate) fn bound_holds(&self, j: usize) -> bool {
        let mut lhs: u128 = 1;
        for _ in 0..j {
            lhs = match lhs.checked_mul(j as u128) {
                Some(v) => v,
                None => return false,
            };
        }
        lhs < (self.q as u128) * (self.q as u128)
    }

    /// Rank over `Q(ω)`; caller checks [`ModularRanker::bound_holds`] for `rows.len()`.
    pub(crate) fn rank(&self, rows: &[u64], cols: &[u64]) -> usize {
        let full = rows.len().min(cols.len());
        let mut best = 0;
        let mut buf = vec![0u64; rows.len() * cols.len()];
        for table in &self.tables {
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    buf[i * cols.len() + j] =
                        table[((self.n - mul_mod(r, c, self.n)) % self.n) as usize];
                }
            }
            best = best.max(dense_rank_mod(&mut buf, rows.len(), cols.len(), self.q));
            if best == full {
                break;
            }
        }
        best
    }
}

/// Rank of a row-major `nr x nc` matrix mod the prime `q`, destroying it.
fn dense_rank_mod(m: &mut [u64], nr: usize, nc: usize, q: u64) -> usize {
    let mut rank = 0;
    for col in 0..nc {
        let Some(p) = (rank..nr).find(|&i| m[i * nc + col] != 0) else {
            continue;
        };
        if p != rank {
            for j in 0..nc {
                m.swap(p * nc + j, rank * nc + j);
            }
        }
        let inv = pow_mod(m[rank * nc + col], q - 2, q);
        for i in rank + 1..nr {
            let f = mul_mod(m[i * nc + col], inv, q);
            if f == 0 {
                continue;
            }
            for j in col..nc {
                let t = mul_mod(f, m[rank * nc + j], q);
                m[i * nc + j] = (m[i * nc + j] + q - t) % q;
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    rank
}

/// Every square submatrix of `M` of order at most `max_order`, over `Q(ω)`.
pub fn chebotarev_scan(n: u64, max_order: usize) -> Result<ChebotarevReport> {
    if n < 2 {
        return Err(Error::InvalidSet(format!("n = {n} must be at least 2")));
    }
    if max_order > n as usize {
        return Err(Error::DimensionOutOfRange {
            dim: max_order,
            max: n as usize,
        });
    }
    let ranker = ModularRanker::new(n);
    let exact = FieldCtx::rational_cyclotomic(n)?;
    let mut checked = 0u64;
    let mut singular = Vec::new();
    for j in 0..=max_order {
        let rows: Vec<Vec<u64>> = KSubsets::new(n, j).collect();
        let fast = ranker.bound_holds(j);
        let found: Vec<Vec<(ZSet, ZSet)>> = rows
            .par_iter()
            .map(|r| {
                KSubsets::new(n, j)
                    .filter(|c| {
                        if fast {
                            ranker.rank(r, c) < j
                        } else {
                            let rs = ZSet::from_sorted(n, r.clone());
                            let cs = ZSet::from_sorted(n, c.clone());
                            fourier_submatrix(&exact, &rs, &cs)
                                .expect("root present")
                                .nullity()
                                > 0
                        }
                    })
                    .map(|c| (ZSet::from_sorted(n, r.clone()), ZSet::from_sorted(n, c)))
                    .collect()
            })
            .collect();
        checked += (rows.len() as u64) * (rows.len() as u64);
        singular.extend(found.into_iter().flatten());
    }
    Ok(ChebotarevReport {
        n,
        max_order,
        checked,
        singular,
    })
}

/// True iff `X_A` is acyclic over `F_p`, tested as `M_{A,B}` nonsingular for every `B ∋ 0`
/// over the splitting field of `x^n - 1`.
pub fn gcd_criterion_acyclic(n: u64, k: usize, a: &ZSet, p: u64) -> Result<bool> {
    if gcd(p, n) != 1 {
        return Err(Error::NotCoprime {
            what: "p and n",
            a: p,
            b: n,
        });
    }
    validate_params(n, k, a)?;
    let ctx = FieldCtx::splitting_field(p, n)?;
    let dims = theorem1_kernel_dims(n, k, a, &ctx)?;
    Ok(dims.iter().all(|(_, d)| *d == 0))
}

/// `f = Σ_a c_a x^a` for a left kernel vector `c` of `M_{A,B}`, made monic.
///
/// `f` vanishes at `ω^{-b}` for each `b ∈ B`, so `gcd(f, x^n - 1)` has degree at least `|B|`;
/// this is checked before returning.
pub fn kernel_witness_polynomial(a: &ZSet, b: &ZSet, ctx: &FieldCtx) -> Result<Poly<FieldElem>> {
    let m = fourier_submatrix(ctx, a, b)?;
    let c = m
        .left_kernel()
        .into_iter()
        .next()
        .ok_or(Error::TrivialKernel)?;
    let top = a.elems().last().map_or(0, |&x| x as usize);
    let mut coeffs = vec![ctx.zero(); top + 1];
    for (&e, v) in a.elems().iter().zip(c) {
        coeffs[e as usize] = v;
    }
    let f = Poly::new(ctx, coeffs).monic(ctx);
    let n = a.n();
    for &x in b.elems() {
        if !ctx.is_zero(&f.eval(ctx, &ctx.e(-(x as i64))?)) {
            return Err(Error::AssertionFailed(format!(
                "witness does not vanish at ω^-{x}"
            )));
        }
    }
    let g = poly_gcd(ctx, &f, &Poly::x_pow_minus_one(ctx, n as usize));
    if g.degree().unwrap_or(0) < b.len() {
        return Err(Error::AssertionFailed(format!(
            "gcd(f, x^{n} - 1) has degree {:?}",
            g.degree()
        )));
    }
    Ok(f)
}

/// `h_1(X_{0,1,3}; F_p)` as one third of the number of pairs `{u, v}` of
/// distinct nontrivial `n`-th roots of unity with `1 + u + v = 0`.
pub fn count_h1_013(p: u64, n: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if gcd(n, 3 * p) != 1 {
        return Err(Error::NotCoprime {
            what: "n and 3p",
            a: n,
            b: 3 * p,
        });
    }
    if n < 2 {
        return Ok(0);
    }
    let group = RootsOfUnityGroup::new(FieldCtx::splitting_field(p, n)?)?;
    let ctx = &group.ctx;
    let one = ctx.one();
    let nontrivial: Vec<&FieldElem> = group.elements.iter().skip(1).collect();
    let mut pairs = 0u64;
    for (i, u) in nontrivial.iter().enumerate() {
        let s = ctx.add(&one, u);
        pairs += nontrivial[i + 1..]
            .iter()
            .filter(|v| ctx.is_zero(&ctx.add(&s, v)))
            .count() as u64;
    }
    if pairs % 3 != 0 {
        return Err(Error::DivisibilityViolation {
            sum: pairs,
            divisor: 3,
        });
    }
    Ok(pairs / 3)
}

/// Closed form for `h_1(X_{0,1,3}; F_p)` when `n = p^m - 1`.
pub fn corollary_specialp(p: u64, m: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = p.checked_pow(m).ok_or(Error::TooLarge {
        n: p,
        limit: u64::MAX,
    })? - 1;
    if n % 3 == 0 {
        return Err(Error::NotCoprime {
            what: "n and 3",
            a: n,
            b: 3,
        });
    }
    let shift = match p {
        2 => 1,
        3 => 2,
        _ => 4,
    };
    Ok(n.saturating_sub(shift) / 6)
}

/// The `n` distinct powers of `ω` in a context.
#[derive(Debug, Clone)]
pub struct RootsOfUnityGroup {
    ctx: FieldCtx,
    elements: Vec<FieldElem>,
}

impl RootsOfUnityGroup {
    pub fn new(ctx: FieldCtx) -> Result<Self> {
        let n = ctx.root_order().ok_or(Error::NoRootOfUnity)?;
        let elements = (0..n as i64).map(|i| ctx.e(i)).collect::<Result<_>>()?;
        Ok(Self { ctx, elements })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// `elements()[i] = ω^i`.
    pub fn elements(&self) -> &[FieldElem] {
        &self.elements
    }

    /// Discrete logarithm base `ω`.
    pub fn log(&self, x: &FieldElem) -> Option<u64> {
        self.elements.iter().position(|y| y == x).map(|i| i as u64)
    }

    pub fn contains(&self, x: &FieldElem) -> bool {
        self.log(x).is_some()
    }
}
