//! Betti numbers and integral homology of sum complexes from their boundary matrices.

pub mod linalg;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

pub use linalg::{rank_mod_p, rank_over_q, FieldMatrix};

use crate::complex::{boundary_matrix, SparseIntMatrix, SumComplex};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldOps};
use crate::subsets::binomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Boundary,
    Fourier,
}

/// Homology of a sum complex in the dimensions that were computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyResult {
    /// "Q", "F_p" or "Z".
    pub field: String,
    /// dimension -> Betti number (free rank for `Z`)
    pub h: BTreeMap<usize, u64>,
    /// dimension -> invariant factors greater than 1 (integral homology only)
    pub torsion: BTreeMap<usize, Vec<BigInt>>,
    pub method: Method,
}

impl HomologyResult {
    pub fn get(&self, dim: usize) -> Option<u64> {
        self.h.get(&dim).copied()
    }
}

/// Invariant factors `d_1 | d_2 | ..` of the Smith normal form (nonzero ones only).
pub fn smith_normal_form(m: &SparseIntMatrix) -> Vec<BigInt> {
    let dense = m.to_dense();
    let diag = match linalg::diagonalize::<i64>(&dense) {
        Some(d) => linalg::to_big(d),
        None => linalg::diagonalize::<BigInt>(&dense).expect("big integers do not overflow"),
    };
    linalg::smith_from_diagonal(diag)
}

/// Rank of an integer matrix over the prime field of characteristic `char` (0 for `Q`).
pub fn rank_in_characteristic(m: &SparseIntMatrix, char: u64) -> usize {
    if char == 0 {
        rank_over_q(m)
    } else {
        rank_mod_p(m, char)
    }
}

fn check_characteristic(x: &SumComplex, ctx: &FieldCtx) -> Result<u64> {
    let c = ctx.characteristic();
    if c != 0 && x.n() % c == 0 {
        return Err(Error::BadCharacteristic { char: c, n: x.n() });
    }
    Ok(c)
}

fn field_label(char: u64) -> String {
    if char == 0 {
        "Q".into()
    } else {
        format!("F_{char}")
    }
}

/// Rank of `∂_{k-1}` (of the augmentation when `k = 1`) over any field or `Z`.
///
/// Below dimension `k` the complex is the full skeleton of the simplex on `n`
/// vertices, which is acyclic, so the rank is `C(n-1, k-1)` and `∂_{k-1}` has
/// no torsion in its cokernel.
fn skeleton_rank(x: &SumComplex) -> u64 {
    binomial(x.n() - 1, x.k() as u64 - 1)
}

/// `h_{k-1}` and `h_k` over the prime subfield of `ctx`.
///
/// Homology is reduced, which only matters for `k = 1` where `h_0` counts
/// components minus one.
///
/// Ranks of integer matrices do not change under field extension, so the
/// splitting field and `Q(ω)` give the same numbers as `F_p` and `Q`.
pub fn betti(x: &SumComplex, ctx: &FieldCtx) -> Result<HomologyResult> {
    let c = check_characteristic(x, ctx)?;
    let k = x.k();
    let f = x.f_vector();
    let rk_top = rank_in_characteristic(&boundary_matrix(x, k)?, c) as u64;
    let rk_below = skeleton_rank(x);
    let mut h = BTreeMap::new();
    h.insert(k, f[k] - rk_top);
    h.insert(k - 1, f[k - 1] - rk_below - rk_top);
    Ok(HomologyResult {
        field: field_label(c),
        h,
        torsion: BTreeMap::new(),
        method: Method::Boundary,
    })
}

/// Unreduced Betti numbers in every dimension `0..=k`.
pub fn betti_all(x: &SumComplex, ctx: &FieldCtx) -> Result<HomologyResult> {
    let c = check_characteristic(x, ctx)?;
    let k = x.k();
    let f = x.f_vector();
    // rank[i] = rank of ∂_i, with ∂_0 = 0 and ∂_{k+1} = 0
    let mut rank = vec![0u64; k + 2];
    for (i, r) in rank.iter_mut().enumerate().take(k + 1).skip(1) {
        *r = rank_in_characteristic(&boundary_matrix(x, i)?, c) as u64;
    }
    let h = (0..=k).map(|i| (i, f[i] - rank[i] - rank[i + 1])).collect();
    Ok(HomologyResult {
        field: field_label(c),
        h,
        torsion: BTreeMap::new(),
        method: Method::Boundary,
    })
}

/// Reduced `H_{k-1}(X; Z)` and `H_k(X; Z)` from the Smith forms of `∂_k` and `∂_{k-1}`.
pub fn integral_homology(x: &SumComplex) -> Result<HomologyResult> {
    let k = x.k();
    let f = x.f_vector();
    let snf_top = smith_normal_form(&boundary_matrix(x, k)?);
    let rk_top = snf_top.len() as u64;
    let rk_below = skeleton_rank(x);
    let mut h = BTreeMap::new();
    h.insert(k, f[k] - rk_top);
    h.insert(k - 1, f[k - 1] - rk_below - rk_top);
    let mut torsion = BTreeMap::new();
    torsion.insert(k - 1, snf_top.into_iter().filter(|d| !d.is_one()).collect());
    torsion.insert(k, Vec::new());
    Ok(HomologyResult {
        field: "Z".into(),
        h,
        torsion,
        method: Method::Boundary,
    })
}

/// [`betti`] over many complexes in parallel; output order matches input order.
pub fn betti_batch(xs: &[SumComplex], ctx: &FieldCtx) -> Vec<Result<HomologyResult>> {
    xs.par_iter().map(|x| betti(x, ctx)).collect()
}
