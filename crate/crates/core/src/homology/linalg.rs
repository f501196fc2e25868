//! Exact elimination kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed, ToPrimitive};

use crate::complex::SparseIntMatrix;
use crate::field::{FieldOps, PrimeField};

/// Column count above which prime-field ranks use sparse row reduction.
pub const DENSE_LIMIT: usize = 5000;

/// A dense matrix over an exact field.
#[derive(Debug, Clone)]
pub struct FieldMatrix<F: FieldOps> {
    field: F,
    ncols: usize,
    rows: Vec<Vec<F::Elem>>,
}

impl<F: FieldOps> FieldMatrix<F> {
    pub fn new(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Self { field, ncols, rows }
    }

    pub fn zeros(field: F, nrows: usize, ncols: usize) -> Self {
        let rows = vec![vec![field.zero(); ncols]; nrows];
        Self { field, ncols, rows }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.rows[i][i] = m.field.one();
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self {
            field: self.field.clone(),
            ncols: self.rows.len(),
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().1.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }

    /// Reduced row echelon form and its pivot columns.
    ///
    /// Pivots are the first nonzero entry found scanning columns left to right.
    pub fn row_echelon(&self) -> (Vec<Vec<F::Elem>>, Vec<usize>) {
        let f = &self.field;
        let mut a = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == a.len() {
                break;
            }
            let Some(p) = (r..a.len()).find(|&i| !f.is_zero(&a[i][c])) else {
                continue;
            };
            a.swap(r, p);
            let inv = f.inv(&a[r][c]).expect("pivot is nonzero");
            for j in c..self.ncols {
                a[r][j] = f.mul(&a[r][j], &inv);
            }
            for i in 0..a.len() {
                if i == r || f.is_zero(&a[i][c]) {
                    continue;
                }
                let factor = a[i][c].clone();
                for j in c..self.ncols {
                    let t = f.mul(&factor, &a[r][j]);
                    a[i][j] = f.sub(&a[i][j], &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// A basis of `{v : M v = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (rref, pivots) = self.row_echelon();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.ncols];
                v[fc] = f.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(&rref[row][fc]);
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }
}

/// Rank of an integer matrix over `F_p`.
const SCREEN_PRIME: u64 = 2_147_483_647;

pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> usize {
    let f = PrimeField::new(p).expect("p is prime");
    if m.ncols > DENSE_LIMIT {
        return sparse_rank_mod_p(m, &f);
    }
    let mut rows = vec![vec![0u64; m.ncols]; m.nrows];
    for &(i, j, v) in &m.entries {
        rows[i][j] = f.add(&rows[i][j], &f.from_int(v));
    }
    FieldMatrix::new(f, rows).rank()
}

fn sparse_rank_mod_p(m: &SparseIntMatrix, f: &PrimeField) -> usize {
    let mut rows: Vec<Vec<(usize, u64)>> = vec![Vec::new(); m.nrows];
    for &(i, j, v) in &m.entries {
        let v = f.from_int(v);
        if v != 0 {
            rows[i].push((j, v));
        }
    }
    // pivot column -> monic reduced row
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, u64)>> = Default::default();
    for mut row in rows {
        row.sort_unstable();
        while let Some(&(lead, val)) = row.first() {
            match pivots.get(&lead) {
                Some(prow) => row = axpy_sparse(f, &row, f.neg(&val), prow),
                None => {
                    let inv = f.inv(&val).expect("nonzero");
                    let normalized = row.iter().map(|&(c, v)| (c, f.mul(&v, &inv))).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `x + s*y` on sorted sparse vectors.
fn axpy_sparse(
    f: &PrimeField,
    x: &[(usize, u64)],
    s: u64,
    y: &[(usize, u64)],
) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i]);
            i += 1;
        } else if take_y {
            out.push((y[j].0, f.mul(&s, &y[j].1)));
            j += 1;
        } else {
            let v = f.add(&x[i].1, &f.mul(&s, &y[j].1));
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Integer types usable by the fraction-free kernels. Overflow is reported, never wrapped.
pub(crate) trait ExactInt:
    Clone + Integer + Signed + CheckedMul + CheckedSub + From<i64>
{
}
impl ExactInt for i64 {}
impl ExactInt for BigInt {}

/// Rank over `Q`, exact.
///
/// A rank check modulo a large prime settles full rank. Otherwise the matrix is
/// diagonalized over `Z`, which keeps entries small on boundary matrices, and
/// Bareiss elimination is the last resort if that overflows `i64`.
pub fn rank_over_q(m: &SparseIntMatrix) -> usize {
    // reduction mod p can only lose rank, so a full rank mod p is exact
    let full = m.nrows.min(m.ncols);
    if rank_mod_p(m, SCREEN_PRIME) == full {
        return full;
    }
    let dense = m.to_dense();
    if let Some(d) = diagonalize::<i64>(&dense) {
        return d.len();
    }
    bareiss_rank::<i64>(&dense)
        .unwrap_or_else(|| bareiss_rank::<BigInt>(&dense).expect("big integers do not overflow"))
}

fn bareiss_rank<T: ExactInt>(dense: &[Vec<i64>]) -> Option<usize> {
    let mut a: Vec<Vec<T>> = dense
        .iter()
        .map(|r| r.iter().map(|&v| T::from(v)).collect())
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..nrows {
            let lead = a[i][c].clone();
            for j in c..ncols {
                // (piv * a_ij - lead * a_rj) / prev is exact
                let x = piv
                    .checked_mul(&a[i][j])?
                    .checked_sub(&lead.checked_mul(&a[r][j])?)?;
                a[i][j] = x / prev.clone();
            }
        }
        prev = piv;
        r += 1;
    }
    Some(r)
}

/// Diagonalizes an integer matrix by unimodular row and column operations,
/// pivoting on an entry of minimal absolute value. Returns the nonzero
/// diagonal entries (absolute values, not yet in divisibility order).
pub(crate) fn diagonalize<T: ExactInt>(dense: &[Vec<i64>]) -> Option<Vec<T>> {
    let mut a: Vec<Vec<T>> = dense
        .iter()
        .map(|r| r.iter().map(|&v| T::from(v)).collect())
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..nrows.min(ncols) {
        let Some((pi, pj)) = min_abs_entry(&a, t..nrows, t..ncols) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let piv = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].clone() / piv.clone();
                for j in t..ncols {
                    let s = q.checked_mul(&a[t][j])?;
                    a[i][j] = a[i][j].checked_sub(&s)?;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].clone() / piv.clone();
                for row in a.iter_mut().skip(t) {
                    let s = q.checked_mul(&row[t])?;
                    row[j] = row[j].checked_sub(&s)?;
                }
                dirty |= !a[t][j].is_zero();
            }
            if !dirty {
                break;
            }
            // a smaller remainder is left in row or column t; make it the pivot
            let (ri, rj) = min_abs_entry(&a, t..nrows, t..t + 1)
                .into_iter()
                .chain(min_abs_entry(&a, t..t + 1, t..ncols))
                .min_by(|x, y| a[x.0][x.1].abs().cmp(&a[y.0][y.1].abs()))
                .expect("a nonzero entry remains");
            a.swap(t, ri);
            for row in a.iter_mut() {
                row.swap(t, rj);
            }
        }
        diag.push(a[t][t].abs());
    }
    Some(diag)
}

fn min_abs_entry<T: ExactInt>(
    a: &[Vec<T>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
                if a[i][j].abs() == T::one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Converts a diagonal to Smith form `d_1 | d_2 | ..` via pairwise gcd/lcm exchange.
pub(crate) fn smith_from_diagonal(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

pub(crate) fn to_big<T: ExactInt + ToPrimitive>(v: Vec<T>) -> Vec<BigInt> {
    v.into_iter()
        .map(|x| BigInt::from(x.to_i64().expect("diagonal entry fits")))
        .collect()
}
