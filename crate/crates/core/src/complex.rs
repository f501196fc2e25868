//! Sum complexes `X_A`: the full `(k-1)`-skeleton of the simplex on `Z_n` plus
//! every `(k+1)`-subset whose element sum lies in `A`.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::subsets::{binomial, rank_lex};
use crate::zn::{all_subsets, gcd, ZSet};

/// The facets of `X_A`; the `(k-1)`-skeleton is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumComplex {
    n: u64,
    k: usize,
    a: ZSet,
    facets: Vec<ZSet>,
}

/// Checks the standing assumptions on `(n, k, A)`.
pub fn validate_params(n: u64, k: usize, a: &ZSet) -> Result<()> {
    if k == 0 {
        return Err(Error::DimensionOutOfRange {
            dim: 0,
            max: (n as usize).saturating_sub(2),
        });
    }
    if a.n() != n {
        return Err(Error::InvalidSet(format!(
            "A is a subset of Z_{}, expected Z_{n}",
            a.n()
        )));
    }
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
    if n <= (k + 1) as u64 {
        return Err(Error::DimensionOutOfRange {
            dim: k,
            max: (n as usize).saturating_sub(2),
        });
    }
    Ok(())
}

/// Builds `X_A` on `Z_n` in dimension `k`.
pub fn facets(n: u64, k: usize, a: &ZSet) -> Result<SumComplex> {
    validate_params(n, k, a)?;
    let facets = all_subsets(n, k + 1)
        .filter(|s| a.contains(s.sum_mod()))
        .collect();
    Ok(SumComplex {
        n,
        k,
        a: a.clone(),
        facets,
    })
}

/// All `dim`-faces of the simplex on `Z_n`, lexicographically.
pub fn all_faces(n: u64, dim: usize) -> impl Iterator<Item = ZSet> {
    all_subsets(n, dim + 1)
}

impl SumComplex {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn index_set(&self) -> &ZSet {
        &self.a
    }

    /// Facets in lexicographic order.
    pub fn facets(&self) -> &[ZSet] {
        &self.facets
    }

    /// The facets with element sum `a`.
    pub fn layer(&self, a: u64) -> impl Iterator<Item = &ZSet> + '_ {
        self.facets
            .iter()
            .filter(move |s| s.sum_mod() == a % self.n)
    }

    pub fn is_facet(&self, s: &ZSet) -> bool {
        self.facets.binary_search(s).is_ok()
    }

    /// Number of faces in each dimension `0..=k`.
    pub fn f_vector(&self) -> Vec<u64> {
        let mut f: Vec<u64> = (0..self.k)
            .map(|i| binomial(self.n, i as u64 + 1))
            .collect();
        f.push(self.facets.len() as u64);
        f
    }

    /// Index of an `i`-face in the row/column order of the boundary matrices.
    pub fn face_index(&self, s: &ZSet) -> Option<usize> {
        let dim = s.len().checked_sub(1)?;
        if dim < self.k {
            Some(rank_lex(self.n, s.elems()) as usize)
        } else if dim == self.k {
            self.facets.binary_search(s).ok()
        } else {
            None
        }
    }

    /// The `i`-faces in matrix order.
    pub fn faces(&self, dim: usize) -> Vec<ZSet> {
        if dim < self.k {
            all_faces(self.n, dim).collect()
        } else if dim == self.k {
            self.facets.clone()
        } else {
            Vec::new()
        }
    }

    /// Writes the facet list: a header `n,k,{A}` then one facet per line.
    pub fn write_facets<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{},{},{{{}}}", self.n, self.k, self.a)?;
        for f in &self.facets {
            writeln!(out, "{f}")?;
        }
        Ok(())
    }

    /// Reads a facet list written by [`SumComplex::write_facets`] and checks it against a fresh construction.
    pub fn read_facets<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty facet file".into()))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let (n, rest) = header
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let (k, a) = rest
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("n: {e}")))?;
        let k: usize = k
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("k: {e}")))?;
        let a = ZSet::parse(n, a.trim().trim_start_matches('{').trim_end_matches('}'))?;
        let x = facets(n, k, &a)?;
        let mut listed = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if !line.trim().is_empty() {
                listed.push(ZSet::parse(n, &line)?);
            }
        }
        if listed != x.facets {
            return Err(Error::Parse("facet list does not match X_A".into()));
        }
        Ok(x)
    }
}

/// Integer matrix stored as `(row, col, value)` triples, at most one per position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl SparseIntMatrix {
    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(move |(j, &v)| (i, j, v))
            })
            .collect();
        Self {
            nrows,
            ncols,
            entries,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.ncols]; self.nrows];
        for &(i, j, v) in &self.entries {
            d[i][j] += v;
        }
        d
    }

    pub fn column_nnz(&self) -> Vec<usize> {
        let mut c = vec![0; self.ncols];
        for &(_, j, v) in &self.entries {
            if v != 0 {
                c[j] += 1;
            }
        }
        c
    }

    /// Exact product `self * other`.
    pub fn mul(&self, other: &SparseIntMatrix) -> Vec<Vec<i64>> {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch");
        let mut by_row = vec![Vec::new(); other.nrows];
        for &(i, j, v) in &other.entries {
            by_row[i].push((j, v));
        }
        let mut out = vec![vec![0i64; other.ncols]; self.nrows];
        for &(i, mid, v) in &self.entries {
            for &(j, w) in &by_row[mid] {
                out[i][j] += v * w;
            }
        }
        out
    }
}

/// Boundary map `∂_i` of `X`: columns are `i`-faces, rows `(i-1)`-faces.
///
/// Deleting the `j`-th smallest vertex contributes `(-1)^j`.
pub fn boundary_matrix(x: &SumComplex, i: usize) -> Result<SparseIntMatrix> {
    if i == 0 || i > x.k {
        return Err(Error::DimensionOutOfRange { dim: i, max: x.k });
    }
    let cols = x.faces(i);
    let nrows = binomial(x.n, i as u64) as usize;
    let mut entries = Vec::with_capacity(cols.len() * (i + 1));
    for (c, face) in cols.iter().enumerate() {
        let v = face.elems();
        let mut sub = Vec::with_capacity(i);
        for j in 0..=i {
            sub.clear();
            sub.extend(v[..j].iter().chain(&v[j + 1..]).copied());
            let r = rank_lex(x.n, &sub) as usize;
            entries.push((r, c, if j % 2 == 0 { 1 } else { -1 }));
        }
    }
    Ok(SparseIntMatrix {
        nrows,
        ncols: cols.len(),
        entries,
    })
}

pub fn f_vector(x: &SumComplex) -> Vec<u64> {
    x.f_vector()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn::AffineMap;

    fn zs(n: u64, e: &[u64]) -> ZSet {
        ZSet::new(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn rp2_facets() {
        let x = facets(7, 2, &zs(7, &[0, 1, 3])).unwrap();
        assert_eq!(x.facets().len(), 15);
        for f in [[0, 1, 2], [2, 3, 5], [0, 2, 6], [1, 2, 4]] {
            assert!(x.is_facet(&zs(7, &f)), "{f:?}");
        }
        assert_eq!(x.f_vector(), vec![7, 21, 15]);
    }

    #[test]
    fn single_layer_has_n_choose_k_plus_1_over_n() {
        let x = facets(7, 2, &zs(7, &[0, 1, 3])).unwrap();
        assert_eq!(x.layer(0).count(), 5);
        assert_eq!(binomial(7, 3) / 7, 5);
        let y = facets(7, 3, &zs(7, &[0, 1, 2, 3])).unwrap();
        assert_eq!(y.facets().len(), 20);
        assert!(y.is_facet(&zs(7, &[2, 3, 4, 5])) && y.is_facet(&zs(7, &[1, 2, 3, 4])));
        assert_eq!(y.f_vector(), vec![7, 21, 35, 20]);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            facets(6, 2, &zs(6, &[0, 1, 3])),
            Err(Error::NotCoprime { .. })
        ));
        assert!(matches!(
            facets(7, 2, &zs(7, &[0, 1])),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(matches!(
            facets(4, 3, &zs(4, &[0, 1, 2, 3])),
            Err(Error::NotCoprime { .. })
        ));
        assert!(matches!(
            facets(1, 0, &zs(1, &[0])),
            Err(Error::DimensionOutOfRange { .. })
        ));
        assert!(matches!(
            facets(5, 0, &zs(5, &[2])),
            Err(Error::DimensionOutOfRange { .. })
        ));
    }

    #[test]
    fn face_counts() {
        assert_eq!(all_faces(7, 1).count(), 21);
        assert_eq!(all_faces(7, 0).count(), 7);
        assert_eq!(all_faces(5, 4).collect::<Vec<_>>(), vec![ZSet::full(5)]);
    }

    #[test]
    fn boundary_shapes_and_signs() {
        let x = facets(7, 2, &zs(7, &[0, 1, 3])).unwrap();
        let d2 = boundary_matrix(&x, 2).unwrap();
        assert_eq!((d2.nrows, d2.ncols), (21, 15));
        assert!(d2.column_nnz().iter().all(|&c| c == 3));
        let d1 = boundary_matrix(&x, 1).unwrap();
        assert_eq!((d1.nrows, d1.ncols), (7, 21));
        assert!(boundary_matrix(&x, 3).is_err());
        assert!(boundary_matrix(&x, 0).is_err());

        // column of {0,1,2}: +{1,2} - {0,2} + {0,1}
        let col = x.face_index(&zs(7, &[0, 1, 2])).unwrap();
        let mut got: Vec<(usize, i64)> = d2
            .entries
            .iter()
            .filter(|e| e.1 == col)
            .map(|e| (e.0, e.2))
            .collect();
        got.sort();
        let mut want = vec![
            (x.face_index(&zs(7, &[1, 2])).unwrap(), 1),
            (x.face_index(&zs(7, &[0, 2])).unwrap(), -1),
            (x.face_index(&zs(7, &[0, 1])).unwrap(), 1),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn boundary_squared_is_zero() {
        for (n, k, a) in [
            (7, 3, vec![0, 1, 2, 4]),
            (7, 2, vec![0, 1, 3]),
            (8, 4, vec![0, 1, 2, 3, 5]),
        ] {
            let x = facets(n, k, &zs(n, &a)).unwrap();
            for i in 2..=k {
                let prod = boundary_matrix(&x, i - 1)
                    .unwrap()
                    .mul(&boundary_matrix(&x, i).unwrap());
                assert!(prod.iter().flatten().all(|&v| v == 0));
            }
        }
    }

    #[test]
    fn relabeling_by_affine_maps() {
        let a = zs(7, &[0, 1, 3]);
        let x = facets(7, 2, &a).unwrap();
        for phi in AffineMap::all(7) {
            let img = crate::zn::affine_image(&a, &phi, 2).unwrap();
            let y = facets(7, 2, &img).unwrap();
            let mut mapped: Vec<ZSet> = x.facets().iter().map(|f| phi.apply_set(f)).collect();
            mapped.sort();
            assert_eq!(mapped, y.facets());
        }
    }

    #[test]
    fn facet_file_round_trip() {
        let x = facets(7, 2, &zs(7, &[0, 1, 3])).unwrap();
        let mut buf = Vec::new();
        x.write_facets(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("7,2,{0,1,3}\n0,1,2\n"));
        assert_eq!(SumComplex::read_facets(&buf[..]).unwrap(), x);
    }
}
