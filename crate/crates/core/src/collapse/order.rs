//! The facet order used to collapse `X_{0,..,k}`.

use std::cmp::Ordering;

use crate::complex::SumComplex;
use crate::error::{Error, Result};
use crate::zn::ZSet;

/// `|i - j|` on canonical representatives in `0..n` (not the circular distance).
pub fn rho(i: u64, j: u64) -> u64 {
    i.abs_diff(j)
}

/// `min { rho(i, b) : b in set }`.
pub fn rho_set(i: u64, set: &[u64]) -> u64 {
    set.iter()
        .map(|&b| rho(i, b))
        .min()
        .expect("rho against an empty set")
}

/// `min { rho(a, b) : a in left, b in right }`.
pub fn rho_sets(left: &[u64], right: &[u64]) -> u64 {
    left.iter()
        .map(|&a| rho_set(a, right))
        .min()
        .expect("rho against an empty set")
}

/// Everything `compare_r` needs to know about a facet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FacetKey {
    /// `h_i = u_{k-i} - u_i - (k - 2i)` for `i < ceil(k/2)`
    pub h: Vec<u64>,
    /// distance of the sum class from `{0, k}`
    pub iprime: u64,
    pub facet: ZSet,
    pub sumclass: u64,
}

/// Key of a facet `u` of `x`.
pub fn facet_key(u: &ZSet, x: &SumComplex) -> Result<FacetKey> {
    if !x.is_facet(u) {
        return Err(Error::NotAFacet(u.to_string()));
    }
    Ok(key_unchecked(u, x.k()))
}

pub(crate) fn key_unchecked(u: &ZSet, k: usize) -> FacetKey {
    let e = u.elems();
    let h = (0..k.div_ceil(2))
        .map(|i| e[k - i] - e[i] - (k - 2 * i) as u64)
        .collect();
    let sumclass = u.sum_mod();
    FacetKey {
        h,
        iprime: rho_set(sumclass, &[0, k as u64]),
        facet: u.clone(),
        sumclass,
    }
}

/// `Less` when `u` must be collapsed before `v`; `Equal` on `≡_R` ties.
///
/// When the `h` order and the `i'` order disagree, the one whose first
/// difference comes earlier decides, and the `h` order wins a tie.
pub fn compare_r(u: &FacetKey, v: &FacetKey) -> Ordering {
    let by_l = u.h.cmp(&v.h);
    let by_i = u.iprime.cmp(&v.iprime);
    match (by_l, by_i) {
        (Ordering::Equal, o) | (o, Ordering::Equal) => o,
        (l, i) if l == i => l,
        (l, i) => {
            let delta_l =
                u.h.iter()
                    .zip(&v.h)
                    .position(|(a, b)| a != b)
                    .expect("h vectors differ");
            let delta_i = u.iprime.min(v.iprime) as usize;
            if delta_l <= delta_i {
                l
            } else {
                i
            }
        }
    }
}

/// Linear extension of `compare_r` with lexicographic tie-breaking, plus any
/// pairs the result fails to respect.
///
/// The relation is not known to be transitive, so the order is built by
/// repeatedly taking the smallest facet with no remaining predecessor. If
/// every remaining facet has one (a cycle), the smallest is taken anyway and a
/// diagnostic is recorded.
pub fn sort_by_r(keys: Vec<FacetKey>) -> (Vec<FacetKey>, Vec<String>) {
    let mut keys = keys;
    keys.sort_by(|a, b| a.facet.cmp(&b.facet));
    let m = keys.len();
    let mut indegree = vec![0usize; m];
    let mut succ = vec![Vec::new(); m];
    for i in 0..m {
        for j in 0..m {
            if i != j && compare_r(&keys[i], &keys[j]) == Ordering::Less {
                succ[i].push(j);
                indegree[j] += 1;
            }
        }
    }
    let mut done = vec![false; m];
    let mut order = Vec::with_capacity(m);
    let mut diagnostics = Vec::new();
    for _ in 0..m {
        let next = match (0..m).find(|&i| !done[i] && indegree[i] == 0) {
            Some(i) => i,
            None => {
                let i = (0..m).find(|&i| !done[i]).expect("facets remain");
                diagnostics.push(format!(
                    "cycle in the collapse order broken at {}",
                    keys[i].facet
                ));
                i
            }
        };
        done[next] = true;
        for &j in &succ[next] {
            indegree[j] = indegree[j].saturating_sub(1);
        }
        order.push(next);
    }
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if compare_r(&keys[j], &keys[i]) == Ordering::Less {
                diagnostics.push(format!(
                    "{} is placed after {} but precedes it",
                    keys[j].facet, keys[i].facet
                ));
            }
        }
    }
    let mut slots: Vec<Option<FacetKey>> = keys.into_iter().map(Some).collect();
    let sorted = order
        .into_iter()
        .map(|i| slots[i].take().expect("each index once"))
        .collect();
    (sorted, diagnostics)
}
