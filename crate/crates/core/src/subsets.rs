//! Lexicographic enumeration and ranking of fixed-size subsets of `{0, .., n-1}`.
//!
//! Faces of the complexes in this crate are indexed by their rank in this order,
//! so boundary matrix rows and columns are reproducible without hashing.

/// Binomial coefficient `C(n, r)`, zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Iterator over all `r`-subsets of `{0, .., n-1}` in lexicographic order.
#[derive(Debug, Clone)]
pub struct KSubsets {
    n: u64,
    cur: Option<Vec<u64>>,
}

impl KSubsets {
    pub fn new(n: u64, r: usize) -> Self {
        let cur = if (r as u64) <= n {
            Some((0..r as u64).collect())
        } else {
            None
        };
        Self { n, cur }
    }
}

impl Iterator for KSubsets {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.cur.take()?;
        let r = out.len();
        let mut next = out.clone();
        // rightmost position that can still be incremented
        let mut i = r;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - (r - i) as u64 {
                next[i] += 1;
                for j in i + 1..r {
                    next[j] = next[j - 1] + 1;
                }
                self.cur = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

/// Rank of a sorted subset among all subsets of the same size, in lexicographic order.
pub fn rank_lex(n: u64, subset: &[u64]) -> u64 {
    let r = subset.len() as u64;
    let mut rank = 0;
    let mut next_free = 0;
    for (i, &c) in subset.iter().enumerate() {
        let remaining = r - i as u64 - 1;
        for skipped in next_free..c {
            rank += binomial(n - skipped - 1, remaining);
        }
        next_free = c + 1;
    }
    rank
}

/// Inverse of [`rank_lex`].
pub fn unrank_lex(n: u64, r: usize, mut rank: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(r);
    let mut c = 0;
    for i in 0..r as u64 {
        let remaining = r as u64 - i - 1;
        loop {
            let block = binomial(n - c - 1, remaining);
            if rank < block {
                break;
            }
            rank -= block;
            c += 1;
        }
        out.push(c);
        c += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn enumeration_counts_and_order() {
        for n in 0..9u64 {
            for r in 0..=n as usize + 1 {
                let all: Vec<_> = KSubsets::new(n, r).collect();
                assert_eq!(all.len() as u64, binomial(n, r as u64));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn rank_matches_enumeration_position() {
        for n in 1..9u64 {
            for r in 0..=n as usize {
                for (pos, s) in KSubsets::new(n, r).enumerate() {
                    assert_eq!(rank_lex(n, &s), pos as u64);
                    assert_eq!(unrank_lex(n, r, pos as u64), s);
                }
            }
        }
    }
}
