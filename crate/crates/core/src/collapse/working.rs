//! A sum complex under elementary collapses, and the record of those collapses.

use std::collections::HashSet;
use std::fmt;

use crate::complex::SumComplex;
use crate::error::{Error, Result};
use crate::zn::{all_subsets, ZSet};

/// Faces are bitmasks over `Z_n`, so `n` is capped at 64.
pub const MAX_N: u64 = 64;

/// `X_A` minus the faces removed so far. The empty face is never removed.
#[derive(Debug, Clone)]
pub struct WorkingComplex {
    n: u64,
    k: usize,
    facets: HashSet<u64>,
    removed: HashSet<u64>,
    /// live faces per dimension `0..=k`
    live: Vec<u64>,
}

impl WorkingComplex {
    pub fn new(x: &SumComplex) -> Result<Self> {
        if x.n() > MAX_N {
            return Err(Error::TooLarge {
                n: x.n(),
                limit: MAX_N,
            });
        }
        Ok(Self {
            n: x.n(),
            k: x.k(),
            facets: x.facets().iter().map(ZSet::mask).collect(),
            removed: HashSet::new(),
            live: x.f_vector(),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub(crate) fn is_live_mask(&self, m: u64) -> bool {
        let size = m.count_ones() as usize;
        if size == 0 {
            return true;
        }
        if size > self.k + 1 || self.removed.contains(&m) {
            return false;
        }
        size <= self.k || self.facets.contains(&m)
    }

    pub fn is_live(&self, s: &ZSet) -> bool {
        s.n() == self.n && self.is_live_mask(s.mask())
    }

    /// Number of live faces of dimension `dim`.
    pub fn live_count(&self, dim: usize) -> u64 {
        self.live.get(dim).copied().unwrap_or(0)
    }

    /// Only the empty face is left.
    pub fn is_empty(&self) -> bool {
        self.live.iter().all(|&c| c == 0)
    }

    /// Union of all live faces containing `sigma`, when that union is itself
    /// live (then it is the unique maximal face above `sigma`).
    pub(crate) fn partner_mask(&self, sigma: u64) -> Option<u64> {
        let size = sigma.count_ones() as usize;
        if size == 0 || size > self.k || !self.is_live_mask(sigma) {
            return None;
        }
        let mut tau = sigma;
        for v in 0..self.n {
            let bit = 1u64 << v;
            if sigma & bit == 0 && self.is_live_mask(sigma | bit) {
                tau |= bit;
            }
        }
        self.is_live_mask(tau).then_some(tau)
    }

    /// The face `tau` for which `(sigma, tau)` is free, if `sigma` is a free face.
    pub fn free_partner(&self, sigma: &ZSet) -> Option<ZSet> {
        if sigma.n() != self.n {
            return None;
        }
        self.partner_mask(sigma.mask())
            .map(|t| ZSet::from_mask(self.n, t))
    }

    pub fn is_free(&self, sigma: &ZSet, tau: &ZSet) -> bool {
        self.free_partner(sigma).as_ref() == Some(tau)
    }

    /// Every free pair, ordered by dimension of `sigma` and then lexicographically.
    pub fn free_faces(&self) -> Vec<(ZSet, ZSet)> {
        (0..self.k)
            .flat_map(|d| all_subsets(self.n, d + 1))
            .filter_map(|s| self.free_partner(&s).map(|t| (s, t)))
            .collect()
    }

    /// Free pairs whose `sigma` is a `(k-1)`-face.
    pub fn free_ridges(&self) -> Vec<(ZSet, ZSet)> {
        all_subsets(self.n, self.k)
            .filter_map(|s| self.free_partner(&s).map(|t| (s, t)))
            .collect()
    }

    /// Facets still present, lexicographically.
    pub fn live_facets(&self) -> Vec<ZSet> {
        let mut v: Vec<ZSet> = self
            .facets
            .iter()
            .filter(|m| !self.removed.contains(m))
            .map(|&m| ZSet::from_mask(self.n, m))
            .collect();
        v.sort();
        v
    }

    /// Removes `[sigma, tau]`, returning how many faces went.
    pub fn elementary_collapse(&mut self, sigma: &ZSet, tau: &ZSet) -> Result<usize> {
        if !self.is_free(sigma, tau) {
            return Err(Error::NotFree(format!("({sigma}) in ({tau})")));
        }
        let (s, t) = (sigma.mask(), tau.mask());
        let extra = t & !s;
        let mut sub = extra;
        let mut count = 0;
        loop {
            let face = s | sub;
            self.removed.insert(face);
            self.live[face.count_ones() as usize - 1] -= 1;
            count += 1;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & extra;
        }
        Ok(count)
    }
}

/// One elementary collapse `[sigma, tau]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub sigma: ZSet,
    pub tau: ZSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    CollapsedToEmpty,
    /// no free face is left but the complex is not empty
    Stuck,
    BudgetExhausted,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::CollapsedToEmpty => "COLLAPSED_TO_EMPTY",
            Outcome::Stuck => "STUCK",
            Outcome::BudgetExhausted => "BUDGET_EXHAUSTED",
        })
    }
}

/// A sequence of elementary collapses on `X_A` and where it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseTrace {
    pub n: u64,
    pub k: usize,
    pub a: ZSet,
    pub steps: Vec<Step>,
    pub outcome: Outcome,
    /// irregularities noticed while ordering facets; empty on a clean run
    pub diagnostics: Vec<String>,
}

impl CollapseTrace {
    /// One line `dim σ | {σ} | {τ}` per step, then `outcome: ..`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for st in &self.steps {
            s.push_str(&format!(
                "{} | {{{}}} | {{{}}}\n",
                st.sigma.len() - 1,
                st.sigma,
                st.tau
            ));
        }
        s.push_str(&format!("outcome: {}\n", self.outcome));
        s
    }

    /// Parses [`CollapseTrace::to_text`] output for `X_A`.
    pub fn parse(x: &SumComplex, text: &str) -> Result<Self> {
        let n = x.n();
        let mut steps = Vec::new();
        let mut outcome = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(o) = line.strip_prefix("outcome:") {
                outcome = Some(match o.trim() {
                    "COLLAPSED_TO_EMPTY" => Outcome::CollapsedToEmpty,
                    "STUCK" => Outcome::Stuck,
                    "BUDGET_EXHAUSTED" => Outcome::BudgetExhausted,
                    other => return Err(Error::Parse(format!("unknown outcome {other:?}"))),
                });
                continue;
            }
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            let [dim, sigma, tau] = parts[..] else {
                return Err(Error::Parse(format!("bad trace line {line:?}")));
            };
            let set = |s: &str| ZSet::parse(n, s.trim_start_matches('{').trim_end_matches('}'));
            let sigma = set(sigma)?;
            let dim: usize = dim
                .parse()
                .map_err(|e| Error::Parse(format!("dimension: {e}")))?;
            if dim + 1 != sigma.len() {
                return Err(Error::Parse(format!(
                    "dimension {dim} does not match {{{sigma}}}"
                )));
            }
            steps.push(Step {
                sigma,
                tau: set(tau)?,
            });
        }
        Ok(Self {
            n,
            k: x.k(),
            a: x.index_set().clone(),
            steps,
            outcome: outcome.ok_or_else(|| Error::Parse("missing outcome line".into()))?,
            diagnostics: Vec::new(),
        })
    }

    /// Re-runs every step on a fresh copy of `x`, checking freeness at each
    /// point and that the recorded outcome matches the final state.
    pub fn replay(&self, x: &SumComplex) -> Result<WorkingComplex> {
        if (x.n(), x.k(), x.index_set()) != (self.n, self.k, &self.a) {
            return Err(Error::InvalidSet(
                "trace belongs to a different complex".into(),
            ));
        }
        let mut w = WorkingComplex::new(x)?;
        for (i, st) in self.steps.iter().enumerate() {
            w.elementary_collapse(&st.sigma, &st.tau)
                .map_err(|e| Error::AssertionFailed(format!("step {i}: {e}")))?;
        }
        let consistent = match self.outcome {
            Outcome::CollapsedToEmpty => w.is_empty(),
            Outcome::Stuck => !w.is_empty() && w.free_faces().is_empty(),
            Outcome::BudgetExhausted => true,
        };
        if !consistent {
            return Err(Error::AssertionFailed(format!(
                "outcome {} does not match the replayed complex",
                self.outcome
            )));
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::facets;

    fn zs(e: &[u64]) -> ZSet {
        ZSet::new(7, e.iter().copied()).unwrap()
    }

    #[test]
    fn fresh_rp2_free_faces() {
        let w = WorkingComplex::new(&facets(7, 2, &zs(&[0, 1, 3])).unwrap()).unwrap();
        let free = w.free_faces();
        assert_eq!(
            free,
            vec![
                (zs(&[2, 3]), zs(&[2, 3, 5])),
                (zs(&[2, 4]), zs(&[1, 2, 4])),
                (zs(&[2, 6]), zs(&[0, 2, 6])),
            ]
        );
        assert_eq!(w.free_ridges(), free);
    }

    #[test]
    fn collapse_sizes() {
        let x = facets(7, 2, &zs(&[0, 1, 3])).unwrap();
        let mut w = WorkingComplex::new(&x).unwrap();
        assert_eq!(
            w.elementary_collapse(&zs(&[2, 4]), &zs(&[1, 2, 4]))
                .unwrap(),
            2
        );
        assert!(!w.is_live(&zs(&[2, 4])) && !w.is_live(&zs(&[1, 2, 4])));
        assert!(w.is_live(&zs(&[1, 2])));
        assert_eq!(w.live_count(2), 14);
        assert!(matches!(
            w.elementary_collapse(&zs(&[0, 1]), &zs(&[0, 1, 2])),
            Err(Error::NotFree(_))
        ));
    }

    #[test]
    fn interval_of_size_four() {
        // collapse everything except the closure of one triangle
        let x = facets(7, 2, &zs(&[0, 1, 2])).unwrap();
        let mut w = WorkingComplex::new(&x).unwrap();
        let tri = zs(&[0, 1, 6]);
        let inside = |s: &ZSet| s.elems().iter().all(|&v| tri.contains(v));
        while let Some((s, t)) = w.free_faces().into_iter().find(|(s, _)| !inside(s)) {
            w.elementary_collapse(&s, &t).unwrap();
        }
        assert_eq!(w.live_count(2), 1);
        assert_eq!(w.free_partner(&zs(&[0])), Some(tri.clone()));
        assert_eq!(w.elementary_collapse(&zs(&[0]), &tri).unwrap(), 4);
        for f in [&[0u64][..], &[0, 1], &[0, 6], &[0, 1, 6]] {
            assert!(!w.is_live(&zs(f)));
        }
        assert!(w.is_live(&zs(&[1, 6])));
    }

    #[test]
    fn lone_vertex_is_free_in_itself() {
        let x = facets(5, 1, &ZSet::new(5, [0, 1]).unwrap()).unwrap();
        let mut w = WorkingComplex::new(&x).unwrap();
        let v = |i: u64| ZSet::new(5, [i]).unwrap();
        while let Some((s, t)) = w.free_faces().into_iter().find(|(s, t)| s != t) {
            w.elementary_collapse(&s, &t).unwrap();
        }
        assert_eq!(w.live_count(0), 1);
        let last = (0..5).map(v).find(|u| w.is_live(u)).unwrap();
        assert!(w.is_free(&last, &last));
        assert_eq!(w.elementary_collapse(&last, &last).unwrap(), 1);
        assert!(w.is_empty());
    }

    #[test]
    fn text_round_trip() {
        let x = facets(7, 2, &zs(&[0, 1, 3])).unwrap();
        let t = CollapseTrace {
            n: 7,
            k: 2,
            a: zs(&[0, 1, 3]),
            steps: vec![Step {
                sigma: zs(&[2, 4]),
                tau: zs(&[1, 2, 4]),
            }],
            outcome: Outcome::BudgetExhausted,
            diagnostics: vec![],
        };
        let text = t.to_text();
        assert_eq!(text, "1 | {2,4} | {1,2,4}\noutcome: BUDGET_EXHAUSTED\n");
        assert_eq!(CollapseTrace::parse(&x, &text).unwrap(), t);
        t.replay(&x).unwrap();
        let bad = CollapseTrace {
            outcome: Outcome::CollapsedToEmpty,
            ..t
        };
        assert!(matches!(bad.replay(&x), Err(Error::AssertionFailed(_))));
    }
}
