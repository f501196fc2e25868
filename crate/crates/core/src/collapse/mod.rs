//! Collapsibility of sum complexes: the explicit collapse of progressions, the
//! forced steps and stuck state for everything else, and a general decision.

mod order;
mod working;

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeSet;

pub use order::{compare_r, facet_key, rho, rho_set, rho_sets, sort_by_r, FacetKey};
pub use working::{CollapseTrace, Outcome, Step, WorkingComplex, MAX_N};

use crate::complex::{facets, validate_params, SumComplex};
use crate::error::{Error, Result};
use crate::subsets::binomial;
use crate::zn::{
    all_subsets, gcd, is_arithmetic_progression, is_prime, mod_inverse, AffineMap, ZSet,
};

/// `(c, d)` with `d` a unit such that `A = {c, c+d, .., c+kd}`.
fn unit_progression(a: &ZSet) -> Option<(u64, u64)> {
    let n = a.n();
    let len = a.len() as u64;
    (1..n).filter(|&d| gcd(d, n) == 1).find_map(|d| {
        a.elems()
            .iter()
            .find(|&&c| (0..len).all(|i| a.contains(c + i * d % n)))
            .map(|&c| (c, d))
    })
}

/// Vertex map `φ` with `φ(X_A) = X_{0,..,k}`.
fn normalizing_map(a: &ZSet, k: usize) -> Result<AffineMap> {
    let n = a.n();
    let (c, d) = unit_progression(a).ok_or(Error::NotAP)?;
    let alpha = mod_inverse(d, n)?;
    let inv_k1 = mod_inverse((k + 1) as u64 % n, n)?;
    // α·c + (k+1)·β = 0
    let beta = (n - alpha * c % n * inv_k1 % n) % n;
    AffineMap::new(alpha, beta, n)
}

fn step_text(s: &ZSet, t: &ZSet) -> String {
    format!("({s}) in ({t})")
}

/// Free faces of a working complex, ordered so that the first entry is the
/// largest `sigma`, lexicographically first among equals.
struct FreeIndex {
    proper: BTreeSet<(Reverse<usize>, ZSet)>,
    terminal: BTreeSet<(Reverse<usize>, ZSet)>,
}

impl FreeIndex {
    fn new(w: &WorkingComplex) -> Self {
        let mut idx = FreeIndex {
            proper: BTreeSet::new(),
            terminal: BTreeSet::new(),
        };
        for d in 0..w.k() {
            for s in all_subsets(w.n(), d + 1) {
                idx.update(w, s.mask());
            }
        }
        idx
    }

    fn update(&mut self, w: &WorkingComplex, sigma: u64) {
        let s = ZSet::from_mask(w.n(), sigma);
        let key = (Reverse(s.len()), s);
        self.proper.remove(&key);
        self.terminal.remove(&key);
        match w.partner_mask(sigma) {
            Some(t) if t == sigma => {
                self.terminal.insert(key);
            }
            Some(_) => {
                self.proper.insert(key);
            }
            None => {}
        }
    }

    /// Removing `[sigma, tau]` only changes the cofaces of subsets of `tau`.
    fn refresh_below(&mut self, w: &WorkingComplex, tau: u64) {
        let mut sub = tau;
        while sub != 0 {
            if (sub.count_ones() as usize) <= w.k() {
                self.update(w, sub);
            }
            sub = (sub - 1) & tau;
        }
    }

    fn best(&self) -> Option<&ZSet> {
        self.proper
            .first()
            .or_else(|| self.terminal.first())
            .map(|(_, s)| s)
    }
}

/// Collapse with a preference for proper intervals and high-dimensional `σ`.
///
/// Used once the top dimension is gone, where some free pair always exists,
/// and to clear what lies outside the facets of a stuck complex.
fn greedy_finish(w: &mut WorkingComplex, steps: &mut Vec<Step>, budget: u64) -> Result<Outcome> {
    let mut free = FreeIndex::new(w);
    while !w.is_empty() {
        if steps.len() as u64 >= budget {
            return Ok(Outcome::BudgetExhausted);
        }
        let Some(s) = free.best().cloned() else {
            return Ok(Outcome::Stuck);
        };
        let t = w
            .free_partner(&s)
            .ok_or_else(|| Error::AssertionFailed(format!("({s}) was indexed as free")))?;
        w.elementary_collapse(&s, &t)?;
        free.refresh_below(w, t.mask());
        steps.push(Step { sigma: s, tau: t });
    }
    Ok(Outcome::CollapsedToEmpty)
}

/// Collapses `X_{0,..,k}` facet by facet in the `≺_R` order, then finishes greedily.
fn collapse_standard(n: u64, k: usize) -> Result<CollapseTrace> {
    let a = ZSet::new(n, 0..=k as u64)?;
    let x = facets(n, k, &a)?;
    let mut w = WorkingComplex::new(&x)?;
    let keys = x
        .facets()
        .iter()
        .map(|f| facet_key(f, &x))
        .collect::<Result<Vec<_>>>()?;
    let (sorted, diagnostics) = sort_by_r(keys);
    let mut steps = Vec::new();
    for key in &sorted {
        let xf = &key.facet;
        let idx = key.sumclass as usize;
        if idx > k {
            return Err(Error::AssertionFailed(format!(
                "{xf} has sum {idx} outside 0..=k"
            )));
        }
        let xa = xf.elems()[idx];
        let hat = ZSet::new(n, xf.elems().iter().copied().filter(|&v| v != xa))?;
        for b in (0..=k).filter(|&b| b != idx) {
            let v = (xa + n + b as u64 - idx as u64 % n) % n;
            if hat.contains(v) {
                continue;
            }
            let y = ZSet::new(n, hat.elems().iter().copied().chain([v]))?;
            let ky = facet_key(&y, &x)?;
            if compare_r(&ky, key) != Ordering::Less {
                return Err(Error::AssertionFailed(format!(
                    "{y} should precede {xf} in the collapse order"
                )));
            }
        }
        if !w.is_free(&hat, xf) {
            return Err(Error::StuckUnexpectedly(step_text(&hat, xf)));
        }
        w.elementary_collapse(&hat, xf)?;
        steps.push(Step {
            sigma: hat,
            tau: xf.clone(),
        });
    }
    let removed = binomial(n - 1, k as u64);
    if steps.len() as u64 != removed
        || w.live_count(k) != 0
        || w.live_count(k - 1) != binomial(n, k as u64) - removed
    {
        return Err(Error::AssertionFailed(
            "facet phase removed the wrong number of faces".into(),
        ));
    }
    match greedy_finish(&mut w, &mut steps, u64::MAX)? {
        Outcome::CollapsedToEmpty => {}
        other => {
            return Err(Error::StuckUnexpectedly(format!(
                "residual complex ended {other} with {} live vertices",
                w.live_count(0)
            )))
        }
    }
    Ok(CollapseTrace {
        n,
        k,
        a,
        steps,
        outcome: Outcome::CollapsedToEmpty,
        diagnostics,
    })
}

/// The explicit collapse of `X_A` for an arithmetic progression `A` with unit step.
///
/// `X_A` is relabeled onto `X_{0,..,k}`, collapsed there, and the steps are
/// mapped back.
pub fn collapse_ap_order(n: u64, k: usize, a: &ZSet) -> Result<CollapseTrace> {
    validate_params(n, k, a)?;
    let phi = normalizing_map(a, k)?;
    let back = phi.inverse();
    let mut trace = collapse_standard(n, k)?;
    for st in &mut trace.steps {
        st.sigma = back.apply_set(&st.sigma);
        st.tau = back.apply_set(&st.tau);
    }
    trace.a = a.clone();
    Ok(trace)
}

/// `l_t = (a_t - Σ a_i)/(k+1)`, `x^(t) = A + l_t` and the free face `y_t = x^(t) ∖ {a_t + l_t}`.
///
/// Returns the `k+1` pairs `(y_t, x^(t))` in the order of `A`.
pub fn forced_initial_collapses(n: u64, k: usize, a: &ZSet) -> Result<Vec<(ZSet, ZSet)>> {
    validate_params(n, k, a)?;
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    if is_arithmetic_progression(a)? {
        return Err(Error::IsAP);
    }
    let x = facets(n, k, a)?;
    let w = WorkingComplex::new(&x)?;
    let inv = mod_inverse((k + 1) as u64, n)?;
    let total = a.sum_mod();
    a.elems()
        .iter()
        .map(|&at| {
            let l = (at + n - total) % n * inv % n;
            let xt = a.shift(l);
            if xt.sum_mod() != at {
                return Err(Error::AssertionFailed(format!("{xt} does not sum to {at}")));
            }
            let drop = (at + l) % n;
            let yt = ZSet::new(n, xt.elems().iter().copied().filter(|&v| v != drop))?;
            if !w.is_free(&yt, &xt) {
                return Err(Error::AssertionFailed(format!(
                    "{} is not free",
                    step_text(&yt, &xt)
                )));
            }
            Ok((yt, xt))
        })
        .collect()
}

/// Counts of free faces before and after the forced collapses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecessityReport {
    pub initial_free: usize,
    pub after_steps_free: usize,
    pub steps: Vec<Step>,
}

impl NecessityReport {
    /// The forced steps as a trace ending in a stuck state.
    pub fn to_trace(&self, n: u64, k: usize, a: &ZSet) -> CollapseTrace {
        CollapseTrace {
            n,
            k,
            a: a.clone(),
            steps: self.steps.clone(),
            outcome: Outcome::Stuck,
            diagnostics: Vec::new(),
        }
    }
}

/// Carries out the forced collapses of a non-progression and checks that
/// nothing is free afterwards.
pub fn verify_necessity(n: u64, k: usize, a: &ZSet) -> Result<NecessityReport> {
    let forced = forced_initial_collapses(n, k, a)?;
    let x = facets(n, k, a)?;
    let mut w = WorkingComplex::new(&x)?;
    let initial: BTreeSet<(ZSet, ZSet)> = w.free_faces().into_iter().collect();
    let expected: BTreeSet<(ZSet, ZSet)> = forced.iter().cloned().collect();
    if initial != expected {
        return Err(Error::AssertionFailed(format!(
            "{} free faces found, {} predicted",
            initial.len(),
            expected.len()
        )));
    }
    let mut steps = Vec::new();
    for (y, xt) in forced {
        w.elementary_collapse(&y, &xt)
            .map_err(|e| Error::AssertionFailed(e.to_string()))?;
        steps.push(Step { sigma: y, tau: xt });
    }
    let after = w.free_faces().len();
    if after != 0 {
        return Err(Error::AssertionFailed(format!(
            "{after} faces still free after the forced steps"
        )));
    }
    Ok(NecessityReport {
        initial_free: initial.len(),
        after_steps_free: after,
        steps,
    })
}

/// Why a complex is not collapsible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoCertificate {
    /// forced steps followed by a state with nothing free (prime `n`)
    Necessity(NecessityReport),
    /// a maximal greedy run that got stuck
    Stuck(CollapseTrace),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Collapsibility {
    Yes(CollapseTrace),
    No(NoCertificate),
    /// the run stopped at the step budget, or stuck where greedy choices matter
    Unknown(CollapseTrace),
}

impl Collapsibility {
    pub fn label(&self) -> &'static str {
        match self {
            Collapsibility::Yes(_) => "YES",
            Collapsibility::No(_) => "NO",
            Collapsibility::Unknown(_) => "UNKNOWN",
        }
    }
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Decides whether `X_A` collapses to the empty complex.
///
/// For prime `n` the answer comes from the progression criterion. Otherwise
/// facets are removed greedily through free `(k-1)`-faces. That is exact:
/// whether a `(k-1)`-face is free depends only on the live facets above it,
/// and removing facets never destroys freeness, so every maximal run removes
/// the same set of facets. The remainder is finished greedily, which is only
/// decisive when it is a graph, so getting stuck there with `k >= 3` gives
/// `Unknown`, as do runs longer than `budget` steps.
pub fn is_collapsible(n: u64, k: usize, a: &ZSet, budget: u64) -> Result<Collapsibility> {
    validate_params(n, k, a)?;
    if is_prime(n) {
        return Ok(if is_arithmetic_progression(a)? {
            Collapsibility::Yes(collapse_ap_order(n, k, a)?)
        } else {
            Collapsibility::No(NoCertificate::Necessity(verify_necessity(n, k, a)?))
        });
    }
    let x = facets(n, k, a)?;
    let trace = greedy_collapse(&x, budget)?;
    Ok(match trace.outcome {
        Outcome::CollapsedToEmpty => Collapsibility::Yes(trace),
        Outcome::Stuck if k >= 3 && trace.replay(&x)?.live_count(k) == 0 => {
            Collapsibility::Unknown(trace)
        }
        Outcome::Stuck => Collapsibility::No(NoCertificate::Stuck(trace)),
        Outcome::BudgetExhausted => Collapsibility::Unknown(trace),
    })
}

/// Removes facets through free `(k-1)`-faces until none is left or nothing is free,
/// then collapses whatever else it can.
pub fn greedy_collapse(x: &SumComplex, budget: u64) -> Result<CollapseTrace> {
    let mut w = WorkingComplex::new(x)?;
    let mut steps = Vec::new();
    let outcome = 'run: loop {
        let mut progressed = false;
        for f in w.live_facets() {
            if steps.len() as u64 >= budget {
                break 'run Outcome::BudgetExhausted;
            }
            let ridge = f
                .elems()
                .iter()
                .map(|&v| {
                    ZSet::new(x.n(), f.elems().iter().copied().filter(|&u| u != v)).expect("subset")
                })
                .find(|r| w.is_free(r, &f));
            if let Some(r) = ridge {
                w.elementary_collapse(&r, &f)?;
                steps.push(Step { sigma: r, tau: f });
                progressed = true;
            }
        }
        if w.live_count(x.k()) == 0 {
            break greedy_finish(&mut w, &mut steps, budget)?;
        }
        if !progressed {
            // facets stay, but lower faces outside them may still collapse
            break greedy_finish(&mut w, &mut steps, budget)?;
        }
    };
    Ok(CollapseTrace {
        n: x.n(),
        k: x.k(),
        a: x.index_set().clone(),
        steps,
        outcome,
        diagnostics: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zs(n: u64, e: &[u64]) -> ZSet {
        ZSet::new(n, e.iter().copied()).unwrap()
    }

    /// The `≡_R` blocks of `X_{0,1,2,3}` on `Z_7` in collapse order.
    const BLOCK_CHAIN: [[[u64; 4]; 2]; 10] = [
        [[2, 3, 4, 5], [1, 2, 3, 4]],
        [[0, 1, 2, 4], [2, 4, 5, 6]],
        [[2, 3, 4, 6], [0, 2, 3, 4]],
        [[0, 1, 3, 4], [2, 3, 5, 6]],
        [[1, 3, 4, 6], [0, 2, 3, 5]],
        [[1, 2, 5, 6], [0, 1, 4, 5]],
        [[0, 1, 2, 5], [1, 4, 5, 6]],
        [[1, 3, 5, 6], [0, 1, 3, 5]],
        [[0, 3, 5, 6], [0, 1, 3, 6]],
        [[0, 4, 5, 6], [0, 1, 2, 6]],
    ];

    #[test]
    fn progression_facet_order() {
        let t = collapse_ap_order(7, 3, &zs(7, &[0, 1, 2, 3])).unwrap();
        assert!(t.diagnostics.is_empty(), "{:?}", t.diagnostics);
        let facet_steps: Vec<&ZSet> = t.steps[..20].iter().map(|s| &s.tau).collect();
        for (i, block) in BLOCK_CHAIN.iter().enumerate() {
            let got: BTreeSet<&ZSet> = facet_steps[2 * i..2 * i + 2].iter().copied().collect();
            let want: Vec<ZSet> = block.iter().map(|f| zs(7, f)).collect();
            assert_eq!(got, want.iter().collect(), "block {i}");
        }
        assert_eq!(t.steps[0].tau, zs(7, &[1, 2, 3, 4]));
        assert_eq!(t.outcome, Outcome::CollapsedToEmpty);
        t.replay(&facets(7, 3, &zs(7, &[0, 1, 2, 3])).unwrap())
            .unwrap();
    }

    #[test]
    fn progressions_collapse() {
        for (n, k, a) in [
            (7, 2, vec![0, 1, 2]),
            (7, 2, vec![0, 2, 4]),
            (5, 1, vec![0, 1]),
            (11, 3, vec![3, 6, 9, 1]),
        ] {
            let a = zs(n, &a);
            let t = collapse_ap_order(n, k, &a).unwrap();
            assert_eq!(t.outcome, Outcome::CollapsedToEmpty);
            let w = t.replay(&facets(n, k, &a).unwrap()).unwrap();
            assert!(w.is_empty());
        }
        let t = collapse_ap_order(5, 1, &zs(5, &[0, 1])).unwrap();
        // four edges through a free vertex each, then the last vertex on its own
        assert_eq!(t.steps.len(), 5);
        assert!(t.steps[..4]
            .iter()
            .all(|s| s.sigma.len() == 1 && s.tau.len() == 2));
        assert_eq!(t.steps[4].sigma, t.steps[4].tau);
        assert_eq!(
            collapse_ap_order(7, 2, &zs(7, &[0, 1, 3])).unwrap_err(),
            Error::NotAP
        );
    }

    #[test]
    fn forced_steps() {
        let pairs = forced_initial_collapses(7, 2, &zs(7, &[0, 1, 3])).unwrap();
        assert_eq!(
            pairs,
            vec![
                (zs(7, &[2, 4]), zs(7, &[1, 2, 4])),
                (zs(7, &[2, 6]), zs(7, &[0, 2, 6])),
                (zs(7, &[2, 3]), zs(7, &[2, 3, 5])),
            ]
        );
        assert_eq!(
            forced_initial_collapses(7, 2, &zs(7, &[0, 1, 2])).unwrap_err(),
            Error::IsAP
        );
    }

    #[test]
    fn necessity_examples() {
        for (n, k, a) in [
            (7, 2, vec![0, 1, 3]),
            (11, 2, vec![0, 1, 4]),
            (7, 3, vec![0, 1, 2, 4]),
        ] {
            let r = verify_necessity(n, k, &zs(n, &a)).unwrap();
            assert_eq!((r.initial_free, r.after_steps_free), (k + 1, 0));
        }
    }

    #[test]
    fn decisions() {
        let c = is_collapsible(7, 2, &zs(7, &[0, 1, 3]), DEFAULT_BUDGET).unwrap();
        match c {
            Collapsibility::No(NoCertificate::Necessity(r)) => {
                assert_eq!((r.initial_free, r.after_steps_free), (3, 0));
                let x = facets(7, 2, &zs(7, &[0, 1, 3])).unwrap();
                r.to_trace(7, 2, &zs(7, &[0, 1, 3])).replay(&x).unwrap();
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            is_collapsible(7, 2, &zs(7, &[0, 1, 2]), DEFAULT_BUDGET)
                .unwrap()
                .label(),
            "YES"
        );
        assert_eq!(
            is_collapsible(7, 2, &zs(7, &[0, 2, 4]), DEFAULT_BUDGET)
                .unwrap()
                .label(),
            "YES"
        );
        assert_eq!(
            is_collapsible(8, 2, &zs(8, &[0, 1, 2]), DEFAULT_BUDGET)
                .unwrap()
                .label(),
            "YES"
        );
        assert_eq!(
            is_collapsible(8, 2, &zs(8, &[0, 1, 2]), 3).unwrap().label(),
            "UNKNOWN"
        );
    }

    #[test]
    fn greedy_agrees_with_progression_criterion_for_primes() {
        for n in [5u64, 7] {
            for k in 1..=2usize {
                if gcd(k as u64 + 1, n) != 1 || n <= k as u64 + 1 {
                    continue;
                }
                for a in all_subsets(n, k + 1) {
                    let t = greedy_collapse(&facets(n, k, &a).unwrap(), DEFAULT_BUDGET).unwrap();
                    let ap = is_arithmetic_progression(&a).unwrap();
                    assert_eq!(t.outcome == Outcome::CollapsedToEmpty, ap, "{a}");
                }
            }
        }
    }

    #[test]
    fn composite_verdicts_replay() {
        for (n, k) in [(9u64, 3usize), (8, 4), (8, 2)] {
            for a in all_subsets(n, k + 1) {
                let x = facets(n, k, &a).unwrap();
                match is_collapsible(n, k, &a, DEFAULT_BUDGET).unwrap() {
                    Collapsibility::Yes(t) => assert!(t.replay(&x).unwrap().is_empty(), "{a}"),
                    Collapsibility::No(NoCertificate::Stuck(t)) => {
                        // a stuck complex must keep facets, with nothing else free
                        let w = t.replay(&x).unwrap();
                        assert!(w.live_count(k) > 0, "{a}");
                        assert!(w.free_faces().is_empty(), "{a}");
                    }
                    Collapsibility::No(_) => {
                        panic!("{a}: composite n has no necessity certificate")
                    }
                    Collapsibility::Unknown(t) => {
                        t.replay(&x).unwrap();
                    }
                }
            }
        }
    }
}
