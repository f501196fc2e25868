use std::cmp::Ordering;

use proptest::prelude::*;
use sumcomplex::collapse::{collapse_ap_order, compare_r, facet_key, sort_by_r, CollapseTrace};
use sumcomplex::complex::{boundary_matrix, facets, SumComplex};
use sumcomplex::field::{FieldCtx, FieldOps};
use sumcomplex::fourier::theorem1_betti;
use sumcomplex::homology::betti;
use sumcomplex::zn::{
    affine_image, all_subsets, canonical_form, gcd, is_arithmetic_progression, AffineMap, ZSet,
};

/// A valid `(n, k, A)` with `n <= max_n`.
fn instance(max_n: u64) -> impl Strategy<Value = (u64, usize, ZSet)> {
    (4..=max_n)
        .prop_flat_map(|n| {
            let ks: Vec<usize> = (1..n as usize - 1)
                .filter(|&k| gcd(k as u64 + 1, n) == 1)
                .collect();
            (Just(n), proptest::sample::select(ks))
        })
        .prop_flat_map(|(n, k)| {
            let a = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), k + 1);
            (Just(n), Just(k), a)
        })
        .prop_map(|(n, k, a)| (n, k, ZSet::new(n, a).unwrap()))
}

fn coprime_prime(n: u64) -> u64 {
    [2u64, 3, 5, 7, 11, 13]
        .into_iter()
        .find(|p| n % p != 0)
        .unwrap()
}

fn field_context() -> impl Strategy<Value = FieldCtx> {
    prop_oneof![
        Just(FieldCtx::rational()),
        proptest::sample::select(vec![2u64, 3, 5, 13, 101])
            .prop_map(|p| FieldCtx::prime(p).unwrap()),
        (2..=12u64).prop_map(|n| FieldCtx::rational_cyclotomic(n).unwrap()),
        (2..=12u64, proptest::sample::select(vec![2u64, 3, 5, 7, 13]))
            .prop_filter("p must not divide n", |(n, p)| n % p != 0)
            .prop_map(|(n, p)| FieldCtx::splitting_field(p, n).unwrap()),
    ]
}

fn boundary_of_boundary_vanishes(x: &SumComplex) -> bool {
    (1..x.k()).all(|i| {
        let prod = boundary_matrix(x, i)
            .unwrap()
            .mul(&boundary_matrix(x, i + 1).unwrap());
        prod.iter().flatten().all(|&v| v == 0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(ctx in field_context(), c in proptest::collection::vec(-9i64..9, 12)) {
        let elems: Vec<_> = c.chunks(4).map(|ch| ctx.from_int_coeffs(ch)).collect();
        let (a, b, d) = (&elems[0], &elems[1], &elems[2]);
        prop_assert_eq!(ctx.add(a, b), ctx.add(b, a));
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(ctx.mul(&ctx.mul(a, b), d), ctx.mul(a, &ctx.mul(b, d)));
        prop_assert_eq!(ctx.mul(a, &ctx.add(b, d)), ctx.add(&ctx.mul(a, b), &ctx.mul(a, d)));
        prop_assert_eq!(ctx.add(a, &ctx.neg(a)), ctx.zero());
        if !ctx.is_zero(a) {
            prop_assert_eq!(ctx.mul(a, &ctx.inv(a).unwrap()), ctx.one());
        }
        if let Some(n) = ctx.root_order() {
            let w = ctx.omega().unwrap();
            prop_assert_eq!(ctx.pow(&w, n as u128), ctx.one());
            for d in (1..n).filter(|d| n % d == 0) {
                prop_assert_ne!(ctx.pow(&w, d as u128), ctx.one());
            }
        }
    }

    #[test]
    fn boundary_squares_to_zero((n, k, a) in instance(9)) {
        let x = facets(n, k, &a).unwrap();
        prop_assert!(boundary_of_boundary_vanishes(&x));
    }

    #[test]
    fn euler_relation((n, k, a) in instance(10)) {
        let x = facets(n, k, &a).unwrap();
        for ctx in [FieldCtx::rational(), FieldCtx::prime(coprime_prime(n)).unwrap()] {
            let h = betti(&x, &ctx).unwrap();
            prop_assert_eq!(h.get(k - 1), h.get(k));
        }
    }

    #[test]
    fn fourier_formula_matches_boundary((n, k, a) in instance(8)) {
        let p = coprime_prime(n);
        let x = facets(n, k, &a).unwrap();
        let h = betti(&x, &FieldCtx::prime(p).unwrap()).unwrap();
        let ctx = FieldCtx::splitting_field(p, n).unwrap();
        prop_assert_eq!(Some(theorem1_betti(n, k, &a, &ctx).unwrap()), h.get(k - 1));
    }

    #[test]
    fn affine_invariance((n, k, a) in instance(9), alpha in 1..64u64, beta in 0..64u64) {
        let alpha = (1..n).cycle().skip(alpha as usize).find(|&u| gcd(u, n) == 1).unwrap();
        let phi = AffineMap::new(alpha, beta % n, n).unwrap();
        let b = affine_image(&a, &phi, k).unwrap();
        let (x, y) = (facets(n, k, &a).unwrap(), facets(n, k, &b).unwrap());
        for ctx in [FieldCtx::rational(), FieldCtx::prime(coprime_prime(n)).unwrap()] {
            prop_assert_eq!(betti(&x, &ctx).unwrap().h, betti(&y, &ctx).unwrap().h);
        }
        prop_assert_eq!(canonical_form(&a, k).unwrap(), canonical_form(&b, k).unwrap());
        prop_assert_eq!(is_arithmetic_progression(&a).unwrap(), is_arithmetic_progression(&b).unwrap());
        // the vertex map carries facets to facets
        for f in x.facets() {
            prop_assert!(y.is_facet(&phi.apply_set(f)));
        }
    }

    #[test]
    fn sort_respects_order_or_says_so(n in proptest::sample::select(vec![5u64, 7, 11]), k in 1usize..5, pick in any::<u64>()) {
        prop_assume!(gcd(k as u64 + 1, n) == 1 && (k as u64) + 1 < n);
        let x = facets(n, k, &ZSet::new(n, 0..=k as u64).unwrap()).unwrap();
        // an arbitrary subfamily of the facets
        let keys: Vec<_> = x
            .facets()
            .iter()
            .enumerate()
            .filter(|(i, _)| pick >> (i % 64) & 1 == 1)
            .map(|(_, f)| facet_key(f, &x).unwrap())
            .collect();
        let (sorted, diagnostics) = sort_by_r(keys);
        let violated = sorted
            .iter()
            .enumerate()
            .any(|(i, u)| sorted[i + 1..].iter().any(|v| compare_r(v, u) == Ordering::Less));
        prop_assert!(!violated || !diagnostics.is_empty());
    }

    #[test]
    fn zset_text_round_trip(n in 2..40u64, mask in any::<u64>()) {
        let s = ZSet::from_mask(n, mask & ((1u64 << n) - 1));
        prop_assert_eq!(ZSet::parse(n, &s.to_string()).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn progression_traces_round_trip(n in proptest::sample::select(vec![5u64, 7]), k in 1usize..4, i in 0usize..64) {
        prop_assume!(gcd(k as u64 + 1, n) == 1 && (k as u64) + 1 < n);
        let aps: Vec<ZSet> = all_subsets(n, k + 1).filter(|a| is_arithmetic_progression(a).unwrap()).collect();
        let a = &aps[i % aps.len()];
        let x = facets(n, k, a).unwrap();
        let t = collapse_ap_order(n, k, a).unwrap();
        let parsed = CollapseTrace::parse(&x, &t.to_text()).unwrap();
        prop_assert_eq!(&parsed.steps, &t.steps);
        prop_assert!(parsed.replay(&x).unwrap().is_empty());
    }
}
