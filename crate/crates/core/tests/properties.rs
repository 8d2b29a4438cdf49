//! Randomized invariants checked with proptest.

use proptest::prelude::*;

use polycoh::budget::Budget;
use polycoh::cohomology::{ActionTag, Cochain, GroupSpec};
use polycoh::ffpoly::{
    diagonal_restore, multilinearize, parse_poly, write_poly, FieldVector, Monomial, Poly,
    PrimeModulus,
};
use polycoh::gowers::{gowers_norm, Algorithm, PhaseFunction};
use polycoh::limits::{koenig_select, InverseSystem};
use polycoh::rank::RankOracle;

fn fp(p: u32) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

/// A random polynomial over F_p in `nvars` variables with exponents < p
/// (function representatives), degree <= max_d.
fn arb_poly(p: u32, nvars: usize, max_d: usize) -> impl Strategy<Value = Poly> {
    let term = (
        proptest::collection::vec(0..(p.min(max_d as u32 + 1)) as u16, nvars),
        0..p,
    );
    proptest::collection::vec(term, 0..6).prop_map(move |terms| {
        let mut poly = Poly::zero(fp(p), nvars);
        for (exps, c) in terms {
            let m = Monomial::new(exps);
            if m.degree() <= max_d && c != 0 {
                poly.add_term(m, c);
            }
        }
        poly
    })
}

/// A random homogeneous polynomial of exact degree d (or zero).
fn arb_homogeneous(p: u32, nvars: usize, d: usize) -> impl Strategy<Value = Poly> {
    let mons = polycoh::ffpoly::monomials_of_degree(nvars, d);
    let len = mons.len();
    proptest::collection::vec(0..p, len).prop_map(move |coeffs| {
        let mut poly = Poly::zero(fp(p), nvars);
        for (m, c) in mons.iter().zip(coeffs) {
            if c != 0 {
                poly.add_term(m.clone(), c);
            }
        }
        poly
    })
}

fn arb_point(p: u32, nvars: usize) -> impl Strategy<Value = FieldVector> {
    proptest::collection::vec(0..p, nvars).prop_map(move |coords| FieldVector::new(fp(p), coords))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(poly in (2u32..8).prop_filter("prime", |p| [2, 3, 5, 7].contains(p))
        .prop_flat_map(|p| arb_poly(p, 3, 4))) {
        let text = write_poly(&poly);
        let back = parse_poly(&text).unwrap();
        prop_assert_eq!(back, poly);
    }

    #[test]
    fn shift_is_additive((poly, a, b) in arb_poly(5, 2, 3)
        .prop_flat_map(|q| (Just(q), arb_point(5, 2), arb_point(5, 2)))) {
        let lhs = poly.shift(&a).unwrap().shift(&b).unwrap();
        let sum = a.add(&b).unwrap();
        let rhs = poly.shift(&sum).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_drops_degree((poly, h) in arb_homogeneous(5, 2, 3)
        .prop_flat_map(|q| (Just(q), arb_point(5, 2)))) {
        let d = poly.delta(&h).unwrap();
        prop_assert!(d.is_zero() || d.degree() < poly.degree());
    }

    #[test]
    fn delta_matches_pointwise((poly, h, x) in arb_poly(3, 2, 3)
        .prop_flat_map(|q| (Just(q), arb_point(3, 2), arb_point(3, 2)))) {
        let d = poly.delta(&h).unwrap();
        let shifted = x.add(&h).unwrap();
        let expect = (poly.eval(&shifted).unwrap() + 3 - poly.eval(&x).unwrap()) % 3;
        prop_assert_eq!(d.eval(&x).unwrap(), expect);
    }

    #[test]
    fn projection_zeroes_tail(poly in arb_poly(3, 3, 3), l in 0usize..3) {
        let q = poly.project(l).unwrap();
        prop_assert_eq!(q.nvars(), l);
        // evaluating q matches evaluating poly with the tail set to zero
        for x in polycoh::ffpoly::points(fp(3), l) {
            let mut coords = x.coords.clone();
            coords.resize(3, 0);
            let full = FieldVector::new(fp(3), coords);
            prop_assert_eq!(q.eval(&x).unwrap(), poly.eval(&full).unwrap());
        }
    }

    #[test]
    fn multilinearization_is_symmetric(poly in arb_homogeneous(5, 2, 3)) {
        let form = multilinearize(&poly).unwrap();
        prop_assert!(form.is_symmetric());
        let back = diagonal_restore(&form, 3).unwrap();
        prop_assert_eq!(back, poly);
    }

    #[test]
    fn coboundary_of_coboundary_vanishes(values in proptest::collection::vec(arb_poly(3, 2, 2), 3)) {
        let group = GroupSpec::new(fp(3), 1);
        let c = Cochain::new(1, group, ActionTag::Trivial, values).unwrap();
        let dd = c.coboundary().unwrap().coboundary().unwrap();
        prop_assert!(dd.values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn rank_bracket_is_ordered(poly in arb_homogeneous(3, 3, 2)) {
        let mut oracle = RankOracle::new(2, Budget::default());
        let (lo, hi) = oracle.bracket(&poly).unwrap();
        prop_assert!(lo <= hi);
        // the bracket is invariant under nonzero scaling
        let (lo2, hi2) = oracle.bracket(&poly.scale(2)).unwrap();
        prop_assert_eq!((lo, hi), (lo2, hi2));
    }

    #[test]
    fn gowers_algorithms_agree(poly in arb_poly(2, 2, 2), m in 1usize..4) {
        let f = PhaseFunction::Carrier(poly);
        let budget = Budget::default();
        let a = gowers_norm(&f, m, Algorithm::Naive, &budget).unwrap();
        let b = gowers_norm(&f, m, Algorithm::Derivative, &budget).unwrap();
        prop_assert_eq!(a.counts.counts, b.counts.counts);
        prop_assert_eq!(a.counts.total, b.counts.total);
    }

    #[test]
    fn gowers_norm_bounded_by_one(poly in arb_poly(3, 2, 2), m in 1usize..3) {
        let f = PhaseFunction::Carrier(poly);
        let res = gowers_norm(&f, m, Algorithm::Naive, &Budget::default()).unwrap();
        prop_assert!(res.value <= 1.0 + 1e-9);
        prop_assert!(res.value >= 0.0);
    }

    #[test]
    fn koenig_sequence_is_compatible(shape in proptest::collection::vec(1usize..5, 2..8)
        .prop_flat_map(|sizes| {
            let maps: Vec<_> = sizes
                .windows(2)
                .map(|w| proptest::collection::vec(0..w[0], w[1]))
                .collect();
            (Just(sizes), maps)
        })) {
        let (sizes, maps) = shape;
        let sets: Vec<Vec<String>> = sizes
            .iter()
            .map(|&k| (0..k).map(|i| format!("e{i}")).collect())
            .collect();
        let sys = InverseSystem::new(sets, maps.clone()).unwrap();
        let seq = koenig_select(&sys).unwrap();
        for (n, f) in maps.iter().enumerate() {
            prop_assert_eq!(f[seq.indices[n + 1]], seq.indices[n]);
        }
    }
}
