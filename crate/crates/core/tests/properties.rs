//! Randomized structural properties of the polynomial ring, the series
//! layer, and the reduction engine. The exhaustive small-size checks live
//! in the unit tests and the acceptance gate; these push the same laws onto
//! randomly generated inputs.

use std::collections::BTreeMap;

use glw::diagrams::{canonical_key, Permutation};
use glw::engine::{wgl, MemoCache};
use glw::parse::parse_polynomial;
use glw::poly::{Generator, Monomial, Polynomial, Rat};
use glw::series::PowerSeries;
use num::BigInt;
use proptest::prelude::*;

fn arb_generator() -> impl Strategy<Value = Generator> {
    prop_oneof![
        Just(Generator::N),
        (1u32..=4).prop_map(Generator::C),
        (1u32..=3).prop_map(Generator::P),
    ]
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec((arb_generator(), 1u32..=3), 0..3).prop_map(Monomial::from_factors)
}

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn arb_polynomial() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((arb_monomial(), arb_rat()), 0..5).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    })
}

fn arb_permutation(max: u32) -> impl Strategy<Value = Permutation> {
    (1..=max).prop_flat_map(|m| {
        Just((1..=m).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(|images| Permutation::from_images(images).expect("bijection"))
    })
}

proptest! {
    #[test]
    fn ring_laws(a in arb_polynomial(), b in arb_polynomial(), c in arb_polynomial()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Polynomial::zero());
        prop_assert_eq!(&a * &Polynomial::one(), a.clone());
    }

    #[test]
    fn display_parse_round_trip(a in arb_polynomial()) {
        let reparsed = parse_polynomial(&a.to_string()).expect("display output parses");
        prop_assert_eq!(reparsed, a);
    }

    #[test]
    fn json_round_trip(a in arb_polynomial()) {
        let reparsed = Polynomial::from_json(&a.to_json()).expect("JSON output parses");
        prop_assert_eq!(reparsed, a);
    }

    #[test]
    fn substitution_is_a_ring_map(a in arb_polynomial(), b in arb_polynomial(), r in arb_polynomial()) {
        let mut map = BTreeMap::new();
        map.insert(Generator::N, r);
        let image = |p: &Polynomial| p.substitute(&map);
        prop_assert_eq!(image(&(&a + &b)), &image(&a) + &image(&b));
        prop_assert_eq!(image(&(&a * &b)), &image(&a) * &image(&b));
    }

    #[test]
    fn exp_undoes_log(coeffs in proptest::collection::vec(arb_polynomial(), 4)) {
        // Constant term pinned to 1: log then exp must return the input.
        let mut all = vec![Polynomial::one()];
        all.extend(coeffs);
        let f = PowerSeries::from_coeffs(all);
        let back = f.log().expect("constant term is one").exp().expect("constant term is zero");
        prop_assert_eq!(back, f);
    }

    #[test]
    fn canonical_key_constant_on_rotation_orbits(p in arb_permutation(8), c in 0usize..8) {
        let rotated = p.conjugate_by_rotation(c % p.size().max(1));
        prop_assert_eq!(canonical_key(&p), canonical_key(&rotated));
    }
}

proptest! {
    // The engine checks run full reductions; keep the case count moderate.
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weight_is_a_rotation_invariant(p in arb_permutation(7), c in 0usize..7) {
        let mut cache = MemoCache::without_canonicalization();
        let rotated = p.conjugate_by_rotation(c % p.size());
        prop_assert_eq!(wgl(&p, &mut cache), wgl(&rotated, &mut cache));
    }

    #[test]
    fn weight_is_multiplicative_over_concatenation(
        p in arb_permutation(5),
        q in arb_permutation(5),
    ) {
        let mut cache = MemoCache::new();
        let product = &wgl(&p, &mut cache) * &wgl(&q, &mut cache);
        prop_assert_eq!(wgl(&p.concatenate(&q), &mut cache), product);
    }
}
