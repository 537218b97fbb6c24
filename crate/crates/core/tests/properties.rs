use ncsaito_core::cyclic::{apply_derivation, canonicalize, commutator};
use ncsaito_core::derive::{adjoint, bracket, eigen_develop, Derivation};
use ncsaito_core::ncseries::{Endomorphism, Series, Word};
use ncsaito_core::{rat, Rat};
use proptest::prelude::*;

const N: usize = 2;
const T: usize = 5;

fn series_from(n: usize, t: usize, min_deg: usize, raw: Vec<(Vec<usize>, i64)>) -> Series {
    Series::from_terms(
        n,
        t,
        raw.into_iter()
            .filter(|(l, _)| l.len() >= min_deg)
            .map(|(l, c)| (Word::from_letters(&l), rat(c, 1))),
    )
}

fn series(min_deg: usize, max_deg: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(
        (prop::collection::vec(0..N, min_deg..=max_deg), -3i64..=3),
        0..6,
    )
    .prop_map(move |raw| series_from(N, T, min_deg, raw))
}

/// `x_i -> a_i x_i + (upper triangular linear) + higher terms`: always invertible.
fn automorphism() -> impl Strategy<Value = Endomorphism> {
    (
        prop::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2), Just(3)], N),
        -2i64..=2,
        prop::collection::vec(series(2, 3), N),
    )
        .prop_map(|(diag, off, highs)| {
            let images = (0..N)
                .map(|i| {
                    let mut s = Series::var(N, T, i).scale(&rat(diag[i], 1));
                    if i == 1 {
                        s = &s + &Series::var(N, T, 0).scale(&rat(off, 1));
                    }
                    &s + &highs[i]
                })
                .collect();
            Endomorphism::new(images).unwrap()
        })
}

fn derivation() -> impl Strategy<Value = Derivation> {
    prop::collection::vec(series(1, 3), N).prop_map(|imgs| Derivation::new(imgs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(a in series(0, 3), b in series(0, 3), c in series(0, 3)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn truncation_is_a_ring_map(a in series(0, 4), b in series(0, 4), level in 0usize..T) {
        prop_assert_eq!((&a * &b).truncated(level), &a.truncated(level) * &b.truncated(level));
    }

    #[test]
    fn substitution_respects_composition(h in automorphism(), g in automorphism(), f in series(1, 4)) {
        let hg = h.compose(&g).unwrap();
        prop_assert_eq!(hg.substitute(&f).unwrap(), h.substitute(&g.substitute(&f).unwrap()).unwrap());
    }

    #[test]
    fn substitution_is_multiplicative(h in automorphism(), a in series(0, 3), b in series(0, 3)) {
        prop_assert_eq!(
            h.substitute(&(&a * &b)).unwrap(),
            &h.substitute(&a).unwrap() * &h.substitute(&b).unwrap()
        );
    }

    #[test]
    fn inverse_round_trip(h in automorphism()) {
        let inv = h.invert().unwrap();
        prop_assert!(h.compose(&inv).unwrap().is_identity());
        prop_assert!(inv.compose(&h).unwrap().is_identity());
    }

    #[test]
    fn canonicalize_is_idempotent(f in series(0, 5)) {
        let c = canonicalize(&f);
        prop_assert_eq!(canonicalize(c.rep()), c);
    }

    #[test]
    fn commutators_vanish(u in prop::collection::vec(0..N, 0..3), v in prop::collection::vec(0..N, 0..3)) {
        let c = commutator(N, T, Word::from_letters(&u), Word::from_letters(&v));
        prop_assert!(canonicalize(&c).is_zero());
    }

    #[test]
    fn derivations_obey_leibniz(xi in derivation(), a in series(0, 2), b in series(0, 2)) {
        let lhs = xi.apply(&(&a * &b)).unwrap();
        let rhs = &(&xi.apply(&a).unwrap() * &b) + &(&a * &xi.apply(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cyclic_action_is_well_defined(xi in derivation(), f in series(1, 4), u in prop::collection::vec(0..N, 1..3), v in prop::collection::vec(0..N, 1..3)) {
        // pi(xi(f)) only depends on pi(f)
        let g = &f + &commutator(N, T, Word::from_letters(&u), Word::from_letters(&v));
        prop_assert_eq!(
            apply_derivation(&xi, &canonicalize(&f)).unwrap(),
            apply_derivation(&xi, &canonicalize(&g)).unwrap()
        );
    }

    #[test]
    fn adjoint_intertwines(h in automorphism(), xi in derivation(), f in series(1, 4)) {
        // (Ad_H xi)(H f) = H(xi f)
        let ad = adjoint(&h, &xi).unwrap();
        prop_assert_eq!(
            ad.apply(&h.substitute(&f).unwrap()).unwrap(),
            h.substitute(&xi.apply(&f).unwrap()).unwrap()
        );
    }

    #[test]
    fn bracket_satisfies_jacobi(a in derivation(), b in derivation(), c in derivation()) {
        let t1 = bracket(&a, &bracket(&b, &c).unwrap()).unwrap();
        let t2 = bracket(&b, &bracket(&c, &a).unwrap()).unwrap();
        let t3 = bracket(&c, &bracket(&a, &b).unwrap()).unwrap();
        prop_assert!(t1.try_add(&t2).unwrap().try_add(&t3).unwrap().is_zero());
    }

    #[test]
    fn eigen_components_sum_back(f in series(0, 5), w in prop::collection::vec(1i64..5, N)) {
        let weights: Vec<Rat> = w.iter().map(|x| rat(*x, 3)).collect();
        let parts = eigen_develop(&f, &Derivation::diagonal(&weights, T)).unwrap();
        let total = parts.values().fold(Series::zero(N, T), |acc, p| &acc + p);
        prop_assert_eq!(total, f.clone());
        let all_vanish = parts.values().all(|p| canonicalize(p).is_zero());
        prop_assert_eq!(canonicalize(&f).is_zero(), all_vanish);
    }
}
