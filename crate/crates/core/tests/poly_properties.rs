use koopman_rational::exact::rational::ratio;
use koopman_rational::poly::omega_expand;
use koopman_rational::sample::{self, rng_from_seed};
use koopman_rational::{BivariatePoly, QuadExt, RationalEigenfunction};
use proptest::prelude::*;

fn small_poly() -> impl Strategy<Value = BivariatePoly<QuadExt>> {
    prop::collection::vec(((0u32..3, 0u32..3), -3i64..=3), 0..6)
        .prop_map(|terms| BivariatePoly::from_terms(terms.into_iter().map(|(e, c)| (e, QuadExt::from_int(c)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn results_never_store_zeros(p in small_poly(), q in small_poly()) {
        for r in [&p + &q, &p - &q, &p * &q, &p - &p, p.diff_x(), q.diff_y(), p.scale(&QuadExt::zero())] {
            prop_assert!(r.terms().all(|(_, c)| !c.is_zero()));
        }
    }

    #[test]
    fn ring_identities(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        // product rule
        prop_assert_eq!((&p * &q).diff_x(), &(&p.diff_x() * &q) + &(&p * &q.diff_x()));
    }

    #[test]
    fn exact_division_undoes_multiplication(p in small_poly(), q in small_poly()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).exact_div(&q), Some(p));
    }

    #[test]
    fn omega_is_linear_in_numerator(seed in any::<u64>(), k in -4i64..=4) {
        let (ode, ef, lambda) = sample::random_tuple(&mut rng_from_seed(seed));
        let alpha = QuadExt::rational(ratio(k, 3));
        let scaled = RationalEigenfunction::new(ef.c.clone().map(|v| v * alpha.clone()), ef.d.clone());
        prop_assert_eq!(omega_expand(&ode, &scaled, &lambda), omega_expand(&ode, &ef, &lambda).scale(&alpha));
    }

    #[test]
    fn omega_is_affine_in_lambda(seed in any::<u64>()) {
        let (ode, ef, lambda) = sample::random_tuple(&mut rng_from_seed(seed));
        let zero = omega_expand(&ode, &ef, &QuadExt::zero());
        let one = omega_expand(&ode, &ef, &QuadExt::one());
        let at = omega_expand(&ode, &ef, &lambda);
        prop_assert_eq!(at, &zero + &(&one - &zero).scale(&lambda));
    }
}
