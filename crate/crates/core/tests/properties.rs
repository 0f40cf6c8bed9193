use exheis::sampling::{equivariance_residual, homomorphism_residual, quadrature_residual, random_poly, random_sp2, random_trig_symbol};
use exheis::index::{toeplitz_index, winding_number};
use exheis::weyl::{sharp, Sign};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sharp_is_associative(seed in any::<u64>(), minus in any::<bool>()) {
        let mut r = rng(seed);
        let s = if minus { Sign::Minus } else { Sign::Plus };
        let (a, b, c) = (random_poly(&mut r, 1, 3), random_poly(&mut r, 1, 3), random_poly(&mut r, 1, 3));
        let l = sharp(&sharp(&a, &b, s).unwrap(), &c, s).unwrap();
        let rr = sharp(&a, &sharp(&b, &c, s).unwrap(), s).unwrap();
        prop_assert!(l.sub(&rr).max_coeff() < 1e-12);
    }

    #[test]
    fn opposite_signs_are_dual(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_poly(&mut r, 1, 3), random_poly(&mut r, 1, 3));
        let d = sharp(&a, &b, Sign::Minus).unwrap().sub(&sharp(&b, &a, Sign::Plus).unwrap());
        prop_assert!(d.max_coeff() < 1e-12);
    }

    #[test]
    fn quantization_is_multiplicative(seed in any::<u64>(), n in 12usize..28) {
        let mut r = rng(seed);
        let (a, b) = (random_poly(&mut r, 1, 3), random_poly(&mut r, 1, 3));
        prop_assert!(homomorphism_residual(&a, &b, n).unwrap() < 1e-9);
    }

    #[test]
    fn sharp_is_symplectic_equivariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let alpha = random_sp2(&mut r);
        let (a, b) = (random_poly(&mut r, 1, 3), random_poly(&mut r, 1, 3));
        prop_assert!(equivariance_residual(&a, &b, &alpha).unwrap() < 1e-8);
    }

    #[test]
    fn quadrature_matches_closed_form(seed in any::<u64>(), minus in any::<bool>(), x in -0.5f64..0.5, p in -0.5f64..0.5) {
        let mut r = rng(seed);
        let s = if minus { Sign::Minus } else { Sign::Plus };
        let (a, b) = (random_poly(&mut r, 1, 2), random_poly(&mut r, 1, 2));
        prop_assert!(quadrature_residual(&a, &b, s, [x, p]).unwrap() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn toeplitz_index_is_minus_winding(seed in any::<u64>()) {
        let f = random_trig_symbol(&mut rng(seed), 256).unwrap();
        prop_assert_eq!(toeplitz_index(&f).unwrap().index, -winding_number(&f).unwrap());
    }
}
