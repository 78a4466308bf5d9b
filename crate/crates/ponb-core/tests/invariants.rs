//! Property tests for the analytic invariants the library is built on:
//! duality identities, norm homogeneity, structural validation of generated
//! bases, coherence monotonicity, certified bound dominance, certificate
//! slack, and transport round trips.

use num_complex::Complex64;
use proptest::prelude::*;

use ponb_core::bases::{
    canonical_basis, from_isometry, isometry_between, random_basis, validate,
};
use ponb_core::grams::{
    admissibility_with_mu, cross_gram, mu_global, mu_local, SubsetPair,
};
use ponb_core::operators::{
    coherence_bound, composite_matrix, opnorm_p, project, restricted_norm,
};
use ponb_core::rng::SeededRng;
use ponb_core::spaces::{conjugate_exponent, p_norm, DenseVector, Field};
use ponb_core::uncertainty::{verify_inp, Variant, VerifyContext};

fn mask_to_vec(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

fn exponent_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(2.0), Just(1.5), Just(3.0), 1.1f64..8.0]
}

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

proptest! {
    #[test]
    fn conjugate_exponent_involutes(p in 1.0001f64..64.0) {
        let q = conjugate_exponent(p).unwrap();
        prop_assert!((1.0 / p + 1.0 / q - 1.0).abs() < 1e-12);
        let back = conjugate_exponent(q).unwrap();
        prop_assert!((back - p).abs() < 1e-8 * p);
    }

    #[test]
    fn p_norm_is_absolutely_homogeneous(
        p in exponent_strategy(),
        seed in any::<u64>(),
        n in 1usize..8,
        re in -3.0f64..3.0,
        im in -3.0f64..3.0,
    ) {
        let lambda = Complex64::new(re, im);
        prop_assume!(lambda.norm() > 1e-6);
        let mut rng = SeededRng::new(seed);
        let x = rng.vector(n, Field::Complex);
        let base = p_norm(&x, p).unwrap();
        let scaled = p_norm(&x.scaled(lambda), p).unwrap();
        prop_assert!((scaled - lambda.norm() * base).abs() <= 1e-9 * (1.0 + base));
    }

    #[test]
    fn hoelder_pairing_is_bounded(
        p in exponent_strategy(),
        seed in any::<u64>(),
        n in 1usize..8,
    ) {
        let q = conjugate_exponent(p).unwrap();
        let mut rng = SeededRng::new(seed);
        let x = rng.vector(n, Field::Complex);
        let y = rng.vector(n, Field::Complex);
        let pairing = x.dot_conj(&y).norm();
        let bound = p_norm(&x, p).unwrap() * p_norm(&y, q).unwrap();
        prop_assert!(pairing <= bound * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn generated_bases_validate(
        p in exponent_strategy(),
        seed in any::<u64>(),
        n in 2usize..7,
        field in field_strategy(),
    ) {
        let pair = random_basis(n, p, seed, field).unwrap();
        let report = validate(&pair, 4, seed ^ 0xF00D);
        prop_assert!(report.valid, "violated: {:?}", report.violated_clause);
    }

    #[test]
    fn local_coherence_never_exceeds_global(
        seed in any::<u64>(),
        n in 2usize..7,
        m_mask in any::<u32>(),
        n_mask in any::<u32>(),
    ) {
        let a = random_basis(n, 2.0, seed, Field::Complex).unwrap();
        let b = random_basis(n, 2.0, seed ^ 0x9E37, Field::Complex).unwrap();
        let gram = cross_gram(&a, &b).unwrap();
        let subsets = SubsetPair::new(
            &mask_to_vec(m_mask & ((1 << n) - 1), n),
            &mask_to_vec(n_mask & ((1 << n) - 1), n),
            n,
        ).unwrap();
        let local = mu_local(&gram, &subsets).unwrap();
        prop_assert!(local <= mu_global(&gram) + 1e-15);
    }

    #[test]
    fn admissibility_is_monotone_under_shrinking(
        seed in any::<u64>(),
        n in 2usize..7,
        m_mask in any::<u32>(),
        n_mask in any::<u32>(),
        m_sub in any::<u32>(),
        n_sub in any::<u32>(),
        p in exponent_strategy(),
    ) {
        let a = random_basis(n, 2.0, seed, Field::Complex).unwrap();
        let b = random_basis(n, 2.0, seed ^ 0x517C, Field::Complex).unwrap();
        let gram = cross_gram(&a, &b).unwrap();
        let mu = mu_global(&gram);
        let full = (1u32 << n) - 1;
        let subsets = SubsetPair::new(
            &mask_to_vec(m_mask & full, n),
            &mask_to_vec(n_mask & full, n),
            n,
        ).unwrap();
        let smaller = SubsetPair::new(
            &mask_to_vec(m_mask & m_sub & full, n),
            &mask_to_vec(n_mask & n_sub & full, n),
            n,
        ).unwrap();
        let big = admissibility_with_mu(mu, &subsets, p).unwrap();
        let small = admissibility_with_mu(mu, &smaller, p).unwrap();
        if big.admissible {
            prop_assert!(small.admissible);
            // Fewer kept coordinates mean a smaller constant.
            prop_assert!(small.constant.unwrap() <= big.constant.unwrap() + 1e-12);
        }
        // Localized coherence shrinks alongside.
        let local_big = mu_local(&gram, &subsets).unwrap();
        let local_small = mu_local(&gram, &smaller).unwrap();
        prop_assert!(local_small <= local_big + 1e-15);
    }

    #[test]
    fn projections_are_idempotent_and_complementary(
        p in exponent_strategy(),
        seed in any::<u64>(),
        n in 2usize..7,
        mask in any::<u32>(),
        field in field_strategy(),
    ) {
        let pair = random_basis(n, p, seed, field).unwrap();
        let s = mask_to_vec(mask & ((1 << n) - 1), n);
        let sc: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
        let mut rng = SeededRng::new(seed ^ 0xABCD);
        let x = rng.vector(n, field);

        let px = project(&pair, &s, &x).unwrap();
        let ppx = project(&pair, &s, &px).unwrap();
        for (a, b) in px.entries().iter().zip(ppx.entries()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
        let pcx = project(&pair, &sc, &x).unwrap();
        for ((a, b), c) in px.entries().iter().zip(pcx.entries()).zip(x.entries()) {
            prop_assert!((a + b - c).norm() < 1e-9);
        }
        // Norms of the kept and dropped parts split the expansion mass.
        let kept = restricted_norm(&pair, &s, &x).unwrap();
        let dropped = restricted_norm(&pair, &sc, &x).unwrap();
        let total = restricted_norm(&pair, &(0..n).collect::<Vec<_>>(), &x).unwrap();
        prop_assert!(
            (kept.powf(p) + dropped.powf(p) - total.powf(p)).abs() <= 1e-9 * (1.0 + total.powf(p))
        );
    }

    #[test]
    fn isometry_transport_round_trips(
        p in exponent_strategy(),
        seed in any::<u64>(),
        n in 2usize..7,
        field in field_strategy(),
    ) {
        let a = random_basis(n, p, seed, field).unwrap();
        let b = random_basis(n, p, seed ^ 0x7777, field).unwrap();
        let v = isometry_between(&a, &b).unwrap();
        let rebuilt = from_isometry(&v, &a).unwrap();
        prop_assert!(rebuilt.synthesis().max_abs_diff(b.synthesis()).unwrap() < 1e-10);
        prop_assert!(rebuilt.analysis().max_abs_diff(b.analysis()).unwrap() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composite_norm_obeys_the_coherence_bound(
        p in exponent_strategy(),
        seed in any::<u64>(),
        n in 2usize..6,
        m_mask in any::<u32>(),
        n_mask in any::<u32>(),
    ) {
        let a = random_basis(n, p, seed, Field::Complex).unwrap();
        let b = random_basis(n, p, seed ^ 0xBEEF, Field::Complex).unwrap();
        let gram = cross_gram(&a, &b).unwrap();
        let full = (1u32 << n) - 1;
        let subsets = SubsetPair::new(
            &mask_to_vec(m_mask & full, n),
            &mask_to_vec(n_mask & full, n),
            n,
        ).unwrap();
        let comp = composite_matrix(&gram, &subsets).unwrap();
        let bound = coherence_bound(mu_global(&gram), &subsets, p).unwrap();
        let est = opnorm_p(&comp, p, 120, seed ^ 0x0DD).unwrap();
        prop_assert!(est.lower <= est.upper * (1.0 + 1e-12) + 1e-12);
        prop_assert!(est.lower <= bound + 1e-9, "lower {} bound {}", est.lower, bound);
    }

    #[test]
    fn certificates_hold_and_scale(
        seed in any::<u64>(),
        n in 2usize..7,
        m_mask in any::<u32>(),
        n_mask in any::<u32>(),
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
    ) {
        let a = random_basis(n, 2.0, seed, Field::Complex).unwrap();
        let b = random_basis(n, 2.0, seed ^ 0x1234, Field::Complex).unwrap();
        let ctx = VerifyContext::new(&a, &b).unwrap();
        let full = (1u32 << n) - 1;
        let subsets = SubsetPair::new(
            &mask_to_vec(m_mask & full, n),
            &mask_to_vec(n_mask & full, n),
            n,
        ).unwrap();
        let mut rng = SeededRng::new(seed ^ 0x4242);
        let x = rng.unit_vector(n, 2.0, Field::Complex);
        let lambda = Complex64::new(re, im);

        for variant in Variant::ALL {
            let cert = ctx.certify(variant, &subsets, &x).unwrap();
            prop_assert_eq!(cert.rhs.is_some(), cert.admissibility.admissible);
            if let Some(slack) = cert.slack {
                prop_assert!(slack >= -1e-9, "{:?}: slack {}", variant, slack);
            }
            if let Some(rhs) = cert.rhs {
                if lambda.norm() > 1e-6 {
                    let scaled = ctx.certify(variant, &subsets, &x.scaled(lambda)).unwrap();
                    let factor = lambda.norm();
                    let expect = factor * rhs;
                    prop_assert!(
                        (scaled.rhs.unwrap() - expect).abs() <= 1e-9 * (1.0 + expect)
                    );
                    prop_assert!(
                        (scaled.lhs - factor * cert.lhs).abs() <= 1e-9 * (1.0 + scaled.lhs)
                    );
                    let expect_slack = factor * cert.slack.unwrap();
                    prop_assert!(
                        (scaled.slack.unwrap() - expect_slack).abs()
                            <= 1e-9 * (1.0 + expect_slack.abs())
                    );
                    // A pure phase leaves every certified quantity in place.
                    let phase = lambda.scale(1.0 / factor);
                    let rotated = ctx.certify(variant, &subsets, &x.scaled(phase)).unwrap();
                    prop_assert!(
                        (rotated.slack.unwrap() - cert.slack.unwrap()).abs() <= 1e-9
                    );
                }
            }
        }
    }

    #[test]
    fn nonhilbert_pairs_certify_with_empty_subsets(
        p in prop_oneof![Just(1.3), Just(1.5), Just(3.0), Just(5.0)],
        seed in any::<u64>(),
        n in 2usize..7,
    ) {
        // Isometric bases away from p = 2 are generalized permutations, so
        // their mutual coherence is 1 and only empty subsets are admissible;
        // both tails then equal the full norm and the bound is exactly 4x.
        let a = random_basis(n, p, seed, Field::Complex).unwrap();
        let b = random_basis(n, p, seed ^ 0xCAFE, Field::Complex).unwrap();
        let ctx = VerifyContext::new(&a, &b).unwrap();
        let empty = SubsetPair::new(&[], &[], n).unwrap();
        let mut rng = SeededRng::new(seed ^ 0x101);
        let x = rng.unit_vector(n, p, Field::Complex);
        let cert = ctx.certify(Variant::Global, &empty, &x).unwrap();
        prop_assert!(cert.admissibility.admissible);
        prop_assert!((cert.rhs.unwrap() - 4.0 * cert.lhs).abs() <= 1e-9);

        let singleton = SubsetPair::new(&[0], &[0], n).unwrap();
        let adm = ctx.admissibility_for(Variant::Global, &singleton).unwrap();
        // Generated phases are exactly representable, so the coherence is
        // exactly 1 and the strict comparison cannot flip on rounding.
        prop_assert_eq!(adm.mu, 1.0);
        prop_assert!(!adm.admissible);
    }

    #[test]
    fn supported_vectors_keep_their_tail_mass(
        seed in any::<u64>(),
        n in 3usize..8,
        m_pick in any::<u32>(),
        n_pick in any::<u32>(),
    ) {
        let can = canonical_basis(n, 2.0).unwrap();
        let b = random_basis(n, 2.0, seed, Field::Complex).unwrap();
        let subsets = SubsetPair::new(
            &[(m_pick as usize) % n],
            &[(n_pick as usize) % n],
            n,
        ).unwrap();
        let gram = cross_gram(&can, &b).unwrap();
        let bound = coherence_bound(mu_global(&gram), &subsets, 2.0).unwrap();
        prop_assume!(bound < 1.0);

        let mut rng = SeededRng::new(seed ^ 0x5150);
        let mut coeff = DenseVector::zeros(n, Field::Complex);
        coeff.set((m_pick as usize) % n, rng.scalar(Field::Complex));
        prop_assume!(p_norm(&coeff, 2.0).unwrap() > 1e-6);
        let y = can.synthesize(&coeff).unwrap();
        let report = verify_inp(&can, &b, &subsets, &y).unwrap();
        prop_assert!(report.holds, "slack {}", report.slack);
    }

    /// The tail bound chains into the certificate: for y supported on M
    /// with contraction b < 1, the preserved g-tail is at least (1-b)|y|,
    /// and with constant C = 1 + 1/(1-b) that forces
    /// slack = C * tail_g - |y| >= (1-b)|y|.
    #[test]
    fn tail_bound_implies_the_certificate_slack(
        seed in any::<u64>(),
        n in 3usize..8,
        m_pick in any::<u32>(),
        n_pick in any::<u32>(),
    ) {
        let can = canonical_basis(n, 2.0).unwrap();
        let b = random_basis(n, 2.0, seed, Field::Complex).unwrap();
        let subsets = SubsetPair::new(
            &[(m_pick as usize) % n],
            &[(n_pick as usize) % n],
            n,
        ).unwrap();
        let gram = cross_gram(&can, &b).unwrap();
        let bound = coherence_bound(mu_global(&gram), &subsets, 2.0).unwrap();
        prop_assume!(bound < 1.0);

        let mut rng = SeededRng::new(seed ^ 0x1242);
        let mut coeff = DenseVector::zeros(n, Field::Complex);
        coeff.set((m_pick as usize) % n, rng.scalar(Field::Complex));
        prop_assume!(p_norm(&coeff, 2.0).unwrap() > 1e-6);
        let y = can.synthesize(&coeff).unwrap();

        let report = verify_inp(&can, &b, &subsets, &y).unwrap();
        prop_assert!(report.holds);
        let ctx = VerifyContext::new(&can, &b).unwrap();
        let cert = ctx.certify(Variant::Global, &subsets, &y).unwrap();
        let norm_y = cert.lhs;

        prop_assert!(cert.tail_f <= 1e-10 * (1.0 + norm_y));
        prop_assert!((cert.tail_g - report.lhs_tail).abs() <= 1e-12 * (1.0 + report.lhs_tail));
        let slack = cert.slack.unwrap();
        prop_assert!(
            slack >= (1.0 - bound) * norm_y - 1e-8 * (1.0 + norm_y),
            "slack {} vs chained floor {}",
            slack,
            (1.0 - bound) * norm_y
        );
    }
}
