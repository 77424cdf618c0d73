//! Property tests for exponential-sum phase profiles: agreement of the
//! weight-expansion route with the direct matrix route, closed-form
//! dominance thresholds, and certified tail integrals past the threshold.

use bohrlab_core::matrix::Matrix;
use bohrlab_core::phase::NONZERO_COEFF_TOL;
use bohrlab_core::rep::{build_representation, matrix_coefficient, GroupRepSpec};
use bohrlab_core::vdc::CERT_CONSTANT;
use bohrlab_core::{
    find_t0, mat_exp, oscillatory_integral, vdc_certify, ExpSumPhase, HypothesisStatus,
    PhaseProfile, PhaseTerm,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn two_term(r1: f64, c1: f64, r2: f64, c2: f64) -> PhaseProfile {
    PhaseProfile::new(vec![
        PhaseTerm { rate: r1, coeff: c1 },
        PhaseTerm { rate: r2, coeff: c2 },
    ])
    .unwrap()
}

proptest! {
    /// The profile route (weight expansion) and the matrix route
    /// (exponential of the scaled diagonal direction) compute the same
    /// coefficient function.
    #[test]
    fn profile_value_matches_matrix_route(
        theta1 in 0.0..std::f64::consts::TAU,
        theta2 in 0.0..std::f64::consts::TAU,
        t in -2.0..3.0f64,
        k in 1usize..=3,
    ) {
        let rep = build_representation(GroupRepSpec::sl2_sym(k)).unwrap();
        let d = rep.dim();
        let u: Vec<f64> = (0..d).map(|i| 0.5 + 0.3 * i as f64).collect();
        let v: Vec<f64> = (0..d).map(|i| 1.0 - 0.2 * i as f64).collect();
        let r1 = Matrix::rotation2(theta1);
        let r2 = Matrix::rotation2(theta2);
        let profile = bohrlab_core::phase_profile(&rep, &u, &v, &r1, &r2).unwrap();

        let h_mat = rep.weight_system.h_matrix();
        let g = r1.mul(&mat_exp(&h_mat.scale(t)).unwrap()).mul(&r2);
        let direct = matrix_coefficient(&rep, &u, &v, &g).unwrap();
        let bound: f64 = profile
            .terms
            .iter()
            .map(|term| term.coeff.abs() * (term.rate * t).exp())
            .sum();
        prop_assert!(
            (profile.value(t) - direct).abs() < 1e-10 * bound.max(1.0),
            "profile {} direct {}",
            profile.value(t),
            direct
        );
    }

    /// For two terms the dominance threshold has a closed form.
    #[test]
    fn two_term_threshold_matches_closed_form(
        c1 in 0.05..3.0f64,
        c2 in 0.05..3.0f64,
        r1 in 0.2..2.0f64,
        gap in 0.4..2.2f64,
    ) {
        let r2 = r1 - gap;
        let profile = two_term(r1, c1, r2, c2);
        let t0 = find_t0(&profile).unwrap();
        let closed = ((c2 / c1).ln() / gap).max(0.0);
        prop_assert!((t0 - closed).abs() < 1e-5, "t0 {t0} closed {closed}");
    }

    /// The threshold is the first time the top term carries at least half
    /// the mass: strictly dominant after, not before (when interior).
    #[test]
    fn threshold_separates_dominated_from_dominant(
        c1 in 0.05..2.0f64,
        c2 in 0.05..2.0f64,
        c3 in 0.05..2.0f64,
        r1 in 0.8..1.6f64,
    ) {
        let profile = PhaseProfile::new(vec![
            PhaseTerm { rate: r1, coeff: c1 },
            PhaseTerm { rate: 0.1, coeff: c2 },
            PhaseTerm { rate: -1.0, coeff: c3 },
        ])
        .unwrap();
        let t0 = find_t0(&profile).unwrap();
        let gap = |t: f64| {
            c1.abs() * (r1 * t).exp() - c2.abs() * (0.1 * t).exp() - c3.abs() * (-t).exp()
        };
        prop_assert!(gap(t0 + 0.5) > 0.0);
        prop_assert!(gap(t0) >= -1e-4 * c1.max(c2).max(c3));
        if t0 > 0.1 {
            prop_assert!(gap(t0 - 0.1) < 1e-9);
        }
    }
}

/// On a full midpoint grid of rotation pairs, profiles whose top-rate
/// coefficient effectively vanishes (so no dominance threshold exists) are
/// a thin exceptional set.
#[test]
fn degenerate_profiles_are_rare_on_an_angle_grid() {
    let rep = build_representation(GroupRepSpec::sl2_sym(1)).unwrap();
    let u = [1.0, 1.0];
    let v = [1.0, 0.0];
    let n = 64;
    let mut degenerate = 0;
    for a in 0..n {
        for b in 0..n {
            let ta = (a as f64 + 0.5) / n as f64 * std::f64::consts::TAU;
            let tb = (b as f64 + 0.5) / n as f64 * std::f64::consts::TAU;
            let profile = bohrlab_core::phase_profile(
                &rep,
                &u,
                &v,
                &Matrix::rotation2(ta),
                &Matrix::rotation2(tb),
            )
            .unwrap();
            let scale = profile.coeff_scale();
            let top = profile
                .terms
                .iter()
                .max_by(|x, y| x.rate.total_cmp(&y.rate))
                .unwrap();
            if scale == 0.0 || top.coeff.abs() <= NONZERO_COEFF_TOL * scale {
                degenerate += 1;
            }
        }
    }
    assert!(
        degenerate * 20 < n * n,
        "{degenerate} degenerate profiles out of {}",
        n * n
    );
}

/// Past its dominance threshold (and the threshold of its derivative
/// profile), a positive-coefficient phase admits a Hold certificate, and
/// the certified tail integral really is small. The window length is tied
/// to the top rate: the derivative then spans a bounded factor across the
/// window, keeping both the certificate's grid margins and the checking
/// quadrature's panel budget under control.
#[test]
fn tail_integrals_past_the_threshold_are_certified_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(4096);
    for _ in 0..12 {
        let c1: f64 = rng.gen_range(0.2..2.0);
        let c2: f64 = rng.gen_range(0.2..2.0);
        let r1: f64 = rng.gen_range(0.5..1.4);
        let r2: f64 = rng.gen_range(-1.4..-0.5);
        let profile = two_term(r1, c1, r2, c2);
        let deriv_profile = two_term(r1, c1 * r1, r2, c2 * r2);
        let start = find_t0(&profile)
            .unwrap()
            .max(find_t0(&deriv_profile).unwrap())
            + 0.25;
        let end = start + 5.0 / r1;
        let cert = vdc_certify(&ExpSumPhase::new(profile), start, end, 1e-8).unwrap();
        assert_eq!(cert.status, HypothesisStatus::Hold);
        let lambda = cert.lambda_min.unwrap();
        assert!(lambda > 0.0);
        assert!(
            cert.modulus <= CERT_CONSTANT / lambda + cert.integral.error_bound,
            "modulus {} exceeds {} + {}",
            cert.modulus,
            CERT_CONSTANT / lambda,
            cert.integral.error_bound
        );
    }
}

/// The adaptive oscillatory integral agrees with brute-force quadrature on
/// a short window.
#[test]
fn oscillatory_integral_matches_brute_force_on_short_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(555);
    for _ in 0..6 {
        let c1: f64 = rng.gen_range(0.3..1.5);
        let c2: f64 = rng.gen_range(0.3..1.5);
        let profile = two_term(1.1, c1, -0.8, c2);
        let phase = ExpSumPhase::new(profile.clone());
        let (a, b) = (0.5, 5.5);
        let result = oscillatory_integral(&phase, a, b, 1e-9).unwrap();
        // Composite Simpson on the real and imaginary parts.
        let n = 200_000usize;
        let h = (b - a) / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..=n {
            let t = a + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * Complex64::from_polar(1.0, profile.value(t));
        }
        acc *= h / 3.0;
        let diff = (result.value - acc).norm();
        assert!(
            diff <= result.error_bound + 1e-7,
            "diff {diff} bound {}",
            result.error_bound
        );
    }
}
