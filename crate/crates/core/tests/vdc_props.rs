//! Property tests for oscillatory integrals and first-derivative-test
//! certificates: the classical sharp bound on a large seeded family, a
//! quadratic-phase reference value, exact symmetry laws, and honesty of
//! the interval derivative bounds.

use bohrlab_core::vdc::{ExpSumPhase, LinearPhase, Phase, QuadraticPhase};
use bohrlab_core::{find_t0, oscillatory_integral, vdc_certify, HypothesisStatus, PhaseProfile, PhaseTerm};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn profile(terms: &[(f64, f64)]) -> PhaseProfile {
    PhaseProfile::new(
        terms
            .iter()
            .map(|&(rate, coeff)| PhaseTerm { rate, coeff })
            .collect(),
    )
    .unwrap()
}

/// lambda * |integral| <= 2 is the classical sharp constant for a monotone
/// derivative bounded below by lambda. Every certified window in a large
/// seeded family must obey it (up to quadrature error), which pins the
/// certificate's constant 3 as genuinely conservative.
#[test]
fn thousand_two_term_phases_obey_the_sharp_first_derivative_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
    let mut certified = 0;
    while certified < 1000 {
        let c1: f64 = rng.gen_range(0.1..2.0);
        let c2: f64 = rng.gen_range(0.1..2.0);
        let r1: f64 = rng.gen_range(0.3..1.5);
        let r2: f64 = rng.gen_range(-1.5..-0.3);
        let p = profile(&[(r1, c1), (r2, c2)]);
        let dp = profile(&[(r1, c1 * r1), (r2, c2 * r2)]);
        let start = find_t0(&p).unwrap().max(find_t0(&dp).unwrap()) + 0.3;
        // The derivative spans a factor e^5 over this window, which keeps
        // the grid Lipschitz margins small against the minima while still
        // being genuinely oscillatory at the far end.
        let end = start + 5.0 / r1;
        let cert = vdc_certify(&ExpSumPhase::new(p), start, end, 1e-9).unwrap();
        assert_eq!(cert.status, HypothesisStatus::Hold);
        let lambda = cert.lambda_min.unwrap();
        assert!(
            lambda * cert.modulus <= 2.0 + lambda * cert.integral.error_bound + 1e-9,
            "sharp bound violated: lambda {lambda} modulus {}",
            cert.modulus
        );
        certified += 1;
    }
}

/// A pure linear phase integrates in closed form; the adaptive integral
/// must land within machine precision of it.
#[test]
fn linear_phase_integral_matches_closed_form() {
    for &(omega, a, b) in &[(3.0, 0.0, 2.0), (-11.5, -1.0, 4.0), (0.37, 2.0, 9.0)] {
        let phase = LinearPhase { omega, offset: 0.4 };
        let result = oscillatory_integral(&phase, a, b, 1e-10).unwrap();
        let i = Complex64::i();
        let closed = (Complex64::from_polar(1.0, omega * b + 0.4)
            - Complex64::from_polar(1.0, omega * a + 0.4))
            / (i * omega);
        assert!(
            (result.value - closed).norm() <= result.error_bound + 1e-9,
            "omega {omega}: {} vs {closed}",
            result.value
        );
    }
}

/// Quadratic phase on a long window against a dense Simpson reference.
#[test]
fn quadratic_phase_long_window_matches_dense_reference() {
    let phase = QuadraticPhase {
        accel: 1.0,
        omega: 0.0,
        offset: 0.0,
    };
    let (a, b) = (1.0, 100.0);
    let result = oscillatory_integral(&phase, a, b, 1e-7).unwrap();
    let n = 2_000_000usize;
    let h = (b - a) / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for idx in 0..=n {
        let t = a + idx as f64 * h;
        let w = if idx == 0 || idx == n {
            1.0
        } else if idx % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * Complex64::from_polar(1.0, 0.5 * t * t);
    }
    acc *= h / 3.0;
    let diff = (result.value - acc).norm();
    assert!(diff <= 1e-6, "difference {diff}");
    assert!(result.error_bound <= 1e-7 * 1.0001);
}

/// Shifting a linear phase's offset multiplies the integral by a unit
/// complex number, exactly mirrored by the implementation.
#[test]
fn constant_offset_rotates_the_integral() {
    let base = LinearPhase {
        omega: 7.3,
        offset: 0.0,
    };
    let shifted = LinearPhase {
        omega: 7.3,
        offset: 1.9,
    };
    let i0 = oscillatory_integral(&base, 0.5, 6.5, 1e-10).unwrap();
    let i1 = oscillatory_integral(&shifted, 0.5, 6.5, 1e-10).unwrap();
    let rotated = i0.value * Complex64::from_polar(1.0, 1.9);
    assert!((i1.value - rotated).norm() < 1e-12);
}

/// Negating the frequency conjugates the integral exactly: the panel sums
/// are mirror images term by term.
#[test]
fn negated_frequency_conjugates_the_integral() {
    for &omega in &[2.0, 17.5, 123.0] {
        let plus = oscillatory_integral(&LinearPhase { omega, offset: 0.0 }, 0.0, 3.0, 1e-9)
            .unwrap();
        let minus = oscillatory_integral(
            &LinearPhase {
                omega: -omega,
                offset: 0.0,
            },
            0.0,
            3.0,
            1e-9,
        )
        .unwrap();
        assert_eq!(plus.value.re, minus.value.re);
        assert_eq!(plus.value.im, -minus.value.im);
    }
}

proptest! {
    /// Interval bounds for the second and third derivative really dominate
    /// sampled derivative values for exponential-sum phases.
    #[test]
    fn derivative_bounds_dominate_samples(
        c1 in -2.0..2.0f64,
        c2 in -2.0..2.0f64,
        r1 in -1.5..1.5f64,
        r2 in -1.5..1.5f64,
        a in -2.0..1.0f64,
        len in 0.5..4.0f64,
    ) {
        prop_assume!((r1 - r2).abs() > 1e-6);
        prop_assume!(c1.abs() > 1e-3 && c2.abs() > 1e-3);
        let phase = ExpSumPhase::new(profile(&[(r1, c1), (r2, c2)]));
        let b = a + len;
        let bound2 = phase.deriv2_abs_bound(a, b);
        let bound3 = phase.deriv3_abs_bound(a, b);
        for i in 0..=40 {
            let t = a + len * i as f64 / 40.0;
            prop_assert!(phase.deriv2(t).abs() <= bound2 * (1.0 + 1e-12));
            let d3 = {
                // Exact third derivative of the exponential sum.
                c1 * r1.powi(3) * (r1 * t).exp() + c2 * r2.powi(3) * (r2 * t).exp()
            };
            prop_assert!(d3.abs() <= bound3 * (1.0 + 1e-12));
        }
    }

    /// Splitting the interval is consistent: the two halves sum to the
    /// whole within the combined error bounds.
    #[test]
    fn interval_additivity_within_error_bounds(
        omega in 5.0..60.0f64,
        accel in 0.5..5.0f64,
        mid in 1.0..4.0f64,
    ) {
        let phase = QuadraticPhase { accel, omega, offset: 0.1 };
        let whole = oscillatory_integral(&phase, 0.0, 5.0, 1e-8).unwrap();
        let left = oscillatory_integral(&phase, 0.0, mid, 1e-8).unwrap();
        let right = oscillatory_integral(&phase, mid, 5.0, 1e-8).unwrap();
        let diff = (whole.value - left.value - right.value).norm();
        let budget = whole.error_bound + left.error_bound + right.error_bound;
        prop_assert!(diff <= budget + 1e-12, "diff {diff} budget {budget}");
    }
}
