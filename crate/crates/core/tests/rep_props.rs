//! Property tests for the representation layer: the homomorphism law, the
//! dual pairing, the infinitesimal action, weight projectors, and the
//! diagonal flow acting through the weight expansion.

use bohrlab_core::matrix::Matrix;
use bohrlab_core::rep::{build_representation, GroupRepSpec};
use bohrlab_core::{mat_exp, orbit_point, sample_haar_rotation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_specs() -> Vec<GroupRepSpec> {
    let mut specs: Vec<GroupRepSpec> = (1..=6).map(GroupRepSpec::sl2_sym).collect();
    specs.extend((2..=4).map(GroupRepSpec::sln_standard));
    specs
}

#[test]
fn action_respects_products_on_many_rotation_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for spec in all_specs() {
        let rep = build_representation(spec).unwrap();
        let side = spec.group_dim();
        for _ in 0..60 {
            let g = sample_haar_rotation(side, &mut rng).unwrap();
            let h = sample_haar_rotation(side, &mut rng).unwrap();
            let lhs = rep.act(&g.mul(&h)).unwrap();
            let rhs = rep.act(&g).unwrap().mul(&rep.act(&h).unwrap());
            let defect = lhs.max_abs_diff(&rhs);
            assert!(defect < 1e-8, "{spec:?}: product defect {defect}");
        }
    }
}

#[test]
fn action_respects_products_on_flow_rotation_mixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for spec in [GroupRepSpec::sl2_sym(3), GroupRepSpec::sln_standard(3)] {
        let rep = build_representation(spec).unwrap();
        let side = spec.group_dim();
        let h_mat = rep.weight_system.h_matrix();
        for _ in 0..40 {
            let k = sample_haar_rotation(side, &mut rng).unwrap();
            let s: f64 = rng.gen_range(-1.5..1.5);
            let flow = mat_exp(&h_mat.scale(s)).unwrap();
            let g = k.mul(&flow);
            let lhs = rep.act(&g).unwrap();
            let rhs = rep.act(&k).unwrap().mul(&rep.act(&flow).unwrap());
            let scale = rhs.max_abs().max(1.0);
            assert!(lhs.max_abs_diff(&rhs) < 1e-8 * scale);
        }
    }
}

#[test]
fn dual_action_preserves_the_pairing() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in all_specs() {
        let rep = build_representation(spec).unwrap();
        let d = rep.dim();
        let side = spec.group_dim();
        for _ in 0..25 {
            let g = sample_haar_rotation(side, &mut rng).unwrap();
            let u: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let gu = rep.act_dual(&g).unwrap().matvec(&u);
            let gv = rep.act(&g).unwrap().matvec(&v);
            let before: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            let after: f64 = gu.iter().zip(&gv).map(|(a, b)| a * b).sum();
            assert!((before - after).abs() < 1e-9 * before.abs().max(1.0));
        }
    }
}

#[test]
fn infinitesimal_action_matches_difference_quotients() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let eps = 1e-4;
    for spec in [
        GroupRepSpec::sl2_sym(1),
        GroupRepSpec::sl2_sym(4),
        GroupRepSpec::sln_standard(3),
    ] {
        let rep = build_representation(spec).unwrap();
        let side = spec.group_dim();
        for _ in 0..20 {
            let mut x = Matrix::zeros(side, side);
            for i in 0..side {
                for j in 0..side {
                    x[(i, j)] = rng.gen_range(-1.0..1.0);
                }
            }
            let trace: f64 = (0..side).map(|i| x[(i, i)]).sum();
            for i in 0..side {
                x[(i, i)] -= trace / side as f64;
            }
            let plus = rep.act(&mat_exp(&x.scale(eps)).unwrap()).unwrap();
            let minus = rep.act(&mat_exp(&x.scale(-eps)).unwrap()).unwrap();
            let quotient = plus.sub(&minus).scale(0.5 / eps);
            let exact = rep.lie_act(&x).unwrap();
            let scale = exact.max_abs().max(1.0);
            assert!(
                quotient.max_abs_diff(&exact) < 1e-6 * scale,
                "{spec:?}: {}",
                quotient.max_abs_diff(&exact)
            );
        }
    }
}

#[test]
fn weight_projectors_resolve_the_identity_exactly() {
    for spec in all_specs() {
        let rep = build_representation(spec).unwrap();
        let ws = &rep.weight_system;
        let d = rep.dim();
        let mut sum = Matrix::zeros(d, d);
        for p in &ws.projectors {
            sum = sum.add(p);
        }
        assert_eq!(sum.max_abs_diff(&Matrix::identity(d)), 0.0);
        for (i, p) in ws.projectors.iter().enumerate() {
            assert_eq!(p.mul(p).max_abs_diff(p), 0.0, "{spec:?}: projector {i} not idempotent");
            for (j, q) in ws.projectors.iter().enumerate() {
                if i != j {
                    assert_eq!(p.mul(q).max_abs(), 0.0, "{spec:?}: projectors {i},{j} overlap");
                }
            }
        }
    }
}

#[test]
fn diagonal_flow_acts_through_the_weight_expansion() {
    for spec in [GroupRepSpec::sl2_sym(3), GroupRepSpec::sln_standard(4)] {
        let rep = build_representation(spec).unwrap();
        let ws = &rep.weight_system;
        let d = rep.dim();
        let h_mat = ws.h_matrix();
        for step in -6..=6 {
            let t = step as f64 * 0.5;
            let flowed = rep.act(&mat_exp(&h_mat.scale(t)).unwrap()).unwrap();
            let mut expansion = Matrix::zeros(d, d);
            for (idx, p) in ws.projectors.iter().enumerate() {
                expansion = expansion.add(&p.scale((ws.rate(idx) * t).exp()));
            }
            let scale = expansion.max_abs().max(1.0);
            assert!(flowed.max_abs_diff(&expansion) < 1e-9 * scale);
        }
    }
}

#[test]
fn power_family_weights_are_closed_under_negation() {
    for k in 1..=6 {
        let rep = build_representation(GroupRepSpec::sl2_sym(k)).unwrap();
        let h = vec![1.0];
        let mut rates: Vec<f64> = rep
            .weight_system
            .weights
            .iter()
            .map(|w| w.iter().zip(&h).map(|(a, b)| a * b).sum())
            .collect();
        rates.sort_by(f64::total_cmp);
        let n = rates.len();
        for i in 0..n {
            assert_eq!(rates[i], -rates[n - 1 - i], "k={k}");
        }
    }
}

#[test]
fn standard_family_weights_sum_to_zero() {
    for n in 2..=4 {
        let rep = build_representation(GroupRepSpec::sln_standard(n)).unwrap();
        let dim = rep.weight_system.cartan_basis.len();
        let mut total = vec![0.0; dim];
        for w in &rep.weight_system.weights {
            for (t, &c) in total.iter_mut().zip(w) {
                *t += c;
            }
        }
        // The weights of the coordinate module sum to the trace functional,
        // which vanishes on the traceless diagonal.
        let h: Vec<f64> = (0..dim).map(|i| 0.37 + 0.21 * i as f64).collect();
        let paired: f64 = total.iter().zip(&h).map(|(a, b)| a * b).sum();
        assert!(paired.abs() < 1e-12, "n={n}: {paired}");
    }
}

#[test]
fn orbit_norms_grow_without_bound_along_the_flow() {
    let rep = build_representation(GroupRepSpec::sl2_sym(1)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    let k = sample_haar_rotation(2, &mut rng).unwrap();
    let k2 = sample_haar_rotation(2, &mut rng).unwrap();
    let v = [1.0, 0.0];
    let mut last = 0.0;
    for &t in &[5.0, 10.0, 20.0, 30.0] {
        let p = orbit_point(&rep, &v, &k, t, &k2).unwrap();
        let norm = p.coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(norm > last, "norm not growing at t={t}");
        last = norm;
    }
    assert!(last > 1e8, "final norm {last}");
}
