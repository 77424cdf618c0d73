//! Expansion of one matrix coefficient in left translates of another.
//!
//! Replacing the functional u by rho(g_i)^T u is the same as translating
//! the coefficient function g -> <u, rho(g) v> on the left by g_i. When the
//! translated functionals span the dual module, every coefficient with the
//! same vector v is a finite combination of translates of a single one. The
//! expansion is found by a greedy max-residual scan of a fixed candidate
//! pool (deterministic, reasonably conditioned) and then certified by
//! evaluating both sides of the claimed identity at seeded random group
//! elements, which exercises the function identity rather than the solve.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expm::mat_exp;
use crate::haar::sample_haar_rotation;
use crate::matrix::{dot, norm, require_finite_vec, Matrix};
use crate::rep::{matrix_coefficient, Representation};

/// Coefficients at or below this magnitude are dropped from the expansion.
pub const PRUNE_TOL: f64 = 1e-12;

/// Largest deviation allowed at any certification sample.
pub const CERT_TOL: f64 = 1e-8;

/// Number of seeded random group elements the identity is checked at.
pub const CERT_SAMPLES: usize = 100;

/// Relative residual below which a candidate adds no new direction.
const RANK_TOL: f64 = 1e-10;

const CERT_SEED: u64 = 0x7ab5;

#[derive(Debug, Clone, serde::Serialize)]
pub struct TranslateExpansion {
    /// Selected translating group elements.
    pub translations: Vec<Matrix>,
    /// Coefficient of each translate.
    pub coefficients: Vec<f64>,
    /// Largest deviation observed during certification.
    pub certified_residual: f64,
}

/// Fixed candidate pool: identity, plane rotations at eighth-circle angles,
/// short diagonal flows, and rotation-flow products.
fn candidate_pool(rep: &Representation) -> Vec<Matrix> {
    let n = rep.group_dim();
    let tau = std::f64::consts::TAU;
    let mut rotations = Vec::new();
    if n == 2 {
        for j in 0..16 {
            rotations.push(Matrix::rotation2(tau * j as f64 / 16.0));
        }
    } else {
        for p in 0..n {
            for q in p + 1..n {
                for j in 1..8 {
                    rotations.push(Matrix::givens(n, p, q, tau * j as f64 / 8.0));
                }
            }
        }
    }
    let hm = rep.weight_system.h_matrix();
    let flows: Vec<Matrix> = [0.25, 0.5, -0.25, -0.5]
        .iter()
        .map(|&s| mat_exp(&hm.scale(s)).expect("diagonal flow is entrywise"))
        .collect();
    let mut pool = vec![Matrix::identity(n)];
    pool.extend(rotations.iter().cloned());
    pool.extend(flows.iter().cloned());
    for r in &rotations {
        for f in &flows {
            pool.push(r.mul(f));
        }
    }
    pool
}

/// Greedy max-residual selection of pool elements whose pulled-back
/// functionals rho(g)^T u span the dual module.
fn select_spanning_translates(
    rep: &Representation,
    u: &[f64],
    pool: &[Matrix],
) -> Result<(Vec<Matrix>, Vec<Vec<f64>>)> {
    let d = rep.dim();
    let columns: Vec<Vec<f64>> = pool
        .iter()
        .map(|g| Ok(rep.act(g)?.vecmat(u)))
        .collect::<Result<_>>()?;
    let scale = columns.iter().map(|c| norm(c)).fold(0.0, f64::max);
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    let mut picked: Vec<usize> = Vec::new();
    while picked.len() < d {
        let mut best: Option<(usize, Vec<f64>, f64)> = None;
        for (idx, col) in columns.iter().enumerate() {
            if picked.contains(&idx) {
                continue;
            }
            let mut r = col.clone();
            for q in &ortho {
                let proj = dot(q, &r);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= proj * qi;
                }
            }
            let score = norm(&r);
            if best.as_ref().map_or(true, |(_, _, s)| score > *s) {
                best = Some((idx, r, score));
            }
        }
        let (idx, residual, score) = best.expect("pool exceeds module dimension");
        if score <= RANK_TOL * scale {
            return Err(Error::SpanSearchExhausted {
                achieved: picked.len(),
                needed: d,
            });
        }
        ortho.push(residual.iter().map(|x| x / score).collect());
        picked.push(idx);
    }
    Ok((
        picked.iter().map(|&i| pool[i].clone()).collect(),
        picked.iter().map(|&i| columns[i].clone()).collect(),
    ))
}

/// Express g -> <target, rho(g) v> as a combination of left translates of
/// g -> <u, rho(g) v>, then certify the identity at random group elements.
pub fn translate_expansion(
    rep: &Representation,
    u: &[f64],
    v: &[f64],
    target: &[f64],
) -> Result<TranslateExpansion> {
    let d = rep.dim();
    for w in [u, v, target] {
        if w.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: w.len(),
            });
        }
        require_finite_vec(w)?;
    }
    if norm(u) == 0.0 {
        return Err(Error::InvalidArgument(
            "cannot expand translates of the zero coefficient".into(),
        ));
    }

    let pool = candidate_pool(rep);
    let (translations, columns) = select_spanning_translates(rep, u, &pool)?;

    // Solve sum_i c_i rho(g_i)^T u = target.
    let mut w = Matrix::zeros(d, d);
    for (i, col) in columns.iter().enumerate() {
        w.set_column(i, col);
    }
    let coefficients = w.solve_vec(target)?;

    let (translations, coefficients): (Vec<Matrix>, Vec<f64>) = translations
        .into_iter()
        .zip(coefficients)
        .filter(|(_, c)| c.abs() > PRUNE_TOL)
        .unzip();

    let n = rep.group_dim();
    let hm = rep.weight_system.h_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(CERT_SEED);
    let mut residual = 0.0f64;
    for _ in 0..CERT_SAMPLES {
        let k = sample_haar_rotation(n, &mut rng)?;
        let k2 = sample_haar_rotation(n, &mut rng)?;
        let s = 2.0 * rng.gen::<f64>() - 1.0;
        let g = k.mul(&mat_exp(&hm.scale(s))?).mul(&k2);
        let lhs = matrix_coefficient(rep, target, v, &g)?;
        let mut rhs = 0.0;
        for (gi, c) in translations.iter().zip(&coefficients) {
            rhs += c * matrix_coefficient(rep, u, v, &gi.mul(&g))?;
        }
        residual = residual.max((lhs - rhs).abs());
    }
    if residual > CERT_TOL {
        return Err(Error::CertificationFailed {
            residual,
            tolerance: CERT_TOL,
        });
    }
    Ok(TranslateExpansion {
        translations,
        coefficients,
        certified_residual: residual,
    })
}
