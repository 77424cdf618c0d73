//! Orbits of unipotent one-parameter flows and their torus statistics.
//!
//! For a nilpotent generator the exponential series terminates, so the
//! orbit curve t -> exp(tX) v has exactly polynomial coordinates and can be
//! handled symbolically: constant coordinates are read off the coefficient
//! lists (giving the affine constraints of the orbit's hull exactly), the
//! hull dimension comes from the rank of centered samples, and fractional
//! parts of scaled coordinates are evaluated by a double-double Horner
//! scheme so that mod-1 reduction stays exact even when the polynomial
//! values are far beyond the 2^52 rounding scale.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::matrix::{require_finite_vec, Matrix};
use crate::svd::svd;
use crate::torus::{weyl_sum, WeylSumReport};

/// Relative singular-value cutoff in the hull rank computation.
const HULL_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct UnipotentOrbitSpec {
    /// Nilpotent generator; its power chain must reach an exact zero.
    pub nilpotent: Matrix,
    /// Starting vector of the orbit.
    pub base: Vec<f64>,
    /// One frequency per moving coordinate, applied before mod-1 reduction.
    pub scalings: Vec<f64>,
    /// Integer modes to probe, one entry per moving coordinate.
    pub modes: Vec<Vec<i64>>,
    /// Number of sample times.
    pub samples: usize,
    /// Spacing of the sample times t_j = j * step.
    pub step: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct UnipotentReport {
    /// Smallest power of the generator that vanishes.
    pub degree: usize,
    /// Dimension of the affine hull of the orbit curve.
    pub hull_dim: usize,
    /// Coordinates that are constant along the orbit, with their values;
    /// detected exactly from the polynomial coefficients.
    pub constant_coords: Vec<(usize, f64)>,
    pub weyl: Vec<WeylSumReport>,
    /// Largest modulus among the probed nonzero modes.
    pub max_nonzero_modulus: f64,
    pub n_points: usize,
}

/// Coefficient lists of the orbit coordinates: entry [i][k] multiplies t^k
/// in coordinate i. Exact finite series, no truncation.
pub fn orbit_polynomials(nilpotent: &Matrix, base: &[f64]) -> Result<Vec<Vec<f64>>> {
    let d = nilpotent.require_square()?;
    nilpotent.require_finite()?;
    if base.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: base.len(),
        });
    }
    require_finite_vec(base)?;
    let mut power = Matrix::identity(d);
    let mut degree = None;
    let mut terms: Vec<Vec<f64>> = Vec::new();
    for k in 0..=d {
        if power.max_abs() == 0.0 {
            degree = Some(k);
            break;
        }
        let mut w = power.matvec(base);
        let factorial: f64 = (1..=k).map(|i| i as f64).product();
        for x in &mut w {
            *x /= factorial;
        }
        terms.push(w);
        power = power.mul(nilpotent);
    }
    if degree.is_none() {
        return Err(Error::NotNilpotent { dim: d });
    }
    let mut polys = vec![Vec::new(); d];
    for (k, term) in terms.iter().enumerate() {
        for (i, &c) in term.iter().enumerate() {
            if c != 0.0 {
                while polys[i].len() <= k {
                    polys[i].push(0.0);
                }
                polys[i][k] = c;
            }
        }
    }
    for poly in &mut polys {
        if poly.is_empty() {
            poly.push(0.0);
        }
    }
    Ok(polys)
}

fn eval_poly(coefs: &[f64], t: f64) -> f64 {
    coefs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

/// frac(scale * p(t)) with the product and the Horner recursion carried in
/// double-double precision.
fn frac_scaled_poly(coefs: &[Dd], t: f64) -> f64 {
    let mut acc = Dd::from_f64(0.0);
    for c in coefs.iter().rev() {
        acc = acc.mul_f64(t).add(*c);
    }
    acc.frac().to_f64()
}

/// Nilpotency index: smallest m with X^m = 0 (exactly).
fn nilpotency_degree(nilpotent: &Matrix) -> Result<usize> {
    let d = nilpotent.require_square()?;
    let mut power = Matrix::identity(d);
    for k in 0..=d {
        if power.max_abs() == 0.0 {
            return Ok(k);
        }
        power = power.mul(nilpotent);
    }
    Err(Error::NotNilpotent { dim: d })
}

fn hull_dimension(polys: &[Vec<f64>], degree: usize) -> Result<usize> {
    let d = polys.len();
    let sample_count = degree + 1;
    let base_point: Vec<f64> = polys.iter().map(|p| eval_poly(p, 0.0)).collect();
    let mut diffs = Matrix::zeros(sample_count, d);
    for s in 0..sample_count {
        let t = (s + 1) as f64;
        for i in 0..d {
            diffs[(s, i)] = eval_poly(&polys[i], t) - base_point[i];
        }
    }
    let tall = if sample_count < d {
        diffs.transpose()
    } else {
        diffs
    };
    let (_, sigma, _) = svd(&tall)?;
    let smax = sigma[0];
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(sigma.iter().filter(|&&s| s > HULL_RANK_TOL * smax).count())
}

/// Run the unipotent orbit experiment: exact polynomial coordinates, exact
/// affine constraints, and Weyl sums of the scaled moving coordinates.
pub fn unipotent_orbit_experiment(spec: &UnipotentOrbitSpec) -> Result<UnipotentReport> {
    if spec.samples < 2 {
        return Err(Error::InvalidArgument(
            "need at least two sample times".into(),
        ));
    }
    if !spec.step.is_finite() || spec.step <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "step must be positive and finite, got {}",
            spec.step
        )));
    }
    require_finite_vec(&spec.scalings)?;
    let polys = orbit_polynomials(&spec.nilpotent, &spec.base)?;
    let degree = nilpotency_degree(&spec.nilpotent)?;

    let mut constant_coords = Vec::new();
    let mut moving = Vec::new();
    for (i, poly) in polys.iter().enumerate() {
        if poly.len() <= 1 {
            constant_coords.push((i, poly.first().copied().unwrap_or(0.0)));
        } else {
            moving.push(i);
        }
    }
    if spec.scalings.len() != moving.len() {
        return Err(Error::DimensionMismatch {
            expected: moving.len(),
            found: spec.scalings.len(),
        });
    }
    for mode in &spec.modes {
        if mode.len() != moving.len() {
            return Err(Error::DimensionMismatch {
                expected: moving.len(),
                found: mode.len(),
            });
        }
    }

    let hull_dim = hull_dimension(&polys, degree)?;

    // Scaled coefficient lists in double-double form, one per moving
    // coordinate.
    let scaled: Vec<Vec<Dd>> = moving
        .iter()
        .zip(&spec.scalings)
        .map(|(&i, &alpha)| {
            polys[i]
                .iter()
                .map(|&c| Dd::from_prod(alpha, c))
                .collect()
        })
        .collect();

    let points: Vec<Vec<f64>> = (0..spec.samples)
        .map(|j| {
            let t = j as f64 * spec.step;
            scaled.iter().map(|coefs| frac_scaled_poly(coefs, t)).collect()
        })
        .collect();

    let mut weyl = Vec::with_capacity(spec.modes.len());
    let mut max_nonzero = 0.0f64;
    for mode in &spec.modes {
        let report = weyl_sum(&points, mode)?;
        if mode.iter().any(|&m| m != 0) {
            max_nonzero = max_nonzero.max(report.modulus);
        }
        weyl.push(report);
    }
    Ok(UnipotentReport {
        degree,
        hull_dim,
        constant_coords,
        weyl,
        max_nonzero_modulus: max_nonzero,
        n_points: spec.samples,
    })
}
