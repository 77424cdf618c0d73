//! Sampling of orbit-supported measures and their empirical Fourier
//! transforms.
//!
//! The measure on a module orbit is the image of rotation x time x rotation
//! averaging under (k, t, k2) -> k exp(tH) k2 . v with t uniform on
//! [0, t_max]. Two samplers are provided: a tensor quadrature grid (midpoint
//! in every factor, available when the rotation group is the circle) and a
//! seeded Monte Carlo draw whose stream layout is fixed so results never
//! depend on scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::haar::sample_haar_rotation;
use crate::matrix::{dot, require_finite_vec, Matrix};
use crate::rep::{build_representation, GroupRepSpec, Representation};

/// How to discretize the (k, t, k2) average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SamplingMode {
    /// Midpoint grids: `angle_points` per rotation circle, `time_points` on
    /// [0, t_max]. Only available when the group's rotations form a circle.
    Quadrature {
        angle_points: usize,
        time_points: usize,
    },
    /// Seeded draws: rotations from stream 0, times from stream 1 of the
    /// same generator, so either marginal can be varied independently.
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct OrbitMeasureParams {
    pub spec: GroupRepSpec,
    /// Base vector of the orbit, in module coordinates.
    pub v: Vec<f64>,
    /// Upper end of the uniform time window.
    pub t_max: f64,
    pub mode: SamplingMode,
}

/// One sampled point of the orbit measure.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OrbitPoint {
    pub coords: Vec<f64>,
    /// The time coordinate that produced the point.
    pub t: f64,
}

/// Empirical Fourier transform at one frequency.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FourierEstimate {
    pub value: Complex64,
    /// Standard error for Monte Carlo data; a half-resolution Richardson
    /// estimate for quadrature data.
    pub error_estimate: f64,
    pub n_points: usize,
}

pub(crate) fn validate_t_max(t_max: f64) -> Result<()> {
    if !t_max.is_finite() {
        return Err(Error::NonFinite);
    }
    if t_max <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "time window must be positive, got {t_max}"
        )));
    }
    Ok(())
}

pub(crate) fn validate_module_vector(rep: &Representation, v: &[f64]) -> Result<()> {
    if v.len() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            found: v.len(),
        });
    }
    require_finite_vec(v)
}

/// The point k exp(tH) k2 . v, computed through the module: the diagonal
/// flow acts coordinatewise with the weight-system rates, so only the two
/// rotations need full matrix action.
pub fn orbit_point(
    rep: &Representation,
    v: &[f64],
    k: &Matrix,
    t: f64,
    k2: &Matrix,
) -> Result<OrbitPoint> {
    validate_module_vector(rep, v)?;
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let rates = rep.weight_system.coordinate_rates();
    let rk = rep.act(k)?;
    let rk2 = rep.act(k2)?;
    let mut mid = rk2.matvec(v);
    for (x, r) in mid.iter_mut().zip(&rates) {
        *x *= (r * t).exp();
    }
    Ok(OrbitPoint {
        coords: rk.matvec(&mid),
        t,
    })
}

/// Whether the family's rotation subgroup is the circle, which is what the
/// tensor quadrature grid parametrizes.
pub(crate) fn circle_rotations(spec: GroupRepSpec) -> bool {
    spec.group_dim() == 2
}

/// Materialize the sample of the orbit measure described by `params`.
pub fn sample_orbit(params: &OrbitMeasureParams) -> Result<Vec<OrbitPoint>> {
    let rep = build_representation(params.spec)?;
    validate_module_vector(&rep, &params.v)?;
    validate_t_max(params.t_max)?;
    match params.mode {
        SamplingMode::Quadrature {
            angle_points,
            time_points,
        } => {
            if angle_points == 0 || time_points == 0 {
                return Err(Error::InvalidArgument(
                    "quadrature grids need at least one point per factor".into(),
                ));
            }
            if !circle_rotations(params.spec) {
                return Err(Error::InvalidArgument(
                    "angle grids parametrize only circle rotations; use Monte Carlo".into(),
                ));
            }
            let tau = std::f64::consts::TAU;
            let rotations: Vec<Matrix> = (0..angle_points)
                .map(|a| Matrix::rotation2(tau * a as f64 / angle_points as f64))
                .collect();
            let mut points =
                Vec::with_capacity(angle_points * angle_points * time_points);
            for k in &rotations {
                for k2 in &rotations {
                    for l in 0..time_points {
                        let t = (l as f64 + 0.5) * params.t_max / time_points as f64;
                        points.push(orbit_point(&rep, &params.v, k, t, k2)?);
                    }
                }
            }
            Ok(points)
        }
        SamplingMode::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::InvalidArgument(
                    "need at least two samples".into(),
                ));
            }
            let n = rep.group_dim();
            let mut rng_k = ChaCha8Rng::seed_from_u64(seed);
            rng_k.set_stream(0);
            let mut rng_t = ChaCha8Rng::seed_from_u64(seed);
            rng_t.set_stream(1);
            let mut points = Vec::with_capacity(samples);
            for _ in 0..samples {
                let k = sample_haar_rotation(n, &mut rng_k)?;
                let k2 = sample_haar_rotation(n, &mut rng_k)?;
                let t = rng_t.gen::<f64>() * params.t_max;
                points.push(orbit_point(&rep, &params.v, &k, t, &k2)?);
            }
            Ok(points)
        }
    }
}

pub(crate) fn cis(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}

/// Standard error of the mean of unit-modulus samples: the population
/// variance of e^{i phi} is exactly 1 - |mean|^2.
pub(crate) fn unit_sample_std_error(mean_modulus: f64, n: usize) -> f64 {
    let var = (1.0 - mean_modulus * mean_modulus).max(0.0);
    (var / (n - 1) as f64).sqrt()
}

/// Empirical Fourier transform (1/N) sum_j e^{i <u, x_j>} of a sample.
pub fn empirical_fourier(points: &[OrbitPoint], u: &[f64]) -> Result<FourierEstimate> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two points for an estimate".into(),
        ));
    }
    require_finite_vec(u)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in points {
        if p.coords.len() != u.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                found: p.coords.len(),
            });
        }
        acc += cis(dot(u, &p.coords));
    }
    let value = acc / points.len() as f64;
    Ok(FourierEstimate {
        value,
        error_estimate: unit_sample_std_error(value.norm(), points.len()),
        n_points: points.len(),
    })
}
