//! Convergence sweeps: the empirical Fourier transform of the orbit measure
//! at one frequency, tracked across a growing schedule of time windows.
//!
//! The quadrature path exploits that for fixed rotations (k, k2) the phase
//! t -> <u, k exp(tH) k2 v> is a short exponential sum whose coefficients
//! depend only on the rotation pair. Exponential tables over the time grid
//! are shared by every pair, so the inner loop is a handful of multiplies
//! per sample. The Monte Carlo path draws fresh rotation pairs per sample
//! from a fixed stream layout. Both paths reduce partial sums over a
//! deterministic pairwise tree, so results are bitwise independent of how
//! many workers run the loops.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::haar::sample_haar_rotation;
use crate::matrix::{dot, require_finite_vec, Matrix};
use crate::orbit::{
    circle_rotations, cis, orbit_point, unit_sample_std_error, validate_module_vector,
    FourierEstimate,
};
use crate::rep::Representation;

/// Modulus below which the largest-window estimate counts as decayed.
pub const DECAY_THRESHOLD: f64 = 0.1;

/// Samples per Monte Carlo chunk; chunks own fixed generator streams, so
/// the split is part of the result's definition, not a tuning knob.
const MC_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SweepBudget {
    /// Midpoint angle grids with a time grid scaled to the window: a window
    /// of length T gets ceil(T * time_points_per_unit) midpoints.
    Quadrature {
        angle_points: usize,
        time_points_per_unit: usize,
    },
    /// Fixed number of seeded draws per window.
    MonteCarlo { samples_per_t: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DecayVerdict {
    /// The last window improved on the first and sits below threshold.
    Decays,
    /// The last window is above threshold and no better than the first.
    Fails,
    /// Neither pattern is clear at this budget.
    Inconclusive,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ConvergenceReport {
    pub schedule: Vec<f64>,
    pub estimates: Vec<FourierEstimate>,
    pub threshold: f64,
    pub verdict: DecayVerdict,
}

impl ConvergenceReport {
    pub fn moduli(&self) -> Vec<f64> {
        self.estimates.iter().map(|e| e.value.norm()).collect()
    }
}

/// Fixed-shape pairwise reduction; the tree depends only on the length.
fn tree_sum(mut values: Vec<Complex64>) -> Complex64 {
    if values.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    while values.len() > 1 {
        values = values
            .chunks(2)
            .map(|c| if c.len() == 2 { c[0] + c[1] } else { c[0] })
            .collect();
    }
    values[0]
}

fn classify(moduli: &[f64], last_error: f64) -> DecayVerdict {
    let first = moduli[0];
    let last = *moduli.last().unwrap();
    if last < first && last < DECAY_THRESHOLD + 3.0 * last_error {
        DecayVerdict::Decays
    } else if last >= DECAY_THRESHOLD && last >= first {
        DecayVerdict::Fails
    } else {
        DecayVerdict::Inconclusive
    }
}

/// Index groups of the module coordinates belonging to each weight.
fn projector_groups(rep: &Representation) -> Vec<Vec<usize>> {
    let ws = &rep.weight_system;
    ws.projectors
        .iter()
        .map(|p| (0..rep.dim()).filter(|&j| p[(j, j)] != 0.0).collect())
        .collect()
}

fn quadrature_estimate(
    rep: &Representation,
    u: &[f64],
    v: &[f64],
    t_max: f64,
    angle_points: usize,
    time_points_per_unit: usize,
) -> FourierEstimate {
    let n_t = ((t_max * time_points_per_unit as f64).ceil() as usize).max(1);
    let n_h = (n_t / 2).max(1);
    let tau = std::f64::consts::TAU;
    let rotations: Vec<Matrix> = (0..angle_points)
        .map(|a| {
            rep.act(&Matrix::rotation2(tau * a as f64 / angle_points as f64))
                .expect("rotations act on every module")
        })
        .collect();
    let left: Vec<Vec<f64>> = rotations.iter().map(|r| r.vecmat(u)).collect();
    let right: Vec<Vec<f64>> = rotations.iter().map(|r| r.matvec(v)).collect();

    let groups = projector_groups(rep);
    let rates: Vec<f64> = (0..groups.len())
        .map(|idx| rep.weight_system.rate(idx))
        .collect();
    let grid = |count: usize| -> Vec<f64> {
        (0..count)
            .map(|l| (l as f64 + 0.5) * t_max / count as f64)
            .collect()
    };
    let table = |times: &[f64]| -> Vec<Vec<f64>> {
        rates
            .iter()
            .map(|r| times.iter().map(|t| (r * t).exp()).collect())
            .collect()
    };
    let ex_full = table(&grid(n_t));
    let ex_half = table(&grid(n_h));

    let pairs = angle_points * angle_points;
    let partials: Vec<(Complex64, Complex64)> = (0..pairs)
        .into_par_iter()
        .map(|pair| {
            let a = pair / angle_points;
            let c = pair % angle_points;
            let coeffs: Vec<f64> = groups
                .iter()
                .map(|grp| grp.iter().map(|&j| left[a][j] * right[c][j]).sum())
                .collect();
            let sum_over = |table: &[Vec<f64>], count: usize| -> Complex64 {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in 0..count {
                    let phase: f64 =
                        coeffs.iter().zip(table).map(|(c, ex)| c * ex[l]).sum();
                    acc += cis(phase);
                }
                acc
            };
            (sum_over(&ex_full, n_t), sum_over(&ex_half, n_h))
        })
        .collect();

    let full = tree_sum(partials.iter().map(|p| p.0).collect());
    let half = tree_sum(partials.iter().map(|p| p.1).collect());
    let n_points = pairs * n_t;
    let value = full / n_points as f64;
    let value_half = half / (pairs * n_h) as f64;
    FourierEstimate {
        value,
        error_estimate: (value - value_half).norm() / 3.0,
        n_points,
    }
}

fn monte_carlo_estimate(
    rep: &Representation,
    u: &[f64],
    v: &[f64],
    t_max: f64,
    samples: usize,
    seed: u64,
    t_index: usize,
) -> Result<FourierEstimate> {
    let n = rep.group_dim();
    let n_chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<Result<Complex64>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let count = MC_CHUNK.min(samples - chunk * MC_CHUNK);
            // Each (window, chunk) pair owns two dedicated streams: one for
            // rotations, one for times.
            let base = (t_index as u64) << 32;
            let mut rng_k = ChaCha8Rng::seed_from_u64(seed);
            rng_k.set_stream(base + 2 * chunk as u64);
            let mut rng_t = ChaCha8Rng::seed_from_u64(seed);
            rng_t.set_stream(base + 2 * chunk as u64 + 1);
            let mut acc = Complex64::new(0.0, 0.0);
            for _ in 0..count {
                let k = sample_haar_rotation(n, &mut rng_k)?;
                let k2 = sample_haar_rotation(n, &mut rng_k)?;
                let t = rng_t.gen::<f64>() * t_max;
                let p = orbit_point(rep, v, &k, t, &k2)?;
                acc += cis(dot(u, &p.coords));
            }
            Ok(acc)
        })
        .collect();
    let mut sums = Vec::with_capacity(n_chunks);
    for p in partials {
        sums.push(p?);
    }
    let value = tree_sum(sums) / samples as f64;
    Ok(FourierEstimate {
        value,
        error_estimate: unit_sample_std_error(value.norm(), samples),
        n_points: samples,
    })
}

/// Estimate the orbit measure's Fourier transform at frequency `u` for each
/// window in `schedule` and classify the trend of the moduli.
pub fn convergence_sweep(
    rep: &Representation,
    u: &[f64],
    v: &[f64],
    schedule: &[f64],
    budget: &SweepBudget,
) -> Result<ConvergenceReport> {
    validate_module_vector(rep, v)?;
    if u.len() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            found: u.len(),
        });
    }
    require_finite_vec(u)?;
    if schedule.is_empty() {
        return Err(Error::InvalidArgument("schedule is empty".into()));
    }
    for w in schedule.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "schedule must be strictly increasing".into(),
            ));
        }
    }
    if !schedule.iter().all(|t| t.is_finite() && *t > 0.0) {
        return Err(Error::InvalidArgument(
            "schedule entries must be positive and finite".into(),
        ));
    }
    match budget {
        SweepBudget::Quadrature {
            angle_points,
            time_points_per_unit,
        } => {
            if *angle_points == 0 || *time_points_per_unit == 0 {
                return Err(Error::InvalidArgument(
                    "quadrature budget needs positive grid sizes".into(),
                ));
            }
            if !circle_rotations(rep.spec) {
                return Err(Error::InvalidArgument(
                    "angle grids parametrize only circle rotations; use Monte Carlo".into(),
                ));
            }
        }
        SweepBudget::MonteCarlo { samples_per_t, .. } => {
            if *samples_per_t < 2 {
                return Err(Error::InvalidArgument(
                    "need at least two samples per window".into(),
                ));
            }
        }
    }

    let mut estimates = Vec::with_capacity(schedule.len());
    for (t_index, &t_max) in schedule.iter().enumerate() {
        let est = match budget {
            SweepBudget::Quadrature {
                angle_points,
                time_points_per_unit,
            } => quadrature_estimate(rep, u, v, t_max, *angle_points, *time_points_per_unit),
            SweepBudget::MonteCarlo { samples_per_t, seed } => {
                monte_carlo_estimate(rep, u, v, t_max, *samples_per_t, *seed, t_index)?
            }
        };
        estimates.push(est);
    }
    let moduli: Vec<f64> = estimates.iter().map(|e| e.value.norm()).collect();
    let verdict = classify(&moduli, estimates.last().unwrap().error_estimate);
    Ok(ConvergenceReport {
        schedule: schedule.to_vec(),
        estimates,
        threshold: DECAY_THRESHOLD,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{sample_orbit, OrbitMeasureParams, SamplingMode};
    use crate::rep::{build_representation, GroupRepSpec};

    fn standard_rep() -> Representation {
        build_representation(GroupRepSpec::sl2_sym(1)).unwrap()
    }

    #[test]
    fn quadrature_estimate_agrees_with_direct_grid_average() {
        let rep = standard_rep();
        let u = [1.0, 1.0];
        let v = [1.0, 0.0];
        let report = convergence_sweep(
            &rep,
            &u,
            &v,
            &[1.5],
            &SweepBudget::Quadrature {
                angle_points: 8,
                time_points_per_unit: 40,
            },
        )
        .unwrap();
        // Same grid through the plain sampler and a scalar average.
        let pts = sample_orbit(&OrbitMeasureParams {
            spec: rep.spec,
            v: v.to_vec(),
            t_max: 1.5,
            mode: SamplingMode::Quadrature {
                angle_points: 8,
                time_points: 60,
            },
        })
        .unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &pts {
            acc += cis(u[0] * p.coords[0] + u[1] * p.coords[1]);
        }
        let direct = acc / pts.len() as f64;
        assert!(
            (report.estimates[0].value - direct).norm() < 1e-10,
            "fast path deviates: {} vs {}",
            report.estimates[0].value,
            direct
        );
    }

    #[test]
    fn zero_frequency_is_exactly_one_and_fails() {
        let rep = standard_rep();
        let report = convergence_sweep(
            &rep,
            &[0.0, 0.0],
            &[1.0, 0.0],
            &[1.0, 4.0],
            &SweepBudget::Quadrature {
                angle_points: 6,
                time_points_per_unit: 10,
            },
        )
        .unwrap();
        for est in &report.estimates {
            assert_eq!(est.value, Complex64::new(1.0, 0.0));
            assert_eq!(est.error_estimate, 0.0);
        }
        assert_eq!(report.verdict, DecayVerdict::Fails);
    }

    #[test]
    fn growing_windows_drive_the_modulus_down() {
        let rep = standard_rep();
        let report = convergence_sweep(
            &rep,
            &[1.0, 1.0],
            &[1.0, 0.0],
            &[1.0, 20.0],
            &SweepBudget::Quadrature {
                angle_points: 64,
                time_points_per_unit: 50,
            },
        )
        .unwrap();
        let moduli = report.moduli();
        assert!(moduli[1] < moduli[0], "no decay: {moduli:?}");
        assert_eq!(report.verdict, DecayVerdict::Decays);
    }

    #[test]
    fn monte_carlo_sweep_is_bitwise_reproducible() {
        let rep = standard_rep();
        let budget = SweepBudget::MonteCarlo {
            samples_per_t: 9000,
            seed: 12345,
        };
        let a = convergence_sweep(&rep, &[1.0, 1.0], &[1.0, 0.0], &[1.0, 3.0], &budget).unwrap();
        let b = convergence_sweep(&rep, &[1.0, 1.0], &[1.0, 0.0], &[1.0, 3.0], &budget).unwrap();
        for (x, y) in a.estimates.iter().zip(&b.estimates) {
            assert_eq!(x.value, y.value);
            assert_eq!(x.error_estimate, y.error_estimate);
        }
    }

    #[test]
    fn malformed_schedules_are_rejected() {
        let rep = standard_rep();
        let budget = SweepBudget::Quadrature {
            angle_points: 4,
            time_points_per_unit: 4,
        };
        for schedule in [vec![], vec![2.0, 1.0], vec![-1.0, 1.0], vec![1.0, 1.0]] {
            assert!(
                convergence_sweep(&rep, &[1.0, 0.0], &[1.0, 0.0], &schedule, &budget).is_err(),
                "schedule {schedule:?} should fail"
            );
        }
    }

    #[test]
    fn higher_rank_groups_need_monte_carlo() {
        let rep = build_representation(GroupRepSpec::sln_standard(3)).unwrap();
        let out = convergence_sweep(
            &rep,
            &[1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[1.0],
            &SweepBudget::Quadrature {
                angle_points: 4,
                time_points_per_unit: 4,
            },
        );
        assert!(matches!(out, Err(Error::InvalidArgument(_))));
        let mc = convergence_sweep(
            &rep,
            &[1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[1.0],
            &SweepBudget::MonteCarlo {
                samples_per_t: 500,
                seed: 5,
            },
        )
        .unwrap();
        assert!(mc.estimates[0].value.norm() <= 1.0 + 1e-12);
    }
}
