//! Reduction of ambient points to a torus and Weyl sums on the result.
//!
//! A quotient is described by finitely many independent frequency rows
//! alpha_i; a point x maps to (frac<alpha_1, x>, ..., frac<alpha_r, x>), a
//! point of the r-torus. Equidistribution of a sample is probed by Weyl
//! sums over integer modes. Addends of a Weyl sum are accumulated in sorted
//! order, so the reported value is bitwise independent of how the sample
//! was ordered.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{dot, require_finite_vec, Matrix};
use crate::svd::svd;

/// Condition number above which generator rows count as dependent.
pub const LATTICE_CONDITION_LIMIT: f64 = 1e12;

/// Fractional part in [0, 1). `rem_euclid` can round to exactly 1 for tiny
/// negative inputs, which the guard folds back to 0.
pub(crate) fn reduce_mod_one(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct TorusQuotient {
    /// Frequency rows, one per torus dimension.
    pub generators: Vec<Vec<f64>>,
    /// Ratio of extreme singular values of the generator matrix.
    pub condition: f64,
}

impl TorusQuotient {
    pub fn new(generators: Vec<Vec<f64>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument(
                "a quotient needs at least one generator row".into(),
            ));
        }
        let d = generators[0].len();
        if d == 0 {
            return Err(Error::InvalidArgument("generator rows are empty".into()));
        }
        for row in &generators {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: row.len(),
                });
            }
            require_finite_vec(row)?;
        }
        if generators.len() > d {
            return Err(Error::InvalidArgument(format!(
                "{} generator rows cannot be independent in dimension {d}",
                generators.len()
            )));
        }
        let mut g = Matrix::zeros(generators.len(), d);
        for (i, row) in generators.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                g[(i, j)] = x;
            }
        }
        // The singular values come from the tall orientation.
        let m = if generators.len() < d { g.transpose() } else { g };
        let (_, sigma, _) = svd(&m)?;
        let relevant = &sigma[..generators.len()];
        let smax = relevant[0];
        let smin = *relevant.last().unwrap();
        let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if !(condition < LATTICE_CONDITION_LIMIT) {
            return Err(Error::SingularLattice { condition });
        }
        Ok(Self {
            generators,
            condition,
        })
    }

    pub fn torus_dim(&self) -> usize {
        self.generators.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators[0].len()
    }
}

/// Image of an ambient point on the torus, coordinates in [0, 1).
pub fn torus_reduce(quotient: &TorusQuotient, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != quotient.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: quotient.ambient_dim(),
            found: x.len(),
        });
    }
    require_finite_vec(x)?;
    Ok(quotient
        .generators
        .iter()
        .map(|row| reduce_mod_one(dot(row, x)))
        .collect())
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct WeylSumReport {
    pub mode: Vec<i64>,
    pub value: Complex64,
    pub modulus: f64,
    pub n_points: usize,
}

/// (1/N) sum_j e^{2 pi i <mode, y_j>} over torus points. Addends are sorted
/// before accumulation, making the sum exactly permutation invariant.
pub fn weyl_sum(points: &[Vec<f64>], mode: &[i64]) -> Result<WeylSumReport> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("no torus points given".into()));
    }
    let mut addends: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for y in points {
        if y.len() != mode.len() {
            return Err(Error::DimensionMismatch {
                expected: mode.len(),
                found: y.len(),
            });
        }
        let phase: f64 = mode.iter().zip(y).map(|(&m, &c)| m as f64 * c).sum();
        let (s, c) = (std::f64::consts::TAU * phase).sin_cos();
        addends.push((c, s));
    }
    addends.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut acc = Complex64::new(0.0, 0.0);
    for (re, im) in &addends {
        acc += Complex64::new(*re, *im);
    }
    let value = acc / points.len() as f64;
    Ok(WeylSumReport {
        mode: mode.to_vec(),
        value,
        modulus: value.norm(),
        n_points: points.len(),
    })
}
