//! Haar-distributed random rotations.
//!
//! A standard Gaussian matrix is orthonormalized by Householder QR; scaling
//! each column by the sign of the corresponding R diagonal entry makes the
//! distribution Haar on the full orthogonal group, and negating one column of
//! the determinant -1 outcomes folds it onto the rotation subgroup without
//! disturbing uniformity.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// Householder QR returning the orthogonal factor and the signs of the
/// R diagonal.
fn qr_q_with_signs(a: &Matrix) -> (Matrix, Vec<f64>) {
    let n = a.rows();
    let mut r = a.clone();
    let mut q = Matrix::identity(n);
    for col in 0..n {
        let mut x: Vec<f64> = (col..n).map(|i| r[(i, col)]).collect();
        let alpha = -x[0].signum() * crate::matrix::norm(&x);
        if alpha == 0.0 {
            continue;
        }
        x[0] -= alpha;
        let vnorm = crate::matrix::norm(&x);
        if vnorm < 1e-300 {
            continue;
        }
        for xi in x.iter_mut() {
            *xi /= vnorm;
        }
        // Apply H = I - 2 v v^T to the trailing block of R and to Q.
        for j in col..n {
            let mut proj = 0.0;
            for (idx, xi) in x.iter().enumerate() {
                proj += xi * r[(col + idx, j)];
            }
            for (idx, xi) in x.iter().enumerate() {
                r[(col + idx, j)] -= 2.0 * proj * xi;
            }
        }
        for i in 0..n {
            let mut proj = 0.0;
            for (idx, xi) in x.iter().enumerate() {
                proj += q[(i, col + idx)] * xi;
            }
            for (idx, xi) in x.iter().enumerate() {
                q[(i, col + idx)] -= 2.0 * proj * xi;
            }
        }
    }
    let signs: Vec<f64> = (0..n)
        .map(|i| if r[(i, i)] < 0.0 { -1.0 } else { 1.0 })
        .collect();
    (q, signs)
}

/// Draw a Haar-distributed `n x n` rotation (determinant +1).
pub fn sample_haar_rotation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "rotation dimension must be at least 2, got {n}"
        )));
    }
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = rng.sample(StandardNormal);
        }
    }
    let (mut q, signs) = qr_q_with_signs(&g);
    for (j, s) in signs.iter().enumerate() {
        if *s < 0.0 {
            let col: Vec<f64> = q.column(j).iter().map(|x| -x).collect();
            q.set_column(j, &col);
        }
    }
    if q.det() < 0.0 {
        let col: Vec<f64> = q.column(0).iter().map(|x| -x).collect();
        q.set_column(0, &col);
    }
    Ok(q)
}
