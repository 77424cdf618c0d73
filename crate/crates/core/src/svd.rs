//! Singular value decomposition by one-sided Jacobi orthogonalization.
//!
//! Columns of a working copy are rotated pairwise until mutually orthogonal,
//! accumulating the rotations into `V`; singular values are the resulting
//! column norms. Accurate for the well-conditioned small matrices used here,
//! and rank-deficient inputs get their missing left singular vectors from an
//! orthonormal completion.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Factor `A = U diag(sigma) V^T` with `sigma` sorted non-increasing and
/// non-negative. `A` may be square or tall (rows >= cols); for tall input
/// `U` is thin with orthonormal columns. Transpose wide matrices first.
pub fn svd(a: &Matrix) -> Result<(Matrix, Vec<f64>, Matrix)> {
    let m = a.rows();
    let n = a.cols();
    if m < n {
        return Err(Error::InvalidArgument(format!(
            "svd expects rows >= cols, got {m}x{n}; transpose first"
        )));
    }
    a.require_finite()?;
    let mut w = a.clone();
    let mut v = Matrix::identity(n);
    let scale = a.max_abs().max(1e-300);

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    alpha += wp * wp;
                    beta += wq * wq;
                    gamma += wp * wq;
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt().max(1e-30 * scale * scale) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    w[(i, p)] = c * wp - s * wq;
                    w[(i, q)] = s * wp + c * wq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| w[(i, j)] * w[(i, j)]).sum::<f64>().sqrt())
        .collect();

    // Columns with effectively zero norm get left vectors from completion.
    let rank_tol = 1e-14 * scale * (n as f64);
    let mut u = Matrix::zeros(m, n);
    let mut deficient = Vec::new();
    for j in 0..n {
        if sigma[j] > rank_tol {
            let col: Vec<f64> = (0..m).map(|i| w[(i, j)] / sigma[j]).collect();
            u.set_column(j, &col);
        } else {
            sigma[j] = 0.0;
            deficient.push(j);
        }
    }
    if !deficient.is_empty() {
        complete_columns(&mut u, &deficient);
    }

    // Sort singular values non-increasing, permuting U and V columns in step.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let sig_sorted: Vec<f64> = order.iter().map(|&i| sigma[i]).collect();
    let mut us = Matrix::zeros(m, n);
    let mut vs = Matrix::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        us.set_column(new_j, &u.column(old_j));
        vs.set_column(new_j, &v.column(old_j));
    }
    Ok((us, sig_sorted, vs.transpose()))
}

/// Fill the listed columns with an orthonormal completion of the others,
/// built by Gram-Schmidt over the standard basis.
fn complete_columns(u: &mut Matrix, missing: &[usize]) {
    let n = u.rows();
    let mut kept: Vec<Vec<f64>> = (0..u.cols())
        .filter(|j| !missing.contains(j))
        .map(|j| u.column(j))
        .collect();
    let mut fill = missing.iter();
    for e in 0..n {
        let mut cand = vec![0.0; n];
        cand[e] = 1.0;
        for k in &kept {
            let proj = crate::matrix::dot(&cand, k);
            for i in 0..n {
                cand[i] -= proj * k[i];
            }
        }
        let nrm = crate::matrix::norm(&cand);
        if nrm > 1e-8 {
            for x in cand.iter_mut() {
                *x /= nrm;
            }
            if let Some(&j) = fill.next() {
                u.set_column(j, &cand);
                kept.push(cand);
            } else {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(u: &Matrix, s: &[f64], vt: &Matrix) -> Matrix {
        u.mul(&Matrix::diag(s)).mul(vt)
    }

    #[test]
    fn shear_has_golden_ratio_singular_values() {
        let a = Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let (u, s, vt) = svd(&a).unwrap();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((s[0] - phi).abs() < 1e-12, "sigma0 {}", s[0]);
        assert!((s[1] - (5.0f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        assert!(reconstruct(&u, &s, &vt).max_abs_diff(&a) < 1e-10);
        assert!(u.orthogonality_defect() < 1e-12);
        assert!(vt.orthogonality_defect() < 1e-12);
    }

    #[test]
    fn diagonal_input_sorted() {
        let a = Matrix::diag(&[2.0, 0.5]);
        let (u, s, vt) = svd(&a).unwrap();
        assert_eq!(s, vec![2.0, 0.5]);
        assert!(reconstruct(&u, &s, &vt).max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn rotation_has_unit_singular_values() {
        let a = Matrix::rotation2(0.9);
        let (u, s, vt) = svd(&a).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12);
        assert!(reconstruct(&u, &s, &vt).max_abs_diff(&a) < 1e-10);
    }

    #[test]
    fn singular_matrix_gets_zero_sigma_and_orthogonal_u() {
        let a = Matrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let (u, s, vt) = svd(&a).unwrap();
        assert!(s[1] == 0.0);
        assert!(reconstruct(&u, &s, &vt).max_abs_diff(&a) < 1e-10);
        assert!(u.orthogonality_defect() < 1e-10);
        assert!(vt.orthogonality_defect() < 1e-10);
    }

    #[test]
    fn negative_determinant_input_reconstructs() {
        let a = Matrix::from_rows(&[&[0.0, 2.0], &[1.0, 0.0]]);
        let (u, s, vt) = svd(&a).unwrap();
        assert_eq!(s, vec![2.0, 1.0]);
        assert!(reconstruct(&u, &s, &vt).max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn tall_matrix_reconstructs_with_orthonormal_columns() {
        let a = Matrix::from_rows(&[&[1.0, 0.5], &[0.0, 2.0], &[3.0, -1.0]]);
        let (u, s, vt) = svd(&a).unwrap();
        assert_eq!(u.rows(), 3);
        assert_eq!(u.cols(), 2);
        assert!(reconstruct(&u, &s, &vt).max_abs_diff(&a) < 1e-10);
        let gram = u.transpose().mul(&u);
        assert!(gram.max_abs_diff(&Matrix::identity(2)) < 1e-12);
        assert!(s[0] >= s[1] && s[1] > 0.0);
    }

    #[test]
    fn tall_rank_deficient_matrix_keeps_zero_sigma() {
        let a = Matrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0], &[-1.0, -2.0]]);
        let (u, s, vt) = svd(&a).unwrap();
        assert_eq!(s[1], 0.0);
        assert!(reconstruct(&u, &s, &vt).max_abs_diff(&a) < 1e-10);
        let gram = u.transpose().mul(&u);
        assert!(gram.max_abs_diff(&Matrix::identity(2)) < 1e-10);
    }

    #[test]
    fn wide_matrix_is_rejected() {
        let a = Matrix::from_rows(&[&[1.0, 2.0, 3.0]]);
        assert!(svd(&a).is_err());
    }

    #[test]
    fn random_like_three_by_three_reconstructs() {
        let a = Matrix::from_rows(&[
            &[0.3, -1.2, 0.5],
            &[2.0, 0.7, -0.4],
            &[0.5, 0.7, -1.5],
        ]);
        let (u, s, vt) = svd(&a).unwrap();
        assert!(reconstruct(&u, &s, &vt).max_abs_diff(&a) < 1e-10);
        for w in s.windows(2) {
            assert!(w[0] >= w[1]);
        }
        assert!(s.iter().all(|&x| x >= 0.0));
    }
}
