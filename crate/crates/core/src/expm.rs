//! Matrix exponential via scaling-and-squaring with a degree-13 Pade
//! approximant, with exact short-circuits for diagonal input and a spectral
//! route for symmetric input.

use crate::eigen::sym_eigen;
use crate::error::Result;
use crate::matrix::Matrix;

/// Pade(13) numerator coefficients.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which an unscaled Pade(13) stays at double accuracy.
const THETA13: f64 = 5.371920351148152;

fn is_diagonal(a: &Matrix, scale: f64) -> bool {
    let n = a.rows();
    for i in 0..n {
        for j in 0..n {
            if i != j && a[(i, j)].abs() > 1e-300 * scale.max(1.0) {
                return false;
            }
        }
    }
    true
}

/// Exponential of a square matrix, accurate to near machine precision for
/// norms up to the crate's working range.
pub fn mat_exp(a: &Matrix) -> Result<Matrix> {
    let n = a.require_square()?;
    a.require_finite()?;
    let scale = a.max_abs();

    if is_diagonal(a, scale) {
        let d: Vec<f64> = (0..n).map(|i| a[(i, i)].exp()).collect();
        return Ok(Matrix::diag(&d));
    }

    let asym = a.max_abs_diff(&a.transpose());
    if asym <= 1e-13 * scale.max(1.0) {
        // Spectral route: exact for the symmetric Cartan directions used
        // throughout, and immune to squaring-phase error growth.
        let sym = a.add(&a.transpose()).scale(0.5);
        let (q, d) = sym_eigen(&sym)?;
        let e: Vec<f64> = d.iter().map(|x| x.exp()).collect();
        return Ok(q.mul(&Matrix::diag(&e)).mul(&q.transpose()));
    }

    // Scaling and squaring with Pade(13).
    let norm = a.one_norm();
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let a_scaled = a.scale(0.5f64.powi(s as i32));

    let a2 = a_scaled.mul(&a_scaled);
    let a4 = a2.mul(&a2);
    let a6 = a4.mul(&a2);
    let ident = Matrix::identity(n);

    // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let u_inner = a6
        .scale(PADE13[13])
        .add(&a4.scale(PADE13[11]))
        .add(&a2.scale(PADE13[9]));
    let u_poly = a6
        .mul(&u_inner)
        .add(&a6.scale(PADE13[7]))
        .add(&a4.scale(PADE13[5]))
        .add(&a2.scale(PADE13[3]))
        .add(&ident.scale(PADE13[1]));
    let u = a_scaled.mul(&u_poly);

    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let v_inner = a6
        .scale(PADE13[12])
        .add(&a4.scale(PADE13[10]))
        .add(&a2.scale(PADE13[8]));
    let v = a6
        .mul(&v_inner)
        .add(&a6.scale(PADE13[6]))
        .add(&a4.scale(PADE13[4]))
        .add(&a2.scale(PADE13[2]))
        .add(&ident.scale(PADE13[0]));

    // exp(A_scaled) = (V - U)^-1 (V + U), then undo the scaling by squaring.
    let mut result = v.sub(&u).solve(&v.add(&u))?;
    for _ in 0..s {
        result = result.mul(&result);
    }
    Ok(result)
}
