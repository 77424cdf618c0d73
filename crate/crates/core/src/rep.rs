//! Finite-dimensional representations of SL(2) and SL(n).
//!
//! Two families are implemented: the symmetric powers of the defining SL(2)
//! action, realized on coefficients of degree-k homogeneous polynomials in
//! the monomial basis `x^k, x^(k-1) y, ..., y^k` (no normalization), and the
//! standard action of SL(n) on coordinates. Both act diagonally on their
//! chosen basis under diagonal group elements, which is what makes the
//! restricted-weight machinery exact.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::weights::{weight_system_for, WeightSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GroupFamily {
    /// k-th symmetric power of the defining SL(2) representation; `k >= 1`.
    Sl2SymPower { k: usize },
    /// Standard representation of SL(n) on `R^n`; `n >= 2`.
    SlnStandard { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GroupRepSpec {
    pub family: GroupFamily,
}

impl GroupRepSpec {
    pub fn sl2_sym(k: usize) -> Self {
        GroupRepSpec {
            family: GroupFamily::Sl2SymPower { k },
        }
    }

    pub fn sln_standard(n: usize) -> Self {
        GroupRepSpec {
            family: GroupFamily::SlnStandard { n },
        }
    }

    /// Side length of the group matrices.
    pub fn group_dim(&self) -> usize {
        match self.family {
            GroupFamily::Sl2SymPower { .. } => 2,
            GroupFamily::SlnStandard { n } => n,
        }
    }

    /// Dimension of the module the group acts on.
    pub fn rep_dim(&self) -> usize {
        match self.family {
            GroupFamily::Sl2SymPower { k } => k + 1,
            GroupFamily::SlnStandard { n } => n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.family {
            GroupFamily::Sl2SymPower { k } if k == 0 => Err(Error::InvalidArgument(
                "symmetric power must be at least 1 (the trivial power carries no action)".into(),
            )),
            GroupFamily::SlnStandard { n } if n < 2 => Err(Error::InvalidArgument(format!(
                "standard family needs dimension at least 2, got {n}"
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Representation {
    pub spec: GroupRepSpec,
    pub weight_system: WeightSystem,
}

/// Build a representation together with its restricted-weight system and a
/// generic diagonal direction.
pub fn build_representation(spec: GroupRepSpec) -> Result<Representation> {
    spec.validate()?;
    let weight_system = weight_system_for(spec)?;
    Ok(Representation {
        spec,
        weight_system,
    })
}

impl Representation {
    pub fn dim(&self) -> usize {
        self.spec.rep_dim()
    }

    pub fn group_dim(&self) -> usize {
        self.spec.group_dim()
    }

    /// The action matrix of a group element.
    pub fn act(&self, g: &Matrix) -> Result<Matrix> {
        let gd = self.group_dim();
        if g.rows() != gd || g.cols() != gd {
            return Err(Error::DimensionMismatch {
                expected: gd,
                found: g.rows().max(g.cols()),
            });
        }
        g.require_finite()?;
        Ok(match self.spec.family {
            GroupFamily::SlnStandard { .. } => g.clone(),
            GroupFamily::Sl2SymPower { k } => sym_power_matrix(g, k),
        })
    }

    /// Action on the dual module: `rho*(g) = rho(g^-1)^T`.
    pub fn act_dual(&self, g: &Matrix) -> Result<Matrix> {
        let ginv = g.inverse()?;
        Ok(self.act(&ginv)?.transpose())
    }

    /// Derived action of a group-algebra element (used on diagonal
    /// directions, where it is exact integer combinatorics).
    pub fn lie_act(&self, x: &Matrix) -> Result<Matrix> {
        let gd = self.group_dim();
        if x.rows() != gd || x.cols() != gd {
            return Err(Error::DimensionMismatch {
                expected: gd,
                found: x.rows().max(x.cols()),
            });
        }
        Ok(lie_act_for(self.spec, x))
    }
}

/// Family dispatch for the derived action, shared with the weight machinery.
pub(crate) fn lie_act_for(spec: GroupRepSpec, x: &Matrix) -> Matrix {
    match spec.family {
        GroupFamily::SlnStandard { .. } => x.clone(),
        GroupFamily::Sl2SymPower { k } => sym_power_derivation(x, k),
    }
}

/// Pairing `<u, rho(g) v>` of a dual vector against a translated vector.
pub fn matrix_coefficient(rep: &Representation, u: &[f64], v: &[f64], g: &Matrix) -> Result<f64> {
    let d = rep.dim();
    if u.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: u.len(),
        });
    }
    if v.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.len(),
        });
    }
    crate::matrix::require_finite_vec(u)?;
    crate::matrix::require_finite_vec(v)?;
    let gv = rep.act(g)?.matvec(v);
    Ok(crate::matrix::dot(u, &gv))
}

/// Matrix of the k-th symmetric power action in the monomial basis.
///
/// Column `j` is the expansion of `(a x + c y)^(k-j) (b x + d y)^j` where
/// the input sends `x` to `a x + c y` and `y` to `b x + d y`.
fn sym_power_matrix(g: &Matrix, k: usize) -> Matrix {
    let d = k + 1;
    let (a, b, c, dd) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let mut out = Matrix::zeros(d, d);
    for j in 0..d {
        // Coefficients of (a x + c y)^(k-j), degree k-j.
        let p1 = binomial_power(a, c, k - j);
        // Coefficients of (b x + d y)^j, degree j.
        let p2 = binomial_power(b, dd, j);
        // Convolve into the length-d coefficient vector.
        for (i1, c1) in p1.iter().enumerate() {
            for (i2, c2) in p2.iter().enumerate() {
                out[(i1 + i2, j)] += c1 * c2;
            }
        }
    }
    out
}

/// Coefficients of `(p x + q y)^m` in the basis `x^m, x^(m-1) y, ..., y^m`.
fn binomial_power(p: f64, q: f64, m: usize) -> Vec<f64> {
    let mut coeffs = vec![0.0; m + 1];
    for i in 0..=m {
        coeffs[i] = binomial(m, i) * p.powi((m - i) as i32) * q.powi(i as i32);
    }
    coeffs
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut out = 1.0;
    for i in 0..k {
        out = out * (n - i) as f64 / (i + 1) as f64;
    }
    out
}

/// Derivation action on the symmetric power: `X` acts on a monomial
/// `x^a y^b` through its action on each factor.
fn sym_power_derivation(x: &Matrix, k: usize) -> Matrix {
    let d = k + 1;
    let (p, q, r, s) = (x[(0, 0)], x[(0, 1)], x[(1, 0)], x[(1, 1)]);
    let mut out = Matrix::zeros(d, d);
    for j in 0..d {
        let a = (k - j) as f64; // exponent of x
        let b = j as f64; // exponent of y
        // a x^(a-1) (p x + r y) y^b + b x^a y^(b-1) (q x + s y)
        out[(j, j)] += a * p + b * s;
        if j + 1 < d {
            out[(j + 1, j)] += a * r;
        }
        if j >= 1 {
            out[(j - 1, j)] += b * q;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_symmetric_power_is_the_defining_action() {
        let rep = build_representation(GroupRepSpec::sl2_sym(1)).unwrap();
        let g = Matrix::from_rows(&[&[1.0, 2.0], &[0.5, 2.0]]);
        assert!(rep.act(&g).unwrap().max_abs_diff(&g) < 1e-15);
    }

    #[test]
    fn trivial_symmetric_power_rejected() {
        assert!(build_representation(GroupRepSpec::sl2_sym(0)).is_err());
    }

    #[test]
    fn too_small_standard_family_rejected() {
        assert!(build_representation(GroupRepSpec::sln_standard(1)).is_err());
    }

    #[test]
    fn diagonal_acts_diagonally_on_square_power() {
        let rep = build_representation(GroupRepSpec::sl2_sym(2)).unwrap();
        let s = 1.7;
        let g = Matrix::diag(&[s, 1.0 / s]);
        let m = rep.act(&g).unwrap();
        let expect = Matrix::diag(&[s * s, 1.0, 1.0 / (s * s)]);
        assert!(m.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn symmetric_power_is_a_homomorphism() {
        let rep = build_representation(GroupRepSpec::sl2_sym(3)).unwrap();
        let g = Matrix::rotation2(0.37);
        let h = Matrix::from_rows(&[&[2.0, 0.3], &[0.1, 0.515]]);
        let lhs = rep.act(&g.mul(&h)).unwrap();
        let rhs = rep.act(&g).unwrap().mul(&rep.act(&h).unwrap());
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn derivation_matches_difference_quotient() {
        let rep = build_representation(GroupRepSpec::sl2_sym(4)).unwrap();
        let x = Matrix::from_rows(&[&[0.3, -0.8], &[0.5, -0.3]]);
        let d_exact = rep.lie_act(&x).unwrap();
        let eps = 1e-6;
        let g_plus = crate::expm::mat_exp(&x.scale(eps)).unwrap();
        let g_minus = crate::expm::mat_exp(&x.scale(-eps)).unwrap();
        let diff = rep
            .act(&g_plus)
            .unwrap()
            .sub(&rep.act(&g_minus).unwrap())
            .scale(1.0 / (2.0 * eps));
        assert!(d_exact.max_abs_diff(&diff) < 1e-8);
    }

    #[test]
    fn matrix_coefficient_dimension_checked() {
        let rep = build_representation(GroupRepSpec::sl2_sym(2)).unwrap();
        let g = Matrix::identity(2);
        assert!(matrix_coefficient(&rep, &[1.0, 0.0], &[1.0, 0.0, 0.0], &g).is_err());
    }

    #[test]
    fn dual_action_inverts_the_pairing() {
        let rep = build_representation(GroupRepSpec::sl2_sym(2)).unwrap();
        let g = Matrix::from_rows(&[&[1.3, 0.4], &[0.25, 0.84615384615384615]]);
        // det != 1 is fine for the pairing identity; normalize anyway.
        let det = g.det();
        let g = g.scale(1.0 / det.sqrt());
        let u = vec![0.3, -1.0, 2.0];
        let v = vec![1.0, 0.5, -0.25];
        let lhs = crate::matrix::dot(&rep.act_dual(&g).unwrap().matvec(&u), &rep.act(&g).unwrap().matvec(&v));
        let rhs = crate::matrix::dot(&u, &v);
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
