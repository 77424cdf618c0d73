//! Exponential-sum profiles of matrix coefficients along a diagonal flow.
//!
//! Conjugating a diagonal one-parameter flow by fixed rotations turns the
//! matrix coefficient t -> <u, k exp(tH) k2 v> into a finite sum
//! sum_i c_i e^{r_i t} with rates read off the weight decomposition. The
//! profile carries exact closed-form derivatives of every order used by the
//! oscillatory-integral machinery, and the dominance threshold below is the
//! first time the top-rate term outweighs the rest combined.

use crate::error::{Error, Result};
use crate::kak::DET_TOL;
use crate::matrix::{dot, require_finite_vec, Matrix};
use crate::rep::Representation;

/// Relative size below which a profile coefficient is treated as absent.
pub const NONZERO_COEFF_TOL: f64 = 1e-8;

/// Orthogonality defect above which a claimed rotation is rejected.
const ORTHO_TOL: f64 = 1e-8;

/// Grid resolution of the threshold scan.
const SCAN_STEP: f64 = 0.01;

/// Bisection width at which the threshold search stops.
const SCAN_REFINE: f64 = 1e-6;

/// Largest time the threshold scan will consider.
const SCAN_CAP: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTerm {
    /// Exponential rate of the term.
    pub rate: f64,
    /// Real coefficient of the term.
    pub coeff: f64,
}

/// Finite exponential sum t -> sum_i coeff_i * e^{rate_i * t}, terms held in
/// order of strictly or weakly decreasing rate.
#[derive(Debug, Clone)]
pub struct PhaseProfile {
    pub terms: Vec<PhaseTerm>,
}

impl PhaseProfile {
    /// Build a profile from raw terms; sorts by decreasing rate and checks
    /// finiteness. Zero coefficients are kept so callers can see the full
    /// rate ladder; dominance queries filter them.
    pub fn new(mut terms: Vec<PhaseTerm>) -> Result<Self> {
        if terms
            .iter()
            .any(|t| !t.rate.is_finite() || !t.coeff.is_finite())
        {
            return Err(Error::NonFinite);
        }
        terms.sort_by(|a, b| b.rate.total_cmp(&a.rate));
        Ok(Self { terms })
    }

    fn moment(&self, t: f64, order: u32) -> f64 {
        self.terms
            .iter()
            .map(|term| term.coeff * term.rate.powi(order as i32) * (term.rate * t).exp())
            .sum()
    }

    pub fn value(&self, t: f64) -> f64 {
        self.moment(t, 0)
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.moment(t, 1)
    }

    pub fn deriv2(&self, t: f64) -> f64 {
        self.moment(t, 2)
    }

    pub fn deriv3(&self, t: f64) -> f64 {
        self.moment(t, 3)
    }

    /// Largest coefficient magnitude, the scale for the relative filter.
    pub fn coeff_scale(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).fold(0.0, f64::max)
    }

    /// Terms whose coefficients survive the relative filter, still in
    /// decreasing-rate order.
    pub fn active_terms(&self) -> Vec<PhaseTerm> {
        let scale = self.coeff_scale();
        self.terms
            .iter()
            .copied()
            .filter(|t| t.coeff.abs() > NONZERO_COEFF_TOL * scale)
            .collect()
    }

    /// The highest-rate term with a surviving coefficient.
    pub fn dominant_term(&self) -> Result<PhaseTerm> {
        self.active_terms()
            .first()
            .copied()
            .ok_or(Error::DegenerateProfile)
    }
}

/// Profile of t -> <u, k exp(tH) k2 v> for the representation's weight
/// system: coefficient of rate <lambda, H> is <u, k E_lambda k2 v> acting
/// through the module.
pub fn phase_profile(
    rep: &Representation,
    u: &[f64],
    v: &[f64],
    k: &Matrix,
    k2: &Matrix,
) -> Result<PhaseProfile> {
    let d = rep.dim();
    for w in [u, v] {
        if w.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: w.len(),
            });
        }
        require_finite_vec(w)?;
    }
    for g in [k, k2] {
        let defect = g.orthogonality_defect();
        if defect > ORTHO_TOL {
            return Err(Error::NotOrthogonal { deviation: defect });
        }
        let det = g.det();
        if (det - 1.0).abs() > DET_TOL {
            return Err(Error::DetNotOne { det });
        }
    }
    let rho_k = rep.act(k)?;
    let rho_k2 = rep.act(k2)?;
    let left = rho_k.vecmat(u);
    let right = rho_k2.matvec(v);
    let ws = &rep.weight_system;
    let terms = ws
        .projectors
        .iter()
        .enumerate()
        .map(|(idx, p)| PhaseTerm {
            rate: ws.rate(idx),
            coeff: dot(&left, &p.matvec(&right)),
        })
        .collect();
    PhaseProfile::new(terms)
}

/// Dominance gap with the top rate factored out: same sign as
/// |c_top| e^{r_top t} - sum_others |c_i| e^{r_i t}, but bounded for t >= 0
/// and nondecreasing, so the scan can never overflow.
fn dominance_gap(active: &[PhaseTerm], t: f64) -> f64 {
    let top = active[0];
    let mut gap = top.coeff.abs();
    for term in &active[1..] {
        gap -= term.coeff.abs() * ((term.rate - top.rate) * t).exp();
    }
    gap
}

/// First time t >= 0 at which the dominant term's magnitude reaches the sum
/// of all other active terms' magnitudes: grid scan at fixed resolution,
/// then bisection of the bracketing step.
pub fn find_t0(profile: &PhaseProfile) -> Result<f64> {
    let active = profile.active_terms();
    if active.is_empty() {
        return Err(Error::DegenerateProfile);
    }
    if active.len() == 1 {
        return Ok(0.0);
    }
    if dominance_gap(&active, 0.0) >= 0.0 {
        return Ok(0.0);
    }
    let steps = (SCAN_CAP / SCAN_STEP) as usize;
    let mut bracket = None;
    for i in 1..=steps {
        let t = i as f64 * SCAN_STEP;
        if dominance_gap(&active, t) >= 0.0 {
            bracket = Some(((i - 1) as f64 * SCAN_STEP, t));
            break;
        }
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoThreshold { cap: SCAN_CAP })?;
    while hi - lo > SCAN_REFINE {
        let mid = 0.5 * (lo + hi);
        if dominance_gap(&active, mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
