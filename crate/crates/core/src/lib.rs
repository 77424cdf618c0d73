//! Numerical laboratory for orbit measures of simple linear group actions.
//!
//! The crate builds up from a small dense-matrix kernel (exponentials,
//! symmetric eigensolver, SVD, Cartan `k a k'` factorization, Haar rotation
//! sampling) to concrete representations of SL(2) and SL(n) with their
//! restricted-weight decompositions, and uses those to estimate Fourier
//! transforms of orbit-supported measures, certify Van der Corput derivative
//! bounds for the associated exponential-sum phases, and run torus-quotient
//! equidistribution experiments.

pub mod circles;
pub mod dd;
pub mod eigen;
pub mod error;
pub mod expm;
pub mod haar;
pub mod kak;
pub mod matrix;
pub mod nilpotent;
pub mod orbit;
pub mod phase;
pub mod rep;
pub mod svd;
pub mod sweep;
pub mod torus;
pub mod translates;
pub mod vdc;
pub mod weights;

pub use eigen::sym_eigen;
pub use error::{Error, Result};
pub use expm::mat_exp;
pub use haar::sample_haar_rotation;
pub use kak::{kak_decompose, KakFactors};
pub use matrix::Matrix;
pub use nilpotent::{
    orbit_polynomials, unipotent_orbit_experiment, UnipotentOrbitSpec, UnipotentReport,
};
pub use orbit::{
    empirical_fourier, orbit_point, sample_orbit, FourierEstimate, OrbitMeasureParams, OrbitPoint,
    SamplingMode,
};
pub use circles::{circle_pair_experiment, CirclePairReport};
pub use phase::{find_t0, phase_profile, PhaseProfile, PhaseTerm};
pub use rep::{build_representation, matrix_coefficient, GroupFamily, GroupRepSpec, Representation};
pub use svd::svd;
pub use sweep::{convergence_sweep, ConvergenceReport, DecayVerdict, SweepBudget};
pub use torus::{torus_reduce, weyl_sum, TorusQuotient, WeylSumReport};
pub use translates::{translate_expansion, TranslateExpansion};
pub use vdc::{
    oscillatory_integral, vdc_certify, ExpSumPhase, HypothesisStatus, LinearPhase, OscIntegral,
    Phase, QuadraticPhase, VdcCertificate,
};
pub use weights::{choose_generic_h, weight_decomposition, WeightSystem};
