//! Experiment execution: each command resolves its parameters, runs the
//! corresponding core routine, and assembles a verdict-carrying payload
//! plus optional CSV rows.

use bohrlab_core::{
    build_representation, circle_pair_experiment, convergence_sweep, kak_decompose, sample_orbit,
    torus_reduce, unipotent_orbit_experiment, vdc_certify, weyl_sum, DecayVerdict, ExpSumPhase,
    HypothesisStatus, LinearPhase, Matrix, OrbitMeasureParams, PhaseProfile, PhaseTerm,
    QuadraticPhase, SamplingMode, TorusQuotient, VdcCertificate, WeylSumReport,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::{Map, Value};

use crate::emit::jf;
use crate::params::{
    CirclesParams, KakParams, NilpotentParams, PhaseKind, SweepParams, VdcParams, WeylParams,
};

/// Weyl-sum modulus below which a probed frequency counts as vanished; the
/// same desk-scale threshold the decay sweep uses.
pub const EQUIDIST_THRESHOLD: f64 = 0.1;

/// What a finished run hands back to the report writer.
pub struct RunOutput {
    /// The `result` object of the report; always contains a `verdict` key.
    pub payload: Value,
    pub verdict: &'static str,
    /// Extra explanation for the terminal, e.g. the zero-frequency control
    /// note; never part of the report file.
    pub note: Option<String>,
    /// CSV rows for the formats that define them: a pinned header plus one
    /// row per record.
    pub csv: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

/// Verdicts that exit 0: the run verified the statement it tested.
pub fn verdict_passes(verdict: &str) -> bool {
    matches!(verdict, "DECAYS" | "HOLDS" | "DENSE-IN-HULL" | "PASSES")
}

fn float_cell(x: f64) -> String {
    crate::emit::float17(x)
}

fn mode_cell(mode: &[i64]) -> String {
    mode.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn mode_value(mode: &[i64]) -> Value {
    Value::Array(mode.iter().map(|&c| Value::from(c)).collect())
}

fn weyl_sum_value(sum: &WeylSumReport) -> Result<Value, String> {
    let mut obj = Map::new();
    obj.insert("mode".into(), mode_value(&sum.mode));
    obj.insert("n_points".into(), (sum.n_points as u64).into());
    obj.insert("re".into(), jf(sum.value.re)?);
    obj.insert("im".into(), jf(sum.value.im)?);
    obj.insert("modulus".into(), jf(sum.modulus)?);
    Ok(Value::Object(obj))
}

fn weyl_csv_rows(sums: &[WeylSumReport]) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let header = vec!["m", "n_points", "re", "im", "modulus"];
    let rows = sums
        .iter()
        .map(|s| {
            vec![
                mode_cell(&s.mode),
                s.n_points.to_string(),
                float_cell(s.value.re),
                float_cell(s.value.im),
                float_cell(s.modulus),
            ]
        })
        .collect();
    (header, rows)
}

// ---------------------------------------------------------------------------
// sweep

pub fn run_sweep(params: &SweepParams) -> Result<RunOutput, String> {
    let rep = build_representation(params.spec).map_err(|e| e.to_string())?;
    let report = convergence_sweep(&rep, &params.u, &params.v, &params.schedule, &params.budget)
        .map_err(|e| e.to_string())?;

    let verdict = match report.verdict {
        DecayVerdict::Decays => "DECAYS",
        DecayVerdict::Fails => "FAILS",
        DecayVerdict::Inconclusive => "INCONCLUSIVE",
    };
    let mut estimates = Vec::with_capacity(report.estimates.len());
    for (t, est) in report.schedule.iter().zip(&report.estimates) {
        let mut obj = Map::new();
        obj.insert("T".into(), jf(*t)?);
        obj.insert("re".into(), jf(est.value.re)?);
        obj.insert("im".into(), jf(est.value.im)?);
        obj.insert("modulus".into(), jf(est.value.norm())?);
        obj.insert("std_error".into(), jf(est.error_estimate)?);
        obj.insert("n_points".into(), (est.n_points as u64).into());
        estimates.push(Value::Object(obj));
    }
    let mut payload = Map::new();
    payload.insert("estimates".into(), Value::Array(estimates));
    payload.insert("threshold".into(), jf(report.threshold)?);
    payload.insert("verdict".into(), verdict.into());

    let note = if params.u.iter().all(|&x| x == 0.0) {
        Some(
            "u = 0 is the control case: the transform of a probability measure at zero \
             frequency is exactly 1, so the modulus never decays (modulus 1 expected)"
                .to_string(),
        )
    } else {
        None
    };
    let csv_rows = report
        .schedule
        .iter()
        .zip(&report.estimates)
        .map(|(t, est)| {
            vec![
                float_cell(*t),
                float_cell(est.value.re),
                float_cell(est.value.im),
                float_cell(est.value.norm()),
                float_cell(est.error_estimate),
            ]
        })
        .collect();

    Ok(RunOutput {
        payload: Value::Object(payload),
        verdict,
        note,
        csv: Some((vec!["T", "re", "im", "modulus", "std_error"], csv_rows)),
    })
}

// ---------------------------------------------------------------------------
// vdc

fn certificate_value(cert: &VdcCertificate, a: f64, b: f64) -> Result<Value, String> {
    let mut obj = Map::new();
    obj.insert("a".into(), jf(a)?);
    obj.insert("b".into(), jf(b)?);
    obj.insert(
        "status".into(),
        match cert.status {
            HypothesisStatus::Hold => "HOLD",
            HypothesisStatus::Fail => "FAIL",
            HypothesisStatus::Unverified => "UNVERIFIED",
        }
        .into(),
    );
    if let Some(lambda) = cert.lambda_min {
        obj.insert("lambda_min".into(), jf(lambda)?);
    }
    if let Some(bound) = cert.modulus_bound {
        obj.insert("modulus_bound".into(), jf(bound)?);
    }
    obj.insert("modulus".into(), jf(cert.modulus)?);
    obj.insert("re".into(), jf(cert.integral.value.re)?);
    obj.insert("im".into(), jf(cert.integral.value.im)?);
    obj.insert("quadrature_error".into(), jf(cert.integral.error_bound)?);
    obj.insert("panels".into(), (cert.integral.panels as u64).into());
    Ok(Value::Object(obj))
}

pub fn run_vdc(params: &VdcParams) -> Result<RunOutput, String> {
    let cert = match &params.phase {
        PhaseKind::Linear { omega, offset } => {
            let phase = LinearPhase {
                omega: *omega,
                offset: *offset,
            };
            vdc_certify(&phase, params.a, params.b, params.tol)
        }
        PhaseKind::Quadratic {
            accel,
            omega,
            offset,
        } => {
            let phase = QuadraticPhase {
                accel: *accel,
                omega: *omega,
                offset: *offset,
            };
            vdc_certify(&phase, params.a, params.b, params.tol)
        }
        PhaseKind::Profile { coeffs, rates } => {
            let terms = coeffs
                .iter()
                .zip(rates)
                .map(|(&coeff, &rate)| PhaseTerm { coeff, rate })
                .collect();
            let profile = PhaseProfile::new(terms).map_err(|e| e.to_string())?;
            let phase = ExpSumPhase::new(profile);
            vdc_certify(&phase, params.a, params.b, params.tol)
        }
    }
    .map_err(|e| e.to_string())?;

    let verdict = match cert.status {
        HypothesisStatus::Hold => "HOLDS",
        HypothesisStatus::Fail => "FAILS",
        HypothesisStatus::Unverified => "UNVERIFIED",
    };
    let note = match cert.status {
        HypothesisStatus::Hold => None,
        HypothesisStatus::Fail => Some(
            "a first-derivative hypothesis fails on this interval; the bound does not apply"
                .to_string(),
        ),
        HypothesisStatus::Unverified => Some(
            "the check-grid margin cannot certify the derivative floor on this interval"
                .to_string(),
        ),
    };
    let mut payload = Map::new();
    payload.insert(
        "certificates".into(),
        Value::Array(vec![certificate_value(&cert, params.a, params.b)?]),
    );
    payload.insert("verdict".into(), verdict.into());
    Ok(RunOutput {
        payload: Value::Object(payload),
        verdict,
        note,
        csv: None,
    })
}

// ---------------------------------------------------------------------------
// weyl

pub fn run_weyl(params: &WeylParams) -> Result<RunOutput, String> {
    let quotient = TorusQuotient::new(params.generators.clone()).map_err(|e| e.to_string())?;
    if quotient.ambient_dim() != params.spec.rep_dim() {
        return Err(format!(
            "generators act on dimension {}, but the module has dimension {}",
            quotient.ambient_dim(),
            params.spec.rep_dim()
        ));
    }
    let points = sample_orbit(&OrbitMeasureParams {
        spec: params.spec,
        v: params.v.clone(),
        t_max: params.t,
        mode: SamplingMode::MonteCarlo {
            samples: params.samples,
            seed: params.seed,
        },
    })
    .map_err(|e| e.to_string())?;
    let reduced: Vec<Vec<f64>> = points
        .iter()
        .map(|p| torus_reduce(&quotient, &p.coords))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;

    let mut sums = Vec::with_capacity(params.modes.len());
    for mode in &params.modes {
        sums.push(weyl_sum(&reduced, mode).map_err(|e| e.to_string())?);
    }
    let max_nonzero = sums
        .iter()
        .filter(|s| s.mode.iter().any(|&c| c != 0))
        .map(|s| s.modulus)
        .fold(0.0, f64::max);
    let verdict = if max_nonzero < EQUIDIST_THRESHOLD {
        "DENSE-IN-HULL"
    } else {
        "UNVERIFIED"
    };

    let mut payload = Map::new();
    payload.insert("torus_dim".into(), (quotient.torus_dim() as u64).into());
    payload.insert("condition".into(), jf(quotient.condition)?);
    let sums_json = sums
        .iter()
        .map(weyl_sum_value)
        .collect::<Result<Vec<_>, _>>()?;
    payload.insert("sums".into(), Value::Array(sums_json));
    payload.insert("max_nonzero_modulus".into(), jf(max_nonzero)?);
    payload.insert("threshold".into(), jf(EQUIDIST_THRESHOLD)?);
    payload.insert("verdict".into(), verdict.into());

    Ok(RunOutput {
        payload: Value::Object(payload),
        verdict,
        note: None,
        csv: Some(weyl_csv_rows(&sums)),
    })
}

// ---------------------------------------------------------------------------
// kak

pub fn run_kak(params: &KakParams) -> Result<RunOutput, String> {
    let side = params.side;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut max_recon = 0.0f64;
    let mut max_ortho = 0.0f64;
    let mut max_det_defect = 0.0f64;
    let mut max_log_det_a = 0.0f64;
    let mut sorted_positive = true;

    for _ in 0..params.count {
        let g = sample_det_one(side, &mut rng)?;
        let factors = kak_decompose(&g).map_err(|e| e.to_string())?;
        let scale = g.max_abs().max(1.0);
        max_recon = max_recon.max(factors.reconstruct().max_abs_diff(&g) / scale);
        max_ortho = max_ortho
            .max(factors.k.orthogonality_defect())
            .max(factors.k2.orthogonality_defect());
        max_det_defect = max_det_defect
            .max((factors.k.det() - 1.0).abs())
            .max((factors.k2.det() - 1.0).abs());
        max_log_det_a = max_log_det_a.max(factors.log_a.iter().sum::<f64>().abs());
        for pair in factors.log_a.windows(2) {
            if pair[0] < pair[1] {
                sorted_positive = false;
            }
        }
        for i in 0..side {
            if !(factors.a[(i, i)] > 0.0) {
                sorted_positive = false;
            }
        }
    }

    let passes = max_recon <= params.tol && sorted_positive;
    let verdict = if passes { "PASSES" } else { "FAILS" };
    let mut payload = Map::new();
    payload.insert("side".into(), (side as u64).into());
    payload.insert("count".into(), (params.count as u64).into());
    payload.insert("max_reconstruction_error".into(), jf(max_recon)?);
    payload.insert("max_orthogonality_defect".into(), jf(max_ortho)?);
    payload.insert("max_rotation_det_defect".into(), jf(max_det_defect)?);
    payload.insert("max_abs_log_det_a".into(), jf(max_log_det_a)?);
    payload.insert("diagonal_sorted_positive".into(), sorted_positive.into());
    payload.insert("tolerance".into(), jf(params.tol)?);
    payload.insert("verdict".into(), verdict.into());
    Ok(RunOutput {
        payload: Value::Object(payload),
        verdict,
        note: None,
        csv: None,
    })
}

/// Draw a random matrix with independent standard normal entries and rescale
/// it to determinant one, redrawing while the determinant is too close to
/// zero for a stable normalization.
fn sample_det_one(side: usize, rng: &mut ChaCha8Rng) -> Result<Matrix, String> {
    for _ in 0..1000 {
        let data: Vec<f64> = (0..side * side)
            .map(|_| StandardNormal.sample(rng))
            .collect();
        let mut m = Matrix::from_vec(side, side, data).map_err(|e| e.to_string())?;
        let det = m.det();
        if det.abs() < 0.05 {
            continue;
        }
        if det < 0.0 {
            let first = m.column(0);
            let second = m.column(1);
            m.set_column(0, &second);
            m.set_column(1, &first);
        }
        let scale = det.abs().powf(1.0 / side as f64);
        return Ok(m.scale(1.0 / scale));
    }
    Err("could not draw a well-conditioned determinant-one matrix".into())
}

// ---------------------------------------------------------------------------
// circles

pub fn run_circles(params: &CirclesParams) -> Result<RunOutput, String> {
    let report = circle_pair_experiment(params.samples).map_err(|e| e.to_string())?;
    let verdict = if report.holds { "PASSES" } else { "UNVERIFIED" };

    let mut witnesses = Vec::with_capacity(report.witnesses.len());
    for w in &report.witnesses {
        let mut obj = Map::new();
        obj.insert("mode".into(), mode_value(&w.mode));
        obj.insert("re".into(), jf(w.empirical.re)?);
        obj.insert("im".into(), jf(w.empirical.im)?);
        obj.insert("closed_form_re".into(), jf(w.closed_form.re)?);
        obj.insert("closed_form_im".into(), jf(w.closed_form.im)?);
        obj.insert("deviation".into(), jf(w.deviation)?);
        obj.insert("modulus".into(), jf(w.modulus)?);
        witnesses.push(Value::Object(obj));
    }
    let mut payload = Map::new();
    payload.insert("n_points".into(), (report.n_points as u64).into());
    payload.insert(
        "speeds".into(),
        Value::Array(vec![jf(report.speeds.0)?, jf(report.speeds.1)?]),
    );
    payload.insert(
        "radii".into(),
        Value::Array(vec![jf(report.radii.0)?, jf(report.radii.1)?]),
    );
    payload.insert(
        "max_membership_defect".into(),
        jf(report.max_membership_defect)?,
    );
    payload.insert("witnesses".into(), Value::Array(witnesses));
    payload.insert("witness_floor".into(), jf(report.witness_floor)?);
    payload.insert("joint_ceiling".into(), jf(report.joint_ceiling)?);
    payload.insert(
        "max_closed_form_deviation".into(),
        jf(report.max_closed_form_deviation)?,
    );
    payload.insert("verdict".into(), verdict.into());
    Ok(RunOutput {
        payload: Value::Object(payload),
        verdict,
        note: None,
        csv: None,
    })
}

// ---------------------------------------------------------------------------
// nilpotent

pub fn run_nilpotent(params: &NilpotentParams) -> Result<RunOutput, String> {
    let report = unipotent_orbit_experiment(&params.core).map_err(|e| e.to_string())?;
    let verdict = if report.max_nonzero_modulus < EQUIDIST_THRESHOLD {
        "DENSE-IN-HULL"
    } else {
        "UNVERIFIED"
    };

    let mut constants = Vec::with_capacity(report.constant_coords.len());
    for (index, value) in &report.constant_coords {
        let mut obj = Map::new();
        obj.insert("index".into(), (*index as u64).into());
        obj.insert("value".into(), jf(*value)?);
        constants.push(Value::Object(obj));
    }
    let sums_json = report
        .weyl
        .iter()
        .map(weyl_sum_value)
        .collect::<Result<Vec<_>, _>>()?;
    let mut payload = Map::new();
    payload.insert("degree".into(), (report.degree as u64).into());
    payload.insert("hull_dim".into(), (report.hull_dim as u64).into());
    payload.insert("constant_coords".into(), Value::Array(constants));
    payload.insert("sums".into(), Value::Array(sums_json));
    payload.insert(
        "max_nonzero_modulus".into(),
        jf(report.max_nonzero_modulus)?,
    );
    payload.insert("n_points".into(), (report.n_points as u64).into());
    payload.insert("threshold".into(), jf(EQUIDIST_THRESHOLD)?);
    payload.insert("verdict".into(), verdict.into());
    Ok(RunOutput {
        payload: Value::Object(payload),
        verdict,
        note: None,
        csv: Some(weyl_csv_rows(&report.weyl)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{NilpotentFlags, SweepFlags, VdcFlags};

    #[test]
    fn linear_phase_over_half_turn_has_modulus_two() {
        let params = VdcParams::resolve(&VdcFlags {
            a: Some(0.0),
            b: Some(std::f64::consts::PI),
            ..Default::default()
        })
        .unwrap();
        let out = run_vdc(&params).unwrap();
        assert_eq!(out.verdict, "HOLDS");
        let modulus = out.payload["certificates"][0]["modulus"].as_f64().unwrap();
        assert!((modulus - 2.0).abs() < 1e-9, "modulus {modulus}");
    }

    #[test]
    fn zero_frequency_sweep_reports_the_control_note() {
        let params = SweepParams::resolve(&SweepFlags {
            v: Some("1,0".into()),
            u: Some("0,0".into()),
            schedule: Some("1,2".into()),
            mode: Some("monte-carlo".into()),
            samples: Some(512),
            ..Default::default()
        })
        .unwrap();
        let out = run_sweep(&params).unwrap();
        assert_eq!(out.verdict, "FAILS");
        assert!(!verdict_passes(out.verdict));
        let note = out.note.expect("control note");
        assert!(note.contains("control case"), "{note}");
        for est in out.payload["estimates"].as_array().unwrap() {
            assert_eq!(est["modulus"].as_f64().unwrap(), 1.0);
        }
    }

    #[test]
    fn default_nilpotent_run_is_dense_in_the_plane() {
        let params = NilpotentParams::resolve(&NilpotentFlags {
            samples: Some(20_000),
            ..Default::default()
        })
        .unwrap();
        let out = run_nilpotent(&params).unwrap();
        assert_eq!(out.verdict, "DENSE-IN-HULL");
        assert_eq!(out.payload["hull_dim"].as_u64().unwrap(), 2);
        let constants = out.payload["constant_coords"].as_array().unwrap();
        assert_eq!(constants.len(), 1);
        assert_eq!(constants[0]["index"].as_u64().unwrap(), 2);
        assert_eq!(constants[0]["value"].as_f64().unwrap(), 1.0);
    }

    #[test]
    fn kak_run_passes_and_reports_clean_factors() {
        let params = KakParams {
            side: 3,
            count: 200,
            seed: 7,
            tol: 1e-9,
        };
        let out = run_kak(&params).unwrap();
        assert_eq!(out.verdict, "PASSES");
        assert!(out.payload["diagonal_sorted_positive"].as_bool().unwrap());
        assert!(out.payload["max_rotation_det_defect"].as_f64().unwrap() < 1e-8);
    }
}
