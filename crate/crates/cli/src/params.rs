//! Run-description plumbing: per-command flag sets, the optional JSON
//! spec file, precedence (flags override the file), range validation with
//! explicit messages, and the canonical parameter echo that is hashed into
//! every report.

use std::path::PathBuf;

use bohrlab_core::{GroupRepSpec, Matrix, SweepBudget, UnipotentOrbitSpec};
use serde_json::{Map, Value};

/// Documented parameter ceilings: symmetric power, matrix side, time
/// horizon, and sample count.
pub const MAX_K: usize = 8;
pub const MAX_N: usize = 6;
pub const MAX_T: f64 = 200.0;
pub const MAX_SAMPLES: usize = 10_000_000;
const MAX_ANGLE_POINTS: usize = 4096;
const MAX_TIME_POINTS_PER_UNIT: usize = 10_000;

/// Optional JSON run-spec file; command-line flags override its entries.
#[derive(Debug, Clone, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub command: Option<String>,
    pub parameters: Option<Value>,
    pub output_path: Option<String>,
    pub format: Option<String>,
}

impl SpecFile {
    pub fn load(path: &PathBuf) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read spec file {}: {e}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| format!("spec file {} is not a valid run spec: {e}", path.display()))
    }

    /// Deserialize the command-specific `parameters` record into a flag set.
    pub fn parameters_as<T: serde::de::DeserializeOwned + Default>(&self) -> Result<T, String> {
        match &self.parameters {
            None => Ok(T::default()),
            Some(value) => serde_json::from_value(value.clone())
                .map_err(|e| format!("spec file parameters do not fit the command: {e}")),
        }
    }
}

fn parse_floats(name: &str, text: &str) -> Result<Vec<f64>, String> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().all(|s| s.is_empty()) {
        return Err(format!("parameter {name} is empty"));
    }
    items
        .iter()
        .map(|s| {
            let x: f64 = s
                .parse()
                .map_err(|_| format!("parameter {name}: cannot parse '{s}' as a number"))?;
            if !x.is_finite() {
                return Err(format!("parameter {name}: entries must be finite"));
            }
            Ok(x)
        })
        .collect()
}

fn parse_ints(name: &str, text: &str) -> Result<Vec<i64>, String> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().all(|s| s.is_empty()) {
        return Err(format!("parameter {name} is empty"));
    }
    items
        .iter()
        .map(|s| {
            s.parse()
                .map_err(|_| format!("parameter {name}: cannot parse '{s}' as an integer"))
        })
        .collect()
}

fn parse_float_rows(name: &str, text: &str) -> Result<Vec<Vec<f64>>, String> {
    text.split(';').map(|row| parse_floats(name, row)).collect()
}

fn parse_int_rows(name: &str, text: &str) -> Result<Vec<Vec<i64>>, String> {
    text.split(';').map(|row| parse_ints(name, row)).collect()
}

/// Shortest round-trip rendering, joined with commas; the inverse of
/// `parse_floats` for every finite input.
pub fn fmt_floats(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn fmt_ints(xs: &[i64]) -> String {
    xs.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn fmt_float_rows(rows: &[Vec<f64>]) -> String {
    rows.iter()
        .map(|r| fmt_floats(r))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn fmt_int_rows(rows: &[Vec<i64>]) -> String {
    rows.iter().map(|r| fmt_ints(r)).collect::<Vec<_>>().join(";")
}

fn check_range_usize(name: &str, value: usize, lo: usize, hi: usize) -> Result<(), String> {
    if value < lo || value > hi {
        return Err(format!(
            "parameter {name} = {value} is out of range [{lo}, {hi}]"
        ));
    }
    Ok(())
}

fn build_group_spec(
    family: Option<&str>,
    k: Option<usize>,
    n: Option<usize>,
) -> Result<GroupRepSpec, String> {
    let family = family.unwrap_or("sl2-sym");
    match family {
        "sl2-sym" => {
            if n.is_some() {
                return Err("parameter n applies to the sln-standard family only".into());
            }
            let k = k.unwrap_or(1);
            check_range_usize("k", k, 1, MAX_K)?;
            Ok(GroupRepSpec::sl2_sym(k))
        }
        "sln-standard" => {
            if k.is_some() {
                return Err("parameter k applies to the sl2-sym family only".into());
            }
            let n = n.unwrap_or(2);
            check_range_usize("n", n, 2, MAX_N)?;
            Ok(GroupRepSpec::sln_standard(n))
        }
        other => Err(format!(
            "unknown family '{other}': expected sl2-sym or sln-standard"
        )),
    }
}

fn family_echo(spec: &GroupRepSpec, echo: &mut Map<String, Value>) {
    match spec.family {
        bohrlab_core::GroupFamily::Sl2SymPower { k } => {
            echo.insert("family".into(), "sl2-sym".into());
            echo.insert("k".into(), (k as u64).into());
        }
        bohrlab_core::GroupFamily::SlnStandard { n } => {
            echo.insert("family".into(), "sln-standard".into());
            echo.insert("n".into(), (n as u64).into());
        }
    }
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Debug, Clone, Default, clap::Args, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFlags {
    /// Representation family: sl2-sym (default) or sln-standard.
    #[arg(long)]
    pub family: Option<String>,
    /// Symmetric-power degree for sl2-sym, 1..=8.
    #[arg(long)]
    pub k: Option<usize>,
    /// Matrix side for sln-standard, 2..=6.
    #[arg(long)]
    pub n: Option<usize>,
    /// Base vector of the orbit, comma-separated module coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    /// Frequency vector, comma-separated dual coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    /// Strictly increasing window lengths, comma-separated, each <= 200.
    #[arg(long, allow_hyphen_values = true)]
    pub schedule: Option<String>,
    /// Estimator: quadrature (default) or monte-carlo.
    #[arg(long)]
    pub mode: Option<String>,
    /// Quadrature: rotation-angle grid size per side (the grid is the
    /// square of this count), default 64.
    #[arg(long)]
    pub angle_points: Option<usize>,
    /// Quadrature: time points per unit window length, default 200.
    #[arg(long)]
    pub time_points_per_unit: Option<usize>,
    /// Monte Carlo: draws per window, default 100000.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Monte Carlo: generator seed, default 1.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl SweepFlags {
    pub fn or(self, fallback: Self) -> Self {
        SweepFlags {
            family: self.family.or(fallback.family),
            k: self.k.or(fallback.k),
            n: self.n.or(fallback.n),
            v: self.v.or(fallback.v),
            u: self.u.or(fallback.u),
            schedule: self.schedule.or(fallback.schedule),
            mode: self.mode.or(fallback.mode),
            angle_points: self.angle_points.or(fallback.angle_points),
            time_points_per_unit: self.time_points_per_unit.or(fallback.time_points_per_unit),
            samples: self.samples.or(fallback.samples),
            seed: self.seed.or(fallback.seed),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepParams {
    pub spec: GroupRepSpec,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub schedule: Vec<f64>,
    pub budget: SweepBudget,
}

impl SweepParams {
    pub fn resolve(flags: &SweepFlags) -> Result<Self, String> {
        let spec = build_group_spec(flags.family.as_deref(), flags.k, flags.n)?;
        let v = parse_floats(
            "v",
            flags.v.as_deref().ok_or("missing required parameter v")?,
        )?;
        let u = parse_floats(
            "u",
            flags.u.as_deref().ok_or("missing required parameter u")?,
        )?;
        let schedule = parse_floats(
            "schedule",
            flags
                .schedule
                .as_deref()
                .ok_or("missing required parameter schedule")?,
        )?;
        if schedule.iter().any(|&t| t > MAX_T) {
            return Err(format!("schedule entries must be at most {MAX_T}"));
        }
        let budget = match flags.mode.as_deref().unwrap_or("quadrature") {
            "quadrature" => {
                let angle_points = flags.angle_points.unwrap_or(64);
                let time_points_per_unit = flags.time_points_per_unit.unwrap_or(200);
                check_range_usize("angle_points", angle_points, 1, MAX_ANGLE_POINTS)?;
                check_range_usize(
                    "time_points_per_unit",
                    time_points_per_unit,
                    1,
                    MAX_TIME_POINTS_PER_UNIT,
                )?;
                SweepBudget::Quadrature {
                    angle_points,
                    time_points_per_unit,
                }
            }
            "monte-carlo" => {
                let samples_per_t = flags.samples.unwrap_or(100_000);
                check_range_usize("samples", samples_per_t, 2, MAX_SAMPLES)?;
                SweepBudget::MonteCarlo {
                    samples_per_t,
                    seed: flags.seed.unwrap_or(1),
                }
            }
            other => {
                return Err(format!(
                    "unknown mode '{other}': expected quadrature or monte-carlo"
                ))
            }
        };
        Ok(SweepParams {
            spec,
            v,
            u,
            schedule,
            budget,
        })
    }

    pub fn echo(&self) -> Value {
        let mut echo = Map::new();
        family_echo(&self.spec, &mut echo);
        echo.insert("v".into(), fmt_floats(&self.v).into());
        echo.insert("u".into(), fmt_floats(&self.u).into());
        echo.insert("schedule".into(), fmt_floats(&self.schedule).into());
        match self.budget {
            SweepBudget::Quadrature {
                angle_points,
                time_points_per_unit,
            } => {
                echo.insert("mode".into(), "quadrature".into());
                echo.insert("angle_points".into(), (angle_points as u64).into());
                echo.insert(
                    "time_points_per_unit".into(),
                    (time_points_per_unit as u64).into(),
                );
            }
            SweepBudget::MonteCarlo { samples_per_t, seed } => {
                echo.insert("mode".into(), "monte-carlo".into());
                echo.insert("samples".into(), (samples_per_t as u64).into());
                echo.insert("seed".into(), seed.into());
            }
        }
        Value::Object(echo)
    }
}

// ---------------------------------------------------------------------------
// vdc

#[derive(Debug, Clone, Default, clap::Args, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VdcFlags {
    /// Phase shape: linear (default), quadratic, or profile.
    #[arg(long)]
    pub phase: Option<String>,
    /// Left end of the integration interval, default 0.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Right end of the integration interval (required).
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Linear/quadratic frequency, default 1.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Quadratic curvature, default 1.
    #[arg(long, allow_hyphen_values = true)]
    pub accel: Option<f64>,
    /// Constant phase offset, default 0.
    #[arg(long, allow_hyphen_values = true)]
    pub offset: Option<f64>,
    /// Profile coefficients, comma-separated (profile phase only).
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    /// Profile exponential rates, comma-separated (profile phase only).
    #[arg(long, allow_hyphen_values = true)]
    pub rates: Option<String>,
    /// Quadrature tolerance, default 1e-9.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
}

impl VdcFlags {
    pub fn or(self, fallback: Self) -> Self {
        VdcFlags {
            phase: self.phase.or(fallback.phase),
            a: self.a.or(fallback.a),
            b: self.b.or(fallback.b),
            omega: self.omega.or(fallback.omega),
            accel: self.accel.or(fallback.accel),
            offset: self.offset.or(fallback.offset),
            coeffs: self.coeffs.or(fallback.coeffs),
            rates: self.rates.or(fallback.rates),
            tol: self.tol.or(fallback.tol),
        }
    }
}

#[derive(Debug, Clone)]
pub enum PhaseKind {
    Linear { omega: f64, offset: f64 },
    Quadratic { accel: f64, omega: f64, offset: f64 },
    Profile { coeffs: Vec<f64>, rates: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct VdcParams {
    pub phase: PhaseKind,
    pub a: f64,
    pub b: f64,
    pub tol: f64,
}

impl VdcParams {
    pub fn resolve(flags: &VdcFlags) -> Result<Self, String> {
        let a = flags.a.unwrap_or(0.0);
        let b = flags.b.ok_or("missing required parameter b")?;
        if !a.is_finite() || !b.is_finite() {
            return Err("interval ends a and b must be finite".into());
        }
        if b <= a {
            return Err(format!("interval [{a}, {b}] is empty: need b > a"));
        }
        let tol = flags.tol.unwrap_or(1e-9);
        if !(tol.is_finite() && tol > 0.0) {
            return Err("parameter tol must be a positive number".into());
        }
        let reject_profile_fields = || -> Result<(), String> {
            if flags.coeffs.is_some() || flags.rates.is_some() {
                return Err("parameters coeffs/rates apply to the profile phase only".into());
            }
            Ok(())
        };
        let phase = match flags.phase.as_deref().unwrap_or("linear") {
            "linear" => {
                reject_profile_fields()?;
                if flags.accel.is_some() {
                    return Err("parameter accel applies to the quadratic phase only".into());
                }
                PhaseKind::Linear {
                    omega: flags.omega.unwrap_or(1.0),
                    offset: flags.offset.unwrap_or(0.0),
                }
            }
            "quadratic" => {
                reject_profile_fields()?;
                PhaseKind::Quadratic {
                    accel: flags.accel.unwrap_or(1.0),
                    omega: flags.omega.unwrap_or(1.0),
                    offset: flags.offset.unwrap_or(0.0),
                }
            }
            "profile" => {
                if flags.omega.is_some() || flags.accel.is_some() || flags.offset.is_some() {
                    return Err(
                        "parameters omega/accel/offset do not apply to the profile phase".into(),
                    );
                }
                let coeffs = parse_floats(
                    "coeffs",
                    flags
                        .coeffs
                        .as_deref()
                        .ok_or("profile phase needs parameter coeffs")?,
                )?;
                let rates = parse_floats(
                    "rates",
                    flags
                        .rates
                        .as_deref()
                        .ok_or("profile phase needs parameter rates")?,
                )?;
                if coeffs.len() != rates.len() {
                    return Err(format!(
                        "coeffs and rates must have equal length, got {} and {}",
                        coeffs.len(),
                        rates.len()
                    ));
                }
                PhaseKind::Profile { coeffs, rates }
            }
            other => {
                return Err(format!(
                    "unknown phase '{other}': expected linear, quadratic, or profile"
                ))
            }
        };
        Ok(VdcParams { phase, a, b, tol })
    }

    pub fn echo(&self) -> Value {
        let mut echo = Map::new();
        echo.insert("a".into(), self.a.into());
        echo.insert("b".into(), self.b.into());
        echo.insert("tol".into(), self.tol.into());
        match &self.phase {
            PhaseKind::Linear { omega, offset } => {
                echo.insert("phase".into(), "linear".into());
                echo.insert("omega".into(), (*omega).into());
                echo.insert("offset".into(), (*offset).into());
            }
            PhaseKind::Quadratic {
                accel,
                omega,
                offset,
            } => {
                echo.insert("phase".into(), "quadratic".into());
                echo.insert("accel".into(), (*accel).into());
                echo.insert("omega".into(), (*omega).into());
                echo.insert("offset".into(), (*offset).into());
            }
            PhaseKind::Profile { coeffs, rates } => {
                echo.insert("phase".into(), "profile".into());
                echo.insert("coeffs".into(), fmt_floats(coeffs).into());
                echo.insert("rates".into(), fmt_floats(rates).into());
            }
        }
        Value::Object(echo)
    }
}

// ---------------------------------------------------------------------------
// weyl

#[derive(Debug, Clone, Default, clap::Args, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeylFlags {
    /// Representation family: sl2-sym (default) or sln-standard.
    #[arg(long)]
    pub family: Option<String>,
    /// Symmetric-power degree for sl2-sym, 1..=8.
    #[arg(long)]
    pub k: Option<usize>,
    /// Matrix side for sln-standard, 2..=6.
    #[arg(long)]
    pub n: Option<usize>,
    /// Base vector of the orbit, comma-separated module coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    /// Time horizon of the orbit window, default 20, at most 200.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Orbit draws, default 100000.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Generator seed, default 11.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Torus quotient rows, semicolon-separated comma rows; default is the
    /// identity quotient of the module dimension.
    #[arg(long, allow_hyphen_values = true)]
    pub generators: Option<String>,
    /// Frequency modes, semicolon-separated integer rows; default is the
    /// unit modes plus the all-ones mode.
    #[arg(long, allow_hyphen_values = true)]
    pub modes: Option<String>,
}

impl WeylFlags {
    pub fn or(self, fallback: Self) -> Self {
        WeylFlags {
            family: self.family.or(fallback.family),
            k: self.k.or(fallback.k),
            n: self.n.or(fallback.n),
            v: self.v.or(fallback.v),
            t: self.t.or(fallback.t),
            samples: self.samples.or(fallback.samples),
            seed: self.seed.or(fallback.seed),
            generators: self.generators.or(fallback.generators),
            modes: self.modes.or(fallback.modes),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeylParams {
    pub spec: GroupRepSpec,
    pub v: Vec<f64>,
    pub t: f64,
    pub samples: usize,
    pub seed: u64,
    pub generators: Vec<Vec<f64>>,
    pub modes: Vec<Vec<i64>>,
}

impl WeylParams {
    pub fn resolve(flags: &WeylFlags) -> Result<Self, String> {
        let spec = build_group_spec(flags.family.as_deref(), flags.k, flags.n)?;
        let v = parse_floats(
            "v",
            flags.v.as_deref().ok_or("missing required parameter v")?,
        )?;
        let t = flags.t.unwrap_or(20.0);
        if !(t.is_finite() && t > 0.0 && t <= MAX_T) {
            return Err(format!("parameter t must lie in (0, {MAX_T}], got {t}"));
        }
        let samples = flags.samples.unwrap_or(100_000);
        check_range_usize("samples", samples, 2, MAX_SAMPLES)?;
        let generators = match flags.generators.as_deref() {
            Some(text) => parse_float_rows("generators", text)?,
            None => (0..spec.rep_dim())
                .map(|i| {
                    (0..spec.rep_dim())
                        .map(|j| if i == j { 1.0 } else { 0.0 })
                        .collect()
                })
                .collect(),
        };
        let torus_dim = generators.len();
        let modes = match flags.modes.as_deref() {
            Some(text) => parse_int_rows("modes", text)?,
            None => {
                let mut modes: Vec<Vec<i64>> = (0..torus_dim)
                    .map(|i| (0..torus_dim).map(|j| i64::from(i == j)).collect())
                    .collect();
                if torus_dim > 1 {
                    modes.push(vec![1; torus_dim]);
                }
                modes
            }
        };
        if !modes.iter().any(|m| m.iter().any(|&c| c != 0)) {
            return Err("modes must include at least one nonzero mode".into());
        }
        Ok(WeylParams {
            spec,
            v,
            t,
            samples,
            seed: flags.seed.unwrap_or(11),
            generators,
            modes,
        })
    }

    pub fn echo(&self) -> Value {
        let mut echo = Map::new();
        family_echo(&self.spec, &mut echo);
        echo.insert("v".into(), fmt_floats(&self.v).into());
        echo.insert("t".into(), self.t.into());
        echo.insert("samples".into(), (self.samples as u64).into());
        echo.insert("seed".into(), self.seed.into());
        echo.insert("generators".into(), fmt_float_rows(&self.generators).into());
        echo.insert("modes".into(), fmt_int_rows(&self.modes).into());
        Value::Object(echo)
    }
}

// ---------------------------------------------------------------------------
// kak

#[derive(Debug, Clone, Default, clap::Args, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KakFlags {
    /// Matrix side, 2..=6, default 2.
    #[arg(long)]
    pub side: Option<usize>,
    /// Number of random determinant-one matrices, default 1000.
    #[arg(long)]
    pub count: Option<usize>,
    /// Generator seed, default 1.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reconstruction tolerance, default 1e-9.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
}

impl KakFlags {
    pub fn or(self, fallback: Self) -> Self {
        KakFlags {
            side: self.side.or(fallback.side),
            count: self.count.or(fallback.count),
            seed: self.seed.or(fallback.seed),
            tol: self.tol.or(fallback.tol),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KakParams {
    pub side: usize,
    pub count: usize,
    pub seed: u64,
    pub tol: f64,
}

impl KakParams {
    pub fn resolve(flags: &KakFlags) -> Result<Self, String> {
        let side = flags.side.unwrap_or(2);
        check_range_usize("side", side, 2, MAX_N)?;
        let count = flags.count.unwrap_or(1000);
        check_range_usize("count", count, 1, MAX_SAMPLES)?;
        let tol = flags.tol.unwrap_or(1e-9);
        if !(tol.is_finite() && tol > 0.0) {
            return Err("parameter tol must be a positive number".into());
        }
        Ok(KakParams {
            side,
            count,
            seed: flags.seed.unwrap_or(1),
            tol,
        })
    }

    pub fn echo(&self) -> Value {
        let mut echo = Map::new();
        echo.insert("side".into(), (self.side as u64).into());
        echo.insert("count".into(), (self.count as u64).into());
        echo.insert("seed".into(), self.seed.into());
        echo.insert("tol".into(), self.tol.into());
        Value::Object(echo)
    }
}

// ---------------------------------------------------------------------------
// circles

#[derive(Debug, Clone, Default, clap::Args, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CirclesFlags {
    /// Total sample count (half per circle), even, at least 4; default 100000.
    #[arg(long)]
    pub samples: Option<usize>,
}

impl CirclesFlags {
    pub fn or(self, fallback: Self) -> Self {
        CirclesFlags {
            samples: self.samples.or(fallback.samples),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CirclesParams {
    pub samples: usize,
}

impl CirclesParams {
    pub fn resolve(flags: &CirclesFlags) -> Result<Self, String> {
        let samples = flags.samples.unwrap_or(100_000);
        check_range_usize("samples", samples, 4, MAX_SAMPLES)?;
        Ok(CirclesParams { samples })
    }

    pub fn echo(&self) -> Value {
        let mut echo = Map::new();
        echo.insert("samples".into(), (self.samples as u64).into());
        Value::Object(echo)
    }
}

// ---------------------------------------------------------------------------
// nilpotent

#[derive(Debug, Clone, Default, clap::Args, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NilpotentFlags {
    /// Side of the single-Jordan-block nilpotent generator, 2..=8, default 3.
    #[arg(long)]
    pub jordan: Option<usize>,
    /// Base vector, comma-separated; default is the last coordinate vector.
    #[arg(long, allow_hyphen_values = true)]
    pub base: Option<String>,
    /// Per-moving-coordinate scalings, comma-separated; default is the
    /// square roots of the first primes.
    #[arg(long, allow_hyphen_values = true)]
    pub scalings: Option<String>,
    /// Frequency modes over the moving coordinates, semicolon-separated
    /// integer rows; default is the unit modes plus the all-ones mode.
    #[arg(long, allow_hyphen_values = true)]
    pub modes: Option<String>,
    /// Number of time samples, default 100000.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Time step between samples, default 1.
    #[arg(long, allow_hyphen_values = true)]
    pub step: Option<f64>,
}

impl NilpotentFlags {
    pub fn or(self, fallback: Self) -> Self {
        NilpotentFlags {
            jordan: self.jordan.or(fallback.jordan),
            base: self.base.or(fallback.base),
            scalings: self.scalings.or(fallback.scalings),
            modes: self.modes.or(fallback.modes),
            samples: self.samples.or(fallback.samples),
            step: self.step.or(fallback.step),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NilpotentParams {
    pub jordan: usize,
    pub core: UnipotentOrbitSpec,
}

impl NilpotentParams {
    pub fn resolve(flags: &NilpotentFlags) -> Result<Self, String> {
        let jordan = flags.jordan.unwrap_or(3);
        check_range_usize("jordan", jordan, 2, MAX_K)?;
        let mut nilpotent = Matrix::zeros(jordan, jordan);
        for i in 0..jordan - 1 {
            nilpotent[(i, i + 1)] = 1.0;
        }
        let base = match flags.base.as_deref() {
            Some(text) => parse_floats("base", text)?,
            None => {
                let mut base = vec![0.0; jordan];
                base[jordan - 1] = 1.0;
                base
            }
        };
        if base.len() != jordan {
            return Err(format!(
                "base must have {jordan} coordinates, got {}",
                base.len()
            ));
        }
        // The moving-coordinate count (and with it the default scaling and
        // mode shapes) depends on the base vector, so probe it up front.
        let moving = probe_moving_coordinates(&nilpotent, &base)?;
        let scalings = match flags.scalings.as_deref() {
            Some(text) => parse_floats("scalings", text)?,
            None => {
                const PRIMES: [f64; 7] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0];
                (0..moving).map(|i| PRIMES[i % PRIMES.len()].sqrt()).collect()
            }
        };
        let modes = match flags.modes.as_deref() {
            Some(text) => parse_int_rows("modes", text)?,
            None => {
                let mut modes: Vec<Vec<i64>> = (0..moving)
                    .map(|i| (0..moving).map(|j| i64::from(i == j)).collect())
                    .collect();
                if moving > 1 {
                    modes.push(vec![1; moving]);
                }
                modes
            }
        };
        if !modes.iter().any(|m| m.iter().any(|&c| c != 0)) {
            return Err("modes must include at least one nonzero mode".into());
        }
        let samples = flags.samples.unwrap_or(100_000);
        check_range_usize("samples", samples, 2, MAX_SAMPLES)?;
        let step = flags.step.unwrap_or(1.0);
        if !(step.is_finite() && step > 0.0) {
            return Err("parameter step must be a positive number".into());
        }
        Ok(NilpotentParams {
            jordan,
            core: UnipotentOrbitSpec {
                nilpotent,
                base,
                scalings,
                modes,
                samples,
                step,
            },
        })
    }

    pub fn echo(&self) -> Value {
        let mut echo = Map::new();
        echo.insert("jordan".into(), (self.jordan as u64).into());
        echo.insert("base".into(), fmt_floats(&self.core.base).into());
        echo.insert("scalings".into(), fmt_floats(&self.core.scalings).into());
        echo.insert("modes".into(), fmt_int_rows(&self.core.modes).into());
        echo.insert("samples".into(), (self.core.samples as u64).into());
        echo.insert("step".into(), self.core.step.into());
        Value::Object(echo)
    }
}

/// Count the non-constant coordinates of the polynomial orbit t -> e^{tX} b.
fn probe_moving_coordinates(nilpotent: &Matrix, base: &[f64]) -> Result<usize, String> {
    let polys = bohrlab_core::orbit_polynomials(nilpotent, base).map_err(|e| e.to_string())?;
    Ok(polys.iter().filter(|p| p.len() > 1).count())
}
