//! `bohrlab`: run one orbit-measure experiment and write a deterministic
//! machine-readable report.
//!
//! Exit status: 0 when the run verifies the statement it tests (decay,
//! certificate, density, reconstruction); 2 when the outcome is
//! inconclusive or unverified; 1 on errors.

mod commands;
mod emit;
mod params;

use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use serde_json::{Map, Value};

use commands::RunOutput;
use params::SpecFile;

#[derive(Debug, Parser)]
#[command(
    name = "bohrlab",
    version,
    about = "Orbit-measure laboratory: decay sweeps, derivative-test certificates, \
             torus equidistribution, and factorization checks with deterministic reports"
)]
struct Cli {
    /// JSON run-spec file supplying parameter defaults; explicit flags
    /// override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Report destination; when omitted the report goes to standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Report format: json (default) or csv.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker thread count; overrides the BOHR_LAB_WORKERS variable.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Sweep the orbit measure's Fourier transform over growing windows.
    Sweep(params::SweepFlags),
    /// Certify the first-derivative test for one oscillatory integral.
    Vdc(params::VdcFlags),
    /// Push an orbit to a torus quotient and test its Weyl sums.
    Weyl(params::WeylFlags),
    /// Factor random determinant-one matrices and check reconstruction.
    Kak(params::KakFlags),
    /// Run the deterministic two-circle mixture with closed-form checks.
    Circles(params::CirclesFlags),
    /// Sample a polynomial orbit of a nilpotent generator: affine hull
    /// and Weyl sums.
    Nilpotent(params::NilpotentFlags),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sweep(_) => "sweep",
            Command::Vdc(_) => "vdc",
            Command::Weyl(_) => "weyl",
            Command::Kak(_) => "kak",
            Command::Circles(_) => "circles",
            Command::Nilpotent(_) => "nilpotent",
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let kind = err.kind();
            let _ = err.print();
            let code = if matches!(
                kind,
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                0
            } else {
                1
            };
            std::process::exit(code);
        }
    };
    match execute(cli) {
        Ok(verdict) => {
            std::process::exit(if commands::verdict_passes(verdict) { 0 } else { 2 })
        }
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(1);
        }
    }
}

/// Full run: resolve configuration, dispatch, emit the report, and return
/// the verdict that decides the exit status.
fn execute(cli: Cli) -> Result<&'static str, String> {
    configure_workers(cli.workers)?;

    let file = match &cli.spec {
        Some(path) => SpecFile::load(path)?,
        None => SpecFile::default(),
    };
    let name = cli.command.name();
    if let Some(file_command) = &file.command {
        if file_command != name {
            return Err(format!(
                "spec file is for command '{file_command}', but '{name}' was invoked"
            ));
        }
    }

    let started = Instant::now();
    let (echo, output) = dispatch(&cli.command, &file)?;
    let hash = emit::input_hash(name, &echo)?;

    let mut report = Map::new();
    report.insert("command".into(), name.into());
    report.insert("input_hash".into(), hash.into());
    report.insert("parameters".into(), echo);
    report.insert("result".into(), output.payload.clone());
    report.insert("schema_version".into(), 1u64.into());

    let format = cli
        .format
        .clone()
        .or_else(|| file.format.clone())
        .unwrap_or_else(|| "json".to_string());
    let text = match format.as_str() {
        "json" => emit::canonical_json(&Value::Object(report))?,
        "csv" => {
            let (header, rows) = output.csv.as_ref().ok_or_else(|| {
                format!("csv format is defined for sweep and weyl-sum reports, not for {name}")
            })?;
            emit::csv_document(header, rows)
        }
        other => return Err(format!("unknown format '{other}': expected json or csv")),
    };

    let destination = cli
        .out
        .clone()
        .or_else(|| file.output_path.as_ref().map(PathBuf::from));
    match &destination {
        Some(path) => emit::atomic_write(path, &text)?,
        None => print!("{text}"),
    }

    if let Some(note) = &output.note {
        eprintln!("note: {note}");
    }
    eprintln!("verdict: {}", output.verdict);
    if let Some(path) = &destination {
        eprintln!("report: {}", path.display());
    }
    eprintln!("timing: {:.3}s", started.elapsed().as_secs_f64());
    Ok(output.verdict)
}

/// Merge flag and spec-file parameters (flags win), then run the command.
/// Returns the canonical parameter echo alongside the run output.
fn dispatch(command: &Command, file: &SpecFile) -> Result<(Value, RunOutput), String> {
    match command {
        Command::Sweep(flags) => {
            let merged = flags.clone().or(file.parameters_as()?);
            let params = params::SweepParams::resolve(&merged)?;
            Ok((params.echo(), commands::run_sweep(&params)?))
        }
        Command::Vdc(flags) => {
            let merged = flags.clone().or(file.parameters_as()?);
            let params = params::VdcParams::resolve(&merged)?;
            Ok((params.echo(), commands::run_vdc(&params)?))
        }
        Command::Weyl(flags) => {
            let merged = flags.clone().or(file.parameters_as()?);
            let params = params::WeylParams::resolve(&merged)?;
            Ok((params.echo(), commands::run_weyl(&params)?))
        }
        Command::Kak(flags) => {
            let merged = flags.clone().or(file.parameters_as()?);
            let params = params::KakParams::resolve(&merged)?;
            Ok((params.echo(), commands::run_kak(&params)?))
        }
        Command::Circles(flags) => {
            let merged = flags.clone().or(file.parameters_as()?);
            let params = params::CirclesParams::resolve(&merged)?;
            Ok((params.echo(), commands::run_circles(&params)?))
        }
        Command::Nilpotent(flags) => {
            let merged = flags.clone().or(file.parameters_as()?);
            let params = params::NilpotentParams::resolve(&merged)?;
            Ok((params.echo(), commands::run_nilpotent(&params)?))
        }
    }
}

/// Apply the worker-count configuration: the --workers flag wins over the
/// BOHR_LAB_WORKERS variable; with neither present rayon keeps its default.
fn configure_workers(flag: Option<usize>) -> Result<(), String> {
    let from_env = || -> Result<Option<usize>, String> {
        match std::env::var("BOHR_LAB_WORKERS") {
            Ok(text) => {
                let n: usize = text.trim().parse().map_err(|_| {
                    format!("BOHR_LAB_WORKERS must be a positive integer, got '{text}'")
                })?;
                Ok(Some(n))
            }
            Err(std::env::VarError::NotPresent) => Ok(None),
            Err(e) => Err(format!("cannot read BOHR_LAB_WORKERS: {e}")),
        }
    };
    let workers = match flag {
        Some(n) => Some(n),
        None => from_env()?,
    };
    if let Some(n) = workers {
        if n == 0 || n > 512 {
            return Err(format!("worker count {n} is out of range [1, 512]"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| format!("cannot configure the worker pool: {e}"))?;
    }
    Ok(())
}
