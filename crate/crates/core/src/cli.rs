//! Command-line front end: argument types, spec construction from flags,
//! and the report document.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraDim, AlgebraError};
use crate::formats::{self, FormatError};
use crate::simplex::{build_lambda, LambdaFrame, SimplexError};
use crate::topology::{fixed_set_prediction, TopologyError};
use crate::variety::{self, Field, VarietyError, VarietySpec};
use crate::verify::{self, Check, PredictionRecord, SuiteOptions};

#[derive(Debug, Parser)]
#[command(
    name = "divquad",
    version,
    about = "Division-algebra quadric manifolds: verification, sampling and predictions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Composition, braid and alternative laws on random tuples.
    VerifyAlgebra(RunArgs),
    /// Frame geometry, reconstruction and the Span(λ, 1) round trip.
    VerifySimplex(RunArgs),
    /// Sampled points: residual, regularity, |VW| < 1/2, torus invariance.
    VerifyVariety(RunArgs),
    /// Y ↔ X, the relation G = M·F, the orbit-space round trip and the Hopf map.
    VerifyMaps(RunArgs),
    /// Torus-fixed points: V = 0 or W = 0, two components.
    VerifyFixedPoints(RunArgs),
    /// Write a point cloud of the variety.
    Sample(RunArgs),
    /// Predicted diffeomorphism type, Betti numbers and freeness verdict.
    Predict(RunArgs),
    /// inverse_psi_phi ∘ ψ ∘ φ on folded samples and boundary points.
    Roundtrip(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyAlgebra(_) => "verify-algebra",
            Command::VerifySimplex(_) => "verify-simplex",
            Command::VerifyVariety(_) => "verify-variety",
            Command::VerifyMaps(_) => "verify-maps",
            Command::VerifyFixedPoints(_) => "verify-fixed-points",
            Command::Sample(_) => "sample",
            Command::Predict(_) => "predict",
            Command::Roundtrip(_) => "roundtrip",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::VerifyAlgebra(a)
            | Command::VerifySimplex(a)
            | Command::VerifyVariety(a)
            | Command::VerifyMaps(a)
            | Command::VerifyFixedPoints(a)
            | Command::Sample(a)
            | Command::Predict(a)
            | Command::Roundtrip(a) => a,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunArgs {
    /// Algebra dimension (1, 2, 4 or 8); verify suites run all four when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of Z coordinates. With the standard frame a value below n + 1
    /// keeps the first m frame vectors.
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of (V, W) pairs.
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value = "complex")]
    pub field: Field,
    /// `standard`, `none` (empty frame) or a path to a frame file.
    #[arg(long, default_value = "standard")]
    pub frame: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Report path; for `sample`, the point-cloud path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report path for `sample` (default: stdout, or stderr when the cloud goes to stdout).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Include wall-clock time in the report.
    #[arg(long, default_value_t = false)]
    pub timing: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputInfo {
    pub path: Option<PathBuf>,
    pub records: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunArgs,
    pub summary: Summary,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub predictions: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    fn new(command: &Command, checks: Vec<Check>, predictions: Vec<serde_json::Value>) -> Report {
        let passed = checks.iter().filter(|c| c.pass).count();
        Report {
            command: command.name().to_string(),
            config: command.args().clone(),
            summary: Summary {
                total: checks.len(),
                passed,
                failed: checks.len() - passed,
                all_passed: passed == checks.len(),
            },
            checks,
            predictions,
            output: None,
            timing_ms: None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.all_passed
    }

    pub fn to_json(&self) -> Result<String, serde_json::Error> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

fn parse_dim(n: usize) -> Result<AlgebraDim, CliError> {
    Ok(AlgebraDim::new(n)?)
}

fn dims(args: &RunArgs) -> Result<Vec<AlgebraDim>, CliError> {
    match args.n {
        Some(n) => Ok(vec![parse_dim(n)?]),
        None => Ok(AlgebraDim::ALL.to_vec()),
    }
}

fn require_n(args: &RunArgs, command: &str) -> Result<AlgebraDim, CliError> {
    let n = args.n.ok_or_else(|| CliError::Usage(format!("{command} requires --n")))?;
    parse_dim(n)
}

/// Whether the flags describe something other than the standard variety.
fn is_custom(args: &RunArgs) -> bool {
    args.frame != "standard" || args.m.is_some() || args.s != 1
}

/// Build the variety described by the flags.
pub fn build_spec(args: &RunArgs, dim: AlgebraDim) -> Result<VarietySpec, CliError> {
    if args.s == 0 {
        return Err(CliError::Usage("--s must be at least 1".into()));
    }
    let frame = match args.frame.as_str() {
        "standard" => {
            let full = build_lambda(dim);
            match args.m {
                None => full,
                Some(m) if m <= full.len() => LambdaFrame::new(dim, full.vectors()[..m].to_vec())?,
                Some(m) => {
                    return Err(CliError::Usage(format!(
                        "--m {m} exceeds the {} vectors of the standard frame",
                        full.len()
                    )))
                }
            }
        }
        "none" => LambdaFrame::new(dim, Vec::new())?,
        path => {
            let frame = formats::load_frame(path.as_ref(), dim)?;
            if let Some(m) = args.m.filter(|&m| m != frame.len()) {
                return Err(CliError::Usage(format!("--m {m} but the frame file has {} vectors", frame.len())));
            }
            frame
        }
    };
    if args.frame == "none" && args.m.is_some_and(|m| m != 0) {
        return Err(CliError::Usage("--frame none means m = 0".into()));
    }
    if args.s == 1 && frame.len() == dim.get() + 1 && frame.is_standard() {
        return Ok(VarietySpec::standard_with_frame(frame, args.field)?);
    }
    Ok(VarietySpec::general(frame, args.s, args.field)?)
}

fn suite_options(args: &RunArgs) -> Result<SuiteOptions, CliError> {
    Ok(SuiteOptions { dims: dims(args)?, field: args.field, seed: args.seed, count: args.count, tol: args.tol })
}

fn reject_custom(args: &RunArgs, command: &str) -> Result<(), CliError> {
    if is_custom(args) {
        return Err(CliError::Usage(format!(
            "{command} runs on the standard variety; --frame, --m and --s are not accepted"
        )));
    }
    Ok(())
}

fn write_text(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn custom_variety_checks(args: &RunArgs, dim: AlgebraDim) -> Result<Vec<Check>, CliError> {
    let spec = build_spec(args, dim)?;
    let count = args.count.unwrap_or(1_000);
    let points = variety::sample(&spec, args.seed, count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    Ok(verify::sample_checks(&spec, &points, &mut rng, args.tol.unwrap_or(variety::SAMPLE_RESIDUAL)))
}

/// Run a command and produce its report. `sample` also writes its point
/// cloud here.
pub fn dispatch(command: &Command) -> Result<Report, CliError> {
    let start = Instant::now();
    let args = command.args();
    let mut predictions = Vec::new();
    let mut output = None;
    let checks = match command {
        Command::VerifyAlgebra(_) => {
            reject_custom(args, "verify-algebra")?;
            verify::algebra_suite(&suite_options(args)?)
        }
        Command::VerifySimplex(_) => {
            reject_custom(args, "verify-simplex")?;
            verify::simplex_suite(&suite_options(args)?)
        }
        Command::VerifyVariety(_) => {
            if is_custom(args) {
                custom_variety_checks(args, require_n(args, "verify-variety with a custom frame")?)?
            } else {
                verify::variety_suite(&suite_options(args)?)
            }
        }
        Command::VerifyMaps(_) => {
            reject_custom(args, "verify-maps")?;
            verify::maps_suite(&suite_options(args)?)
        }
        Command::Roundtrip(_) => {
            reject_custom(args, "roundtrip")?;
            let count = args.count.unwrap_or(1_000);
            let tol = args.tol.unwrap_or(crate::maps::MAP_TOL);
            let mut checks = Vec::new();
            for dim in dims(args)? {
                let spec = VarietySpec::standard(dim, args.field);
                let points = variety::sample(&spec, args.seed, count)?;
                checks.extend(verify::roundtrip_checks(&spec, &points, args.seed, count, tol));
            }
            checks
        }
        Command::VerifyFixedPoints(_) => {
            reject_custom(args, "verify-fixed-points")?;
            let count = args.count.unwrap_or(1_000);
            dims(args)?
                .into_iter()
                .map(|dim| verify::fixed_point_check(&VarietySpec::standard(dim, args.field), args.seed, count))
                .collect()
        }
        Command::Predict(_) => {
            let dim = require_n(args, "predict")?;
            let spec = build_spec(args, dim)?;
            let record: PredictionRecord = verify::prediction_record("variety", &spec)?;
            let checks = verify::prediction_checks(&record);
            predictions.push(serde_json::to_value(&record)?);
            if spec.is_standard() {
                for count in 1..=spec.n() + 1 {
                    let d = fixed_set_prediction(&spec, count)?;
                    predictions.push(serde_json::json!({
                        "label": format!("fixed-set[circles={count}]"),
                        "descriptor": d,
                        "betti": d.poincare().betti,
                    }));
                }
            }
            checks
        }
        Command::Sample(_) => {
            let dim = require_n(args, "sample")?;
            let spec = build_spec(args, dim)?;
            let count = args.count.unwrap_or(100);
            let points = variety::sample(&spec, args.seed, count)?;
            match &args.out {
                Some(p) => formats::write_cloud(BufWriter::new(File::create(p)?), &spec, &points)?,
                None => formats::write_cloud(io::stdout().lock(), &spec, &points)?,
            }
            output = Some(OutputInfo { path: args.out.clone(), records: points.len() });
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            verify::sample_checks(&spec, &points, &mut rng, args.tol.unwrap_or(variety::SAMPLE_RESIDUAL))
        }
    };
    let mut report = Report::new(command, checks, predictions);
    report.output = output;
    if args.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

/// Run the command, write the report and map the outcome to an exit code:
/// 0 when every check passes, 1 when some check fails, 2 on errors.
pub fn run(cli: Cli) -> ExitCode {
    let command = cli.command;
    let args = command.args().clone();
    let outcome = dispatch(&command).and_then(|report| {
        let json = report.to_json()?;
        match &command {
            Command::Sample(_) => match (&args.report, &args.out) {
                (Some(_), _) => write_text(&args.report, &json)?,
                (None, Some(_)) => write_text(&None, &json)?,
                (None, None) => io::stderr().write_all(json.as_bytes())?,
            },
            _ => write_text(&args.out, &json)?,
        }
        Ok(report.all_passed())
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
