//! Command-line front end: deterministic seeded runs of both closure
//! engines, JSON/CSV reports, re-verification of emitted reports, and SVG
//! plots. Output only; identical configurations produce byte-identical
//! output.

mod commands;
mod generate;
pub mod report;
pub mod svg;

pub use commands::{cmd_lateral, cmd_plot, cmd_pyramid, cmd_verify};
pub use report::ReportDocument;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::scalar::Scalar;
use crate::tolerance::Tolerance;

/// Process exit codes of the `poncelet` binary.
pub mod exit {
    pub const OK: i32 = 0;
    /// A generated or verified item failed its closure check.
    pub const VERIFICATION_FAILURE: i32 = 2;
    pub const IO: i32 = 3;
    /// A plot was requested for a configuration that is not real.
    pub const NON_REAL: i32 = 4;
    pub const USAGE: i32 = 64;
    /// An input report does not conform to the `poncelet/1` schema.
    pub const SCHEMA: i32 = 65;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    Pyramid,
    Lateral,
    Plot,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Pyramid => "pyramid",
            CommandKind::Lateral => "lateral",
            CommandKind::Plot => "plot",
            CommandKind::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Svg => "svg",
        }
    }
}

/// Inclusive parameter range `lo:hi:count`; `count = 1` means the single
/// value `lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl RangeSpec {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self, String> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err("range bounds must be finite".to_string());
        }
        if count < 1 {
            return Err("range count must be at least 1".to_string());
        }
        if lo > hi {
            return Err(format!("range lower bound {lo} exceeds upper bound {hi}"));
        }
        Ok(RangeSpec { lo, hi, count })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:count, got {text:?}"));
        }
        let lo: f64 = parts[0]
            .parse()
            .map_err(|_| format!("bad range bound {:?}", parts[0]))?;
        let hi: f64 = parts[1]
            .parse()
            .map_err(|_| format!("bad range bound {:?}", parts[1]))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("bad range count {:?}", parts[2]))?;
        RangeSpec::new(lo, hi, count)
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        (0..self.count)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: usize,
    pub seed: u64,
    pub k_range: Option<RangeSpec>,
    pub start_range: Option<RangeSpec>,
    pub tol: Tolerance,
    /// True when the tolerance came from `--tol` or `PONCELET_TOL` rather
    /// than the default; `verify` then overrides the stored tolerance.
    pub tol_explicit: bool,
    pub format: OutputFormat,
    pub out: String,
    pub input: Option<PathBuf>,
}

impl RunConfig {
    pub fn k_values(&self) -> Vec<f64> {
        self.k_range
            .unwrap_or(RangeSpec {
                lo: 0.1,
                hi: 2.0,
                count: 20,
            })
            .values()
    }

    pub fn start_values(&self) -> Vec<f64> {
        self.start_range
            .unwrap_or(RangeSpec {
                lo: -2.0,
                hi: 2.0,
                count: 20,
            })
            .values()
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Schema(String),
    NonReal { context: String, value: Scalar },
    Engine(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io(_) => exit::IO,
            CliError::Schema(_) => exit::SCHEMA,
            CliError::NonReal { .. } => exit::NON_REAL,
            CliError::Engine(_) => exit::VERIFICATION_FAILURE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::NonReal { context, value } => {
                write!(f, "non-real configuration: {context}: {value}")
            }
            CliError::Engine(m) => write!(f, "verification error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "poncelet",
    version,
    about = "Generate, sweep and verify closure families of inscribed/circumscribed configurations"
)]
struct Cli {
    /// What to run: a pyramid sweep, a lateral closure run, an SVG plot, or
    /// re-verification of an emitted report.
    #[arg(value_enum)]
    command: CommandKind,
    /// Ambient dimension (pyramid) or curve degree (lateral/plot); >= 2.
    #[arg(long)]
    n: Option<usize>,
    /// Seed of the ChaCha8 generator used for all random draws.
    #[arg(long)]
    seed: Option<u64>,
    /// Family parameter sweep for `pyramid` as lo:hi:count.
    #[arg(long, value_name = "LO:HI:COUNT", allow_hyphen_values = true)]
    k: Option<String>,
    /// Trace start sweep for `lateral`/`plot` as lo:hi:count.
    #[arg(long, value_name = "LO:HI:COUNT", allow_hyphen_values = true)]
    starts: Option<String>,
    /// Residual tolerance override (also: env PONCELET_TOL).
    #[arg(long)]
    tol: Option<f64>,
    /// Output format; defaults to json (svg for plot).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Output path, or - for stdout.
    #[arg(long, default_value = "-")]
    out: String,
    /// Input report file (verify only).
    input: Option<PathBuf>,
}

fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let command = cli.command;
    let needs_generation = command != CommandKind::Verify;
    let n = match (needs_generation, cli.n) {
        (true, None) => return Err(CliError::Usage("--n is required".to_string())),
        (true, Some(n)) if n < 2 => {
            return Err(CliError::Usage(format!("--n must be at least 2, got {n}")))
        }
        (_, n) => n.unwrap_or(0),
    };
    let seed = match (needs_generation, cli.seed) {
        (true, None) => return Err(CliError::Usage("--seed is required".to_string())),
        (_, s) => s.unwrap_or(0),
    };
    if command == CommandKind::Verify && cli.input.is_none() {
        return Err(CliError::Usage(
            "verify needs an input report file".to_string(),
        ));
    }
    let k_range = match cli.k {
        Some(text) => Some(RangeSpec::parse(&text).map_err(CliError::Usage)?),
        None => None,
    };
    let start_range = match cli.starts {
        Some(text) => Some(RangeSpec::parse(&text).map_err(CliError::Usage)?),
        None => None,
    };
    let mut tol = Tolerance::default();
    let mut tol_explicit = false;
    if let Ok(text) = std::env::var("PONCELET_TOL") {
        let value: f64 = text
            .parse()
            .map_err(|_| CliError::Usage(format!("PONCELET_TOL is not a number: {text:?}")))?;
        tol = Tolerance::new(value, tol.rank_eps, tol.root_sep_eps)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        tol_explicit = true;
    }
    if let Some(value) = cli.tol {
        tol = Tolerance::new(value, tol.rank_eps, tol.root_sep_eps)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        tol_explicit = true;
    }
    let format = cli.format.unwrap_or(match command {
        CommandKind::Plot => OutputFormat::Svg,
        _ => OutputFormat::Json,
    });
    match (command, format) {
        (CommandKind::Plot, OutputFormat::Svg) => {}
        (CommandKind::Plot, other) => {
            return Err(CliError::Usage(format!(
                "plot emits svg, not {}",
                other.name()
            )))
        }
        (_, OutputFormat::Svg) => {
            return Err(CliError::Usage(
                "svg output is only available for plot".to_string(),
            ))
        }
        _ => {}
    }
    Ok(RunConfig {
        command,
        n,
        seed,
        k_range,
        start_range,
        tol,
        tol_explicit,
        format,
        out: cli.out,
        input: cli.input,
    })
}

/// Result of a successful run: the rendered payload plus the report
/// document (absent for plots) and the overall verdict.
pub struct Completed {
    pub payload: String,
    pub document: Option<ReportDocument>,
    pub all_ok: bool,
}

pub fn run(rc: &RunConfig) -> Result<Completed, CliError> {
    match rc.command {
        CommandKind::Pyramid => {
            let doc = cmd_pyramid(rc)?;
            finish_report(rc, doc)
        }
        CommandKind::Lateral => {
            let doc = cmd_lateral(rc)?;
            finish_report(rc, doc)
        }
        CommandKind::Verify => {
            let doc = cmd_verify(rc)?;
            finish_report(rc, doc)
        }
        CommandKind::Plot => {
            let payload = cmd_plot(rc)?;
            Ok(Completed {
                payload,
                document: None,
                all_ok: true,
            })
        }
    }
}

fn finish_report(rc: &RunConfig, doc: ReportDocument) -> Result<Completed, CliError> {
    let payload = match rc.format {
        OutputFormat::Json => doc.to_json(),
        OutputFormat::Csv => doc.to_csv(),
        OutputFormat::Svg => unreachable!("rejected during resolution"),
    };
    let all_ok = doc.all_ok();
    Ok(Completed {
        payload,
        document: Some(doc),
        all_ok,
    })
}

fn write_output(out: &str, payload: &str) -> std::io::Result<()> {
    if out == "-" {
        use std::io::Write;
        std::io::stdout().write_all(payload.as_bytes())
    } else {
        std::fs::write(out, payload)
    }
}

/// Full process entry: parse arguments, run, write, map to exit codes.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    exit::OK
                }
                _ => {
                    eprint!("{e}");
                    exit::USAGE
                }
            };
        }
    };
    let rc = match resolve(cli) {
        Ok(rc) => rc,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    match run(&rc) {
        Ok(completed) => {
            if let Err(e) = write_output(&rc.out, &completed.payload) {
                eprintln!("i/o error: {e}");
                return exit::IO;
            }
            if completed.all_ok {
                exit::OK
            } else {
                exit::VERIFICATION_FAILURE
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
