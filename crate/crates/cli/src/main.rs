//! `gaugecheck`: verify gauge-covariance identities symbolically and numerically.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on usage
//! or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaugecheck_core::campaign::{check_covariance, field_file_records, CampaignConfig};
use gaugecheck_core::fieldfile::{transform_document, FieldFile, FieldFileError};
use gaugecheck_core::fieldnum::{FieldError, SignConvention, TransformConvention};
use gaugecheck_core::identities::{parse_identity_file, verify_identities, IdentityOptions};
use gaugecheck_core::report::Report;
use gaugecheck_core::symca::{normalize, parse_expr};
use serde_json::Value;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "gaugecheck", version, about = "Gauge covariance checks for SU(2) field strengths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the symbolic identity corpus.
    VerifyIdentities {
        /// Drop the commutator term from the field strength; covariance
        /// checks then expect a nonzero residual.
        #[arg(long)]
        without_commutator: bool,
        /// Extra identities, one `[name:] LHS == RHS` per line.
        #[arg(long, value_name = "PATH")]
        identities: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the seeded numerical campaign.
    CheckCovariance {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Fixed coupling; drawn per trial when omitted.
        #[arg(long, allow_negative_numbers = true)]
        epsilon: Option<f64>,
        #[command(flatten)]
        conventions: Conventions,
        /// Also check this configuration at its own sample points.
        #[arg(long, value_name = "PATH")]
        field: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Write B', F and F' for a field configuration file.
    Transform {
        #[arg(long, value_name = "PATH")]
        field: PathBuf,
        #[command(flatten)]
        conventions: Conventions,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Print the normal form of an expression.
    Normalize { expression: String },
}

#[derive(Args)]
struct Output {
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct Conventions {
    #[arg(long, value_enum, default_value_t = Sign::Minus)]
    sign: Sign,
    #[arg(long, value_enum, default_value_t = Convention::Ym)]
    convention: Convention,
}

impl Conventions {
    fn resolve(&self) -> (SignConvention, TransformConvention) {
        let sign = match self.sign {
            Sign::Minus => SignConvention::Minus,
            Sign::Plus => SignConvention::Plus,
        };
        let transform = match self.convention {
            Convention::Ym => TransformConvention::Ym,
            Convention::Author => TransformConvention::Author,
        };
        (sign, transform)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sign {
    Minus,
    Plus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Ym,
    Author,
}

/// An error message with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(report: &Report, output: &Output) -> Result<u8, Failure> {
    let text = match output.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    write_output(output.out.as_deref(), &text)?;
    Ok(if report.passed { 0 } else { EXIT_FAIL })
}

fn load_field(path: &Path, conventions: &Conventions) -> Result<(gaugecheck_core::fieldnum::FieldSpec, Vec<gaugecheck_core::fieldnum::SamplePoint>), Failure> {
    let (sign, transform) = conventions.resolve();
    let text = read(path)?;
    FieldFile::from_json(&text).and_then(|f| f.to_spec(sign, transform)).map_err(|e| {
        let code = match e {
            FieldFileError::Field(FieldError::ZeroEpsilon) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Failure { code, message: format!("{}: {e}", path.display()) }
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::VerifyIdentities { without_commutator, identities, output } => {
            let custom = match identities {
                Some(path) => {
                    let text = read(&path)?;
                    parse_identity_file(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
                }
                None => Vec::new(),
            };
            let report = verify_identities(&IdentityOptions { with_commutator: !without_commutator, custom });
            emit(&report, &output)
        }
        Command::CheckCovariance { seed, trials, points, tol, epsilon, conventions, field, output } => {
            let (sign, transform) = conventions.resolve();
            let cfg = CampaignConfig { seed, trials, points_per_trial: points, tolerance: tol, epsilon, sign, transform };
            let mut report = check_covariance(&cfg).map_err(|e| usage(e.to_string()))?;
            if let Some(path) = field {
                let (spec, pts) = load_field(&path, &conventions)?;
                let mut records = report.records;
                records.extend(field_file_records(&spec, &pts, tol));
                let mut config = report.config;
                config["field"] = Value::String(path.display().to_string());
                report = Report::new("check-covariance", config, records);
            }
            emit(&report, &output)
        }
        Command::Transform { field, conventions, out } => {
            let (spec, points) = load_field(&field, &conventions)?;
            let doc = transform_document(&spec, &points);
            let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
            text.push('\n');
            write_output(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Normalize { expression } => {
            let e = parse_expr(&expression).map_err(|e| usage(format!("{e}\n  {expression}\n  {}^", " ".repeat(e.position()))))?;
            println!("{}", normalize(&e));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
