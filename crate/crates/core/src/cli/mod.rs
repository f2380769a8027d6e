//! Command-line frontend: `sweep`, `verify` and `pd`.

mod output;
mod pd;
mod sweep;
mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

pub use pd::{run_pd, PdConfig, PdOutput};
pub use sweep::{run_sweep, SweepConfig, SweepRow};
pub use verify::{run_verify, EntryStatus, VerifyConfig, VerifyEntry, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::new(std::io::ErrorKind::Other, e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Oracle,
    ClosedForm,
    Both,
}

impl MethodArg {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodArg::Oracle => "oracle",
            MethodArg::ClosedForm => "closed-form",
            MethodArg::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "tsallis-coherent", version, about = "Tsallis pseudo-coherent state numerics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments and uncertainty product along a q grid.
    Sweep(SweepArgs),
    /// Compare every closed form with its oracle and run the mandatory checks.
    Verify(VerifyArgs),
    /// Momentum probability distribution on a k grid.
    Pd(PdArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1.05)]
    pub q_min: f64,
    #[arg(long, default_value_t = 2.2)]
    pub q_max: f64,
    #[arg(long, default_value_t = 20)]
    pub q_steps: usize,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_im: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Oracle)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// q values of the comparison grid.
    #[arg(long, value_delimiter = ',', default_value = "1.2,1.3,1.6")]
    pub q_values: Vec<f64>,
    /// Real parts of the alpha grid (paired with --alpha-im).
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.3", allow_hyphen_values = true)]
    pub alpha_re: Vec<f64>,
    /// Imaginary parts of the alpha grid.
    #[arg(long, value_delimiter = ',', default_value = "0.0,0.1", allow_hyphen_values = true)]
    pub alpha_im: Vec<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Report file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PdArgs {
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_im: f64,
    /// Lower end of the k grid; defaults to -(8 + 2|alpha|).
    #[arg(long, allow_hyphen_values = true)]
    pub k_min: Option<f64>,
    /// Upper end of the k grid; defaults to 8 + 2|alpha|.
    #[arg(long, allow_hyphen_values = true)]
    pub k_max: Option<f64>,
    #[arg(long, default_value_t = 401)]
    pub k_steps: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Oracle)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => {
            let config = SweepConfig {
                q_min: args.q_min,
                q_max: args.q_max,
                q_steps: args.q_steps,
                alpha: Complex64::new(args.alpha_re, args.alpha_im),
                tol: args.tol,
                method: args.method,
                format: args.format,
                out: args.out,
            };
            let rows = run_sweep(&config)?;
            sweep::write(&config, &rows)
        }
        Command::Verify(args) => {
            if args.alpha_re.len() != args.alpha_im.len() {
                return Err(CliError::Config(format!(
                    "--alpha-re has {} values but --alpha-im has {}",
                    args.alpha_re.len(),
                    args.alpha_im.len()
                )));
            }
            let config = VerifyConfig {
                q_values: args.q_values,
                alphas: args
                    .alpha_re
                    .iter()
                    .zip(&args.alpha_im)
                    .map(|(&re, &im)| Complex64::new(re, im))
                    .collect(),
                tol: args.tol,
            };
            let report = run_verify(&config)?;
            let json = serde_json::to_string_pretty(&report)?;
            output::write_text(args.out.as_deref(), &(json + "\n"))?;
            if report.mandatory_passed() {
                Ok(())
            } else {
                let failed: Vec<String> = report
                    .entries
                    .iter()
                    .filter(|e| e.status == EntryStatus::Fail)
                    .map(|e| format!("{} at q = {}", e.family, e.point.q))
                    .collect();
                Err(CliError::Numerical(format!("mandatory checks failed: {}", failed.join("; "))))
            }
        }
        Command::Pd(args) => {
            let alpha = Complex64::new(args.alpha_re, args.alpha_im);
            let config = PdConfig {
                q: args.q,
                alpha,
                k_min: args.k_min,
                k_max: args.k_max,
                k_steps: args.k_steps,
                tol: args.tol,
                method: args.method,
                format: args.format,
                out: args.out,
            };
            let out = run_pd(&config)?;
            pd::write(&config, &out)
        }
    }
}
