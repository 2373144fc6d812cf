//! Command-line front end for `putzer-logm`.
//!
//! [`run`] takes the argument list and the three standard streams, so the
//! whole program can be driven from tests.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use putzer_logm::{Error, Options, PolyKind};

mod commands;
pub mod format;
pub mod input;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "putzer-logm",
    version,
    about = "Principal matrix logarithm by an explicit polynomial formula"
)]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Flags {
    /// Annihilating polynomial used to build the formula.
    #[arg(long, value_enum, default_value_t = PolyArg::Min, global = true)]
    pub poly: PolyArg,
    /// Relative tolerance for the minimal-polynomial degree test and the negative-axis band.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Render formulas as LaTeX.
    #[arg(long, global = true)]
    pub latex: bool,
    /// Print diagnostics on standard error.
    #[arg(long, global = true)]
    pub verbose: bool,
    /// Skip the exp(log) residual.
    #[arg(long, global = true)]
    pub no_residual: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolyArg {
    Char,
    Min,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the principal logarithm of the input matrix.
    Logm {
        /// Matrix file; standard input when omitted or `-`.
        input: Option<PathBuf>,
    },
    /// Sample log((1-t)I + tA) as CSV.
    Curve {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t_start: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t_end: f64,
        #[arg(long, default_value_t = 11)]
        samples: usize,
    },
    /// Print p, q, the admissible interval and the coefficient functions.
    Formula {
        input: Option<PathBuf>,
        /// Expand log(I - tA) for the input itself instead of the segment from I to A.
        #[arg(long)]
        raw: bool,
    },
    /// Cross-check the closed form against the numerical oracles.
    Check {
        input: Option<PathBuf>,
        /// Largest accepted discrepancy.
        #[arg(long, default_value_t = 1e-7)]
        rtol: f64,
    },
}

impl Flags {
    pub fn options(&self) -> Options {
        Options {
            kind: match self.poly {
                PolyArg::Char => PolyKind::Characteristic,
                PolyArg::Min => PolyKind::Minimal,
            },
            poly_tol: self.tol,
            axis_tol: self.tol,
            residual: !self.no_residual,
            ..Options::default()
        }
    }
}

/// A failed command: exit status plus the message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. } | Error::NonFinite { .. } | Error::InvalidArgument(_) => {
                EXIT_INPUT
            }
            Error::PrincipalLogUndefined { .. } | Error::OutsideDomain { .. } => EXIT_PRECONDITION,
            _ => EXIT_VERIFICATION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<input::InputError> for Failure {
    fn from(e: input::InputError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::input(format!("write failed: {e}"))
    }
}

/// Runs the program and returns its exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_INPUT
                }
            };
        }
    };
    match commands::execute(&cli, stdin, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
