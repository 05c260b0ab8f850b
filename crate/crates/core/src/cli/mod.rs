//! Command-line front end. `run` parses arguments, executes one subcommand
//! on a worker pool of the requested size and returns the process exit code:
//! 0 pass, 2 usage or precondition, 3 internal consistency, 4 verification.

pub mod cache;
mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;

use crate::complexfn::ComplexValue;
use crate::error::{Error, Result};
use crate::verify::MainMode;

pub use cache::{cache_key, CacheEntry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Cache directory override.
pub const CACHE_ENV: &str = "APOINTLAB_CACHE";
const DEFAULT_CACHE: &str = ".apointlab-cache";

#[derive(Parser, Debug)]
#[command(name = "apointlab", version, about = "Zeta a-points and explicit-formula checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate zeta(s).
    Zeta {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: ComplexValue,
    },
    /// Evaluate Delta(s) = 2 (2pi)^(s-1) sin(pi s/2) Gamma(1-s).
    Delta {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: ComplexValue,
    },
    /// Chebyshev psi(x).
    Psi {
        #[arg(long)]
        x: f64,
    },
    /// Coefficients Lambda_a(1..=n) as CSV.
    LambdaA {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a: ComplexValue,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Find (or load cached) a-points up to --t-max and write them as CSV.
    Apoints(Common),
    /// Validate a zero table and cache it as a-points with a = 0.
    IngestZeros(Common),
    /// Run a verification harness.
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },
    /// Summarize the JSON reports in --out-dir.
    Report(Common),
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    Thm2 {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModeArg::Psi)]
        mode: ModeArg,
    },
    Thm1(Common),
    Gonek(Common),
    Contour(Common),
    Counts(Common),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Psi,
    Rh,
}

impl From<ModeArg> for MainMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Psi => MainMode::Psi,
            ModeArg::Rh => MainMode::Rh,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub a: ComplexValue,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub grid: Vec<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub zeros_file: Option<PathBuf>,
    /// Where reports are written.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// Validated settings shared by the experiment subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub a: ComplexValue,
    pub t_max: f64,
    pub t_grid: Vec<f64>,
    pub tolerance: Option<f64>,
    pub cache_dir: PathBuf,
    pub output_format: Format,
    pub workers: usize,
    pub zeros_file: Option<PathBuf>,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    /// `t_max` defaults to the largest grid value, then to `default_t`.
    pub fn from_common(c: &Common, default_t: f64) -> Result<Self> {
        if c.grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParams("--grid must be strictly ascending".into()));
        }
        let grid_max = c.grid.last().copied();
        let t_max = c.t_max.or(grid_max).unwrap_or(default_t);
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::InvalidParams("--t-max must be positive".into()));
        }
        if grid_max.is_some_and(|g| g > t_max) {
            return Err(Error::InvalidParams("--t-max must cover the grid".into()));
        }
        let workers = c.workers.unwrap_or_else(|| {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        });
        if workers == 0 {
            return Err(Error::InvalidParams("--workers must be at least 1".into()));
        }
        if let Some(t) = c.tol {
            if !(t > 0.0) {
                return Err(Error::InvalidParams("--tol must be positive".into()));
            }
        }
        let cache_dir = c
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE));
        Ok(Self {
            a: c.a,
            t_max,
            t_grid: c.grid.clone(),
            tolerance: c.tol,
            cache_dir,
            output_format: c.format,
            workers,
            zeros_file: c.zeros_file.clone(),
            out_dir: c.out_dir.clone(),
        })
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

/// `re,im` or a bare real number.
pub fn parse_complex(text: &str) -> std::result::Result<ComplexValue, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| format!("{text:?} is not of the form re,im"));
    match parts.as_slice() {
        [re] => Ok(ComplexValue::new(num(re)?, 0.0)),
        [re, im] => Ok(ComplexValue::new(num(re)?, num(im)?)),
        _ => Err(format!("{text:?} is not of the form re,im")),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::WindowCountMismatch { .. }
        | Error::NonIntegralWinding { .. }
        | Error::RefinementDiverged(_)
        | Error::QuadratureNotConverged { .. }
        | Error::BoundaryTooClose { .. }
        | Error::NonFinite(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match commands::dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
