//! The `ptqm` command-line front end.
//!
//! Every subcommand writes one document (JSON or CSV) to `--output`
//! (`-` for standard output). Exit codes: 0 success, 1 failed verification,
//! 2 invalid configuration, 3 numerical or I/O failure, 4 broken PT phase
//! under `--require-unbroken`. `PTQM_THREADS` caps the worker pool.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use output::{fmt_f64, to_csv, to_json, Format};

use crate::algebra::TRUNCATION_TOL;
use crate::continuum::{DEFAULT_BASIS_SIZE, DEFAULT_LEVELS};
use crate::error::Error;
use crate::numerics::{Tolerances, DEFAULT_GRID_EXTENT, DEFAULT_GRID_POINTS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_BROKEN: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ptqm",
    version,
    about = "Spectra, C operators and CPT checks for PT-symmetric Hamiltonians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies and PT-norm signs of H = p² + x²(ix)^ν.
    Spectrum(ContinuumArgs),
    /// Kernel identity suite (completeness, C² = 1, CP = (PC)*, positivity).
    Verify(VerifyArgs),
    /// The C kernel C(x, y) on the solution grid.
    Ckernel(ContinuumArgs),
    /// Closed-form analysis of the 2×2 family.
    TwoLevel(TwoLevelArgs),
    /// Phase classification over an (s, t) lattice.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    /// Spectral on the real axis for ν = 0, shooting on the turning-point contour otherwise.
    Auto,
    Spectral,
    Shooting,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Output path, `-` for standard output.
    #[arg(long, short, default_value = "-")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ContinuumArgs {
    #[arg(long)]
    pub nu: f64,
    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    pub levels: usize,
    #[arg(long, default_value_t = DEFAULT_BASIS_SIZE)]
    pub basis_size: usize,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    #[arg(long, default_value_t = DEFAULT_GRID_EXTENT)]
    pub grid_extent: f64,
    /// `spectrum` defaults to spectral, the kernel commands to auto.
    #[arg(long, value_enum)]
    pub backend: Option<BackendChoice>,
    /// Eigenvalue stability tolerance [default: 1e-8].
    #[arg(long)]
    pub tol_eig: Option<f64>,
    /// Algebraic identity tolerance [default: 1e-6].
    #[arg(long)]
    pub tol_residual: Option<f64>,
    /// Largest |Im E| treated as real [default: 1e-8].
    #[arg(long)]
    pub tol_imag: Option<f64>,
    /// Exit 4 unless every level is PT-unbroken.
    #[arg(long)]
    pub require_unbroken: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub continuum: ContinuumArgs,
    /// Threshold for identities limited by the number of levels. Defaults to
    /// 1e-2, or to `--tol-residual` when that is given explicitly.
    #[arg(long)]
    pub tol_truncation: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct TwoLevelArgs {
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub t: f64,
    /// Radians.
    #[arg(long)]
    pub theta: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub r: f64,
    /// Radians.
    #[arg(long)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub s_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s_max: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_max: f64,
    /// Lattice points per axis.
    #[arg(long, default_value_t = 21)]
    pub resolution: usize,
    /// Where to write the boundary polyline as `s,t` CSV (CSV format only).
    #[arg(long)]
    pub boundary_output: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

impl ContinuumArgs {
    pub fn tolerances(&self) -> crate::Result<Tolerances> {
        let d = Tolerances::default();
        Tolerances::new(
            self.tol_eig.unwrap_or(d.eig_abs),
            self.tol_residual.unwrap_or(d.residual),
            self.tol_imag.unwrap_or(d.imag_reality),
        )
    }
}

impl VerifyArgs {
    pub fn truncation_tolerance(&self) -> f64 {
        self.tol_truncation
            .or(self.continuum.tol_residual)
            .unwrap_or(TRUNCATION_TOL)
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::UnsupportedRegime(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("PTQM_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("PTQM_THREADS must be a positive integer, got {value:?}"))?;
    // A pool may already exist when the CLI runs more than once in a process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (including the program name), runs the command, reports
/// errors on standard error and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_CONFIG;
    }
    let outcome = match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Verify(a) => commands::verify(a),
        Command::Ckernel(a) => commands::ckernel(a),
        Command::TwoLevel(a) => commands::two_level(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
