//! `casimir` — command-line front end for the hypersphere Casimir solver.
//!
//! Exit codes: 0 success, 1 validation failure, 2 invalid input,
//! 3 convergence failure.

mod commands;
mod config;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use casimir_core::spectrum::TheoryKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;

/// A command failure carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<casimir_core::Error> for Failure {
    fn from(e: casimir_core::Error) -> Self {
        let code = match e {
            casimir_core::Error::Convergence(_) => EXIT_CONVERGENCE,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: format!("i/o error: {e}"),
        }
    }
}

pub type CmdResult<T> = Result<T, Failure>;

#[derive(Parser)]
#[command(
    name = "casimir",
    version,
    about = "Classical Casimir energies of perfectly conducting three-spheres in four euclidean dimensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and approximate energies for one configuration
    Energy(EnergyArgs),
    /// Comparison table over a log-spaced range of x = d/R
    Sweep(SweepArgs),
    /// Data (and optional SVG) for the two comparison figures
    Figure(FigureArgs),
    /// Kernel-matching beta table
    Kernel(KernelArgs),
    /// Least-squares extraction of expansion coefficients from the exact series
    Fit(FitArgs),
    /// Run the validation suite
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoryArg {
    Em,
    Dirichlet,
    Neumann,
}

impl TheoryArg {
    pub fn kind(self) -> TheoryKind {
        match self {
            TheoryArg::Em => TheoryKind::ElectromagneticConductor,
            TheoryArg::Dirichlet => TheoryKind::DirichletScalar,
            TheoryArg::Neumann => TheoryKind::NeumannScalar,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Printed,
    Fitted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitKindArg {
    /// Leading x^{-3/2} coefficient
    Leading,
    /// Leading plus NTLO, with the log background modeled
    Ntlo,
    /// Logarithmic NNTLO slope and intercept
    LogNntlo,
    /// Dirichlet x^2 bracket coefficient and log-absence check
    DirichletNntlo,
}

#[derive(Args)]
pub struct EnergyArgs {
    /// Field theory
    #[arg(long, value_enum)]
    pub theory: Option<TheoryArg>,
    /// Concentric radii ratio in (0, 1)
    #[arg(long)]
    pub rho: Option<f64>,
    /// Sphere-plate gap ratio x = d/R
    #[arg(long)]
    pub x: Option<f64>,
    /// Radius of sphere 1 (with --r2 and --d)
    #[arg(long)]
    pub r1: Option<f64>,
    /// Radius of sphere 2
    #[arg(long)]
    pub r2: Option<f64>,
    /// Surface-to-surface gap of the two-sphere configuration
    #[arg(long)]
    pub d: Option<f64>,
    /// Cap on the number of retained multipole shells
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Relative tolerance of the exact series [default: 1e-12]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Coefficient variant for the asymptotic column [default: fitted]
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// key=value defaults file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub theory: Option<TheoryArg>,
    /// Lower end of the x range
    #[arg(long)]
    pub xmin: Option<f64>,
    /// Upper end of the x range
    #[arg(long)]
    pub xmax: Option<f64>,
    /// Number of log-spaced points
    #[arg(long)]
    pub points: Option<usize>,
    /// Relative tolerance of the exact series [default: 1e-12]
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct FigureArgs {
    /// Field theory [default: em]
    #[arg(long, value_enum)]
    pub theory: Option<TheoryArg>,
    /// Lower end of the x range [default: 1e-4]
    #[arg(long)]
    pub xmin: Option<f64>,
    /// Upper end of the x range [default: 1e-1]
    #[arg(long)]
    pub xmax: Option<f64>,
    /// Number of log-spaced points [default: 40 per decade]
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output directory for fig1.* and fig2.* [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv, json or svg [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct FitArgs {
    /// Preset fit [default: ntlo]
    #[arg(long, value_enum)]
    pub kind: Option<FitKindArg>,
    /// Custom comma-separated basis tags, e.g. "pow(-1.5),logx,const"
    /// (overrides --kind; requires --xmin/--xmax/--points)
    #[arg(long)]
    pub basis: Option<String>,
    #[arg(long, value_enum)]
    pub theory: Option<TheoryArg>,
    #[arg(long)]
    pub xmin: Option<f64>,
    #[arg(long)]
    pub xmax: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv, json, or plain report lines when omitted
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Energy(args) => commands::run_energy(args),
        Command::Sweep(args) => commands::run_sweep(args),
        Command::Figure(args) => commands::run_figure(args),
        Command::Kernel(args) => commands::run_kernel(args),
        Command::Fit(args) => commands::run_fit(args),
        Command::Validate(args) => commands::run_validate(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
