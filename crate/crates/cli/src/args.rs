//! Command-line surface. Every flag can also be set through a `PTOSC_*`
//! environment variable.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_CODES_HELP: &str = "Exit codes:\n  \
0  success\n  \
1  verification failure (one or more checks failed)\n  \
2  usage error (bad flags or parameter domain)\n  \
3  numerical failure (solver did not converge or mode is degenerate)";

#[derive(Debug, Parser)]
#[command(
    name = "ptosc",
    version,
    about = "Mode frequencies, energy spectra, PT-phase diagrams and classical runs \
             of a coupled oscillator pair with balanced gain and loss",
    after_help = EXIT_CODES_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy table E(n, k) = n lambda1 - k lambda2 + a with a spectral header
    Spectrum(SpectrumArgs),
    /// Phase-region sweep over a (gamma, epsilon) grid
    PhaseDiagram(PhaseDiagramArgs),
    /// Integrate the classical flow and extract oscillation frequencies
    Classical(ClassicalArgs),
    /// Run the full verification suite and emit a JSON report
    Verify(VerifyArgs),
    /// Print the adjoint matrix and its eigenvalues
    Adjoint(AdjointArgs),
}

/// Model parameters shared by all subcommands.
#[derive(Debug, Clone, Copy, Args)]
pub struct ModelArgs {
    /// Base oscillator frequency
    #[arg(long, default_value_t = 1.0, env = "PTOSC_OMEGA")]
    pub omega: f64,
    /// Gain/loss rate
    #[arg(long, default_value_t = 0.0, env = "PTOSC_GAMMA")]
    pub gamma: f64,
    /// Coupling strength
    #[arg(long, default_value_t = 0.0, env = "PTOSC_EPSILON")]
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Uniform grid given as `min:max:steps`.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn value(&self, i: usize) -> f64 {
        if self.steps <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|i| self.value(i))
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected min:max:steps, got `{s}`"));
        }
        let min: f64 = parts[0]
            .parse()
            .map_err(|e| format!("bad grid minimum `{}`: {e}", parts[0]))?;
        let max: f64 = parts[1]
            .parse()
            .map_err(|e| format!("bad grid maximum `{}`: {e}", parts[1]))?;
        let steps: usize = parts[2]
            .parse()
            .map_err(|e| format!("bad grid step count `{}`: {e}", parts[2]))?;
        if steps < 1 {
            return Err("grid needs at least one step".into());
        }
        if !min.is_finite() || !max.is_finite() {
            return Err("grid bounds must be finite".into());
        }
        Ok(Self { min, max, steps })
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Largest quantum number per ladder in the table
    #[arg(long, default_value_t = 3, env = "PTOSC_NMAX")]
    pub nmax: u32,
    /// Reality/boundary tolerance
    #[arg(long, default_value_t = 1e-9, env = "PTOSC_TOL")]
    pub tol: f64,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, env = "PTOSC_FORMAT")]
    pub format: OutputFormat,
    /// Output file (stdout when omitted)
    #[arg(long, env = "PTOSC_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PhaseDiagramArgs {
    /// Base oscillator frequency
    #[arg(long, default_value_t = 1.0, env = "PTOSC_OMEGA")]
    pub omega: f64,
    /// Gain/loss grid as min:max:steps
    #[arg(long, default_value = "0:1:50", env = "PTOSC_GRID_GAMMA")]
    pub grid_gamma: GridSpec,
    /// Coupling grid as min:max:steps
    #[arg(long, default_value = "0:1.5:50", env = "PTOSC_GRID_EPSILON")]
    pub grid_epsilon: GridSpec,
    /// Reality/boundary tolerance
    #[arg(long, default_value_t = 1e-9, env = "PTOSC_TOL")]
    pub tol: f64,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, env = "PTOSC_FORMAT")]
    pub format: OutputFormat,
    /// Output file (stdout when omitted)
    #[arg(long, env = "PTOSC_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Total integration time; t-final/dt must give a power-of-two sample count
    #[arg(long, default_value_t = 409.6, env = "PTOSC_T_FINAL")]
    pub t_final: f64,
    /// Integrator time step
    #[arg(long, default_value_t = 0.05, env = "PTOSC_DT")]
    pub dt: f64,
    /// Seed for the random initial condition
    #[arg(long, default_value_t = 0, env = "PTOSC_SEED")]
    pub seed: u64,
    /// Trajectory CSV path (the frequency report goes to stdout)
    #[arg(long, env = "PTOSC_OUT")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Reality/boundary tolerance
    #[arg(long, default_value_t = 1e-9, env = "PTOSC_TOL")]
    pub tol: f64,
    /// Seed for the trajectory spot checks
    #[arg(long, default_value_t = 0, env = "PTOSC_SEED")]
    pub seed: u64,
    /// Report file (stdout when omitted)
    #[arg(long, env = "PTOSC_OUT")]
    pub out: Option<PathBuf>,
    /// Shift the ground-state parameter a before the residual checks
    /// (negative control for the suite itself)
    #[arg(long, default_value_t = 0.0, hide = true)]
    pub perturb_a: f64,
}

#[derive(Debug, Args)]
pub struct AdjointArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Reality tolerance for the eigenvalue report
    #[arg(long, default_value_t = 1e-9, env = "PTOSC_TOL")]
    pub tol: f64,
    /// Include the full Hamiltonian serialization in the report
    #[arg(long)]
    pub dump: bool,
    /// Output file (stdout when omitted)
    #[arg(long, env = "PTOSC_OUT")]
    pub out: Option<PathBuf>,
}
