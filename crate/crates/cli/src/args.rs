use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qscissor",
    version,
    about = "Key rates for CV-QKD with a quantum-scissor amplifier"
)]
pub struct Cli {
    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true, env = "QSCISSOR_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimised rates over a distance grid, written as CSV.
    Sweep(SweepArgs),
    /// Optimise (V_A, g) at one distance and print the result.
    Optimize(OptimizeArgs),
    /// Scissor output for a single coherent input.
    State(StateArgs),
    /// Exact and Gaussian-approximated mutual information.
    Mi(MiArgs),
    /// Distance at which the scissor curve overtakes the baseline.
    Crossover(CrossoverArgs),
    /// Compare closed forms against the Fock-space simulation.
    VerifyOracle(VerifyArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 0.01)]
    pub va_min: f64,
    #[arg(long, default_value_t = 50.0)]
    pub va_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gain_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub gain_max: f64,
}

impl From<BoundArgs> for qscissor::OptBounds {
    fn from(b: BoundArgs) -> Self {
        Self {
            va_min: b.va_min,
            va_max: b.va_max,
            gain_min: b.gain_min,
            gain_max: b.gain_max,
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    pub d_min: f64,
    #[arg(long, default_value_t = 500.0)]
    pub d_max: f64,
    #[arg(long, default_value_t = 10.0)]
    pub d_step: f64,
    /// Comma-separated transmitter excess noise values (SNU).
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub eps: Vec<f64>,
    /// Reconciliation efficiency.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[command(flatten)]
    pub bounds: BoundArgs,
    /// Output CSV file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub distance: f64,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[command(flatten)]
    pub bounds: BoundArgs,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_im: f64,
    /// Scissor gain g, at least 1.
    #[arg(long, value_parser = parse_gain)]
    pub gain: f64,
    #[arg(long, default_value_t = 0.0)]
    pub distance: f64,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Fibre attenuation.
    #[arg(long, default_value_t = qscissor::DEFAULT_LOSS_DB_PER_KM)]
    pub loss_db_per_km: f64,
}

#[derive(Debug, Args)]
pub struct MiArgs {
    /// Modulation variance V_A (SNU).
    #[arg(long)]
    pub va: f64,
    #[arg(long, value_parser = parse_gain)]
    pub gain: f64,
    #[arg(long, default_value_t = 0.0)]
    pub distance: f64,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Fibre attenuation.
    #[arg(long, default_value_t = qscissor::DEFAULT_LOSS_DB_PER_KM)]
    pub loss_db_per_km: f64,
}

#[derive(Debug, Args)]
pub struct CrossoverArgs {
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub d_min: f64,
    #[arg(long, default_value_t = 500.0)]
    pub d_max: f64,
    /// Coarse scan step before bisection to 1 km.
    #[arg(long, default_value_t = 25.0)]
    pub coarse_step: f64,
    #[command(flatten)]
    pub bounds: BoundArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    /// Full state and covariance grids.
    Acceptance,
    /// A handful of cells from each grid.
    Quick,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Photon-number cutoff per mode.
    #[arg(long, default_value_t = 25, value_parser = parse_cutoff)]
    pub cutoff: usize,
    #[arg(long, value_enum, default_value_t = Grid::Acceptance)]
    pub grid: Grid,
}

fn parse_gain(s: &str) -> Result<f64, String> {
    let g: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if g.is_finite() && g >= 1.0 {
        Ok(g)
    } else {
        Err(format!("gain must lie in [1, inf), got {g}"))
    }
}

fn parse_cutoff(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (15..=120).contains(&n) {
        Ok(n)
    } else {
        Err(format!("cutoff must lie in [15, 120], got {n}"))
    }
}
