use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Link-level simulator and analytical calculator for surface-wave-assisted
/// MU-MIMO downlinks.
#[derive(Debug, Parser)]
#[command(name = "efas-sim", version, about)]
pub struct Cli {
    /// Flat key=value configuration file; command-line flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Master seed; every reported number is a pure function of it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Single-user trial count (multiuser runs use a tenth).
    #[arg(long, global = true)]
    pub trials: Option<u64>,

    /// Output directory for CSVs and reports.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (0 = hardware parallelism). Does not affect results.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Confidence level for reported intervals.
    #[arg(long, global = true)]
    pub confidence: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Single-user outage probability versus SNR, analytic and Monte-Carlo.
    FigOutage,
    /// Single-user ergodic capacity versus SNR, with the high-SNR asymptote.
    FigCapacity,
    /// Distribution of the per-user post-ZF SINR (histogram, ECDF, gamma law).
    FigZfDist,
    /// ZF ergodic sum-rate sweeps.
    FigSumrate {
        /// Sweep variable.
        #[arg(long, value_enum)]
        vary: Vary,
    },
    /// Deterministic surface pipeline: propagation constant, envelope,
    /// average gains, effective noise, swept over path length.
    PhysicalOmega,
    /// Run every validation check; exit code 3 if any fails.
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Vary {
    Snr,
    K,
    M,
}
