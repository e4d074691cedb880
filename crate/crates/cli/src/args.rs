use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ewc",
    version,
    about = "Certify entanglement generation with witnessing circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a witness bundle and write it as JSON.
    Witness(WitnessArgs),
    /// Certify one preparation circuit.
    Certify(CertifyArgs),
    /// Regenerate a catalog table as CSV.
    Reproduce(ReproduceArgs),
    /// Certify one preparation over a grid of two-qubit depolarizing rates.
    Sweep(SweepArgs),
    /// Contrast the witnessing circuit with the split estimator under an
    /// adversarial allocator.
    AdversaryDemo(DemoArgs),
    /// Run a job file against the emulated service.
    Job(JobArgs),
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    /// See-saw restarts for the separability window.
    #[arg(long, default_value_t = 1000)]
    pub restarts: usize,
    /// See-saw convergence tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct NoiseArgs {
    /// Depolarizing probability after single-qubit gates.
    #[arg(long = "noise-1q", default_value_t = 0.0)]
    pub noise_1q: f64,
    /// Depolarizing probability after multi-qubit gates.
    #[arg(long = "noise-2q", default_value_t = 0.0)]
    pub noise_2q: f64,
    /// Readout bit-flip probability.
    #[arg(long, default_value_t = 0.0)]
    pub readout: f64,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessSource {
    /// Witness family (bell2 or ghz3).
    #[arg(long, conflicts_with = "witness")]
    pub family: Option<String>,
    /// Witness bundle file written by `ewc witness`.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long)]
    pub family: String,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub source: WitnessSource,
    /// `catalog:<2q|3q>/<1..7>` or a circuit file in the gate-list format.
    #[arg(long)]
    pub prep: String,
    /// 1, 2 or split_pm.
    #[arg(long, default_value = "1")]
    pub scheme: String,
    #[arg(long, default_value_t = 8192)]
    pub shots: u64,
    #[arg(long, env = "EWC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// identity, perm:<p0,p1,...>, random or adversarial.
    #[arg(long, default_value = "identity")]
    pub policy: String,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Report file (JSON).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "k-sigma", default_value_t = 5.0)]
    pub k_sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    #[value(name = "fig4")]
    Fig4,
    #[value(name = "fig5-2q")]
    Fig5TwoQubit,
    #[value(name = "fig5-3q")]
    Fig5ThreeQubit,
    #[value(name = "table-e")]
    TableE,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    #[arg(long, default_value = "1")]
    pub scheme: String,
    /// Defaults to 8192 for fig4 and table-e, 2000 for fig5.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, env = "EWC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// CSV file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "k-sigma", default_value_t = 5.0)]
    pub k_sigma: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: WitnessSource,
    #[arg(long)]
    pub prep: String,
    #[arg(long, default_value = "1")]
    pub scheme: String,
    /// Comma-separated two-qubit depolarizing rates.
    #[arg(long, default_value = "0,0.2,0.4,0.6,0.8,1")]
    pub grid: String,
    #[arg(long, default_value_t = 8192)]
    pub shots: u64,
    #[arg(long, env = "EWC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "k-sigma", default_value_t = 5.0)]
    pub k_sigma: f64,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, env = "EWC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8192)]
    pub shots: u64,
    /// Demo report file (JSON).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct JobArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
