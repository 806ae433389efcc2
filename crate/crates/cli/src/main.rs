use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod analyze;
mod bench;
mod config;
mod simulate;

#[derive(Parser, Debug)]
#[command(
    name = "rolecomms",
    version,
    about = "Speaker/listener role analysis and table-carrying benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze a linear team system.
    Analyze(AnalyzeArgs),
    /// Play one table-carrying game.
    Simulate(SimulateArgs),
    /// Run a benchmark config.
    Bench(BenchArgs),
    /// Run a benchmark config over a grid of noise levels.
    Sweep(SweepArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalyzeMode {
    Stability,
    Rotation,
    Variances,
    Kl,
}

#[derive(clap::Args, Debug)]
pub struct AnalyzeArgs {
    /// System description (JSON).
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long, value_enum)]
    pub mode: AnalyzeMode,
}

#[derive(clap::Args, Debug)]
pub struct SimulateArgs {
    /// Environment JSON file, or an integer seed to generate one.
    #[arg(long)]
    pub env: String,
    /// Strategy: centralized, explicit:T, dynamic:T, speaker-listener,
    /// speaker-speaker, or an inline JSON protocol object.
    #[arg(long)]
    pub strategy: String,
    /// Coefficient of variation of observation and message noise.
    #[arg(long, default_value_t = 0.0)]
    pub noise_cv: f64,
    /// Noise seed; defaults to the environment seed, or 0 for file environments.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run config providing `sim` and `workspace`; built-in defaults otherwise.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Obstacle count when generating from a seed.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Obstacle radius when generating from a seed.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Sample radii uniformly from this range instead (`MIN,MAX`).
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub radius_range: Option<Vec<f64>>,
    /// Where to write the per-step trajectory CSV.
    #[arg(long)]
    pub trajectory_out: Option<PathBuf>,
    /// Also write the environment used as JSON.
    #[arg(long)]
    pub env_out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct BenchArgs {
    /// Run config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory for report.json and the CSV tables.
    #[arg(long)]
    pub out: PathBuf,
    /// Override `games_per_condition`.
    #[arg(long)]
    pub games_per_condition: Option<u32>,
    /// Override `base_seed`.
    #[arg(long, alias = "seed")]
    pub base_seed: Option<u64>,
    /// Worker threads; the report is identical for any value.
    #[arg(long, env = "ROLECOMMS_THREADS")]
    pub threads: Option<usize>,
}

#[derive(clap::Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub bench: BenchArgs,
    /// Noise levels replacing every condition's `noise_cv`.
    #[arg(long, value_delimiter = ',', default_value = "0.001,0.01,0.1")]
    pub cv: Vec<f64>,
}

/// Exit codes: 0 success, 1 a trend assertion failed, 2 usage or config error.
pub const EXIT_ASSERT: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze::run(&a),
        Command::Simulate(a) => simulate::run(&a),
        Command::Bench(a) => bench::run(&a, None),
        Command::Sweep(a) => bench::run(&a.bench, Some(&a.cv)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
