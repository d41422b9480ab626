use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use funclass::config::ExperimentConfig;
use funclass::experiments::{resolve_seed, run, Subcommand};
use funclass::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    RiskCurve,
    Margin,
    KnnCompare,
    Lowerbound,
    ClassifyPath,
    Simulate,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::RiskCurve => Subcommand::RiskCurve,
            Command::Margin => Subcommand::Margin,
            Command::KnnCompare => Subcommand::KnnCompare,
            Command::Lowerbound => Subcommand::Lowerbound,
            Command::ClassifyPath => Subcommand::ClassifyPath,
            Command::Simulate => Subcommand::Simulate,
        }
    }
}

/// Simulation and classification experiments for Gaussian white-noise
/// trajectories.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    command: Command,
    /// Configuration file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Master seed; overrides FUNCLASS_SEED and the config's master_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: available parallelism). Never changes the
    /// output.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("funclass {}: {e}", Subcommand::from(cli.command));
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: &Cli) -> Result<Vec<PathBuf>, Error> {
    let text = std::fs::read_to_string(&cli.config).map_err(|e| Error::Io {
        path: cli.config.clone(),
        source: e,
    })?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    let env = std::env::var("FUNCLASS_SEED").ok();
    cfg.master_seed = resolve_seed(cli.seed, env.as_deref(), &cfg)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Error::InvalidInput("--workers must be >= 1".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run(cli.command.into(), &cfg, &cli.out))
}
