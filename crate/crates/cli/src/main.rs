use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use toda_birkhoff_cli::{experiments, CliError, Experiment, ExperimentConfig};

/// Runs one Toda/FPU experiment from a JSON config.
#[derive(Debug, Parser)]
#[command(name = "toda-bench", version)]
struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: Experiment,
    /// Path to the JSON config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (defaults to the current directory).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the seed of the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("toda-bench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::from_file(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let out = experiments::run(args.experiment, &cfg)?;
    let written = out.write(&args.out, args.experiment.name(), &cfg.hash())?;
    for path in &written {
        println!("{}", path.display());
    }
    experiments::verdict(&out)
}
