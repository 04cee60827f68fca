use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use irsa_cli::config::Figure;
use irsa_cli::{run_experiment, CliError, ExperimentConfig, Format};

/// Prioritized IRSA analysis, simulation and optimization.
#[derive(Debug, Parser)]
#[command(name = "irsa", version)]
struct Args {
    /// JSON experiment configuration.
    #[arg(long, required_unless_present = "figure", conflicts_with = "figure")]
    config: Option<PathBuf>,
    /// Run a shipped figure preset (fig4 … fig10) instead of a config file.
    #[arg(long)]
    figure: Option<Figure>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, env = "IRSA_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Worker threads for Monte Carlo runs.
    #[arg(long, env = "IRSA_THREADS")]
    threads: Option<usize>,
}

fn run(args: Args) -> Result<(), CliError> {
    let mut cfg = match (&args.config, args.figure) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(fig)) => ExperimentConfig::for_figure(fig),
        (None, None) => unreachable!("clap requires one of them"),
    };
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if args.trials.is_some() {
        cfg.trials = args.trials;
    }
    if args.format.is_some() {
        cfg.format = args.format;
    }
    if args.out.is_some() {
        cfg.output = args.out.clone();
    }
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Invalid("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Invalid(e.to_string()))?;
    }

    let table = run_experiment(&cfg)?;
    let format = cfg.format.unwrap_or_default();
    match &cfg.output {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = std::io::BufWriter::new(file);
            table
                .write(format, &mut w)
                .and_then(|()| w.flush())
                .map_err(|e| CliError::io(path, e))
        }
        None => {
            let mut out = std::io::stdout().lock();
            table
                .write(format, &mut out)
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            // Usage mistakes count as validation errors; 2 is reserved for I/O.
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("irsa: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
