use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use spinbath_cli::{describe, parse_config, run, write_csv, ConfigError, RunError};

/// Reduced two-qubit dynamics in a spin bath, written as CSV.
#[derive(Debug, Parser)]
#[command(name = "spinbath", version)]
struct Args {
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Compare every row against direct evolution of the truncated bosonic model.
    #[arg(long)]
    oracle_check: bool,
    /// Suppress the per-point summary on stderr.
    #[arg(long)]
    quiet: bool,
}

fn threads() -> Result<usize, RunError> {
    match std::env::var("SPINBATH_THREADS") {
        Ok(v) => v.trim().parse().map_err(|_| {
            RunError::Config(ConfigError {
                line: 0,
                message: format!("SPINBATH_THREADS must be a count, got `{v}`"),
            })
        }),
        Err(_) => Ok(0),
    }
}

fn execute(args: &Args) -> Result<(), RunError> {
    let text = fs::read_to_string(&args.config).map_err(|e| {
        RunError::Config(ConfigError {
            line: 0,
            message: format!("{}: {e}", args.config.display()),
        })
    })?;
    let config = parse_config(&text)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads()?)
        .build_global()
        .map_err(|e| RunError::Invariant(e.to_string()))?;

    if !args.quiet {
        for info in describe(&config)? {
            let label = match (info.sweep_value, &config.sweep) {
                (Some(v), Some(s)) => format!("{} = {v}: ", s.param),
                _ => String::new(),
            };
            eprintln!(
                "{label}{} regime, n_max = {}, tail weight = {:.3e}",
                info.regime, info.n_max, info.tail_weight
            );
        }
    }

    let rows = run(&config, args.oracle_check)?;
    match &args.output {
        Some(path) => write_csv(&rows, BufWriter::new(File::create(path)?))?,
        None => write_csv(&rows, io::stdout().lock())?,
    }
    io::stderr().flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
