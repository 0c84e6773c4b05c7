use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use satcache::config::Config;
use satcache::{cmd_connectivity, cmd_optimize, cmd_overhead_table, cmd_rate, cmd_simulate, cmd_sweep, CliError};

/// Fountain-code caching for satellite backhaul: analysis, optimization and
/// simulation.
#[derive(Parser)]
#[command(name = "satcache", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Average decoding overhead E[Delta] and its bound per field order
    OverheadTable {
        /// Field orders to tabulate
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 4, 8, 16, 32, 64, 128])]
        q: Vec<u32>,
        /// Input symbols per file
        #[arg(long, default_value_t = 100)]
        k: u32,
        /// Certified truncation tolerance for the overhead series
        #[arg(long, default_value_t = 1e-12)]
        tail_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hub-connectivity distribution of a scenario
    Connectivity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimized per-hub cache placement
    Optimize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analytical backhaul rates (exact, bound, MDS baseline)
    Rate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo delivery simulation with analytical reference
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sweep M, alpha, n or r and emit one CSV row per (value, scheme)
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn emit(csv: String, out: Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(&path, csv)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::OverheadTable { q, k, tail_tol, out } => {
            emit(cmd_overhead_table(&q, k, tail_tol)?, out)
        }
        Command::Connectivity { config, out } => {
            emit(cmd_connectivity(&Config::load(&config)?)?, out)
        }
        Command::Optimize { config, out } => emit(cmd_optimize(&Config::load(&config)?)?, out),
        Command::Rate { config, out } => emit(cmd_rate(&Config::load(&config)?)?, out),
        Command::Simulate { config, out, trials, seed } => {
            emit(cmd_simulate(&Config::load(&config)?, trials, seed)?, out)
        }
        Command::Sweep { config, out, trials, seed } => {
            emit(cmd_sweep(&Config::load(&config)?, trials, seed)?, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
