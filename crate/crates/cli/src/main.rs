use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use tspipe_cli::commands;
use tspipe_core::Registry;

#[derive(Parser)]
#[command(
    name = "tspipe",
    version,
    about = "Workflow engine for time-series pipelines: compose, train, run, and reproduce"
)]
struct Cli {
    /// Log filter: error, warn, info, debug, or trace.
    #[arg(long, global = true, default_value = "warn")]
    log_level: String,

    /// Reserved for stochastic modules; the built-in engine is
    /// deterministic and ignores it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a pipeline from a definition file, train it on CSV data, and
    /// write sink CSVs plus the fitted pipeline directory.
    Train {
        /// Pipeline definition file (JSON).
        #[arg(long)]
        pipeline: PathBuf,
        /// Input CSV with a leading ISO-8601 UTC "time" column.
        #[arg(long)]
        data: PathBuf,
        /// Output directory for sink CSVs and the saved pipeline.
        #[arg(long)]
        out: PathBuf,
    },
    /// Execute a saved pipeline directory in batch mode.
    Run {
        /// Saved pipeline directory (contains manifest.json).
        #[arg(long)]
        pipeline: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Execute a saved pipeline one timestamp at a time.
    RunOnline {
        /// Saved pipeline directory (contains manifest.json).
        #[arg(long)]
        pipeline: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Parse and validate a definition file without executing it.
    Validate {
        #[arg(long)]
        pipeline: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    env_logger::Builder::new()
        .parse_filters(&cli.log_level)
        .init();
    if let Some(seed) = cli.seed {
        log::debug!("seed {seed} accepted but unused: execution is deterministic");
    }

    let registry = Registry::with_builtins();
    let result = match &cli.command {
        Command::Train {
            pipeline,
            data,
            out,
        } => commands::cmd_train(pipeline, data, out, &registry),
        Command::Run {
            pipeline,
            data,
            out,
        } => commands::cmd_run(pipeline, data, out, &registry),
        Command::RunOnline {
            pipeline,
            data,
            out,
        } => commands::cmd_run_online(pipeline, data, out, &registry),
        Command::Validate { pipeline } => commands::cmd_validate(pipeline, &registry),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
