use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use smoothconvex_cli::{execute, split_overrides, Invocation, REGISTRY};

/// Run named optimization experiments and write CSV traces.
#[derive(Parser)]
#[command(name = "smoothconvex", version, after_help = "Experiment parameters are passed as --key=value.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment for one or more seeds.
    Run {
        experiment: String,
        /// Seed, comma list or inclusive range such as 1..5.
        #[arg(long)]
        seed: Option<String>,
        /// Flat `key = value` config file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (default: $SMOOTHCONVEX_OUT, then ./results).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seeds to run in parallel.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// List experiments and their parameters.
    List,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let (args, overrides) = split_overrides(std::env::args());
    let cli = Cli::parse_from(args);
    match cli.command {
        Command::List => {
            for e in REGISTRY {
                let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!("{:<22} {}\n{:<22} {}", e.name, e.about, "", params.join(" "));
            }
            ExitCode::SUCCESS
        }
        Command::Run { experiment, seed, config, out, jobs } => {
            let inv = Invocation { experiment, seed, config, out, jobs, overrides };
            match execute(&inv) {
                Ok(rows) => {
                    for r in rows {
                        println!("{} seed {}: final_metric {} ({} ms)", r.experiment, r.seed, r.final_metric, r.runtime_ms);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code())
                }
            }
        }
    }
}
