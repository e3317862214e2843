use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mgmimo::config::ExperimentConfig;
use mgmimo::runner::run;

#[derive(Parser)]
#[command(version, about = "Mode-group MIMO link experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario in a config and write results.csv plus manifest.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; falls back to `out_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check a config and list every problem found.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Validate { config } => {
            let diags = match ExperimentConfig::from_path(&config) {
                Ok(cfg) => cfg.validate(),
                Err(d) => vec![d],
            };
            for d in &diags {
                println!("{d}");
            }
            if diags.is_empty() {
                println!("ok");
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Run {
            config,
            out,
            seed,
            threads,
        } => {
            if let Some(n) = threads {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            }
            let cfg = match ExperimentConfig::from_path(&config) {
                Ok(cfg) => cfg,
                Err(d) => {
                    eprintln!("error: {d}");
                    return ExitCode::FAILURE;
                }
            };
            let Some(out) = out.or_else(|| cfg.out_dir.clone()) else {
                eprintln!("error: no output directory; pass --out or set out_dir");
                return ExitCode::FAILURE;
            };
            match run(&cfg, &out, seed) {
                Ok(m) => {
                    for f in &m.outputs {
                        println!("{}  {}", f.sha256, out.join(&f.file).display());
                    }
                    println!("manifest: {}", out.join("manifest.json").display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
