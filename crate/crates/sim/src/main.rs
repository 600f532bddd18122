use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mollow_core::Execution;
use mollow_sim::{load_config, run_subcommand, RunInfo, SimError, Task};

/// Spin-qubit / nanomechanics simulator.
#[derive(Parser, Debug)]
#[command(name = "sim", version)]
struct Cli {
    #[arg(value_enum)]
    subcommand: Task,
    /// TOML experiment description.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: `output.dir` from the config, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Reserved for stochastic extensions; recorded in the manifest only.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(cli: &Cli) -> Result<(), SimError> {
    let cfg = load_config(&cli.config)?;
    let info = RunInfo {
        config_path: cli.config.display().to_string(),
        config_bytes: std::fs::read(&cli.config).map_err(|e| SimError::io(&cli.config, e))?,
        threads: cli.threads,
        seed: cli.seed,
    };
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let go = || run_subcommand(cli.subcommand, &cfg, &out, Execution::Parallel, &info);
    let written = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| SimError::Pool(e.to_string()))?
            .install(go)?,
        None => go()?,
    };
    for w in written {
        println!("{}", out.join(&w.file).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
