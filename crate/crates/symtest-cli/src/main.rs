//! `symtest` command-line entry point.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use symtest_cli::{exit, list_presets, load_config, run, write_atomic, CliError};

/// Run symmetry-test experiments from a TOML configuration file.
///
/// The thread count of parallel suites can be set with SYMTEST_THREADS.
#[derive(Debug, Parser)]
#[command(name = "symtest", version)]
struct Args {
    /// Experiment configuration (TOML).
    #[arg(long, required_unless_present = "list")]
    config: Option<PathBuf>,
    /// Result JSON path; overrides `out` in the configuration. Without
    /// either, the JSON is printed to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed; overrides `seed` in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Print every group, state preset and suite name, then exit.
    #[arg(long)]
    list: bool,
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("SYMTEST_THREADS") else {
        return Ok(());
    };
    let n: usize = value.parse().map_err(|_| format!("SYMTEST_THREADS must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn execute(args: Args) -> Result<(), CliError> {
    let path = args.config.expect("clap enforces --config");
    let mut cfg = load_config(&path)?;
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    let out_path = args.out.or_else(|| cfg.out.clone());
    let output = run(&cfg)?;
    let json = output.result.to_json();
    match out_path {
        Some(p) => write_atomic(&p, &json)?,
        None => print!("{json}"),
    }
    if let (Some(p), Some(trace)) = (&cfg.trace, &output.trace) {
        write_atomic(p, &trace.to_csv()?)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(exit::VALIDATION as u8);
    }
    if args.list {
        print!("{}", list_presets());
        return ExitCode::SUCCESS;
    }
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
