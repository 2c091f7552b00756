use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use beamsim::output::write_atomic;
use beamsim::{compare, load_config, run, AppError, AppResult, Experiment};
use clap::Parser;

/// Near-field wideband beamforming experiments.
///
/// Passing `--config` more than once runs every config and merges the
/// results into one table (they must share their axis columns).
#[derive(Debug, Parser)]
#[command(name = "beamsim", version)]
struct Cli {
    experiment: Experiment,
    /// TOML config file.
    #[arg(long, required = true)]
    config: Vec<PathBuf>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overwrite an existing output file.
    #[arg(long)]
    force: bool,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(cli: &Cli) -> AppResult<()> {
    let results = cli
        .config
        .iter()
        .map(|path| {
            let mut params = load_config(path, cli.experiment)?;
            if let Some(seed) = cli.seed {
                params.seed = seed;
            }
            run(cli.experiment, &params)
        })
        .collect::<AppResult<Vec<_>>>()?;
    let result = compare(&results)?;
    let csv = result.render();
    match &cli.out {
        Some(path) => {
            write_atomic(path, &csv, cli.force)?;
            print!("{}", result.summary_text());
        }
        None => {
            eprint!("{}", result.summary_text());
            std::io::stdout()
                .write_all(csv.as_bytes())
                .map_err(|source| AppError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("beamsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
