pub mod commands;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::Parser;

pub use commands::{run, Command};
pub use error::CliError;
pub use output::{config_hash, write_table, Format, Table};

/// Overrides the dense dimension cap.
pub const MAX_DIM_ENV: &str = "RTRANSFER_MAX_DIM";

#[derive(Debug, Parser)]
#[command(name = "rtransfer", version, about = "Robustness of state-transfer protocols against ancilla initialization")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

pub fn apply_env_cap() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var(MAX_DIM_ENV) {
        let cap: usize =
            raw.trim().parse().map_err(|_| CliError::Validation(format!("{MAX_DIM_ENV}={raw:?} is not an integer")))?;
        robust_transfer::tensor::set_max_dim(cap);
    }
    Ok(())
}

/// Runs the parsed command and writes its table; self-check failures still write the table.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    apply_env_cap()?;
    let hash = config_hash(&format!("{:?}", cli.command));
    let (table, outcome) = match run(&cli.command) {
        Ok(t) => (t, Ok(())),
        Err(CliError::SelfCheck { failures, table }) => {
            (table.clone(), Err(CliError::SelfCheck { failures, table }))
        }
        Err(e) => return Err(e),
    };
    match &cli.out {
        Some(path) => write_table(std::fs::File::create(path)?, &table, cli.format, &hash)?,
        None => write_table(std::io::stdout().lock(), &table, cli.format, &hash)?,
    }
    outcome
}
