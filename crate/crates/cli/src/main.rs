//! `pencil-lab <command> --config <path>`: runs one check on a pencil or a
//! perturbed measure and writes a JSON (or CSV) report.
//!
//! Exit status: 0 when every requested check passes, 1 when one fails,
//! 2 on a configuration error.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{read_config, Command, ConfigError, Format, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "pencil-lab", version, about = "Exact checks for Jacobi-type pencils")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Float tolerance for the checks that have one.
    #[arg(long)]
    tol: Option<f64>,
    /// Fail `band-check` unless the operator power is banded.
    #[arg(long)]
    expect_banded: bool,
}

fn config_failure(e: &ConfigError) -> ExitCode {
    eprintln!("pencil-lab: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        format: cli.format,
        tol: cli.tol,
        expect_banded: cli.expect_banded,
    };
    let cfg = match read_config(&cli.config).and_then(|raw| RunConfig::resolve(cli.command, raw, overrides)) {
        Ok(c) => c,
        Err(e) => return config_failure(&e),
    };
    let outcome = match commands::run(&cfg) {
        Ok(o) => o,
        Err(e) => return config_failure(&e),
    };
    let text = match cfg.format {
        Format::Json => report::render_json(cfg.command, &cli.config.display().to_string(), &outcome),
        Format::Csv => match &outcome.polys {
            Some(p) => report::render_csv(p),
            None => {
                return config_failure(&ConfigError::new(
                    "format",
                    format!("`{}` has no polynomial list to write as csv", cfg.command.name()),
                ))
            }
        },
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("pencil-lab: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        for c in outcome.checks.iter().filter(|c| !c.passed) {
            eprintln!("pencil-lab: check `{}` failed{}", c.name, c.detail.as_ref().map(|d| format!(": {d}")).unwrap_or_default());
        }
        ExitCode::from(1)
    }
}
