//! The `sharptop` command-line tool.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod input;

use serde_json::{json, Map, Value};

use crate::args::Command;
use crate::config::RunConfig;
use crate::error::CliError;

pub use input::parse_net;

/// A finished run: the pretty JSON report and the CSV data, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub report: String,
    pub csv: Option<String>,
}

/// Runs one verb and assembles the report with its header.
pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Rendered, CliError> {
    let out = commands::run(cmd, cfg)?;
    if cfg.csv.is_some() && out.csv.is_none() {
        return Err(CliError::Usage(format!("{} produces no sampled data for --csv", cmd.verb())));
    }
    let mut report = Map::new();
    report.insert(
        "header".into(),
        json!({
            "command": cmd.verb(),
            "version": env!("CARGO_PKG_VERSION"),
            "seed": cfg.seed,
            "config": cfg,
        }),
    );
    report.extend(out.body);
    let text = serde_json::to_string_pretty(&Value::Object(report)).expect("serializable report");
    Ok(Rendered {
        report: text + "\n",
        csv: out.csv,
    })
}

/// Writes the report to `--out` or stdout, and the CSV to `--csv`.
pub fn emit(r: &Rendered, cfg: &RunConfig) -> Result<(), CliError> {
    let write = |p: &std::path::Path, s: &str| {
        std::fs::write(p, s).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))
    };
    if let (Some(p), Some(csv)) = (&cfg.csv, &r.csv) {
        write(p, csv)?;
    }
    match &cfg.out {
        Some(p) => write(p, &r.report),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(r.report.as_bytes())
                .and_then(|_| so.flush())
                .map_err(|e| CliError::Io(format!("cannot write stdout: {e}")))
        }
    }
}
