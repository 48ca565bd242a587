mod args;
mod commands;
mod render;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use crate::args::{Cli, Format};
use crate::commands::{CliError, Inputs};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("gibbsloss: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let common = cli.command.common();
    let mut inputs = Inputs::default();
    let outcome = commands::run(&cli.command, &mut inputs)?;
    let bytes = match common.format {
        Format::Json => {
            let doc = json!({
                "meta": {
                    "tool": "gibbsloss",
                    "version": env!("CARGO_PKG_VERSION"),
                    "inputs": inputs.files.iter().map(|(p, h)| json!({"path": p.display().to_string(), "sha256": h})).collect::<Vec<_>>(),
                    "config": serde_json::to_value(&cli.command).expect("config serializes"),
                },
                "result": outcome.result,
            });
            // serde_json maps are ordered by key, so this is canonical
            let mut s = serde_json::to_string_pretty(&doc).expect("json");
            s.push('\n');
            s
        }
        Format::Text => outcome.text,
        Format::Csv => outcome
            .csv
            .ok_or_else(|| CliError::Usage("csv output is only available for series (gibbs-diagnose)".into()))?,
    };
    match &common.out {
        Some(path) => fs::write(path, &bytes)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(bytes.as_bytes());
        }
    }
    Ok(outcome.exit)
}
