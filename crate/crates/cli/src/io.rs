//! Input parsing and report emission.

use crate::errors::CliError;
use serde::Serialize;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

/// Reads one numeric column: CSV with an optional header line, or
/// whitespace-separated values. Returns the parsed sequence.
pub fn parse_sequence(text: &str) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    let mut first_content_line: Option<(usize, String)> = None;
    let mut first_failure: Option<usize> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line
            .split([',', ' ', '\t'])
            .filter(|tok| !tok.is_empty())
            .collect();
        let parsed: Result<Vec<f64>, _> = tokens.iter().map(|tok| tok.parse::<f64>()).collect();
        match parsed {
            Ok(mut row) => values.append(&mut row),
            Err(_) => {
                if first_content_line.is_none() && values.is_empty() {
                    // Possibly a header; decide once a data line shows up.
                    first_content_line = Some((idx + 1, line.to_string()));
                } else if first_failure.is_none() {
                    first_failure = Some(idx + 1);
                }
            }
        }
        if first_content_line.is_none() && values.is_empty() {
            first_content_line = Some((idx + 1, line.to_string()));
        }
    }
    if let Some(lineno) = first_failure {
        return Err(CliError::Input(format!(
            "line {lineno}: not a numeric value"
        )));
    }
    if values.is_empty() {
        // Either empty input or a lone unparseable line.
        if let Some((lineno, line)) = first_content_line {
            return Err(CliError::Input(format!(
                "line {lineno}: not a numeric value: `{line}`"
            )));
        }
        return Err(CliError::Input("no input values".to_string()));
    }
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(CliError::Input(format!("value {i} is not finite: {v}")));
        }
    }
    Ok(values)
}

/// Reads from a path, or stdin when the path is `-` or absent.
pub fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => Ok(std::fs::read_to_string(p)?),
        _ => {
            let mut buffer = String::new();
            std::io::stdin().read_to_string(&mut buffer)?;
            Ok(buffer)
        }
    }
}

/// Run metadata attached to every output: command, resolved configuration,
/// seed, toolkit version, wall-clock duration. The duration is the only
/// field allowed to differ between identical runs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, seed: Option<u64>, config: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            seed,
            config,
            duration_seconds: 0.0,
        }
    }
}

/// Formats one CSV cell with the shortest representation that parses back
/// to the same value.
pub fn csv_cell(value: f64) -> String {
    format!("{value}")
}

/// Writes a CSV table to `--out` or stdout.
pub fn emit_csv(out: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Writes a JSON payload to `--out` or stdout.
pub fn emit_json(out: Option<&Path>, payload: &serde_json::Value) -> Result<(), CliError> {
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(payload).expect("serializable")
    );
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Writes the sidecar JSON that accompanies a CSV output: next to the file
/// when writing to disk, to stderr when the CSV went to stdout.
pub fn emit_sidecar(out: Option<&Path>, payload: &serde_json::Value) -> Result<(), CliError> {
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(payload).expect("serializable")
    );
    match out {
        Some(path) => {
            let mut sidecar: PathBuf = path.to_path_buf();
            let mut name = sidecar
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            name.push_str(".json");
            sidecar.set_file_name(name);
            std::fs::write(sidecar, text)?;
        }
        None => std::io::stderr().write_all(text.as_bytes())?,
    }
    Ok(())
}
