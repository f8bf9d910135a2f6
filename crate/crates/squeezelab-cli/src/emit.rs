//! Output serialization: CSV with RFC-4180 quoting, JSON, and two-column
//! plotdata files. Floating-point cells are printed with 17 significant
//! digits so every f64 round-trips bit-exactly and repeated runs are
//! byte-identical.

use crate::config::{CliError, CliResult};
use std::io::Write;
use std::path::{Path, PathBuf};

/// 17 significant digits: enough to reproduce any f64 exactly on re-parse.
pub fn format_float(value: f64) -> String {
    format!("{value:.16e}")
}

/// Quotes a CSV cell only when it contains a comma, quote, or newline.
pub fn csv_escape(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') || cell.contains('\r') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

pub fn csv_line(cells: &[String]) -> String {
    let escaped: Vec<String> = cells.iter().map(|c| csv_escape(c)).collect();
    escaped.join(",")
}

/// Writes to the path when given, otherwise to stdout.
pub fn write_text(out: Option<&PathBuf>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| {
            CliError::runtime(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| CliError::runtime(format!("cannot write stdout: {e}")))
        }
    }
}

pub fn to_json_pretty<T: serde::Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::runtime(format!("JSON serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// File name for one waveform: `{family}_lambda{λ}_n{n}.dat`.
pub fn plotdata_file_name(family: &str, lambda: f64, n: u32) -> String {
    format!("{family}_lambda{lambda}_n{n}.dat")
}

/// Two-column whitespace-separated samples (x, ψ_n(x)).
pub fn write_plotdata(dir: &Path, file_name: &str, xs: &[f64], values: &[f64]) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| {
        CliError::runtime(format!("cannot create directory {}: {e}", dir.display()))
    })?;
    let mut content = String::with_capacity(xs.len() * 48);
    for (x, v) in xs.iter().zip(values.iter()) {
        content.push_str(&format_float(*x));
        content.push(' ');
        content.push_str(&format_float(*v));
        content.push('\n');
    }
    let path = dir.join(file_name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}
