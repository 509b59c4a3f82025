//! CSV tables with fixed 15-significant-digit formatting and JSON sidecars.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

/// A numeric table; columns listed in `integer_columns` print as integers.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub integer_columns: Vec<&'static str>,
}

impl Table {
    pub fn new(columns: &[&str], integer_columns: &[&'static str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            integer_columns: integer_columns.to_vec(),
        }
    }

    /// Keeps the listed column indices, in the listed order.
    pub fn select(self, keep: &[usize]) -> Self {
        Self {
            columns: keep.iter().map(|&i| self.columns[i].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| keep.iter().map(|&i| r[i]).collect())
                .collect(),
            integer_columns: self.integer_columns,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        let integer: Vec<bool> = self
            .columns
            .iter()
            .map(|c| self.integer_columns.contains(&c.as_str()))
            .collect();
        for row in &self.rows {
            w.write_record(
                row.iter()
                    .zip(&integer)
                    .map(|(&v, &int)| format_value(v, int)),
            )?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn format_value(v: f64, integer: bool) -> String {
    if integer {
        format!("{}", v as i64)
    } else {
        format!("{v:.14e}")
    }
}

fn output_error(path: &Path, e: impl ToString) -> CliError {
    CliError::Output {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

#[derive(Serialize)]
struct Sidecar<'a, S: Serialize, E: Serialize> {
    spec: &'a S,
    library: &'static str,
    library_version: &'static str,
    cli_version: &'static str,
    rows: usize,
    wall_time_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    extra: Option<E>,
}

/// Writes the table to `out` (stdout when `None`). With a file target a
/// `<out>.json` sidecar records the spec, versions and wall time.
pub fn emit<S: Serialize, E: Serialize>(
    table: &Table,
    out: Option<&Path>,
    spec: &S,
    extra: Option<E>,
    wall_time_seconds: f64,
) -> Result<()> {
    let Some(path) = out else {
        let stdout = std::io::stdout();
        return table
            .write_csv(stdout.lock())
            .map_err(|e| output_error(Path::new("<stdout>"), e));
    };
    let file = std::fs::File::create(path).map_err(|e| output_error(path, e))?;
    table
        .write_csv(std::io::BufWriter::new(file))
        .map_err(|e| output_error(path, e))?;
    let side = Sidecar {
        spec,
        library: "genent",
        library_version: genent::VERSION,
        cli_version: env!("CARGO_PKG_VERSION"),
        rows: table.rows.len(),
        wall_time_seconds,
        extra,
    };
    write_json(&sidecar_path(path), &side)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| output_error(path, e))?;
    std::fs::write(path, text + "\n").map_err(|e| output_error(path, e))
}

/// Prints JSON to stdout, or writes it to `out`.
pub fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_json(path, value),
        None => {
            let text = serde_json::to_string_pretty(value)
                .map_err(|e| output_error(Path::new("<stdout>"), e))?;
            println!("{text}");
            Ok(())
        }
    }
}
