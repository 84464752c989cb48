//! CSV and JSON emission. CSV files start with a version comment and use
//! 17 significant digits so doubles round-trip exactly.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::Format;
use crate::CliError;

pub const CSV_VERSION_LINE: &str = "# gp-spectrum v1";

pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        // `+ 0.0` folds negative zero into zero
        format!("{:.16e}", x + 0.0)
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Header plus rows; `comments` follow the rows as `# ...` lines.
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub comments: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{CSV_VERSION_LINE}").unwrap();
        writeln!(out, "{}", self.columns.iter().map(|c| field(c)).collect::<Vec<_>>().join(",")).unwrap();
        for row in &self.rows {
            writeln!(out, "{}", row.iter().map(|c| field(c)).collect::<Vec<_>>().join(",")).unwrap();
        }
        for c in &self.comments {
            writeln!(out, "# {c}").unwrap();
        }
        out
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

/// Write `name.csv` or `name.json` under `dir`.
pub fn write_output(dir: &Path, name: &str, format: Format, csv: impl FnOnce() -> String, json: impl FnOnce() -> String) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    let (ext, body) = match format {
        Format::Csv => ("csv", csv()),
        Format::Json => ("json", json()),
    };
    std::fs::write(dir.join(format!("{name}.{ext}")), body)?;
    Ok(())
}
