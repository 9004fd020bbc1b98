//! Scan files: long-form CSV with a `.meta` sidecar, or a single JSON document.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use experiments::{Axis, ScanResult};

use crate::config::{format_number, quote, Value};
use crate::error::CliError;

/// Metadata key holding the canonical run configuration.
pub const CONFIG_METADATA_KEY: &str = "config";
const META_PREFIX: &str = "#!";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

impl Format {
    /// From the file extension; CSV unless it ends in `.json`.
    pub fn for_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

fn column_label(name: &str, unit: &str) -> String {
    format!("{name} [{unit}]")
}

fn split_label(label: &str) -> Option<(String, String)> {
    let (name, rest) = label.rsplit_once(" [")?;
    Some((name.to_string(), rest.strip_suffix(']')?.to_string()))
}

/// Header plus one row per grid point, axis 1 outermost.
pub fn render_csv(scan: &ScanResult) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header = vec![column_label(&scan.axis1.name, &scan.axis1.unit)];
    if let Some(a2) = &scan.axis2 {
        header.push(column_label(&a2.name, &a2.unit));
    }
    header.push(column_label(&scan.value_name, &scan.value_unit));
    w.write_record(&header).expect("in-memory write");
    let n2 = scan.inner_len();
    for (i, x) in scan.axis1.values.iter().enumerate() {
        for j in 0..n2 {
            let mut row = vec![format_number(*x)];
            if let Some(a2) = &scan.axis2 {
                row.push(format_number(a2.values[j]));
            }
            row.push(format_number(scan.values[i * n2 + j]));
            w.write_record(&row).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

/// Metadata as `#! key = "value"` lines, then the configuration verbatim so
/// the sidecar doubles as a config file.
pub fn render_meta(scan: &ScanResult) -> String {
    let mut out = String::new();
    for (k, v) in &scan.metadata {
        if k != CONFIG_METADATA_KEY {
            out.push_str(&format!("{META_PREFIX} {k} = {}\n", quote(v)));
        }
    }
    if let Some(config) = scan.metadata.get(CONFIG_METADATA_KEY) {
        out.push_str(config);
    }
    out
}

pub fn render_json(scan: &ScanResult) -> String {
    let mut s = serde_json::to_string_pretty(scan).expect("scan serializes");
    s.push('\n');
    s
}

fn format_error(path: &Path, message: impl ToString) -> CliError {
    CliError::Format { path: path.to_path_buf(), message: message.to_string() }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn parse_json(text: &str, path: &Path) -> Result<ScanResult, CliError> {
    serde_json::from_str(text).map_err(|e| format_error(path, e))
}

/// Rebuilds a scan from CSV text and optional sidecar text.
pub fn parse_csv(text: &str, meta: Option<&str>, path: &Path) -> Result<ScanResult, CliError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header: Vec<(String, String)> = reader
        .headers()
        .map_err(|e| format_error(path, e))?
        .iter()
        .map(|h| split_label(h).ok_or_else(|| format_error(path, format!("header `{h}` is not `name [unit]`"))))
        .collect::<Result<_, _>>()?;
    if !(2..=3).contains(&header.len()) {
        return Err(format_error(path, format!("expected 2 or 3 columns, found {}", header.len())));
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format_error(path, e))?;
        let row = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| format_error(path, format!("row {}: `{f}` is not a number", k + 2))))
            .collect::<Result<Vec<f64>, _>>()?;
        if row.len() != header.len() {
            return Err(format_error(path, format!("row {} has {} fields", k + 2, row.len())));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(format_error(path, "no data rows"));
    }
    let axis = |c: usize, values: Vec<f64>| Axis::new(&header[c].0, &header[c].1, values);
    let value_col = header.len() - 1;
    let (axis1, axis2) = if header.len() == 2 {
        (axis(0, rows.iter().map(|r| r[0]).collect()), None)
    } else {
        let first = rows[0][0].to_bits();
        let n2 = rows.iter().take_while(|r| r[0].to_bits() == first).count();
        if !rows.len().is_multiple_of(n2) {
            return Err(format_error(path, "rows do not form a rectangular grid"));
        }
        let a1: Vec<f64> = rows.iter().step_by(n2).map(|r| r[0]).collect();
        let a2: Vec<f64> = rows[..n2].iter().map(|r| r[1]).collect();
        for (k, r) in rows.iter().enumerate() {
            if r[0].to_bits() != a1[k / n2].to_bits() || r[1].to_bits() != a2[k % n2].to_bits() {
                return Err(format_error(path, format!("row {} breaks the grid order", k + 2)));
            }
        }
        (axis(0, a1), Some(axis(1, a2)))
    };
    let values = rows.iter().map(|r| r[value_col]).collect();
    let mut scan = ScanResult::new(axis1, axis2, (&header[value_col].0, &header[value_col].1), values).map_err(|e| format_error(path, e))?;
    scan.metadata.clear();
    if let Some(meta) = meta {
        let mut config = String::new();
        for line in meta.lines() {
            match line.strip_prefix(META_PREFIX) {
                Some(entry) => {
                    let (k, v) = entry.split_once('=').ok_or_else(|| format_error(path, format!("bad metadata line `{line}`")))?;
                    match Value::parse(v) {
                        Ok(Value::Text(s)) => scan.metadata.insert(k.trim().to_string(), s),
                        _ => return Err(format_error(path, format!("bad metadata value in `{line}`"))),
                    };
                }
                None => {
                    config.push_str(line);
                    config.push('\n');
                }
            }
        }
        if !config.is_empty() {
            scan.metadata.insert(CONFIG_METADATA_KEY.into(), config);
        }
    }
    Ok(scan)
}

/// Writes `scan` to `path`; CSV output also writes `<path>.meta`.
pub fn write_scan(scan: &ScanResult, format: Format, path: &Path) -> Result<(), CliError> {
    match format {
        Format::Json => write_text(path, &render_json(scan)),
        Format::Csv => {
            write_text(path, &render_csv(scan))?;
            write_text(&meta_path(path), &render_meta(scan))
        }
    }
}

/// Reads a JSON scan, or a CSV scan with its sidecar when present.
pub fn read_scan(path: &Path) -> Result<ScanResult, CliError> {
    let text = read_text(path)?;
    match Format::for_path(path) {
        Format::Json => parse_json(&text, path),
        Format::Csv => {
            let meta_file = meta_path(path);
            let meta = if meta_file.exists() { Some(read_text(&meta_file)?) } else { None };
            parse_csv(&text, meta.as_deref(), path)
        }
    }
}

/// Configuration text from a config file, a `.meta` sidecar, or the
/// metadata of a JSON scan.
pub fn read_config_source(path: &Path) -> Result<String, CliError> {
    let text = read_text(path)?;
    if Format::for_path(path) == Format::Json {
        let scan = parse_json(&text, path)?;
        return scan
            .metadata
            .get(CONFIG_METADATA_KEY)
            .cloned()
            .ok_or_else(|| format_error(path, "scan metadata has no embedded configuration"));
    }
    Ok(text)
}
