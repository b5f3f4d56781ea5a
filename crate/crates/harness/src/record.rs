//! Sweep records and their CSV / JSON-lines encodings.

use crate::HarnessError;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::io::{BufRead, Write};

/// CSV header; bump [`FORMAT_VERSION`] when it changes.
pub const CSV_HEADER: [&str; 6] = [
    "experiment",
    "param_json",
    "exact",
    "predicted",
    "residual",
    "wall_time_ms",
];
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub experiment: String,
    pub params: Map<String, Value>,
    pub exact: Option<f64>,
    pub predicted: Option<f64>,
    pub residual: Option<f64>,
    pub wall_time_ms: u64,
}

impl SweepRecord {
    /// Builds a record; `residual` is `exact − predicted` when both exist.
    pub fn new(experiment: &str, params: Map<String, Value>, exact: Option<f64>, predicted: Option<f64>) -> Self {
        let residual = match (exact, predicted) {
            (Some(e), Some(p)) => Some(e - p),
            _ => None,
        };
        SweepRecord {
            experiment: experiment.to_string(),
            params,
            exact,
            predicted,
            residual,
            wall_time_ms: 0,
        }
    }
}

/// Records plus summary entries (fits, regime tags) written after them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sweep {
    pub records: Vec<SweepRecord>,
    pub footer: Map<String, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            _ => Err(HarnessError::Config(format!("unknown format `{s}` (csv or jsonl)"))),
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn opt_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

/// Writes `sweep` as CSV rows followed by `# key = json` footer lines.
pub fn write_csv<W: Write>(sweep: &Sweep, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in &sweep.records {
        let params = serde_json::to_string(&r.params).expect("params are plain JSON");
        w.write_record([
            r.experiment.clone(),
            params,
            opt_real(r.exact),
            opt_real(r.predicted),
            opt_real(r.residual),
            r.wall_time_ms.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let mut out = w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
    writeln!(out, "# format_version = {FORMAT_VERSION}")?;
    for (k, v) in &sweep.footer {
        writeln!(out, "# {k} = {v}")?;
    }
    out.flush()?;
    Ok(())
}

/// Writes one JSON object per record, then `{"footer": {...}}`.
pub fn write_jsonl<W: Write>(sweep: &Sweep, mut out: W) -> Result<(), HarnessError> {
    for r in &sweep.records {
        serde_json::to_writer(&mut out, r).map_err(|e| HarnessError::Io(e.into()))?;
        writeln!(out)?;
    }
    let mut footer = sweep.footer.clone();
    footer.insert("format_version".into(), FORMAT_VERSION.into());
    writeln!(out, "{}", serde_json::json!({ "footer": footer }))?;
    out.flush()?;
    Ok(())
}

pub fn write_sweep<W: Write>(sweep: &Sweep, format: Format, out: W) -> Result<(), HarnessError> {
    match format {
        Format::Csv => write_csv(sweep, out),
        Format::Jsonl => write_jsonl(sweep, out),
    }
}

fn csv_err(e: csv::Error) -> HarnessError {
    HarnessError::Io(std::io::Error::other(e))
}

fn parse_opt(s: &str) -> Result<Option<f64>, HarnessError> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| HarnessError::Config(format!("bad number `{s}` in CSV")))
}

/// Reads records back from CSV (footer lines are skipped).
pub fn read_csv<R: BufRead>(input: R) -> Result<Vec<SweepRecord>, HarnessError> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(HarnessError::Config("unexpected CSV header".into()));
    }
    let mut out = Vec::new();
    for row in r.records() {
        let row = row.map_err(csv_err)?;
        let params: Map<String, Value> =
            serde_json::from_str(&row[1]).map_err(|e| HarnessError::Config(format!("bad param_json: {e}")))?;
        out.push(SweepRecord {
            experiment: row[0].to_string(),
            params,
            exact: parse_opt(&row[2])?,
            predicted: parse_opt(&row[3])?,
            residual: parse_opt(&row[4])?,
            wall_time_ms: row[5]
                .parse()
                .map_err(|_| HarnessError::Config("bad wall_time_ms".into()))?,
        });
    }
    Ok(out)
}
