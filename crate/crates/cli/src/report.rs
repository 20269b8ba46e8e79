//! Report rows, CSV and JSON files, and the text table.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, Format};
use crate::tolerances;

/// One check. `pass` is `value <= tolerance`, false for NaN.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub experiment: String,
    pub check: String,
    pub n: usize,
    /// Quadrature order, when the check has one.
    pub order: Option<usize>,
    /// Free-form description of the sample (probe, seed, function).
    pub param: String,
    #[serde(with = "nan_as_null")]
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Row {
    pub fn new(
        experiment: &str,
        check: &str,
        n: usize,
        order: Option<usize>,
        param: impl Into<String>,
        value: f64,
        tolerance: f64,
    ) -> Row {
        Row {
            experiment: experiment.to_string(),
            check: check.to_string(),
            n,
            order,
            param: param.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

/// JSON has no NaN; failed evaluations are written as `null`.
mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_nan() {
            s.serialize_none()
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Serialize, Deserialize)]
struct JsonReport {
    tolerance_version: u32,
    rows: Vec<Row>,
}

pub fn to_csv(rows: &[Row]) -> Result<Vec<u8>, ConfigError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record([
            "experiment",
            "check",
            "n",
            "order",
            "param",
            "value",
            "tolerance",
            "pass",
        ])
        .map_err(io_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(io_err)?;
    }
    w.into_inner().map_err(|e| ConfigError(format!("csv: {e}")))
}

pub fn to_json(rows: &[Row]) -> Result<Vec<u8>, ConfigError> {
    let doc = JsonReport {
        tolerance_version: tolerances::VERSION,
        rows: rows.to_vec(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| ConfigError(format!("json: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

fn io_err(e: impl std::fmt::Display) -> ConfigError {
    ConfigError(e.to_string())
}

/// Write `rows` to `path` through a temporary file and a rename, so readers
/// never see a partial report.
pub fn write_report(path: &Path, format: Format, rows: &[Row]) -> Result<(), ConfigError> {
    let bytes = match format {
        Format::Csv => to_csv(rows)?,
        Format::Json => to_json(rows)?,
    };
    let tmp = temp_path(path);
    let result = fs::File::create(&tmp)
        .and_then(|mut f| f.write_all(&bytes).and_then(|_| f.sync_all()))
        .and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(ConfigError(format!("cannot write {}: {e}", path.display())));
    }
    Ok(())
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(format!(".tmp{}", std::process::id()));
    path.with_file_name(name)
}

/// Parse a report; JSON if the document starts with `{`, CSV otherwise.
pub fn parse_report(text: &str) -> Result<Vec<Row>, ConfigError> {
    if text.trim_start().starts_with('{') {
        let doc: JsonReport = serde_json::from_str(text).map_err(|e| ConfigError(format!("bad JSON report: {e}")))?;
        return Ok(doc.rows);
    }
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize()
        .collect::<Result<Vec<Row>, _>>()
        .map_err(|e| ConfigError(format!("bad CSV report: {e}")))
}

pub fn read_report(path: &Path) -> Result<Vec<Row>, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    parse_report(&text)
}

const HEADER: [&str; 8] = [
    "experiment",
    "check",
    "n",
    "order",
    "param",
    "value",
    "tolerance",
    "status",
];

/// Aligned table, one line per row: failures first, then grouped by
/// experiment in order of first appearance.
pub fn render_table(rows: &[Row]) -> String {
    let mut groups: Vec<&str> = Vec::new();
    for r in rows {
        if !groups.contains(&r.experiment.as_str()) {
            groups.push(&r.experiment);
        }
    }
    let group = |r: &Row| groups.iter().position(|g| *g == r.experiment).unwrap_or(0);
    let mut sorted: Vec<&Row> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.pass, group(r)));
    let cells: Vec<[String; 8]> = sorted
        .iter()
        .map(|r| {
            [
                r.experiment.clone(),
                r.check.clone(),
                r.n.to_string(),
                r.order.map_or_else(|| "-".to_string(), |o| o.to_string()),
                r.param.clone(),
                format!("{:.3e}", r.value),
                format!("{:.1e}", r.tolerance),
                if r.pass { "pass" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    let mut width = HEADER.map(str::len);
    for c in &cells {
        for (w, s) in width.iter_mut().zip(c) {
            *w = (*w).max(s.chars().count());
        }
    }
    let line = |c: &[String]| {
        let mut s = String::new();
        for (i, (cell, w)) in c.iter().zip(width).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let pad = w - cell.chars().count();
            // Numbers right-aligned, text left-aligned.
            if (2..=3).contains(&i) || (5..=6).contains(&i) {
                s.push_str(&" ".repeat(pad));
                s.push_str(cell);
            } else {
                s.push_str(cell);
                s.push_str(&" ".repeat(pad));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(&HEADER.map(String::from));
    out.push_str(&line(&width.map(|w| "-".repeat(w))));
    for c in &cells {
        out.push_str(&line(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<Row> {
        vec![
            Row::new("cauchy", "full_constant", 3, Some(16), "y=0", 1e-9, 1e-6),
            Row::new("green", "prime_xn_en", 3, Some(16), "", 1e-3, 1e-5),
            Row::new("cauchy", "exterior_vanishes", 3, None, "", f64::NAN, 1e-8),
        ]
    }

    #[test]
    fn pass_requires_a_finite_value_within_tolerance() {
        let r = rows();
        assert!(r[0].pass && !r[1].pass && !r[2].pass);
        assert!(Row::new("e", "c", 3, None, "", 0.0, 0.0).pass);
    }

    #[test]
    fn csv_and_json_round_trip() {
        let r = rows();
        let back = parse_report(std::str::from_utf8(&to_csv(&r).unwrap()).unwrap()).unwrap();
        let json = parse_report(std::str::from_utf8(&to_json(&r).unwrap()).unwrap()).unwrap();
        for b in [back, json] {
            assert_eq!(b.len(), 3);
            assert_eq!(b[..2], r[..2]);
            assert!(b[2].value.is_nan() && b[2].order.is_none());
        }
    }

    #[test]
    fn empty_report_has_header_only() {
        let csv = to_csv(&[]).unwrap();
        assert_eq!(std::str::from_utf8(&csv).unwrap().lines().count(), 1);
        assert!(parse_report(std::str::from_utf8(&csv).unwrap()).unwrap().is_empty());
        assert_eq!(render_table(&[]).lines().count(), 2);
    }

    #[test]
    fn table_lists_failures_first_and_keeps_row_count() {
        let t = render_table(&rows());
        let body: Vec<&str> = t.lines().skip(2).collect();
        assert_eq!(body.len(), 3);
        assert!(body[0].ends_with("FAIL") && body[1].ends_with("FAIL") && body[2].ends_with("pass"));
        // Failures stay grouped by experiment: cauchy appeared first.
        assert!(body[0].starts_with("cauchy") && body[1].starts_with("green"));
    }
}
