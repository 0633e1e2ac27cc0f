//! CSV and JSON-lines writers for labeled series.

use std::io::{self, Write};

use nmteleport_core::scenarios::{LabeledSeries, TimeSeriesRecord};
use serde::Serialize;

use crate::config::Format;

pub const CSV_HEADER: &str = "label,t_lambda,mu,fidelity,hss,chi,n_cumulative,norm";

/// 17 significant digits in scientific notation; `.` is the only separator.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

#[derive(Serialize)]
struct JsonRow<'a> {
    label: &'a str,
    t_lambda: f64,
    mu: f64,
    fidelity: Option<f64>,
    hss: Option<f64>,
    chi: Option<f64>,
    n_cumulative: f64,
    norm: Option<f64>,
}

/// Rows in grid order; at each grid point one row per series, in series order.
fn interleaved(series: &[LabeledSeries]) -> impl Iterator<Item = (&str, &TimeSeriesRecord)> {
    let len = series.iter().map(|s| s.records.len()).max().unwrap_or(0);
    (0..len).flat_map(move |k| {
        series
            .iter()
            .filter_map(move |s| s.records.get(k).map(|r| (s.label.as_str(), r)))
    })
}

pub fn write_csv<W: Write>(out: &mut W, series: &[LabeledSeries]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for (label, r) in interleaved(series) {
        writeln!(
            out,
            "{label},{},{},{},{},{},{},{}",
            format_real(r.t_lambda),
            format_real(r.mu),
            format_opt(r.fidelity),
            format_opt(r.hss),
            format_opt(r.chi),
            format_real(r.n_cumulative),
            format_opt(r.norm),
        )?;
    }
    Ok(())
}

pub fn write_jsonl<W: Write>(out: &mut W, series: &[LabeledSeries]) -> io::Result<()> {
    for (label, r) in interleaved(series) {
        let row = JsonRow {
            label,
            t_lambda: r.t_lambda,
            mu: r.mu,
            fidelity: r.fidelity,
            hss: r.hss,
            chi: r.chi,
            n_cumulative: r.n_cumulative,
            norm: r.norm,
        };
        serde_json::to_writer(&mut *out, &row)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write<W: Write>(out: &mut W, series: &[LabeledSeries], format: Format) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(out, series),
        Format::JsonLines => write_jsonl(out, series),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(t: f64, fid: Option<f64>) -> TimeSeriesRecord {
        TimeSeriesRecord {
            t_lambda: t,
            mu: 1.0,
            fidelity: fid,
            hss: fid.map(|f| f / 2.0),
            chi: None,
            n_cumulative: 0.0,
            norm: fid.map(|_| 1.0),
        }
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.0), "0.0000000000000000e0");
        assert_eq!(format_real(0.5), "5.0000000000000000e-1");
        assert_eq!(format_real(-0.125), "-1.2500000000000000e-1");
        let x = 0.1 + 0.2;
        assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_rows_and_gaps() {
        let series = vec![
            LabeledSeries {
                label: "a".into(),
                records: vec![record(0.0, Some(1.0)), record(0.5, None)],
            },
            LabeledSeries {
                label: "b".into(),
                records: vec![record(0.0, Some(0.8)), record(0.5, Some(0.6))],
            },
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &series).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        let labels: Vec<&str> = lines[1..]
            .iter()
            .map(|l| l.split(',').next().unwrap())
            .collect();
        assert_eq!(labels, ["a", "b", "a", "b"]);
        assert_eq!(lines[3].split(',').nth(3), Some(""));
        assert!(!text.contains('\r'));
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 8));
    }

    #[test]
    fn jsonl_rows() {
        let series = vec![LabeledSeries {
            label: "a".into(),
            records: vec![record(0.0, Some(1.0)), record(0.5, None)],
        }];
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &series).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<serde_json::Value> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(rows.len(), 2);
        let fields: Vec<&str> = CSV_HEADER.split(',').collect();
        for row in &rows {
            let obj = row.as_object().unwrap();
            assert_eq!(obj.len(), fields.len());
            assert!(fields.iter().all(|f| obj.contains_key(*f)));
        }
        assert!(rows[1]["fidelity"].is_null());
        assert_eq!(rows[0]["hss"], 0.5);
    }
}
