//! Report rows and their text, JSON and CSV renderings.
//!
//! Decimal quantities are kept as strings at full working precision so the
//! three formats carry identical numbers; counters are plain integers.

use std::io::Write;

use oscint::mp::{parse_decimal, to_decimal, to_sci};
use rug::Float;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis_value: Option<String>,
    pub id: u32,
    pub method: String,
    pub value: Option<String>,
    pub reference: String,
    pub relative_error: Option<String>,
    pub err_estimate: Option<String>,
    pub eval_count: Option<u64>,
    pub k_used: Option<usize>,
    pub panels_used: Option<usize>,
    pub wall_time_ms: u64,
    pub error: Option<String>,
}

/// `|value - reference| / |reference|` from the decimal strings, printed at
/// the same precision.
pub fn relative_error(value: &str, reference: &str, prec: u32) -> Option<String> {
    let v = parse_decimal(value, prec).ok()?;
    let r = parse_decimal(reference, prec).ok()?;
    if r.is_zero() {
        return None;
    }
    let e = Float::with_val(prec, &v - &r).abs() / r.abs();
    Some(to_decimal(&e))
}

impl ReportRow {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }

    fn columns(&self, with_axis: bool) -> Vec<(&'static str, String)> {
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        let num = |v: Option<u64>| v.map(|n| n.to_string()).unwrap_or_default();
        let mut out = Vec::with_capacity(13);
        if with_axis {
            out.push(("axis", opt(&self.axis)));
            out.push(("axis_value", opt(&self.axis_value)));
        }
        out.extend([
            ("id", self.id.to_string()),
            ("method", self.method.clone()),
            ("value", opt(&self.value)),
            ("reference", self.reference.clone()),
            ("relative_error", opt(&self.relative_error)),
            ("err_estimate", opt(&self.err_estimate)),
            ("eval_count", num(self.eval_count)),
            ("k_used", num(self.k_used.map(|k| k as u64))),
            ("panels_used", num(self.panels_used.map(|k| k as u64))),
            ("wall_time_ms", self.wall_time_ms.to_string()),
            ("error", opt(&self.error)),
        ]);
        out
    }
}

fn has_axis(rows: &[ReportRow]) -> bool {
    rows.iter().any(|r| r.axis.is_some())
}

pub fn write_json<W: Write>(rows: &[ReportRow], mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> std::io::Result<()> {
    let with_axis = has_axis(rows);
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<&str> = ReportRow::columns(
        rows.first().unwrap_or(&empty_row()),
        with_axis,
    )
    .into_iter()
    .map(|(k, _)| k)
    .collect();
    w.write_record(&header)?;
    for row in rows {
        w.write_record(row.columns(with_axis).into_iter().map(|(_, v)| v))?;
    }
    w.flush()
}

fn empty_row() -> ReportRow {
    ReportRow {
        axis: None,
        axis_value: None,
        id: 0,
        method: String::new(),
        value: None,
        reference: String::new(),
        relative_error: None,
        err_estimate: None,
        eval_count: None,
        k_used: None,
        panels_used: None,
        wall_time_ms: 0,
        error: None,
    }
}

/// Rounded form for the summary table, e.g. `5.42e-26`.
fn short(s: &Option<String>) -> String {
    match s.as_deref().map(|v| parse_decimal(v, 64)) {
        Some(Ok(x)) => to_sci(&x, 3),
        _ => "-".into(),
    }
}

/// Summary table in the layout of the benchmark tables, then every row's
/// full-precision strings.
pub fn write_text<W: Write>(rows: &[ReportRow], mut out: W) -> std::io::Result<()> {
    let with_axis = has_axis(rows);
    if with_axis {
        write!(out, "{:<10} {:>10}  ", "axis", "value")?;
    }
    writeln!(
        out,
        "{:>3}  {:<14} {:>10} {:>10} {:>8} {:>8} {:>9}",
        "id", "method", "rel.error", "estimate", "evals", "k/panels", "time ms"
    )?;
    for r in rows {
        if with_axis {
            write!(
                out,
                "{:<10} {:>10}  ",
                r.axis.as_deref().unwrap_or(""),
                r.axis_value.as_deref().unwrap_or("")
            )?;
        }
        if let Some(e) = &r.error {
            writeln!(out, "{:>3}  {:<14} error: {e}", r.id, r.method)?;
            continue;
        }
        let used = r.k_used.or(r.panels_used).map_or("-".into(), |k| k.to_string());
        writeln!(
            out,
            "{:>3}  {:<14} {:>10} {:>10} {:>8} {:>8} {:>9}",
            r.id,
            r.method,
            short(&r.relative_error),
            short(&r.err_estimate),
            r.eval_count.map_or("-".into(), |n| n.to_string()),
            used,
            r.wall_time_ms
        )?;
    }
    for r in rows.iter().filter(|r| r.ok()) {
        writeln!(out)?;
        match (&r.axis, &r.axis_value) {
            (Some(a), Some(v)) => writeln!(out, "({}) {} [{a} = {v}]", r.id, r.method)?,
            _ => writeln!(out, "({}) {}", r.id, r.method)?,
        }
        for (key, val) in [
            ("value", &r.value),
            ("reference", &Some(r.reference.clone())),
            ("relative_error", &r.relative_error),
            ("err_estimate", &r.err_estimate),
        ] {
            writeln!(out, "  {key:<15}{}", val.as_deref().unwrap_or("-"))?;
        }
    }
    Ok(())
}
