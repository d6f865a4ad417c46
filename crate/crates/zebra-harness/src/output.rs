use serde::Serialize;
use serde_json::Value;

use crate::config::{Experiment, Format};
use crate::record::{record_columns, TrialRecord};
use crate::summary::{summary_columns, SummaryRow};

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn table<T: Serialize>(rows: &[T], columns: &[&str]) -> anyhow::Result<Vec<Vec<String>>> {
    rows.iter()
        .map(|row| {
            let value = serde_json::to_value(row)?;
            Ok(columns.iter().map(|c| cell(value.get(*c))).collect())
        })
        .collect()
}

fn csv_text<T: Serialize>(rows: &[T], columns: &[&str]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns)?;
    for row in table(rows, columns)? {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn write_records(records: &[TrialRecord], experiment: Experiment, format: Format) -> anyhow::Result<String> {
    match format {
        Format::Csv => csv_text(records, record_columns(experiment)),
        Format::Json => {
            let doc = serde_json::json!({ "experiment": experiment, "records": records });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
    }
}

pub fn write_summary(rows: &[SummaryRow], experiment: Experiment, format: Format) -> anyhow::Result<String> {
    match format {
        Format::Csv => csv_text(rows, summary_columns(experiment)),
        Format::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
    }
}

/// Summary as an aligned text table; numbers are rounded to four decimals.
pub fn render_text(rows: &[SummaryRow], experiment: Experiment) -> anyhow::Result<String> {
    let columns = summary_columns(experiment);
    let mut cells = table(rows, columns)?;
    for row in &mut cells {
        for c in row.iter_mut() {
            if c.contains('.') {
                if let Ok(x) = c.parse::<f64>() {
                    *c = format!("{x:.4}");
                }
            }
        }
    }
    let widths: Vec<usize> = (0..columns.len())
        .map(|i| cells.iter().map(|r| r[i].len()).chain([columns[i].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, items: &[String]| {
        let padded: Vec<String> = items.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut out, &columns.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    for row in &cells {
        line(&mut out, row);
    }
    Ok(out)
}
