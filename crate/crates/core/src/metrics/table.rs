use std::fmt::Write as _;

use super::MetricsReport;

pub const METRICS_CSV_HEADER: &str =
    "controller,scenario,rise,settle,os,rms,mae,iae,itae,energy,activity,diverged";

const MARKDOWN_COLUMNS: [&str; 10] = [
    "Controller",
    "Rise [s]",
    "Settle [s]",
    "OS [%]",
    "RMS",
    "MAE",
    "IAE",
    "ITAE",
    "∫u²dt",
    "∫(Δu)²dt",
];

/// Decimals per numeric column when the value is printed in fixed notation.
const DECIMALS: [usize; 9] = [3, 3, 2, 4, 4, 3, 3, 1, 1];

/// One (controller, scenario) cell. `report` is `None` when synthesis or
/// simulation failed.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub controller: String,
    pub label: String,
    pub scenario: String,
    pub report: Option<MetricsReport>,
}

impl MetricsRow {
    /// Row of the metrics CSV; failed cells leave the numeric fields empty.
    pub fn csv_line(&self) -> String {
        let mut line = format!("{},{}", self.controller, self.scenario);
        match &self.report {
            Some(m) => {
                for v in m.values() {
                    let _ = write!(line, ",{v}");
                }
                let _ = write!(line, ",{}", m.diverged);
            }
            None => line.push_str(",,,,,,,,,,"),
        }
        line
    }

    fn usable(&self) -> Option<&MetricsReport> {
        self.report.as_ref().filter(|m| !m.diverged)
    }
}

fn format_value(v: f64, decimals: usize) -> String {
    if v.abs() >= 1e5 {
        format!("{v:.3e}")
    } else {
        format!("{v:.decimals$}")
    }
}

/// Markdown table in the comparison layout; the lowest entry of each numeric
/// column is bolded and failed cells render as an em rule.
pub fn markdown_table(rows: &[MetricsRow]) -> String {
    let mut best = [f64::INFINITY; 9];
    for m in rows.iter().filter_map(MetricsRow::usable) {
        for (b, v) in best.iter_mut().zip(m.values()) {
            *b = b.min(v);
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", MARKDOWN_COLUMNS.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(MARKDOWN_COLUMNS.len()));
    for row in rows {
        let mut cells = vec![row.label.clone()];
        match row.usable() {
            Some(m) => {
                for (i, v) in m.values().into_iter().enumerate() {
                    let text = format_value(v, DECIMALS[i]);
                    cells.push(if v == best[i] { format!("**{text}**") } else { text });
                }
            }
            None => cells.extend(std::iter::repeat_n("—".to_string(), 9)),
        }
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
    out
}
