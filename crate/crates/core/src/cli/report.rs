use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::compare::CompareResults;
use super::config::RunConfig;
use crate::error::{Error, Result};
use crate::metrics::{markdown_table, METRICS_CSV_HEADER};
use crate::sim::{ScenarioKind, SimTrace};

pub const METRICS_FILE: &str = "metrics.csv";
pub const REPORT_FILE: &str = "report.md";
pub const TRACES_DIR: &str = "traces";
pub const PLOTDATA_DIR: &str = "plotdata";

/// Relative path of a cell's trace CSV.
pub fn trace_path(controller: &str, scenario: ScenarioKind) -> PathBuf {
    Path::new(TRACES_DIR).join(format!("{controller}__{}.csv", scenario.name()))
}

/// Creates `dir` and checks that it accepts files.
pub fn prepare_output_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let probe = dir.join(".write_probe");
    fs::write(&probe, b"").map_err(|e| Error::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn metrics_csv(results: &CompareResults) -> String {
    let mut out = format!("{METRICS_CSV_HEADER}\n");
    for si in 0..results.scenarios.len() {
        for row in results.rows(si) {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
    }
    out
}

pub fn markdown_report(results: &CompareResults) -> String {
    let mut out = String::from("# Controller comparison\n");
    for (si, scenario) in results.scenarios.iter().enumerate() {
        let _ = write!(
            out,
            "\n## {} scenario (T={} s, dt={} s)\n\n{}",
            scenario.kind.title(),
            scenario.horizon,
            scenario.dt,
            markdown_table(&results.rows(si))
        );
    }
    out
}

fn plot_columns(trace: &SimTrace) -> [(&'static str, &[f64]); 5] {
    [("r", &trace.r), ("y", &trace.y), ("ym", &trace.ym), ("u", &trace.u), ("d", &trace.d)]
}

/// Two-column `t value` text, one line per sample.
pub fn plotdata(t: &[f64], values: &[f64]) -> String {
    let mut out = String::with_capacity(t.len() * 48);
    for (t, v) in t.iter().zip(values) {
        let _ = writeln!(out, "{t:.16e} {v:.16e}");
    }
    out
}

/// Writes the artifacts selected by `cfg.emit` under `cfg.output_dir` and
/// returns the written paths.
pub fn emit_report(results: &CompareResults, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let dir = &cfg.output_dir;
    prepare_output_dir(dir)?;
    let mut written = Vec::new();
    if cfg.emit.csv {
        for cell in &results.cells {
            let Some(trace) = cell.trace() else { continue };
            let path = dir.join(trace_path(&results.controllers[cell.controller].name, results.scenarios[cell.scenario].kind));
            let mut buf = Vec::with_capacity(trace.len() * 140);
            trace.write_csv(&mut buf).map_err(|e| Error::io(&path, e))?;
            write_file(&path, &buf)?;
            written.push(path);
        }
        let path = dir.join(METRICS_FILE);
        write_file(&path, metrics_csv(results).as_bytes())?;
        written.push(path);
    }
    if cfg.emit.markdown {
        let path = dir.join(REPORT_FILE);
        write_file(&path, markdown_report(results).as_bytes())?;
        written.push(path);
    }
    if cfg.emit.plotdata {
        for cell in &results.cells {
            let Some(trace) = cell.trace() else { continue };
            let stem = format!(
                "{}__{}",
                results.controllers[cell.controller].name,
                results.scenarios[cell.scenario].kind.name()
            );
            for (signal, values) in plot_columns(trace) {
                let path = dir.join(PLOTDATA_DIR).join(format!("{stem}__{signal}.dat"));
                write_file(&path, plotdata(&trace.t, values).as_bytes())?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

/// Writes one trace CSV, creating parent directories.
pub fn save_trace(trace: &SimTrace, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    trace.save_csv(path)
}

/// Writes any serializable artifact produced through a `Write` callback.
pub fn write_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
{
    let mut buf = Vec::new();
    f(&mut buf).map_err(|e| Error::io(path, e))?;
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&buf).map_err(|e| Error::io(path, e))
}
