use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Sampled signals of one closed-loop run.
///
/// `t, r, y, ym, u, d` have equal length; `ym - y` is the injected noise.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub y: Vec<f64>,
    pub ym: Vec<f64>,
    pub u: Vec<f64>,
    pub d: Vec<f64>,
    pub dt: f64,
    /// Set when |y| left the 1e6 envelope and the run was cut short.
    pub diverged: bool,
}

pub const TRACE_HEADER: &str = "t,r,y,ym,u,d";

impl SimTrace {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn noise(&self) -> Vec<f64> {
        self.ym.iter().zip(&self.y).map(|(m, y)| m - y).collect()
    }

    /// Writes the `t,r,y,ym,u,d` CSV with 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{TRACE_HEADER}")?;
        for k in 0..self.len() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.t[k], self.r[k], self.y[k], self.ym[k], self.u[k], self.d[k]
            )?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        self.write_csv(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
    }

    pub fn load_csv(path: &Path) -> Result<SimTrace> {
        let bad = |message: String| Error::Trace { path: path.to_path_buf(), message };
        let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| bad(e.to_string()))?
            .iter()
            .map(str::to_owned)
            .collect();
        if header.join(",") != TRACE_HEADER {
            return Err(bad(format!("expected header `{TRACE_HEADER}`, found `{}`", header.join(","))));
        }
        let mut cols: [Vec<f64>; 6] = Default::default();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            for (col, field) in cols.iter_mut().zip(record.iter()) {
                let v = field
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("row {}: malformed number `{field}`", line + 2)))?;
                col.push(v);
            }
        }
        let [t, r, y, ym, u, d] = cols;
        if t.len() < 2 {
            return Err(bad("trace needs at least two samples".into()));
        }
        let dt = t[1] - t[0];
        Ok(SimTrace { t, r, y, ym, u, d, dt, diverged: false })
    }
}
