//! Scalar performance measures of a closed-loop trace.
//!
//! Integrals use the left rectangle rule over the `N - 1` sample intervals.

mod table;

pub use table::{markdown_table, MetricsRow, METRICS_CSV_HEADER};

use crate::error::{Error, Result};
use crate::sim::SimTrace;

/// Lower and upper rise thresholds as fractions of the reference.
pub const RISE_BAND: (f64, f64) = (0.1, 0.9);
/// Settling band as a fraction of the reference.
pub const SETTLE_BAND: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMetrics {
    pub rise_s: f64,
    pub settle_s: f64,
    pub overshoot_pct: f64,
    /// The output never reached 90 % of the reference; `rise_s` is the horizon.
    pub not_risen: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMetrics {
    pub rms: f64,
    pub mae: f64,
    pub iae: f64,
    pub itae: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuationMetrics {
    /// Integral of u^2.
    pub energy: f64,
    /// Integral of (du/dt)^2, i.e. sum of (delta u)^2 / dt.
    pub activity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub rise_s: f64,
    pub settle_s: f64,
    pub overshoot_pct: f64,
    pub rms: f64,
    pub mae: f64,
    pub iae: f64,
    pub itae: f64,
    pub energy: f64,
    pub activity: f64,
    pub diverged: bool,
    pub not_risen: bool,
}

impl MetricsReport {
    pub fn from_trace(trace: &SimTrace) -> Result<Self> {
        if trace.diverged {
            return Ok(Self::diverged());
        }
        let step = step_metrics(trace)?;
        let err = error_metrics(trace);
        let act = actuation_metrics(trace);
        Ok(MetricsReport {
            rise_s: step.rise_s,
            settle_s: step.settle_s,
            overshoot_pct: step.overshoot_pct,
            rms: err.rms,
            mae: err.mae,
            iae: err.iae,
            itae: err.itae,
            energy: act.energy,
            activity: act.activity,
            diverged: false,
            not_risen: step.not_risen,
        })
    }

    pub fn diverged() -> Self {
        let inf = f64::INFINITY;
        MetricsReport {
            rise_s: inf,
            settle_s: inf,
            overshoot_pct: inf,
            rms: inf,
            mae: inf,
            iae: inf,
            itae: inf,
            energy: inf,
            activity: inf,
            diverged: true,
            not_risen: true,
        }
    }

    /// Values in table column order.
    pub fn values(&self) -> [f64; 9] {
        [
            self.rise_s,
            self.settle_s,
            self.overshoot_pct,
            self.rms,
            self.mae,
            self.iae,
            self.itae,
            self.energy,
            self.activity,
        ]
    }
}

fn step_reference(trace: &SimTrace) -> Result<f64> {
    let r = *trace.r.first().ok_or(Error::ZeroReference)?;
    if r == 0.0 || !r.is_finite() {
        return Err(Error::ZeroReference);
    }
    Ok(r)
}

/// First time the normalized output `y / r` reaches `level`, linearly
/// interpolated between samples.
fn first_crossing(t: &[f64], yn: &[f64], level: f64) -> Option<f64> {
    if yn.first()? >= &level {
        return Some(t[0]);
    }
    for k in 1..yn.len() {
        if yn[k] >= level {
            let frac = (level - yn[k - 1]) / (yn[k] - yn[k - 1]);
            return Some(t[k - 1] + frac * (t[k] - t[k - 1]));
        }
    }
    None
}

/// Rise (10-90 %), settling (2 % band, last exit) and percent overshoot
/// against the step amplitude `r[0]`.
pub fn step_metrics(trace: &SimTrace) -> Result<StepMetrics> {
    let r = step_reference(trace)?;
    let t = &trace.t;
    let yn: Vec<f64> = trace.y.iter().map(|y| y / r).collect();
    let horizon = *t.last().unwrap_or(&0.0);

    let (lo, hi) = RISE_BAND;
    let (rise_s, not_risen) = match (first_crossing(t, &yn, lo), first_crossing(t, &yn, hi)) {
        (Some(t10), Some(t90)) => ((t90 - t10).max(0.0), false),
        _ => (horizon, true),
    };

    // last sample outside the band; settle is where the trace re-enters it
    let dev = |k: usize| (yn[k] - 1.0).abs();
    let settle_s = match (0..yn.len()).rev().find(|&k| dev(k) > SETTLE_BAND) {
        None => 0.0,
        Some(k) if k + 1 == yn.len() => horizon,
        Some(k) => {
            let (a, b) = (dev(k), dev(k + 1));
            let frac = (a - SETTLE_BAND) / (a - b);
            t[k] + frac * (t[k + 1] - t[k])
        }
    };

    let peak = yn.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let overshoot_pct = ((peak - 1.0) * 100.0).max(0.0);
    Ok(StepMetrics { rise_s, settle_s, overshoot_pct, not_risen })
}

/// Error statistics of `e = r - y` on the true output.
pub fn error_metrics(trace: &SimTrace) -> ErrorMetrics {
    let n = trace.len();
    if n == 0 {
        return ErrorMetrics { rms: 0.0, mae: 0.0, iae: 0.0, itae: 0.0 };
    }
    let dt = trace.dt;
    let (mut sq, mut abs_sum, mut iae, mut itae) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..n {
        let e = (trace.r[k] - trace.y[k]).abs();
        sq += e * e;
        abs_sum += e;
        if k + 1 < n {
            iae += e * dt;
            itae += trace.t[k] * e * dt;
        }
    }
    ErrorMetrics { rms: (sq / n as f64).sqrt(), mae: abs_sum / n as f64, iae, itae }
}

pub fn actuation_metrics(trace: &SimTrace) -> ActuationMetrics {
    let u = &trace.u;
    let dt = trace.dt;
    let n = u.len();
    let energy = u.iter().take(n.saturating_sub(1)).map(|v| v * v * dt).sum();
    let activity = u.windows(2).map(|w| (w[1] - w[0]).powi(2) / dt).sum();
    ActuationMetrics { energy, activity }
}
