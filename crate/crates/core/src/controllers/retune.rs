use super::mrc::{mrc_controller, MrcParams};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::{actuation_metrics, step_metrics};
use crate::ratpoly::TransferFunction;
use crate::sim::{simulate_with_realization, Realization, ScenarioConfig, ScenarioKind};

/// Inclusive arithmetic grid `start, start + step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        GridRange { start, stop, step }
    }

    pub fn single(value: f64) -> Self {
        GridRange { start: value, stop: value, step: 1.0 }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if ![self.start, self.stop, self.step].iter().all(|v| v.is_finite()) {
            return Err(Error::Invariant(format!("{name} grid must be finite")));
        }
        if self.stop < self.start {
            return Err(Error::Invariant(format!("{name} grid is empty (stop < start)")));
        }
        if !(self.step > 0.0) {
            return Err(Error::Invariant(format!("{name} grid step must be > 0")));
        }
        Ok(())
    }

    /// Grid points computed as `start + k step` to avoid accumulated drift,
    /// rounded to 12 decimals so that e.g. 3.36 prints as 3.36.
    pub fn values(&self) -> Vec<f64> {
        if self.stop < self.start || !(self.step > 0.0) {
            return Vec::new();
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

/// Energy-oriented MRC grid search settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RetuneConfig {
    pub zeta: f64,
    pub wn: GridRange,
    pub tauf: GridRange,
    /// Overshoot cap, percent.
    pub os_cap: f64,
    pub execution: Execution,
}

impl Default for RetuneConfig {
    fn default() -> Self {
        RetuneConfig {
            zeta: 0.9,
            wn: GridRange::new(2.0, 6.0, 0.02),
            tauf: GridRange::new(0.05, 0.15, 0.01),
            os_cap: 5.0,
            execution: Execution::default(),
        }
    }
}

/// One evaluated grid point. Diverged or failed candidates carry infinite
/// energy and overshoot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetuneCandidate {
    pub params: MrcParams,
    pub energy: f64,
    pub overshoot_pct: f64,
}

impl RetuneCandidate {
    pub fn feasible(&self, os_cap: f64) -> bool {
        self.energy.is_finite() && self.overshoot_pct <= os_cap
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetuneOutcome {
    pub best: RetuneCandidate,
    /// Every grid point, `wn`-major in grid order.
    pub candidates: Vec<RetuneCandidate>,
}

/// Minimizes wave-scenario control energy over the `(wn, tauf)` grid subject
/// to the overshoot cap, with `zeta = 0.9`.
pub fn mrc_energy_retune(
    g: &TransferFunction,
    grid_wn: &[f64],
    grid_tauf: &[f64],
    os_cap: f64,
    wave_cfg: &ScenarioConfig,
) -> Result<MrcParams> {
    Ok(retune_over(g, 0.9, grid_wn, grid_tauf, os_cap, Execution::default(), wave_cfg)?.best.params)
}

/// Grid search described by `cfg`, returning every evaluated candidate.
pub fn retune_grid(g: &TransferFunction, cfg: &RetuneConfig, wave_cfg: &ScenarioConfig) -> Result<RetuneOutcome> {
    cfg.wn.validate("retune.wn")?;
    cfg.tauf.validate("retune.tauf")?;
    retune_over(g, cfg.zeta, &cfg.wn.values(), &cfg.tauf.values(), cfg.os_cap, cfg.execution, wave_cfg)
}

fn retune_over(
    g: &TransferFunction,
    zeta: f64,
    grid_wn: &[f64],
    grid_tauf: &[f64],
    os_cap: f64,
    execution: Execution,
    wave_cfg: &ScenarioConfig,
) -> Result<RetuneOutcome> {
    if grid_wn.is_empty() || grid_tauf.is_empty() {
        return Err(Error::InvalidParameter("retune grids must be nonempty".into()));
    }
    if wave_cfg.kind != ScenarioKind::Wave {
        return Err(Error::InvalidParameter(format!(
            "retune runs on the wave scenario (got {})",
            wave_cfg.kind
        )));
    }
    let realization = Realization::generate(wave_cfg)?;
    let points: Vec<MrcParams> = grid_wn
        .iter()
        .flat_map(|&wn| grid_tauf.iter().map(move |&tauf| MrcParams::new(zeta, wn, tauf)))
        .collect();
    for p in &points {
        p.validate()?;
    }
    let evaluated = execution.map_slice(&points, |p| evaluate(g, p, wave_cfg, &realization));
    let candidates = evaluated.into_iter().collect::<Result<Vec<_>>>()?;

    let by_energy_then_params = |a: &&RetuneCandidate, b: &&RetuneCandidate| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.params.wn.total_cmp(&b.params.wn))
            .then(a.params.tauf.total_cmp(&b.params.tauf))
    };
    let best = candidates.iter().filter(|c| c.feasible(os_cap)).min_by(by_energy_then_params);
    match best {
        Some(best) => Ok(RetuneOutcome { best: *best, candidates }),
        None => {
            let least = candidates
                .iter()
                .min_by(|a, b| a.overshoot_pct.total_cmp(&b.overshoot_pct).then(by_energy_then_params(a, b)))
                .expect("nonempty grid");
            Err(Error::RetuneInfeasible { least_violating: least.params, overshoot_pct: least.overshoot_pct })
        }
    }
}

fn evaluate(
    g: &TransferFunction,
    p: &MrcParams,
    cfg: &ScenarioConfig,
    realization: &Realization,
) -> Result<RetuneCandidate> {
    let c = mrc_controller(g, p)?;
    let trace = simulate_with_realization(g, &c, cfg, realization)?;
    if trace.diverged {
        return Ok(RetuneCandidate { params: *p, energy: f64::INFINITY, overshoot_pct: f64::INFINITY });
    }
    let step = step_metrics(&trace)?;
    Ok(RetuneCandidate { params: *p, energy: actuation_metrics(&trace).energy, overshoot_pct: step.overshoot_pct })
}
