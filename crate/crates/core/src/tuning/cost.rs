use crate::controllers::{pid_controller, PidParams};
use crate::error::{Error, Result};
use crate::metrics::MetricsReport;
use crate::ratpoly::TransferFunction;
use crate::sim::{LoopModel, Realization, ScenarioConfig};

/// Cost charged per scenario for a divergent or unsynthesizable candidate.
pub const DIVERGENCE_PENALTY: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostWeights {
    /// ITAE weight.
    pub wt: f64,
    /// IAE weight.
    pub wi: f64,
    /// Energy weight.
    pub wu: f64,
    /// Activity weight.
    pub wd: f64,
    /// Overshoot penalty weight.
    pub rho: f64,
    /// Soft overshoot limit, percent.
    pub os_ref: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        CostWeights { wt: 1.0, wi: 0.1, wu: 1e-5, wd: 1e-9, rho: 10.0, os_ref: 5.0 }
    }
}

impl CostWeights {
    pub fn zero() -> Self {
        CostWeights { wt: 0.0, wi: 0.0, wu: 0.0, wd: 0.0, rho: 0.0, os_ref: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("weights.wt", self.wt),
            ("weights.wi", self.wi),
            ("weights.wu", self.wu),
            ("weights.wd", self.wd),
            ("weights.rho", self.rho),
            ("weights.os_ref", self.os_ref),
        ];
        for (name, v) in named {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Invariant(format!("{name} must be ≥ 0 (got {v})")));
            }
        }
        Ok(())
    }

    /// Contribution of one scenario's metrics.
    pub fn scenario_cost(&self, m: &MetricsReport) -> f64 {
        if m.diverged {
            return DIVERGENCE_PENALTY;
        }
        let excess = (m.overshoot_pct - self.os_ref).max(0.0);
        let j = self.wt * m.itae + self.wi * m.iae + self.wu * m.energy + self.wd * m.activity
            + self.rho * excess * excess;
        if j.is_finite() {
            j.min(DIVERGENCE_PENALTY)
        } else {
            DIVERGENCE_PENALTY
        }
    }
}

/// PID cost over a fixed scenario set with realizations generated once.
#[derive(Debug, Clone)]
pub struct CostEvaluator {
    plant: TransferFunction,
    scenarios: Vec<(ScenarioConfig, Realization)>,
    weights: CostWeights,
}

impl CostEvaluator {
    pub fn new(plant: TransferFunction, scenarios: &[ScenarioConfig], weights: CostWeights) -> Result<Self> {
        weights.validate()?;
        if scenarios.is_empty() {
            return Err(Error::Invariant("cost needs at least one scenario".into()));
        }
        let scenarios = scenarios
            .iter()
            .map(|cfg| Ok((cfg.clone(), Realization::generate(cfg)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CostEvaluator { plant, scenarios, weights })
    }

    pub fn weights(&self) -> &CostWeights {
        &self.weights
    }

    /// Per-scenario metrics for `theta = (Kp, Ki, Kd, Tf)`.
    pub fn metrics(&self, theta: &[f64]) -> Result<Vec<MetricsReport>> {
        let theta: [f64; 4] = theta
            .try_into()
            .map_err(|_| Error::InvalidParameter(format!("PID theta needs 4 entries, got {}", theta.len())))?;
        let c = pid_controller(&PidParams::from_theta(&theta))?;
        let mut out = Vec::with_capacity(self.scenarios.len());
        let mut model: Option<LoopModel> = None;
        for (cfg, realization) in &self.scenarios {
            if model.as_ref().is_none_or(|m| m.dt() != cfg.dt) {
                model = Some(LoopModel::new(&self.plant, &c, cfg.dt)?);
            }
            let trace = model.as_ref().expect("model built above").run(realization, cfg.initial_output)?;
            out.push(MetricsReport::from_trace(&trace)?);
        }
        Ok(out)
    }

    /// Scalar cost; invalid or divergent candidates get the finite penalty.
    pub fn cost(&self, theta: &[f64]) -> f64 {
        match self.metrics(theta) {
            Ok(reports) => reports.iter().map(|m| self.weights.scenario_cost(m)).sum(),
            Err(_) => DIVERGENCE_PENALTY * self.scenarios.len() as f64,
        }
    }
}

/// One-shot cost of `theta` (generates the realizations on every call).
pub fn evaluate_cost(
    theta: &[f64],
    plant: &TransferFunction,
    scenarios: &[ScenarioConfig],
    w: &CostWeights,
) -> Result<f64> {
    Ok(CostEvaluator::new(plant.clone(), scenarios, *w)?.cost(theta))
}
