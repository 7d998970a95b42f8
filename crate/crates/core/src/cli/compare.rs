use std::path::Path;

use super::config::RunConfig;
use crate::controllers::ControllerSpec;
use crate::error::Result;
use crate::metrics::{MetricsReport, MetricsRow};
use crate::plant::surge_plant;
use crate::sim::{simulate_with_realization, Realization, ScenarioConfig, SimTrace};

/// Result of one (controller, scenario) pair.
#[derive(Debug, Clone)]
pub enum CellOutcome {
    Done { trace: SimTrace, metrics: MetricsReport },
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub controller: usize,
    pub scenario: usize,
    pub outcome: CellOutcome,
}

impl Cell {
    pub fn trace(&self) -> Option<&SimTrace> {
        match &self.outcome {
            CellOutcome::Done { trace, .. } => Some(trace),
            CellOutcome::Failed(_) => None,
        }
    }

    pub fn metrics(&self) -> Option<&MetricsReport> {
        match &self.outcome {
            CellOutcome::Done { metrics, .. } => Some(metrics),
            CellOutcome::Failed(_) => None,
        }
    }

    /// Why the cell has no usable metrics, if it has none.
    pub fn failure(&self) -> Option<String> {
        match &self.outcome {
            CellOutcome::Failed(msg) => Some(msg.clone()),
            CellOutcome::Done { metrics, .. } if metrics.diverged => Some("closed loop diverged".into()),
            CellOutcome::Done { .. } => None,
        }
    }
}

/// The full comparison matrix, scenario-major.
#[derive(Debug, Clone)]
pub struct CompareResults {
    pub controllers: Vec<ControllerSpec>,
    pub scenarios: Vec<ScenarioConfig>,
    pub cells: Vec<Cell>,
}

impl CompareResults {
    pub fn cell(&self, controller: usize, scenario: usize) -> &Cell {
        &self.cells[scenario * self.controllers.len() + controller]
    }

    pub fn scenario_cells(&self, scenario: usize) -> &[Cell] {
        let n = self.controllers.len();
        &self.cells[scenario * n..(scenario + 1) * n]
    }

    /// Metrics rows of one scenario in controller order.
    pub fn rows(&self, scenario: usize) -> Vec<MetricsRow> {
        let kind = self.scenarios[scenario].kind;
        self.scenario_cells(scenario)
            .iter()
            .map(|cell| {
                let spec = &self.controllers[cell.controller];
                MetricsRow {
                    controller: spec.name.clone(),
                    label: spec.label.clone(),
                    scenario: kind.name().to_string(),
                    report: cell.metrics().copied(),
                }
            })
            .collect()
    }

    /// Index of the controller with the lowest value in each metric column
    /// (ties go to the earlier controller).
    pub fn best_per_column(&self, scenario: usize) -> [Option<usize>; 9] {
        let mut best: [Option<(usize, f64)>; 9] = [None; 9];
        for cell in self.scenario_cells(scenario) {
            let Some(m) = cell.metrics().filter(|m| !m.diverged) else { continue };
            for (slot, v) in best.iter_mut().zip(m.values()) {
                if slot.is_none_or(|(_, b)| v < b) {
                    *slot = Some((cell.controller, v));
                }
            }
        }
        best.map(|b| b.map(|(i, _)| i))
    }

    /// First failed cell as `controller/scenario: reason`.
    pub fn first_failure(&self) -> Option<String> {
        self.cells.iter().find_map(|cell| {
            cell.failure().map(|why| {
                format!(
                    "{}/{}: {why}",
                    self.controllers[cell.controller].name,
                    self.scenarios[cell.scenario].kind.name()
                )
            })
        })
    }
}

/// One realization per scenario, keyed only by that scenario's settings.
pub fn scenario_realizations(cfg: &RunConfig) -> Result<Vec<Realization>> {
    cfg.scenarios.iter().map(Realization::generate).collect()
}

/// Simulates every controller on every scenario. Synthesis or simulation
/// errors become failed cells; only an invalid config aborts the run.
pub fn run_compare(cfg: &RunConfig) -> Result<CompareResults> {
    cfg.validate()?;
    let plant = surge_plant(&cfg.plant)?;
    let realizations = scenario_realizations(cfg)?;
    let synthesized: Vec<_> = cfg.controllers.iter().map(|c| c.synthesize(&plant)).collect();
    let nc = cfg.controllers.len();
    let cells = cfg.execution.map(nc * cfg.scenarios.len(), |i| {
        let (scenario, controller) = (i / nc, i % nc);
        let outcome = match &synthesized[controller] {
            Err(e) => CellOutcome::Failed(e.to_string()),
            Ok(c) => {
                let run = simulate_with_realization(&plant, c, &cfg.scenarios[scenario], &realizations[scenario])
                    .and_then(|trace| Ok((MetricsReport::from_trace(&trace)?, trace)));
                match run {
                    Ok((metrics, trace)) => CellOutcome::Done { trace, metrics },
                    Err(e) => CellOutcome::Failed(e.to_string()),
                }
            }
        };
        Cell { controller, scenario, outcome }
    });
    Ok(CompareResults { controllers: cfg.controllers.clone(), scenarios: cfg.scenarios.clone(), cells })
}

/// Rebuilds the matrix from trace files under `dir/traces`; missing or
/// unreadable traces become failed cells.
pub fn load_results(cfg: &RunConfig, dir: &Path) -> Result<CompareResults> {
    cfg.validate()?;
    let nc = cfg.controllers.len();
    let mut cells = Vec::with_capacity(nc * cfg.scenarios.len());
    for (si, scenario) in cfg.scenarios.iter().enumerate() {
        for (ci, spec) in cfg.controllers.iter().enumerate() {
            let path = dir.join(super::report::trace_path(&spec.name, scenario.kind));
            let outcome = match SimTrace::load_csv(&path).and_then(|t| Ok((MetricsReport::from_trace(&t)?, t))) {
                Ok((metrics, trace)) => CellOutcome::Done { trace, metrics },
                Err(e) => CellOutcome::Failed(e.to_string()),
            };
            cells.push(Cell { controller: ci, scenario: si, outcome });
        }
    }
    Ok(CompareResults { controllers: cfg.controllers.clone(), scenarios: cfg.scenarios.clone(), cells })
}
