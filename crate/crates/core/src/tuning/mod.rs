//! Multi-scenario PID cost and the three population optimizers.
//!
//! All random draws happen in the optimizer's own loop on one ChaCha8
//! stream; only cost evaluations of a generation are farmed out, so results
//! do not depend on the execution policy.

mod cost;
mod de;
mod pso;
mod woa;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;

pub use cost::{evaluate_cost, CostEvaluator, CostWeights, DIVERGENCE_PENALTY};
pub use de::{de_optimize, de_optimize_observed};
pub use pso::pso_optimize;
pub use woa::woa_optimize;

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Axis-aligned search box.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let s = SearchSpace { lower, upper };
        s.validate()?;
        Ok(s)
    }

    /// `(Kp, Ki, Kd, Tf)` box used for PID tuning.
    pub fn pid_default() -> Self {
        SearchSpace { lower: vec![0.0, 0.0, 0.0, 0.005], upper: vec![1000.0; 4] }
    }

    /// Same bounds `[lo, hi]` in every coordinate.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        SearchSpace { lower: vec![lo; dim], upper: vec![hi; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.len() != self.upper.len() || self.lower.is_empty() {
            return Err(Error::Invariant("search space bounds must be nonempty and of equal length".into()));
        }
        for (i, (lo, hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Invariant(format!("search space needs lower < upper (coordinate {i})")));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }

    pub(crate) fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| lo + rng.random::<f64>() * (hi - lo))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Pso,
    De,
    Woa,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pso => "pso",
            Algorithm::De => "de",
            Algorithm::Woa => "woa",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pso" => Ok(Algorithm::Pso),
            "de" | "dea" => Ok(Algorithm::De),
            "woa" => Ok(Algorithm::Woa),
            other => Err(Error::InvalidParameter(format!("unknown optimizer `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub population: usize,
    pub iterations: usize,
    pub seed: u64,
    /// PSO inertia, linearly from `w_start` to `w_end`.
    pub w_start: f64,
    pub w_end: f64,
    pub c1: f64,
    pub c2: f64,
    /// PSO velocity limit as a fraction of the box width.
    pub vmax_frac: f64,
    /// DE differential weight.
    pub de_f: f64,
    /// DE crossover rate.
    pub de_cr: f64,
    /// WOA spiral shape constant.
    pub woa_b: f64,
    /// Optional starting population; missing members are drawn uniformly.
    pub initial: Option<Vec<Vec<f64>>>,
    pub execution: Execution,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            population: 30,
            iterations: 200,
            seed: 42,
            w_start: 0.9,
            w_end: 0.4,
            c1: 1.49445,
            c2: 1.49445,
            vmax_frac: 0.5,
            de_f: 0.5,
            de_cr: 0.9,
            woa_b: 1.0,
            initial: None,
            execution: Execution::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 4 {
            return Err(Error::PopulationTooSmall(self.population));
        }
        if self.iterations == 0 {
            return Err(Error::Invariant("tune.iterations must be >= 1".into()));
        }
        let constants = [self.w_start, self.w_end, self.c1, self.c2, self.vmax_frac, self.de_f, self.de_cr, self.woa_b];
        if constants.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Invariant("optimizer constants must be finite and >= 0".into()));
        }
        if self.de_cr > 1.0 {
            return Err(Error::Invariant("tune.de_cr must be <= 1".into()));
        }
        Ok(())
    }

    /// Initial population: supplied members (clamped into the box) first,
    /// then uniform draws.
    pub(crate) fn initial_population<R: Rng>(&self, space: &SearchSpace, rng: &mut R) -> Result<Vec<Vec<f64>>> {
        let mut pop = Vec::with_capacity(self.population);
        for x in self.initial.iter().flatten().take(self.population) {
            if x.len() != space.dim() {
                return Err(Error::Invariant(format!(
                    "initial member has {} coordinates, search space has {}",
                    x.len(),
                    space.dim()
                )));
            }
            let mut x = x.clone();
            space.clamp(&mut x);
            pop.push(x);
        }
        while pop.len() < self.population {
            pop.push(space.sample(rng));
        }
        Ok(pop)
    }
}

/// Outcome of one optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub best_theta: Vec<f64>,
    pub best_cost: f64,
    /// Best cost after the initial population (entry 0) and after each
    /// iteration.
    pub history: Vec<f64>,
    pub evaluations: usize,
}

impl TuneResult {
    /// `iteration,best_cost` rows followed by a `# best_theta` summary line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "iteration,best_cost")?;
        for (k, c) in self.history.iter().enumerate() {
            writeln!(w, "{k},{c:e}")?;
        }
        let theta: Vec<String> = self.best_theta.iter().map(|v| v.to_string()).collect();
        writeln!(w, "# best_theta={} best_cost={:e} evaluations={}", theta.join(";"), self.best_cost, self.evaluations)
    }
}

/// Non-finite costs rank last.
pub(crate) fn sanitize(c: f64) -> f64 {
    if c.is_nan() {
        f64::INFINITY
    } else {
        c
    }
}

/// Tracks the incumbent; ties keep the earlier candidate.
pub(crate) struct Incumbent {
    pub theta: Vec<f64>,
    pub cost: f64,
}

impl Incumbent {
    pub fn from_population(pop: &[Vec<f64>], costs: &[f64]) -> Self {
        let mut best = Incumbent { theta: pop[0].clone(), cost: costs[0] };
        best.offer(pop, costs);
        best
    }

    pub fn offer(&mut self, pop: &[Vec<f64>], costs: &[f64]) {
        for (x, &c) in pop.iter().zip(costs) {
            if c < self.cost {
                self.cost = c;
                self.theta.clone_from(x);
            }
        }
    }
}

pub(crate) fn evaluate_population<F>(cost: &F, pop: &[Vec<f64>], exec: Execution) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    exec.map_slice(pop, |x| sanitize(cost(x)))
}

/// Dispatches to the chosen optimizer.
pub fn optimize<F>(algorithm: Algorithm, cost: &F, space: &SearchSpace, cfg: &OptimizerConfig) -> Result<TuneResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    match algorithm {
        Algorithm::Pso => pso_optimize(cost, space, cfg),
        Algorithm::De => de_optimize(cost, space, cfg),
        Algorithm::Woa => woa_optimize(cost, space, cfg),
    }
}
