use std::sync::Mutex;

use proptest::prelude::*;

use surgectl::controllers::{pid_controller, PID_PSO, PID_WOA};
use surgectl::exec::Execution;
use surgectl::metrics::MetricsReport;
use surgectl::plant::{surge_plant, PlantParams};
use surgectl::sim::{simulate_closed_loop, ScenarioConfig, ScenarioKind};
use surgectl::tuning::{
    de_optimize_observed, evaluate_cost, optimize, Algorithm, CostEvaluator, CostWeights, OptimizerConfig,
    SearchSpace, DIVERGENCE_PENALTY,
};

const ALGORITHMS: [Algorithm; 3] = [Algorithm::Pso, Algorithm::De, Algorithm::Woa];

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
}

fn scenarios(dt: f64, horizon: f64) -> Vec<ScenarioConfig> {
    let base = ScenarioConfig { dt, horizon, ..ScenarioConfig::default() };
    ScenarioKind::ALL.iter().map(|&k| base.with_kind(k)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn candidates_stay_in_the_box_and_best_is_minimal(seed in any::<u64>(), shift in prop::array::uniform4(-1.0..1.0f64)) {
        let space = SearchSpace::pid_default();
        let cfg = OptimizerConfig { population: 12, iterations: 25, seed, ..OptimizerConfig::default() };
        for algorithm in ALGORITHMS {
            let seen = Mutex::new(Vec::new());
            let cost = |x: &[f64]| {
                // optimum partly outside the box so the walls get exercised
                let c = x.iter().zip(&space.upper).zip(&shift).map(|((v, u), s)| (v / u - 0.5 - s).powi(2)).sum::<f64>();
                seen.lock().unwrap().push((x.to_vec(), c));
                c
            };
            let result = optimize(algorithm, &cost, &space, &cfg).unwrap();
            let seen = seen.into_inner().unwrap();
            prop_assert_eq!(seen.len(), result.evaluations);
            prop_assert!(seen.iter().all(|(x, _)| space.contains(x)), "{algorithm} left the box");
            prop_assert!(seen.iter().all(|(_, c)| result.best_cost <= *c));
            prop_assert!(space.contains(&result.best_theta));
            prop_assert_eq!(result.history.len(), cfg.iterations + 1);
            prop_assert!(result.history.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn de_members_never_get_worse(seed in any::<u64>()) {
        let space = SearchSpace::cube(3, -2.0, 2.0);
        let cfg = OptimizerConfig { population: 16, iterations: 60, seed, ..OptimizerConfig::default() };
        let mut previous: Option<Vec<f64>> = None;
        let mut generations = 0;
        let mut monotone = true;
        de_optimize_observed(&rosenbrock, &space, &cfg, |_, costs| {
            if let Some(prev) = &previous {
                monotone &= costs.iter().zip(prev).all(|(c, p)| c <= p);
            }
            previous = Some(costs.to_vec());
            generations += 1;
        }).unwrap();
        prop_assert!(monotone);
        prop_assert_eq!(generations, cfg.iterations + 1);
    }
}

#[test]
fn identical_seeds_give_identical_results() {
    let space = SearchSpace::cube(4, -3.0, 3.0);
    for algorithm in ALGORITHMS {
        let cfg = OptimizerConfig { iterations: 50, ..OptimizerConfig::default() };
        let a = optimize(algorithm, &rosenbrock, &space, &cfg).unwrap();
        let b = optimize(algorithm, &rosenbrock, &space, &cfg).unwrap();
        let seq = optimize(algorithm, &rosenbrock, &space, &OptimizerConfig { execution: Execution::Sequential, ..cfg.clone() }).unwrap();
        assert_eq!(a, b, "{algorithm}");
        assert_eq!(a, seq, "{algorithm}");
        let other = optimize(algorithm, &rosenbrock, &space, &OptimizerConfig { seed: 7, ..cfg }).unwrap();
        assert_ne!(a.history, other.history, "{algorithm}");
    }
}

#[test]
fn supplied_initial_members_are_used() {
    let space = SearchSpace::cube(2, -5.0, 5.0);
    let cfg = OptimizerConfig {
        population: 8,
        iterations: 1,
        initial: Some(vec![vec![0.0, 0.0], vec![9.0, -9.0]]),
        ..OptimizerConfig::default()
    };
    let sphere = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    for algorithm in ALGORITHMS {
        let r = optimize(algorithm, &sphere, &space, &cfg).unwrap();
        assert_eq!(r.best_cost, 0.0, "{algorithm}");
        assert_eq!(r.history[0], 0.0, "{algorithm}");
        assert_eq!(r.evaluations, 16);
    }
}

#[test]
fn cost_examples() {
    let g = surge_plant(&PlantParams::default()).unwrap();
    let scen = scenarios(0.005, 50.0);
    let woa = PID_WOA.theta();

    assert_eq!(evaluate_cost(&woa, &g, &scen, &CostWeights::zero()).unwrap(), 0.0);

    let iae_only = CostWeights { wi: 1.0, ..CostWeights::zero() };
    let expected: f64 = scen
        .iter()
        .map(|s| {
            let trace = simulate_closed_loop(&g, &pid_controller(&PID_WOA).unwrap(), s).unwrap();
            MetricsReport::from_trace(&trace).unwrap().iae
        })
        .sum();
    let j = evaluate_cost(&woa, &g, &scen, &iae_only).unwrap();
    assert!((j - expected).abs() <= 1e-12 * expected);

    // the PSO gains overshoot by about 20 %, far past the 5 % soft limit
    let w = CostWeights::default();
    let evaluator = CostEvaluator::new(g.clone(), &scen, w).unwrap();
    let metrics = evaluator.metrics(&PID_PSO.theta()).unwrap();
    let penalty: f64 = metrics.iter().map(|m| w.rho * (m.overshoot_pct - w.os_ref).max(0.0).powi(2)).sum();
    assert!(penalty > 0.0);
    let unpenalized: f64 = metrics
        .iter()
        .map(|m| w.wt * m.itae + w.wi * m.iae + w.wu * m.energy + w.wd * m.activity)
        .sum();
    assert!((evaluator.cost(&PID_PSO.theta()) - unpenalized - penalty).abs() <= 1e-9 * unpenalized);
}

#[test]
fn cost_is_pure_and_penalizes_divergence() {
    let g = surge_plant(&PlantParams::default()).unwrap();
    let evaluator = CostEvaluator::new(g, &scenarios(0.01, 20.0), CostWeights::default()).unwrap();
    let theta = [60.0, 20.0, 0.1, 1.0];
    assert_eq!(evaluator.cost(&theta), evaluator.cost(&theta));
    let unstable = [50_000.0, 0.0, 0.0, 0.1];
    assert_eq!(evaluator.cost(&unstable), 4.0 * DIVERGENCE_PENALTY);
    // negative gains cannot be synthesized and are charged the same way
    assert_eq!(evaluator.cost(&[-1.0, 0.0, 0.0, 1.0]), 4.0 * DIVERGENCE_PENALTY);
}

#[test]
fn optimizers_agree_on_the_pid_problem() {
    // reduced budget and step so the check stays quick; the full problem is
    // what `surgectl tune` runs
    let g = surge_plant(&PlantParams::default()).unwrap();
    let scen = scenarios(0.01, 20.0);
    let evaluator = CostEvaluator::new(g.clone(), &scen, CostWeights::default()).unwrap();
    let cfg = OptimizerConfig { population: 12, iterations: 15, ..OptimizerConfig::default() };
    let cost = |x: &[f64]| evaluator.cost(x);
    let nominal = ScenarioConfig::default();
    let iae: Vec<f64> = ALGORITHMS
        .iter()
        .map(|&a| {
            let r = optimize(a, &cost, &SearchSpace::pid_default(), &cfg).unwrap();
            let p = surgectl::controllers::PidParams::from_theta(&[r.best_theta[0], r.best_theta[1], r.best_theta[2], r.best_theta[3]]);
            let trace = simulate_closed_loop(&g, &pid_controller(&p).unwrap(), &nominal).unwrap();
            MetricsReport::from_trace(&trace).unwrap().iae
        })
        .collect();
    let best = iae.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(iae.iter().all(|v| *v <= 2.0 * best), "nominal IAE {iae:?}");
}
