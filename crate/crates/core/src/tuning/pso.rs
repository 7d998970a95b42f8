use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate_population, Incumbent, OptimizerConfig, SearchSpace, TuneResult};
use crate::error::Result;

/// Global-best particle swarm with linearly decreasing inertia.
pub fn pso_optimize<F>(cost: &F, space: &SearchSpace, cfg: &OptimizerConfig) -> Result<TuneResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    space.validate()?;
    cfg.validate()?;
    let dim = space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let vmax: Vec<f64> =
        space.lower.iter().zip(&space.upper).map(|(lo, hi)| cfg.vmax_frac * (hi - lo)).collect();

    let mut x = cfg.initial_population(space, &mut rng)?;
    let mut v: Vec<Vec<f64>> = (0..cfg.population)
        .map(|_| vmax.iter().map(|m| (2.0 * rng.random::<f64>() - 1.0) * m).collect())
        .collect();
    let costs = evaluate_population(cost, &x, cfg.execution);
    let mut evaluations = x.len();
    let mut pbest = x.clone();
    let mut pbest_cost = costs.clone();
    let mut best = Incumbent::from_population(&x, &costs);
    let mut history = vec![best.cost];

    for it in 0..cfg.iterations {
        let progress = if cfg.iterations > 1 { it as f64 / (cfg.iterations - 1) as f64 } else { 1.0 };
        let w = cfg.w_start - (cfg.w_start - cfg.w_end) * progress;
        for i in 0..cfg.population {
            for d in 0..dim {
                let (r1, r2) = (rng.random::<f64>(), rng.random::<f64>());
                let vel = w * v[i][d]
                    + cfg.c1 * r1 * (pbest[i][d] - x[i][d])
                    + cfg.c2 * r2 * (best.theta[d] - x[i][d]);
                v[i][d] = vel.clamp(-vmax[d], vmax[d]);
                x[i][d] += v[i][d];
            }
            space.clamp(&mut x[i]);
        }
        let costs = evaluate_population(cost, &x, cfg.execution);
        evaluations += x.len();
        for i in 0..cfg.population {
            if costs[i] < pbest_cost[i] {
                pbest_cost[i] = costs[i];
                pbest[i].clone_from(&x[i]);
            }
        }
        best.offer(&x, &costs);
        history.push(best.cost);
    }
    Ok(TuneResult { best_theta: best.theta, best_cost: best.cost, history, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuning::test_fns::sphere;

    #[test]
    fn sphere_4d() {
        let r = pso_optimize(&sphere, &SearchSpace::cube(4, -5.0, 5.0), &OptimizerConfig::default()).unwrap();
        assert!(r.best_cost < 1e-3, "{}", r.best_cost);
        assert_eq!(r.history.len(), 201);
        assert_eq!(r.evaluations, 30 * 201);
    }

    #[test]
    fn constant_cost_keeps_first_candidate() {
        let cfg = OptimizerConfig { iterations: 10, ..Default::default() };
        let space = SearchSpace::cube(2, -1.0, 1.0);
        let r = pso_optimize(&|_: &[f64]| 3.0, &space, &cfg).unwrap();
        assert!(r.history.iter().all(|&c| c == 3.0));
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let first = cfg.initial_population(&space, &mut rng).unwrap().remove(0);
        assert_eq!(r.best_theta, first);
    }
}
