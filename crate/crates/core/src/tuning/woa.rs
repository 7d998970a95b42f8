use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate_population, Incumbent, OptimizerConfig, SearchSpace, TuneResult};
use crate::error::Result;

/// Whale optimization: shrinking encircling, random-member search and the
/// logarithmic spiral, each chosen per whale and iteration.
pub fn woa_optimize<F>(cost: &F, space: &SearchSpace, cfg: &OptimizerConfig) -> Result<TuneResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    space.validate()?;
    cfg.validate()?;
    let np = cfg.population;
    let dim = space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut pop = cfg.initial_population(space, &mut rng)?;
    let costs = evaluate_population(cost, &pop, cfg.execution);
    let mut evaluations = np;
    let mut best = Incumbent::from_population(&pop, &costs);
    let mut history = vec![best.cost];

    for it in 0..cfg.iterations {
        let a = 2.0 - 2.0 * it as f64 / cfg.iterations as f64;
        let mut next = Vec::with_capacity(np);
        for i in 0..np {
            let a_coef = 2.0 * a * rng.random::<f64>() - a;
            let c_coef = 2.0 * rng.random::<f64>();
            let p = rng.random::<f64>();
            let l = 2.0 * rng.random::<f64>() - 1.0;
            let x = &pop[i];
            let mut moved = vec![0.0; dim];
            if p < 0.5 {
                let leader: &[f64] = if a_coef.abs() < 1.0 {
                    &best.theta
                } else {
                    &pop[rng.random_range(0..np)]
                };
                for d in 0..dim {
                    moved[d] = leader[d] - a_coef * (c_coef * leader[d] - x[d]).abs();
                }
            } else {
                let spiral = (cfg.woa_b * l).exp() * (2.0 * PI * l).cos();
                for d in 0..dim {
                    moved[d] = (best.theta[d] - x[d]).abs() * spiral + best.theta[d];
                }
            }
            space.clamp(&mut moved);
            next.push(moved);
        }
        pop = next;
        let costs = evaluate_population(cost, &pop, cfg.execution);
        evaluations += np;
        best.offer(&pop, &costs);
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
        let r = woa_optimize(&sphere, &SearchSpace::cube(4, -5.0, 5.0), &OptimizerConfig::default()).unwrap();
        assert!(r.best_cost < 1e-2, "{}", r.best_cost);
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn deterministic() {
        let cfg = OptimizerConfig { iterations: 20, ..Default::default() };
        let space = SearchSpace::cube(3, -2.0, 2.0);
        assert_eq!(woa_optimize(&sphere, &space, &cfg).unwrap(), woa_optimize(&sphere, &space, &cfg).unwrap());
    }
}
