use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate_population, Incumbent, OptimizerConfig, SearchSpace, TuneResult};
use crate::error::Result;

/// DE/rand/1/bin with greedy replacement and reflective bounds.
pub fn de_optimize<F>(cost: &F, space: &SearchSpace, cfg: &OptimizerConfig) -> Result<TuneResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    de_optimize_observed(cost, space, cfg, |_, _| {})
}

/// [`de_optimize`] calling `observer(generation, member_costs)` after the
/// initial population (generation 0) and after every selection step.
pub fn de_optimize_observed<F, O>(
    cost: &F,
    space: &SearchSpace,
    cfg: &OptimizerConfig,
    mut observer: O,
) -> Result<TuneResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
    O: FnMut(usize, &[f64]),
{
    space.validate()?;
    cfg.validate()?;
    let np = cfg.population;
    let dim = space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut pop = cfg.initial_population(space, &mut rng)?;
    let mut costs = evaluate_population(cost, &pop, cfg.execution);
    let mut evaluations = np;
    let mut best = Incumbent::from_population(&pop, &costs);
    let mut history = vec![best.cost];
    observer(0, &costs);

    for generation in 1..=cfg.iterations {
        let mut trials = Vec::with_capacity(np);
        for i in 0..np {
            let [r1, r2, r3] = distinct_others(&mut rng, np, i);
            let jrand = rng.random_range(0..dim);
            let mut trial = pop[i].clone();
            for j in 0..dim {
                if j == jrand || rng.random::<f64>() < cfg.de_cr {
                    trial[j] = pop[r1][j] + cfg.de_f * (pop[r2][j] - pop[r3][j]);
                }
            }
            reflect(space, &mut trial);
            trials.push(trial);
        }
        let trial_costs = evaluate_population(cost, &trials, cfg.execution);
        evaluations += np;
        for (i, (trial, c)) in trials.iter().zip(&trial_costs).enumerate() {
            if *c <= costs[i] {
                pop[i].clone_from(trial);
                costs[i] = *c;
            }
        }
        best.offer(&trials, &trial_costs);
        history.push(best.cost);
        observer(generation, &costs);
    }
    Ok(TuneResult { best_theta: best.theta, best_cost: best.cost, history, evaluations })
}

fn distinct_others<R: Rng>(rng: &mut R, np: usize, i: usize) -> [usize; 3] {
    let mut picked = [usize::MAX; 3];
    for k in 0..3 {
        loop {
            let r = rng.random_range(0..np);
            if r != i && !picked[..k].contains(&r) {
                picked[k] = r;
                break;
            }
        }
    }
    picked
}

/// Mirrors an excursion back into the box, then clamps what still escapes.
fn reflect(space: &SearchSpace, x: &mut [f64]) {
    for (v, (lo, hi)) in x.iter_mut().zip(space.lower.iter().zip(&space.upper)) {
        if *v < *lo {
            *v = lo + (lo - *v);
        } else if *v > *hi {
            *v = hi - (*v - hi);
        }
    }
    space.clamp(x);
}
