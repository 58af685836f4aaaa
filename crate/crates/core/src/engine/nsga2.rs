//! Generational NSGA-II under the constraint-domination principle.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{feasible_front, feasible_ratio, variation, Evaluator, RunConfig, RunRecord, TraceRow};
use crate::model::{Individual, Problem};
use crate::par::Execution;
use crate::pps::BoundsHistory;
use crate::ranking::{rank_and_crowd, select, Cdp};
use crate::Result;

/// Binary tournament on (rank ascending, crowding descending); ties are
/// settled by a fair coin.
fn tournament<R: Rng + ?Sized>(pop: &[Individual], rng: &mut R) -> usize {
    let a = rng.random_range(0..pop.len());
    let b = rng.random_range(0..pop.len());
    let key = |i: usize| (pop[i].rank.unwrap_or(usize::MAX), pop[i].crowding.unwrap_or(0.0));
    let (ra, ca) = key(a);
    let (rb, cb) = key(b);
    match ra.cmp(&rb).then(cb.partial_cmp(&ca).unwrap_or(Ordering::Equal)) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if rng.random_bool(0.5) {
                a
            } else {
                b
            }
        }
    }
}

pub(super) fn run(problem: &dyn Problem, config: &RunConfig, exec: Execution) -> Result<RunRecord> {
    let n = config.population_size;
    let variation = variation(problem, config);
    let bounds = problem.bounds();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut evaluator = Evaluator::new(problem, exec);
    let mut pop = evaluator.random_population(n, &mut rng);
    rank_and_crowd(&mut pop, &Cdp);

    let mut history = BoundsHistory::new(config.window, config.rate_floor);
    history.update(&pop);
    let mut trace = vec![TraceRow {
        generation: 0,
        evaluations: evaluator.count,
        push_stage: false,
        r_k: history.change_rate(),
        epsilon: 0.0,
        feasible_ratio: feasible_ratio(&pop),
    }];

    for gen in 1..=config.max_generations {
        let children = (0..n)
            .map(|_| {
                let a = tournament(&pop, &mut rng);
                let mates: Vec<&[f64]> = (0..variation.crossover.mates())
                    .map(|_| pop[tournament(&pop, &mut rng)].x.as_slice())
                    .collect();
                variation.breed(&pop[a].x, &mates, bounds, &mut rng)
            })
            .collect();
        let r_k = history.change_rate();
        let mut pool = evaluator.evaluate(children);
        pool.append(&mut pop);
        let rf = feasible_ratio(&pool);
        // survivors keep the rank and crowding computed on the merged pool
        pop = select(pool, n, &Cdp);
        history.update(&pop);
        trace.push(TraceRow {
            generation: gen,
            evaluations: evaluator.count,
            push_stage: false,
            r_k,
            epsilon: 0.0,
            feasible_ratio: rf,
        });
    }

    Ok(RunRecord {
        config: config.clone(),
        num_objectives: problem.num_objectives(),
        dimension: problem.dimension(),
        trace,
        front: feasible_front(&pop),
        population: pop,
        evaluations: evaluator.count,
        switch_generation: None,
    })
}
