//! M2M-decomposed search: PPS-M2M and the constraint-domination M2M baseline.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{feasible_front, feasible_ratio, variation, Algorithm, EpsilonSeed, Evaluator, RunConfig, RunRecord, TraceRow, Variation};
use crate::decomposition::{allocate_subpops, fill_bucket, uniform_directions, DirectionSet, NormalizationState};
use crate::model::{Individual, Problem};
use crate::par::Execution;
use crate::pps::{seed_epsilon, theta_violation, BoundsHistory, EpsilonSchedule, StageFlag};
use crate::ranking::{merged_sort, select, truncate_partition_filling, EpsilonCdp, EpsilonMerged, Pareto};
use crate::Result;

/// Decision vectors of one child per member of `bucket`.
///
/// Mates are distinct members of the same bucket other than the current one,
/// or random members of `merged` when the bucket is too small to supply
/// them. Children are returned unevaluated so a whole generation can be
/// evaluated as one batch.
pub fn generate_offspring<R: Rng + ?Sized>(
    bucket: &[Individual],
    merged: &[Individual],
    variation: &Variation,
    bounds: &[(f64, f64)],
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let len = bucket.len();
    let needed = variation.crossover.mates();
    (0..len)
        .map(|i| {
            let mates: Vec<&[f64]> = if len > needed {
                let mut others: Vec<usize> = sample(rng, len - 1, needed).into_vec();
                for j in others.iter_mut() {
                    if *j >= i {
                        *j += 1;
                    }
                }
                others.iter().map(|&j| bucket[j].x.as_slice()).collect()
            } else {
                (0..needed)
                    .map(|_| merged[rng.random_range(0..merged.len())].x.as_slice())
                    .collect()
            };
            variation.breed(&bucket[i].x, &mates, bounds, rng)
        })
        .collect()
}

/// Keeps `s` members by non-domination rank and crowding, ignoring
/// constraint violations entirely.
pub fn push_select(bucket: Vec<Individual>, s: usize) -> Vec<Individual> {
    select(bucket, s, &Pareto)
}

/// Keeps `s` members by rank and crowding under epsilon constraint
/// domination at `level`.
pub fn pull_select(bucket: Vec<Individual>, s: usize, level: f64) -> Vec<Individual> {
    select(bucket, s, &EpsilonCdp(level))
}

/// Global selection of the final pull phase: epsilon constraint domination
/// at `level` whose objective comparison allows an additive `slack`.
///
/// Of two members that epsilon-dominate each other without either being
/// Pareto-better, the one on the better constraint-domination front wins,
/// then the one farther from its nearest neighbour in objective space, then
/// the one earlier in a random order drawn from `rng`. The splitting front is
/// thinned by repeatedly dropping its most crowded member.
pub fn merged_select<R: Rng + ?Sized>(
    mut pop: Vec<Individual>,
    n: usize,
    level: f64,
    slack: f64,
    rng: &mut R,
) -> Vec<Individual> {
    let mut shuffled: Vec<usize> = (0..pop.len()).collect();
    shuffled.shuffle(rng);
    let isolation: Vec<f64> = (0..pop.len())
        .map(|i| {
            (0..pop.len())
                .filter(|&j| j != i)
                .map(|j| pop[i].f.iter().zip(&pop[j].f).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut by_isolation: Vec<usize> = (0..pop.len()).collect();
    by_isolation.sort_by(|&a, &b| isolation[b].total_cmp(&isolation[a]).then(shuffled[a].cmp(&shuffled[b])));
    let mut tie_order = vec![0; pop.len()];
    for (position, &i) in by_isolation.iter().enumerate() {
        tie_order[i] = position;
    }
    let partition = merged_sort(&mut pop, &EpsilonMerged { level, slack }, &tie_order);
    let keep = truncate_partition_filling(&mut pop, n, &partition);
    let mut slots: Vec<Option<Individual>> = pop.into_iter().map(Some).collect();
    keep.into_iter()
        .map(|i| slots[i].take().expect("selected twice"))
        .collect()
}

#[derive(Debug, Clone, Copy)]
enum Selection {
    Push,
    Pull(f64),
}

impl Selection {
    fn apply(self, bucket: Vec<Individual>, s: usize) -> Vec<Individual> {
        match self {
            Selection::Push => push_select(bucket, s),
            Selection::Pull(level) => pull_select(bucket, s, level),
        }
    }
}

/// Allocates `pool` to subregions, tops up small buckets and truncates large
/// ones. Top-ups consume the RNG in bucket order; truncation is RNG-free and
/// may run concurrently.
fn regroup(
    pool: &[Individual],
    directions: &DirectionSet,
    norm: &NormalizationState,
    s: usize,
    selection: Selection,
    rng: &mut ChaCha8Rng,
    exec: Execution,
) -> Vec<Vec<Individual>> {
    let mut allocation = allocate_subpops(pool, directions, norm, s);
    for bucket in allocation.buckets.iter_mut() {
        fill_bucket(bucket, pool.len(), s, rng);
    }
    exec.map_owned(allocation.buckets, |indices| {
        let members: Vec<Individual> = indices.iter().map(|&i| pool[i].clone()).collect();
        if members.len() > s {
            selection.apply(members, s)
        } else {
            members
        }
    })
}

pub(super) fn run(problem: &dyn Problem, config: &RunConfig, exec: Execution) -> Result<RunRecord> {
    let m = problem.num_objectives();
    let directions = uniform_directions(m, config.subregions)?;
    let n = config.population_size;
    let s = config.subpopulation_size();
    let t_max = config.max_generations;
    let pps = config.algorithm == Algorithm::PpsM2m;
    let variation = variation(problem, config);
    let bounds = problem.bounds();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut evaluator = Evaluator::new(problem, exec);
    let initial = evaluator.random_population(n, &mut rng);

    let mut norm = NormalizationState::new(m);
    norm.update(&initial);
    let mut history = BoundsHistory::new(config.window, config.rate_floor);
    history.update(&initial);
    let mut stage = StageFlag::new(config.switch_threshold);
    stage.push_stage = pps;
    let mut schedule = EpsilonSchedule::new(
        config.tau,
        config.alpha,
        config.cp,
        config.effective_control_generation(),
        config.control_origin,
    );
    let theta_level = theta_violation(&initial, config.theta());
    let mut switch_generation = None;

    let initial_selection = if pps { Selection::Push } else { Selection::Pull(0.0) };
    let mut trace = vec![TraceRow {
        generation: 0,
        evaluations: evaluator.count,
        push_stage: stage.push_stage,
        r_k: history.change_rate(),
        epsilon: 0.0,
        feasible_ratio: feasible_ratio(&initial),
    }];
    let mut buckets = regroup(&initial, &directions, &norm, s, initial_selection, &mut rng, exec);

    for gen in 1..=t_max {
        let parents: Vec<Individual> = buckets.concat();
        let mut children = Vec::with_capacity(n);
        for bucket in &buckets {
            children.extend(generate_offspring(bucket, &parents, &variation, bounds, &mut rng));
        }
        // bounds movement is measured on selected populations; feasibility on
        // the merged pool of parents and offspring
        let r_k = history.change_rate();
        let mut pool = evaluator.evaluate(children);
        pool.extend(parents);
        let rf = feasible_ratio(&pool);
        norm.update(&pool);
        if pps {
            if stage.observe(r_k) {
                switch_generation = Some(gen);
                let eps0 = match config.epsilon_seed {
                    EpsilonSeed::MaxViolation => seed_epsilon(&pool),
                    EpsilonSeed::Theta => theta_level,
                };
                schedule.seed(eps0, gen);
            } else if !stage.push_stage {
                schedule.update(gen, rf);
            }
        } else {
            stage.r_k = r_k;
        }
        let epsilon = if pps && !stage.push_stage { schedule.current } else { 0.0 };

        let merged_phase = pps && !stage.push_stage && gen as f64 > config.merge_fraction * t_max as f64;
        buckets = if merged_phase {
            let survivors = merged_select(pool, n, epsilon, config.dominance_slack, &mut rng);
            let allocation = allocate_subpops(&survivors, &directions, &norm, s);
            allocation
                .buckets
                .iter()
                .map(|indices| indices.iter().map(|&i| survivors[i].clone()).collect())
                .collect()
        } else {
            let selection = if stage.push_stage { Selection::Push } else { Selection::Pull(epsilon) };
            regroup(&pool, &directions, &norm, s, selection, &mut rng, exec)
        };

        history.update(&buckets.concat());
        trace.push(TraceRow {
            generation: gen,
            evaluations: evaluator.count,
            push_stage: stage.push_stage,
            r_k,
            epsilon,
            feasible_ratio: rf,
        });
    }

    let population = buckets.concat();
    Ok(RunRecord {
        config: config.clone(),
        num_objectives: m,
        dimension: problem.dimension(),
        trace,
        front: feasible_front(&population),
        population,
        evaluations: evaluator.count,
        switch_generation,
    })
}
