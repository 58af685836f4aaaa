//! Optimizers: PPS-M2M and its two baselines, NSGA-II-CDP and M2M-CDP.
//!
//! A run is deterministic given its configuration. Random draws happen in a
//! fixed sequential order; only order-preserving work (evaluation batches,
//! per-subregion selection) is spread over threads, so [`Execution`] changes
//! wall-clock time but never the resulting [`RunRecord`].

mod config;
mod m2m;
mod nsga2;
mod operators;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::model::{dominates, evaluate_unchecked, Individual, Problem};
use crate::par::Execution;
use crate::problems;
use crate::Result;

pub use config::{Algorithm, EpsilonSeed, Operator, RunConfig};
pub use m2m::{generate_offspring, merged_select, pull_select, push_select};
pub use operators::{de_crossover, polynomial_mutation, sbx_crossover, Crossover, Variation};

/// Per-generation state snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub generation: usize,
    /// Evaluations spent up to and including this generation.
    pub evaluations: usize,
    pub push_stage: bool,
    /// Change rate of the ideal and nadir points.
    pub r_k: f64,
    /// Epsilon level in force for this generation's selection.
    pub epsilon: f64,
    /// Fraction of feasible individuals among this generation's parents and
    /// offspring (generation 0: the initial population).
    pub feasible_ratio: f64,
}

/// Everything a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub config: RunConfig,
    pub num_objectives: usize,
    pub dimension: usize,
    pub trace: Vec<TraceRow>,
    /// Final population of `N` individuals.
    pub population: Vec<Individual>,
    /// Feasible, mutually non-dominated, de-duplicated members of the final
    /// population.
    pub front: Vec<Individual>,
    pub evaluations: usize,
    /// Generation at which the pull stage started, if it did.
    pub switch_generation: Option<usize>,
}

impl RunRecord {
    pub fn front_objectives(&self) -> Vec<Vec<f64>> {
        self.front.iter().map(|ind| ind.f.clone()).collect()
    }
}

/// Runs `config` on its registered problem with the default execution.
pub fn run(config: &RunConfig) -> Result<RunRecord> {
    run_with(config, Execution::default())
}

pub fn run_with(config: &RunConfig, exec: Execution) -> Result<RunRecord> {
    let problem = problems::by_name(&config.problem)?;
    run_problem(problem.as_ref(), config, exec)
}

/// Runs `config` against an explicit problem instance.
pub fn run_problem(problem: &dyn Problem, config: &RunConfig, exec: Execution) -> Result<RunRecord> {
    config.validate()?;
    match config.algorithm {
        Algorithm::PpsM2m | Algorithm::M2mCdp => m2m::run(problem, config, exec),
        Algorithm::Nsga2Cdp => nsga2::run(problem, config, exec),
    }
}

pub fn pps_m2m_run(config: &RunConfig) -> Result<RunRecord> {
    run(&RunConfig {
        algorithm: Algorithm::PpsM2m,
        ..config.clone()
    })
}

pub fn nsga2_cdp_run(config: &RunConfig) -> Result<RunRecord> {
    run(&RunConfig {
        algorithm: Algorithm::Nsga2Cdp,
        ..config.clone()
    })
}

pub fn m2m_cdp_run(config: &RunConfig) -> Result<RunRecord> {
    run(&RunConfig {
        algorithm: Algorithm::M2mCdp,
        ..config.clone()
    })
}

/// Counts every objective evaluation a run performs.
struct Evaluator<'a> {
    problem: &'a dyn Problem,
    exec: Execution,
    count: usize,
}

impl<'a> Evaluator<'a> {
    fn new(problem: &'a dyn Problem, exec: Execution) -> Self {
        Self { problem, exec, count: 0 }
    }

    fn evaluate(&mut self, xs: Vec<Vec<f64>>) -> Vec<Individual> {
        self.count += xs.len();
        let problem = self.problem;
        self.exec.map_owned(xs, |x| evaluate_unchecked(problem, x))
    }

    fn random_population(&mut self, n: usize, rng: &mut ChaCha8Rng) -> Vec<Individual> {
        let bounds = self.problem.bounds();
        let xs = (0..n)
            .map(|_| bounds.iter().map(|&(lo, hi)| lo + (hi - lo) * rng.random::<f64>()).collect())
            .collect();
        self.evaluate(xs)
    }
}

fn variation(problem: &dyn Problem, config: &RunConfig) -> Variation {
    let crossover = match config.operator {
        Operator::Sbx => Crossover::Sbx {
            eta: config.eta_c,
            probability: config.p_c,
        },
        Operator::De => Crossover::De {
            f: config.de_f,
            cr: config.de_cr,
        },
    };
    Variation {
        crossover,
        eta_m: config.eta_m,
        p_m: config.effective_mutation_rate(problem.dimension()),
    }
}

fn feasible_ratio(pop: &[Individual]) -> f64 {
    if pop.is_empty() {
        return 0.0;
    }
    pop.iter().filter(|ind| ind.is_feasible()).count() as f64 / pop.len() as f64
}

/// Feasible members of `pop` not dominated by any other feasible member,
/// keeping one copy of each objective vector.
pub fn feasible_front(pop: &[Individual]) -> Vec<Individual> {
    let feasible: Vec<&Individual> = pop.iter().filter(|ind| ind.is_feasible()).collect();
    let mut front: Vec<Individual> = Vec::new();
    for (i, a) in feasible.iter().enumerate() {
        let dominated = feasible.iter().any(|b| dominates(&b.f, &a.f));
        let duplicate = feasible[..i].iter().any(|b| b.f == a.f);
        if !dominated && !duplicate {
            front.push((*a).clone());
        }
    }
    front
}
