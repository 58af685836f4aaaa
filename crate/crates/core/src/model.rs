//! Problem and solution data model, constraint violation and dominance
//! comparators.
//!
//! Constraints follow the `g_i(x) >= 0`, `h_j(x) = 0` convention. Equality
//! constraints are relaxed to `delta - |h_j(x)| >= 0` before they enter the
//! overall violation.

use crate::problems::ReferenceFront;
use crate::{Error, Result};

/// Tolerance used to turn an equality constraint into an inequality.
pub const DEFAULT_EQUALITY_TOLERANCE: f64 = 1e-4;

/// Raw output of a problem's evaluator.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objectives: Vec<f64>,
    /// `g_1..g_q`, satisfied when non-negative.
    pub inequality: Vec<f64>,
    /// `h_1..h_p`, satisfied when within the equality tolerance of zero.
    pub equality: Vec<f64>,
}

/// A constrained multi-objective minimisation problem over a box domain.
///
/// Implementations must be pure: evaluating the same decision vector twice
/// yields bit-identical results.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;

    fn num_objectives(&self) -> usize;

    /// Box limits `(a_i, b_i)` with `a_i < b_i`, one per decision variable.
    fn bounds(&self) -> &[(f64, f64)];

    fn dimension(&self) -> usize {
        self.bounds().len()
    }

    fn num_inequality(&self) -> usize;

    fn num_equality(&self) -> usize {
        0
    }

    fn equality_tolerance(&self) -> f64 {
        DEFAULT_EQUALITY_TOLERANCE
    }

    /// Evaluates objectives and constraint values. `x` is assumed in bounds.
    fn evaluate_raw(&self, x: &[f64]) -> Evaluation;

    /// A representative sample of at least `density` points of the constrained
    /// Pareto front, when one is known.
    fn reference_front(&self, density: usize) -> Result<ReferenceFront> {
        let _ = density;
        Err(Error::ReferenceFront(format!(
            "problem `{}` has no analytic Pareto front; supply a reference file",
            self.name()
        )))
    }
}

/// An evaluated candidate solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    /// Overall constraint violation, zero iff feasible.
    pub phi: f64,
    pub rank: Option<usize>,
    pub crowding: Option<f64>,
}

impl Individual {
    pub fn new(x: Vec<f64>, f: Vec<f64>, phi: f64) -> Self {
        debug_assert!(phi >= 0.0);
        Self {
            x,
            f,
            phi,
            rank: None,
            crowding: None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.phi == 0.0
    }
}

/// Outcome of comparing two solutions under some preference relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    FirstBetter,
    SecondBetter,
    Incomparable,
}

impl Comparison {
    /// The outcome with the roles of the two operands swapped.
    pub fn reverse(self) -> Self {
        match self {
            Comparison::FirstBetter => Comparison::SecondBetter,
            Comparison::SecondBetter => Comparison::FirstBetter,
            Comparison::Incomparable => Comparison::Incomparable,
        }
    }
}

/// Checks `x` against the problem's box and evaluates it.
pub fn evaluate(problem: &dyn Problem, x: &[f64]) -> Result<Individual> {
    let bounds = problem.bounds();
    if x.len() != bounds.len() {
        return Err(Error::DimensionMismatch {
            expected: bounds.len(),
            actual: x.len(),
        });
    }
    for (index, (&value, &(lower, upper))) in x.iter().zip(bounds).enumerate() {
        if !(lower..=upper).contains(&value) {
            return Err(Error::OutOfBounds {
                index,
                value,
                lower,
                upper,
            });
        }
    }
    Ok(evaluate_unchecked(problem, x.to_vec()))
}

pub(crate) fn evaluate_unchecked(problem: &dyn Problem, x: Vec<f64>) -> Individual {
    let eval = problem.evaluate_raw(&x);
    let phi = overall_violation(
        &eval.inequality,
        &eval.equality,
        problem.equality_tolerance(),
    );
    Individual::new(x, eval.objectives, phi)
}

/// Sum of inequality breaches plus equality breaches beyond `delta`.
pub fn overall_violation(g: &[f64], h: &[f64], delta: f64) -> f64 {
    debug_assert!(delta > 0.0);
    let inequality: f64 = g.iter().map(|&gi| gi.min(0.0).abs()).sum();
    let equality: f64 = h.iter().map(|&hj| (delta - hj.abs()).min(0.0).abs()).sum();
    inequality + equality
}

/// Strict Pareto dominance for minimisation.
///
/// # Panics
///
/// Panics if the vectors differ in length.
pub fn dominates(fa: &[f64], fb: &[f64]) -> bool {
    assert_eq!(fa.len(), fb.len(), "objective vectors differ in length");
    let mut strictly_better = false;
    for (a, b) in fa.iter().zip(fb) {
        if a > b {
            return false;
        }
        if a < b {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Additive epsilon-dominance: `fa_i - e <= fb_i` for every objective.
///
/// With `e = 0` this is exactly [`dominates`].
pub fn eps_dominates(fa: &[f64], fb: &[f64], e: f64) -> bool {
    assert_eq!(fa.len(), fb.len(), "objective vectors differ in length");
    debug_assert!(e >= 0.0);
    if e == 0.0 {
        return dominates(fa, fb);
    }
    fa.iter().zip(fb).all(|(a, b)| a - e <= *b)
}

pub fn pareto_compare(fa: &[f64], fb: &[f64]) -> Comparison {
    if dominates(fa, fb) {
        Comparison::FirstBetter
    } else if dominates(fb, fa) {
        Comparison::SecondBetter
    } else {
        Comparison::Incomparable
    }
}

/// Objective comparison for the merged selection phase: additive
/// epsilon-dominance, with mutual epsilon-dominance resolved by Pareto
/// dominance. Mutually epsilon-dominating vectors that are Pareto-incomparable
/// stay incomparable here; the merged sort settles them with population
/// context.
pub fn eps_pareto_compare(fa: &[f64], fb: &[f64], e: f64) -> Comparison {
    match (eps_dominates(fa, fb, e), eps_dominates(fb, fa, e)) {
        (true, false) => Comparison::FirstBetter,
        (false, true) => Comparison::SecondBetter,
        (false, false) => Comparison::Incomparable,
        (true, true) => pareto_compare(fa, fb),
    }
}

/// Constraint-domination where any violation up to `level` counts as
/// feasible; `objectives` decides between two (relaxed) feasible solutions.
pub fn constrained_compare<F>(a: &Individual, b: &Individual, level: f64, objectives: F) -> Comparison
where
    F: FnOnce(&[f64], &[f64]) -> Comparison,
{
    match (a.phi <= level, b.phi <= level) {
        (true, false) => Comparison::FirstBetter,
        (false, true) => Comparison::SecondBetter,
        (true, true) => objectives(&a.f, &b.f),
        (false, false) => {
            if a.phi < b.phi {
                Comparison::FirstBetter
            } else if b.phi < a.phi {
                Comparison::SecondBetter
            } else {
                // Equal violation among infeasible solutions is left unresolved.
                Comparison::Incomparable
            }
        }
    }
}

/// Deb's constraint-domination principle.
pub fn cdp_compare(a: &Individual, b: &Individual) -> Comparison {
    constrained_compare(a, b, 0.0, pareto_compare)
}

/// Constraint-domination with solutions whose violation is at most
/// `eps_level` treated as feasible.
pub fn eps_cdp_compare(a: &Individual, b: &Individual, eps_level: f64) -> Comparison {
    debug_assert!(eps_level >= 0.0);
    constrained_compare(a, b, eps_level, pareto_compare)
}
