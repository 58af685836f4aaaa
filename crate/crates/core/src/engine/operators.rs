//! Real-coded variation: simulated binary crossover, differential evolution
//! and polynomial mutation.

use rand::Rng;

/// Recombination step applied before mutation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossover {
    /// Simulated binary crossover with distribution index `eta` applied with
    /// probability `probability`.
    Sbx { eta: f64, probability: f64 },
    /// DE/rand/1 with binomial crossover: `x + f · (y − w)`.
    De { f: f64, cr: f64 },
}

impl Crossover {
    /// Mates needed besides the current individual.
    pub fn mates(&self) -> usize {
        match self {
            Crossover::Sbx { .. } => 1,
            Crossover::De { .. } => 2,
        }
    }
}

/// Crossover and mutation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variation {
    pub crossover: Crossover,
    pub eta_m: f64,
    pub p_m: f64,
}

impl Variation {
    /// One child of `x` and its `mates`: crossover followed by mutation.
    ///
    /// `mates` must hold at least [`Crossover::mates`] vectors.
    pub fn breed<R: Rng + ?Sized>(&self, x: &[f64], mates: &[&[f64]], bounds: &[(f64, f64)], rng: &mut R) -> Vec<f64> {
        let child = match self.crossover {
            Crossover::Sbx { eta, probability } => sbx_crossover(x, mates[0], eta, probability, bounds, rng),
            Crossover::De { f, cr } => de_crossover(x, mates[0], mates[1], f, cr, bounds, rng),
        };
        polynomial_mutation(&child, self.eta_m, self.p_m, bounds, rng)
    }
}

/// DE/rand/1/bin trial vector built around `x`: each gene is
/// `x + f · (y − w)` with probability `cr` and `x` otherwise, with one
/// randomly chosen gene always taking the mutant value.
pub fn de_crossover<R: Rng + ?Sized>(
    x: &[f64],
    y: &[f64],
    w: &[f64],
    f: f64,
    cr: f64,
    bounds: &[(f64, f64)],
    rng: &mut R,
) -> Vec<f64> {
    let forced = rng.random_range(0..x.len().max(1));
    (0..x.len())
        .map(|j| {
            if j == forced || rng.random::<f64>() < cr {
                let (lo, hi) = bounds[j];
                (x[j] + f * (y[j] - w[j])).clamp(lo, hi)
            } else {
                x[j]
            }
        })
        .collect()
}

/// Simulated binary crossover returning one child.
///
/// With probability `1 - p_c` the child is a copy of `x`. Otherwise each gene
/// takes one of the two symmetric SBX offspring values at random, so its
/// expectation is the parents' mean before clipping to `bounds`.
pub fn sbx_crossover<R: Rng + ?Sized>(
    x: &[f64],
    y: &[f64],
    eta_c: f64,
    p_c: f64,
    bounds: &[(f64, f64)],
    rng: &mut R,
) -> Vec<f64> {
    if p_c <= 0.0 || rng.random::<f64>() >= p_c {
        return x.to_vec();
    }
    let exponent = 1.0 / (eta_c + 1.0);
    x.iter()
        .zip(y)
        .zip(bounds)
        .map(|((&a, &b), &(lo, hi))| {
            if (a - b).abs() < 1e-14 {
                return a;
            }
            let u: f64 = rng.random();
            let beta = if u <= 0.5 {
                (2.0 * u).powf(exponent)
            } else {
                (1.0 / (2.0 * (1.0 - u))).powf(exponent)
            };
            let mid = 0.5 * (a + b);
            let half = 0.5 * beta * (b - a).abs();
            let value = if rng.random_bool(0.5) { mid - half } else { mid + half };
            value.clamp(lo, hi)
        })
        .collect()
}

/// Polynomial mutation: each gene is perturbed with probability `p_m` by a
/// step scaled to its range, then clipped to `bounds`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &[f64],
    eta_m: f64,
    p_m: f64,
    bounds: &[(f64, f64)],
    rng: &mut R,
) -> Vec<f64> {
    if p_m <= 0.0 {
        return x.to_vec();
    }
    let exponent = 1.0 / (eta_m + 1.0);
    x.iter()
        .zip(bounds)
        .map(|(&v, &(lo, hi))| {
            if rng.random::<f64>() >= p_m {
                return v;
            }
            let u: f64 = rng.random();
            let delta = if u < 0.5 {
                (2.0 * u).powf(exponent) - 1.0
            } else {
                1.0 - (2.0 * (1.0 - u)).powf(exponent)
            };
            (v + delta * (hi - lo)).clamp(lo, hi)
        })
        .collect()
}
