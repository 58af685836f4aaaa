//! M2M decomposition: direction vectors, angular subregion membership and
//! allocation of a solution pool to sub-populations.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use log::warn;
use rand::seq::index;
use rand::Rng;

use crate::model::Individual;
use crate::{Error, Result};

/// `K` unit direction vectors in the non-negative orthant of `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    m: usize,
    vectors: Vec<Vec<f64>>,
}

impl DirectionSet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// One whitespace-separated row per direction vector.
    pub fn to_rows(&self) -> String {
        let mut out = String::new();
        for v in &self.vectors {
            let row: Vec<String> = v.iter().map(|c| format!("{c:.17e}")).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// Evenly spread directions: equal angular steps on the quarter circle for
/// `m = 2`, a simplex lattice projected onto the sphere for `m = 3`.
///
/// For `m = 3`, `k` must be a triangular number `(H+1)(H+2)/2`.
pub fn uniform_directions(m: usize, k: usize) -> Result<DirectionSet> {
    if k == 0 {
        return Err(Error::InvalidConfig("subregion count must be at least 1".into()));
    }
    let vectors = match m {
        2 if k == 1 => vec![normalize(vec![1.0, 1.0])],
        2 => (0..k)
            .map(|i| {
                let angle = i as f64 / (k - 1) as f64 * FRAC_PI_2;
                vec![angle.cos().max(0.0), angle.sin().max(0.0)]
            })
            .collect(),
        3 if k == 1 => vec![normalize(vec![1.0, 1.0, 1.0])],
        3 => {
            let h = lattice_divisions(k).ok_or_else(|| {
                Error::Unsupported(format!(
                    "{k} directions for 3 objectives; use a triangular number such as 6, 10, 15 or 21"
                ))
            })?;
            let mut vectors = Vec::with_capacity(k);
            for i in 0..=h {
                for j in 0..=h - i {
                    let l = h - i - j;
                    vectors.push(normalize(vec![i as f64, j as f64, l as f64]));
                }
            }
            vectors
        }
        m if m < 2 => {
            return Err(Error::InvalidConfig(format!(
                "at least 2 objectives are required, got {m}"
            )))
        }
        m => {
            return Err(Error::Unsupported(format!(
                "direction vectors for {m} objectives (only 2 or 3)"
            )))
        }
    };
    Ok(DirectionSet { m, vectors })
}

fn lattice_divisions(k: usize) -> Option<usize> {
    (1..k).find(|h| (h + 1) * (h + 2) / 2 == k)
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    v.iter_mut().for_each(|c| *c /= norm);
    v
}

/// Angle in radians between `u` and `v`. A zero `u` is at angle 0 to every
/// direction.
pub fn acute_angle(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let nu = u.iter().map(|c| c * c).sum::<f64>().sqrt();
    if nu == 0.0 {
        return 0.0;
    }
    let nv = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    (dot / (nu * nv)).clamp(-1.0, 1.0).acos()
}

/// Index of the direction with the smallest angle to `u`; ties go to the
/// lowest index.
pub fn nearest_direction(u: &[f64], directions: &DirectionSet) -> usize {
    let mut best = 0;
    let mut best_angle = f64::INFINITY;
    for (j, v) in directions.vectors.iter().enumerate() {
        let angle = acute_angle(u, v);
        if angle < best_angle {
            best = j;
            best_angle = angle;
        }
    }
    best
}

/// Running per-objective minimum used to shift objectives into the
/// non-negative orthant.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationState {
    fbar: Vec<f64>,
}

impl NormalizationState {
    pub fn new(m: usize) -> Self {
        Self {
            fbar: vec![f64::INFINITY; m],
        }
    }

    pub fn fbar(&self) -> &[f64] {
        &self.fbar
    }

    pub fn observe(&mut self, f: &[f64]) {
        for (min, &v) in self.fbar.iter_mut().zip(f) {
            if v < *min {
                *min = v;
            }
        }
    }

    pub fn update(&mut self, pop: &[Individual]) {
        for ind in pop {
            self.observe(&ind.f);
        }
    }

    pub fn shift(&self, f: &[f64]) -> Vec<f64> {
        f.iter().zip(&self.fbar).map(|(v, min)| v - min).collect()
    }
}

/// Buckets `M_1..M_K` holding indices into the pool they were allocated from.
#[derive(Debug, Clone, PartialEq)]
pub struct SubpopulationSet {
    pub buckets: Vec<Vec<usize>>,
    pub target_size: usize,
}

impl SubpopulationSet {
    pub fn total(&self) -> usize {
        self.buckets.iter().map(Vec::len).sum()
    }
}

/// Assigns every member of `pool` to the subregion whose direction is
/// angularly closest to its shifted objective vector.
pub fn allocate_subpops(
    pool: &[Individual],
    directions: &DirectionSet,
    norm: &NormalizationState,
    target_size: usize,
) -> SubpopulationSet {
    let mut buckets = vec![Vec::new(); directions.len()];
    for (i, ind) in pool.iter().enumerate() {
        let shifted = norm.shift(&ind.f);
        buckets[nearest_direction(&shifted, directions)].push(i);
    }
    SubpopulationSet {
        buckets,
        target_size,
    }
}

/// Tops `bucket` up to `target` members with pool indices drawn uniformly
/// without replacement from those not already in it.
///
/// Returns `false` when the pool was too small and members had to be drawn
/// with replacement.
pub fn fill_bucket<R: Rng + ?Sized>(
    bucket: &mut Vec<usize>,
    pool_len: usize,
    target: usize,
    rng: &mut R,
) -> bool {
    if bucket.len() >= target {
        return true;
    }
    let needed = target - bucket.len();
    let mut member = vec![false; pool_len];
    for &i in bucket.iter() {
        member[i] = true;
    }
    let candidates: Vec<usize> = (0..pool_len).filter(|&i| !member[i]).collect();
    if candidates.len() >= needed {
        let picks = index::sample(rng, candidates.len(), needed);
        bucket.extend(picks.into_iter().map(|p| candidates[p]));
        true
    } else {
        warn!(
            "pool of {pool_len} cannot fill a bucket to {target} without replacement; drawing with replacement"
        );
        bucket.extend(candidates);
        while bucket.len() < target && pool_len > 0 {
            bucket.push(rng.random_range(0..pool_len));
        }
        false
    }
}
