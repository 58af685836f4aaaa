//! Quality indicators: inverted generational distance and hypervolume.

use std::cmp::Ordering;

use crate::par::Execution;
use crate::problems::ReferenceFront;
use crate::{Error, Result};

/// Mean distance from every reference point to its nearest member of `set`.
pub fn igd(reference: &ReferenceFront, set: &[Vec<f64>]) -> Result<f64> {
    igd_with(reference, set, Execution::default())
}

/// [`igd`] with an explicit execution strategy. Nearest distances may be
/// computed concurrently, but they are always summed in reference order, so
/// the result is identical under either strategy.
pub fn igd_with(reference: &ReferenceFront, set: &[Vec<f64>], exec: Execution) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet("IGD approximation set"));
    }
    if reference.is_empty() {
        return Err(Error::EmptySet("IGD reference front"));
    }
    let m = reference.dimension();
    if let Some(bad) = set.iter().find(|y| y.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: bad.len(),
        });
    }
    let nearest = exec.map(&reference.points, |target| {
        set.iter()
            .map(|y| euclidean(target, y))
            .fold(f64::INFINITY, f64::min)
    });
    Ok(nearest.iter().sum::<f64>() / reference.len() as f64)
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Hypervolume dominated by `set` and bounded by `reference`.
///
/// Points that fail to strictly dominate the reference point contribute
/// nothing. Supports two and three objectives.
pub fn hv(set: &[Vec<f64>], reference: &[f64]) -> Result<f64> {
    let m = reference.len();
    if let Some(bad) = set.iter().find(|p| p.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: bad.len(),
        });
    }
    let inside: Vec<&[f64]> = set
        .iter()
        .filter(|p| p.iter().zip(reference).all(|(v, r)| v < r))
        .map(Vec::as_slice)
        .collect();
    match m {
        2 => Ok(hv2(inside.iter().map(|p| (p[0], p[1])).collect(), reference[0], reference[1])),
        3 => Ok(hv3(inside, reference)),
        _ => Err(Error::Unsupported(format!(
            "hypervolume is implemented for 2 or 3 objectives, not {m}"
        ))),
    }
}

/// Sort-and-sweep area of the union of boxes `[p, (r1, r2)]`.
fn hv2(mut points: Vec<(f64, f64)>, r1: f64, r2: f64) -> f64 {
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut staircase: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    let mut best = r2;
    for (x, y) in points {
        if y < best {
            staircase.push((x, y));
            best = y;
        }
    }
    staircase
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let next = staircase.get(i + 1).map_or(r1, |p| p.0);
            (next - x) * (r2 - y)
        })
        .sum()
}

/// Slices along the third objective and sweeps each slab in 2D.
fn hv3(mut points: Vec<&[f64]>, reference: &[f64]) -> f64 {
    points.sort_by(|a, b| a[2].partial_cmp(&b[2]).unwrap_or(Ordering::Equal));
    let mut volume = 0.0;
    for (i, p) in points.iter().enumerate() {
        let top = points.get(i + 1).map_or(reference[2], |q| q[2]);
        let depth = top - p[2];
        if depth <= 0.0 {
            continue;
        }
        let slab: Vec<(f64, f64)> = points[..=i].iter().map(|q| (q[0], q[1])).collect();
        volume += depth * hv2(slab, reference[0], reference[1]);
    }
    volume
}

/// How the hypervolume reference point is derived from a true front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReferencePointRule {
    /// `1.2 · nadir`, component-wise.
    #[default]
    Scaled,
    /// `nadir + 0.2 · (nadir − ideal)`.
    Offset,
}

impl ReferencePointRule {
    pub fn name(self) -> &'static str {
        match self {
            Self::Scaled => "scaled",
            Self::Offset => "offset",
        }
    }
}

impl std::str::FromStr for ReferencePointRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "scaled" => Ok(Self::Scaled),
            "offset" => Ok(Self::Offset),
            _ => Err(Error::InvalidConfig(format!(
                "unknown reference point rule '{s}' (expected scaled or offset)"
            ))),
        }
    }
}

/// Hypervolume reference point for `front`.
pub fn hv_reference_point(front: &ReferenceFront, rule: ReferencePointRule) -> Result<Vec<f64>> {
    if front.is_empty() {
        return Err(Error::EmptySet("reference front"));
    }
    let nadir = front.nadir();
    Ok(match rule {
        ReferencePointRule::Scaled => nadir.iter().map(|v| 1.2 * v).collect(),
        ReferencePointRule::Offset => nadir
            .iter()
            .zip(front.ideal())
            .map(|(n, i)| n + 0.2 * (n - i))
            .collect(),
    })
}
