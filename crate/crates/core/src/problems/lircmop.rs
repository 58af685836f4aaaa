//! The LIR-CMOP suite: CMOPs with large infeasible regions.
//!
//! All instances use 30 decision variables in `[0, 1]`. Instances 1–4 force
//! the distance functions into a narrow feasible band, 5–8 place rotated
//! elliptic infeasible regions in front of (or over) the unconstrained front,
//! 9–12 add a sinusoidal constraint that fragments the front, and 13–14 are
//! tri-objective with spherical infeasible shells.
//!
//! Constraint values are in `c(x) >= 0` form.

use std::f64::consts::PI;

use crate::model::{Evaluation, Problem};
use crate::Result;

use super::front::{lower_envelope_front, nondominated_filter, spread_by_arc_length};
use super::ReferenceFront;

const DIMENSION: usize = 30;
const SHIFT: f64 = 0.7057;
const SCALE: f64 = 1.7057;

#[derive(Debug, Clone)]
pub struct LirCmop {
    id: u8,
    name: String,
    bounds: Vec<(f64, f64)>,
}

impl LirCmop {
    pub fn new(id: u8) -> Option<Self> {
        (1..=14).contains(&id).then(|| Self {
            id,
            name: format!("LIR-CMOP{id}"),
            bounds: vec![(0.0, 1.0); DIMENSION],
        })
    }

    pub fn id(&self) -> u8 {
        self.id
    }

    fn ellipses(&self) -> &'static [Ellipse] {
        match self.id {
            5 => &[Ellipse { p: 1.6, q: 1.6, a: 2.0, b: 4.0 }, Ellipse { p: 2.5, q: 2.5, a: 2.0, b: 8.0 }],
            6 => &[Ellipse { p: 1.8, q: 1.8, a: 2.0, b: 8.0 }, Ellipse { p: 2.8, q: 2.8, a: 2.0, b: 8.0 }],
            7 | 8 => &[
                Ellipse { p: 1.2, q: 1.2, a: 2.0, b: 6.0 },
                Ellipse { p: 2.25, q: 2.25, a: 2.5, b: 12.0 },
                Ellipse { p: 3.5, q: 3.5, a: 2.5, b: 10.0 },
            ],
            9 => &[Ellipse { p: 1.4, q: 1.4, a: 1.5, b: 6.0 }],
            10 => &[Ellipse { p: 1.1, q: 1.2, a: 2.0, b: 4.0 }],
            11 => &[Ellipse { p: 1.2, q: 1.2, a: 1.5, b: 5.0 }],
            12 => &[Ellipse { p: 1.6, q: 1.6, a: 1.5, b: 6.0 }],
            _ => &[],
        }
    }

    fn wave(&self) -> Option<Wave> {
        let offset = match self.id {
            9 => 2.0,
            10 => 1.0,
            11 => 2.1,
            12 => 2.5,
            _ => return None,
        };
        Some(Wave { offset })
    }

    /// Constraint values that depend on the objectives only (instances 5–12).
    fn objective_constraints(&self, f1: f64, f2: f64) -> Vec<f64> {
        let mut c: Vec<f64> = self.ellipses().iter().map(|e| e.value(f1, f2)).collect();
        if let Some(w) = self.wave() {
            c.push(w.value(f1, f2));
        }
        c
    }

    /// Lower edge `f2 = lower(f1)` of the attainable objective region.
    fn lower_edge(&self, f1: f64) -> f64 {
        match self.id {
            5 | 7 => SCALE - (f1 - SHIFT).clamp(0.0, 1.0).sqrt(),
            6 | 8 => SCALE - (f1 - SHIFT).clamp(0.0, 1.0).powi(2),
            9 | 12 => SCALE * (1.0 - (f1 / SCALE).clamp(0.0, 1.0).powi(2)),
            10 | 11 => SCALE * (1.0 - (f1 / SCALE).clamp(0.0, 1.0).sqrt()),
            _ => unreachable!("only instances 5-12 are bounded by a lower edge"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Ellipse {
    p: f64,
    q: f64,
    a: f64,
    b: f64,
}

impl Ellipse {
    const R: f64 = 0.1;
    const THETA: f64 = -0.25 * PI;

    fn value(&self, f1: f64, f2: f64) -> f64 {
        let (s, c) = Self::THETA.sin_cos();
        let (d1, d2) = (f1 - self.p, f2 - self.q);
        let u = d1 * c - d2 * s;
        let v = d1 * s + d2 * c;
        u * u / (self.a * self.a) + v * v / (self.b * self.b) - Self::R
    }
}

#[derive(Debug, Clone, Copy)]
struct Wave {
    offset: f64,
}

impl Wave {
    const ALPHA: f64 = 0.25 * PI;
    const FREQUENCY: f64 = 4.0;

    fn value(&self, f1: f64, f2: f64) -> f64 {
        let (s, c) = Self::ALPHA.sin_cos();
        f1 * s + f2 * c - (Self::FREQUENCY * PI * (f1 * c - f2 * s)).sin() - self.offset
    }
}

/// Distance terms over the odd (from the third) and even decision variables,
/// with targets `sin(0.5πx1)` / `cos(0.5πx1)`.
fn distances_uniform(x: &[f64]) -> (f64, f64) {
    let (s, c) = (0.5 * PI * x[0]).sin_cos();
    let odd = x.iter().skip(2).step_by(2).map(|v| (v - s).powi(2)).sum();
    let even = x.iter().skip(1).step_by(2).map(|v| (v - c).powi(2)).sum();
    (odd, even)
}

/// As [`distances_uniform`], but each target's phase scales with the
/// variable's 1-based position `i / n`.
fn distances_scaled(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, &v) in x.iter().enumerate().skip(1) {
        let phase = 0.5 * (i + 1) as f64 / n * PI * x[0];
        if i % 2 == 0 {
            odd += (v - phase.sin()).powi(2);
        } else {
            even += (v - phase.cos()).powi(2);
        }
    }
    (odd, even)
}

fn band(g: f64) -> f64 {
    (0.51 - g) * (g - 0.5)
}

impl Problem for LirCmop {
    fn name(&self) -> &str {
        &self.name
    }

    fn num_objectives(&self) -> usize {
        if self.id >= 13 {
            3
        } else {
            2
        }
    }

    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn num_inequality(&self) -> usize {
        match self.id {
            1 | 2 => 2,
            3 | 4 => 3,
            5 | 6 => 2,
            7 | 8 => 3,
            9..=12 => 2,
            13 => 2,
            _ => 3,
        }
    }

    fn evaluate_raw(&self, x: &[f64]) -> Evaluation {
        let x1 = x[0];
        let (objectives, inequality) = match self.id {
            1..=4 => {
                let (g1, g2) = distances_uniform(x);
                let f1 = x1 + g1;
                let f2 = if self.id % 2 == 1 {
                    1.0 - x1 * x1 + g2
                } else {
                    1.0 - x1.sqrt() + g2
                };
                let mut c = vec![band(g1), band(g2)];
                if self.id >= 3 {
                    c.push((20.0 * PI * x1).sin() - 0.5);
                }
                (vec![f1, f2], c)
            }
            5..=8 => {
                let (g1, g2) = distances_scaled(x);
                let f1 = x1 + 10.0 * g1 + SHIFT;
                let tail = if self.id % 2 == 1 { x1.sqrt() } else { x1 * x1 };
                let f2 = 1.0 - tail + 10.0 * g2 + SHIFT;
                (vec![f1, f2], self.objective_constraints(f1, f2))
            }
            9..=12 => {
                let (g1, g2) = distances_scaled(x);
                let f1 = SCALE * x1 * (10.0 * g1 + 1.0);
                let tail = if matches!(self.id, 9 | 12) { x1 * x1 } else { x1.sqrt() };
                let f2 = SCALE * (1.0 - tail) * (10.0 * g2 + 1.0);
                (vec![f1, f2], self.objective_constraints(f1, f2))
            }
            _ => {
                let g: f64 = x[2..].iter().map(|v| 10.0 * (v - 0.5).powi(2)).sum();
                let radius = SCALE + g;
                let (s1, c1) = (0.5 * PI * x1).sin_cos();
                let (s2, c2) = (0.5 * PI * x[1]).sin_cos();
                let f = vec![radius * c1 * c2, radius * c1 * s2, radius * s1];
                let sq: f64 = f.iter().map(|v| v * v).sum();
                let mut c = vec![(sq - 9.0) * (sq - 4.0), (sq - 3.61) * (sq - 3.24)];
                if self.id == 14 {
                    c.push((sq - 3.0625) * (sq - 2.56));
                }
                (f, c)
            }
        };
        Evaluation {
            objectives,
            inequality,
            equality: Vec::new(),
        }
    }

    fn reference_front(&self, density: usize) -> Result<ReferenceFront> {
        let density = density.max(2);
        let points = match self.id {
            1..=4 => {
                // distance terms pinned to the lower edge of their band
                let curve = |t: f64| {
                    let tail = if self.id % 2 == 1 { t * t } else { t.sqrt() };
                    vec![t + 0.5, 1.5 - tail]
                };
                let samples = density * 20;
                let dense: Vec<Vec<f64>> = if self.id <= 2 {
                    (0..samples)
                        .map(|i| curve(i as f64 / (samples - 1) as f64))
                        .collect()
                } else {
                    // sin(20πx1) >= 0.5 on [k/10 + 1/120, k/10 + 5/120]
                    let per_band = samples / 10;
                    (0..10)
                        .flat_map(|k| {
                            let lo = k as f64 / 10.0 + 1.0 / 120.0;
                            let hi = k as f64 / 10.0 + 5.0 / 120.0;
                            (0..per_band).map(move |i| lo + (hi - lo) * i as f64 / (per_band - 1) as f64)
                        })
                        .map(curve)
                        .collect()
                };
                let dense = nondominated_filter(dense);
                spread_by_arc_length(&dense, density, 0.01)
            }
            5..=8 => lower_envelope_front(
                (SHIFT, SHIFT + 5.0),
                |f1| self.lower_edge(f1),
                |f1, f2| self.objective_constraints(f1, f2).iter().all(|c| *c >= 0.0),
                density,
            ),
            9..=12 => lower_envelope_front(
                (0.0, 6.0),
                |f1| self.lower_edge(f1),
                |f1, f2| self.objective_constraints(f1, f2).iter().all(|c| *c >= 0.0),
                density,
            ),
            _ => {
                let radius: f64 = if self.id == 13 { SCALE } else { 1.75 };
                sphere_octant(radius, density)
            }
        };
        Ok(ReferenceFront::analytic(points))
    }
}

/// Simplex-lattice points projected onto the positive octant of a sphere.
fn sphere_octant(radius: f64, density: usize) -> Vec<Vec<f64>> {
    let h = (1..).find(|h| (h + 1) * (h + 2) / 2 >= density).expect("unbounded search");
    let mut points = Vec::with_capacity((h + 1) * (h + 2) / 2);
    for i in 0..=h {
        for j in 0..=h - i {
            let v = [i as f64, j as f64, (h - i - j) as f64];
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            points.push(v.iter().map(|c| radius * c / norm).collect());
        }
    }
    points
}
