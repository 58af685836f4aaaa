//! Small bi-objective problems with closed-form constrained fronts.
//!
//! `x ∈ [0,1]²`, `f1 = x1 + x2`, `f2 = 1 - x1 + x2`. The attainable region is
//! `f1 + f2 >= 1`, so the unconstrained front is the segment `f1 + f2 = 1`.
//! The constrained variant removes the open disc of radius 0.2 centred at
//! `(0.5, 0.5)`, which cuts the segment where `|f1 - 0.5| < sqrt(0.02)`.

use crate::model::{Evaluation, Problem};
use crate::Result;

use super::ReferenceFront;

const CENTRE: f64 = 0.5;
const RADIUS_SQ: f64 = 0.04;

#[derive(Debug, Clone)]
pub struct SpecCmop {
    name: &'static str,
    constrained: bool,
    bounds: [(f64, f64); 2],
}

impl SpecCmop {
    /// SPEC-CMOP1: the segment front with the disc constraint.
    pub fn constrained() -> Self {
        Self {
            name: "SPEC-CMOP1",
            constrained: true,
            bounds: [(0.0, 1.0); 2],
        }
    }

    /// SPEC-CMOP0: the same objectives without constraints.
    pub fn unconstrained() -> Self {
        Self {
            name: "SPEC-CMOP0",
            constrained: false,
            bounds: [(0.0, 1.0); 2],
        }
    }

    /// Half-width of the gap the disc cuts into the segment front.
    pub fn gap_half_width() -> f64 {
        (RADIUS_SQ / 2.0).sqrt()
    }
}

fn segment(from: f64, to: f64, count: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..count).map(move |i| {
        let f1 = if count == 1 {
            from
        } else {
            from + (to - from) * i as f64 / (count - 1) as f64
        };
        vec![f1, 1.0 - f1]
    })
}

impl Problem for SpecCmop {
    fn name(&self) -> &str {
        self.name
    }

    fn num_objectives(&self) -> usize {
        2
    }

    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn num_inequality(&self) -> usize {
        usize::from(self.constrained)
    }

    fn evaluate_raw(&self, x: &[f64]) -> Evaluation {
        let f1 = x[0] + x[1];
        let f2 = 1.0 - x[0] + x[1];
        let inequality = if self.constrained {
            vec![(f1 - CENTRE).powi(2) + (f2 - CENTRE).powi(2) - RADIUS_SQ]
        } else {
            Vec::new()
        };
        Evaluation {
            objectives: vec![f1, f2],
            inequality,
            equality: Vec::new(),
        }
    }

    fn reference_front(&self, density: usize) -> Result<ReferenceFront> {
        let density = density.max(2);
        let points = if self.constrained {
            let r = Self::gap_half_width();
            let left = density.div_ceil(2);
            segment(0.0, CENTRE - r, left)
                .chain(segment(CENTRE + r, 1.0, density - left))
                .collect()
        } else {
            segment(0.0, 1.0, density).collect()
        };
        Ok(ReferenceFront::analytic(points))
    }
}
