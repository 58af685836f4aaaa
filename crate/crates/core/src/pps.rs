//! Push→pull stage switching and the epsilon level schedule.

use std::collections::VecDeque;

use crate::model::Individual;

/// Guard against division by an ideal/nadir component of zero.
pub const DEFAULT_RATE_FLOOR: f64 = 1e-6;
/// Change rate at or below which the push stage ends.
pub const DEFAULT_SWITCH_THRESHOLD: f64 = 1e-3;
pub const DEFAULT_WINDOW: usize = 20;

/// Ideal and nadir points of the last `window + 1` generations.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsHistory {
    window: usize,
    rate_floor: f64,
    ring: VecDeque<(Vec<f64>, Vec<f64>)>,
}

impl BoundsHistory {
    pub fn new(window: usize, rate_floor: f64) -> Self {
        Self {
            window,
            rate_floor,
            ring: VecDeque::with_capacity(window + 1),
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    pub fn latest(&self) -> Option<(&[f64], &[f64])> {
        self.ring.back().map(|(z, n)| (z.as_slice(), n.as_slice()))
    }

    /// Records the component-wise min and max objectives of `pop`.
    pub fn update(&mut self, pop: &[Individual]) {
        let Some(first) = pop.first() else {
            return;
        };
        let mut ideal = first.f.clone();
        let mut nadir = first.f.clone();
        for ind in &pop[1..] {
            for (i, &v) in ind.f.iter().enumerate() {
                ideal[i] = ideal[i].min(v);
                nadir[i] = nadir[i].max(v);
            }
        }
        self.push(ideal, nadir);
    }

    pub fn push(&mut self, ideal: Vec<f64>, nadir: Vec<f64>) {
        self.ring.push_back((ideal, nadir));
        while self.ring.len() > self.window + 1 {
            self.ring.pop_front();
        }
    }

    /// `max(rz_k, rn_k)` over the window, or infinity while fewer than
    /// `window + 1` generations have been recorded, so that no threshold can
    /// end the push stage before the window is full.
    pub fn change_rate(&self) -> f64 {
        if self.ring.len() < self.window + 1 {
            return f64::INFINITY;
        }
        let (z_old, n_old) = self.ring.front().expect("non-empty");
        let (z_new, n_new) = self.ring.back().expect("non-empty");
        let rate = |new: &[f64], old: &[f64]| {
            new.iter()
                .zip(old)
                .map(|(a, b)| (a - b).abs() / b.abs().max(self.rate_floor))
                .fold(0.0, f64::max)
        };
        rate(z_new, z_old).max(rate(n_new, n_old))
    }
}

/// Push/pull stage flag. Once the pull stage starts it never reverts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageFlag {
    pub push_stage: bool,
    pub threshold: f64,
    pub r_k: f64,
}

impl StageFlag {
    pub fn new(threshold: f64) -> Self {
        Self {
            push_stage: true,
            threshold,
            r_k: 1.0,
        }
    }

    pub fn should_switch(&self, r_k: f64) -> bool {
        self.push_stage && r_k <= self.threshold
    }

    /// Stores `r_k` and ends the push stage if it should end; reports
    /// whether the switch happened on this call.
    pub fn observe(&mut self, r_k: f64) -> bool {
        self.r_k = r_k;
        if self.should_switch(r_k) {
            self.push_stage = false;
            true
        } else {
            false
        }
    }
}

/// Largest overall constraint violation in `pop` (0 for a feasible or empty
/// population).
pub fn seed_epsilon(pop: &[Individual]) -> f64 {
    pop.iter().map(|ind| ind.phi).fold(0.0, f64::max)
}

/// Violation of the `theta`-th least violating individual (0-based, clamped
/// to the population).
pub fn theta_violation(pop: &[Individual], theta: usize) -> f64 {
    if pop.is_empty() {
        return 0.0;
    }
    let mut phis: Vec<f64> = pop.iter().map(|ind| ind.phi).collect();
    phis.sort_by(f64::total_cmp);
    phis[theta.min(phis.len() - 1)]
}

/// Generation from which the control generation `Tc` is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ControlOrigin {
    /// `k` is the absolute generation counter.
    #[default]
    Absolute,
    /// `k` counts generations since the pull stage started.
    FromSwitch,
}

impl ControlOrigin {
    pub fn name(self) -> &'static str {
        match self {
            ControlOrigin::Absolute => "absolute",
            ControlOrigin::FromSwitch => "from-switch",
        }
    }
}

impl std::str::FromStr for ControlOrigin {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "absolute" => Ok(ControlOrigin::Absolute),
            "from-switch" => Ok(ControlOrigin::FromSwitch),
            _ => Err(crate::Error::InvalidConfig(format!(
                "unknown control origin '{s}' (expected absolute or from-switch)"
            ))),
        }
    }
}

/// Improved epsilon level schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSchedule {
    pub eps0: f64,
    pub tau: f64,
    pub alpha: f64,
    pub cp: f64,
    pub tc: usize,
    pub origin: ControlOrigin,
    pub current: f64,
    start: usize,
}

impl EpsilonSchedule {
    pub fn new(tau: f64, alpha: f64, cp: f64, tc: usize, origin: ControlOrigin) -> Self {
        Self {
            eps0: 0.0,
            tau,
            alpha,
            cp,
            tc,
            origin,
            current: 0.0,
            start: 0,
        }
    }

    /// Sets `eps(0)` at generation `gen` and returns the level in force.
    pub fn seed(&mut self, eps0: f64, gen: usize) -> f64 {
        self.eps0 = eps0.max(0.0);
        self.start = gen;
        self.current = if self.control_generation(gen) >= self.tc {
            0.0
        } else {
            self.eps0
        };
        self.current
    }

    fn control_generation(&self, k: usize) -> usize {
        match self.origin {
            ControlOrigin::Absolute => k,
            ControlOrigin::FromSwitch => k.saturating_sub(self.start),
        }
    }

    /// Advances the level to generation `k` given the feasible ratio `rf_k`.
    pub fn update(&mut self, k: usize, rf_k: f64) -> f64 {
        let k = self.control_generation(k);
        let next = if k >= self.tc {
            0.0
        } else if rf_k < self.alpha {
            (1.0 - self.tau) * self.current
        } else {
            self.eps0 * (1.0 - k as f64 / self.tc as f64).powf(self.cp)
        };
        self.current = next.max(0.0);
        self.current
    }
}
