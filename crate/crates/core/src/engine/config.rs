use std::fmt;
use std::str::FromStr;

use crate::pps::{ControlOrigin, DEFAULT_RATE_FLOOR, DEFAULT_SWITCH_THRESHOLD, DEFAULT_WINDOW};
use crate::{Error, Result};

/// Optimizer driven by a [`RunConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Push-and-pull search on the M2M decomposition.
    PpsM2m,
    /// NSGA-II with the constraint-domination principle.
    Nsga2Cdp,
    /// M2M decomposition with constraint-domination selection throughout.
    M2mCdp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::PpsM2m, Algorithm::Nsga2Cdp, Algorithm::M2mCdp];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::PpsM2m => "PPS-M2M",
            Algorithm::Nsga2Cdp => "NSGA-II-CDP",
            Algorithm::M2mCdp => "M2M-CDP",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let canonical: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().replace('-', "") == canonical)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown algorithm '{s}' (expected one of {})",
                    Algorithm::ALL.map(Algorithm::name).join(", ")
                ))
            })
    }
}

/// How the epsilon level is initialised when the pull stage starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonSeed {
    /// Largest violation in the population at the switch generation.
    #[default]
    MaxViolation,
    /// Violation of the `theta`-th least violating initial individual.
    Theta,
}

impl EpsilonSeed {
    pub fn name(self) -> &'static str {
        match self {
            EpsilonSeed::MaxViolation => "max-violation",
            EpsilonSeed::Theta => "theta",
        }
    }
}

impl FromStr for EpsilonSeed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "max-violation" => Ok(EpsilonSeed::MaxViolation),
            "theta" => Ok(EpsilonSeed::Theta),
            _ => Err(Error::InvalidConfig(format!(
                "unknown epsilon seed '{s}' (expected max-violation or theta)"
            ))),
        }
    }
}

/// Recombination operator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Operator {
    /// Simulated binary crossover (`eta_c`, `p_c`).
    #[default]
    Sbx,
    /// Differential evolution (`de_f`, `de_cr`).
    De,
}

impl Operator {
    pub fn name(self) -> &'static str {
        match self {
            Operator::Sbx => "sbx",
            Operator::De => "de",
        }
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sbx" => Ok(Operator::Sbx),
            "de" => Ok(Operator::De),
            _ => Err(Error::InvalidConfig(format!("unknown operator '{s}' (expected sbx or de)"))),
        }
    }
}

/// Parameters of a single optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub algorithm: Algorithm,
    /// Total population size `N`.
    pub population_size: usize,
    /// Number of subregions `K`; `N` must be a multiple of it.
    pub subregions: usize,
    /// Generation budget `T_max`; a budget of zero only evaluates the
    /// initial population.
    pub max_generations: usize,
    /// Additive slack `e` of the epsilon dominance used in the merged phase.
    pub dominance_slack: f64,
    /// Fraction of the budget after which pull selection becomes global.
    pub merge_fraction: f64,
    pub tau: f64,
    pub alpha: f64,
    pub cp: f64,
    /// Control generation `Tc`; `None` means `round(0.8 · T_max)`.
    pub control_generation: Option<usize>,
    pub control_origin: ControlOrigin,
    pub epsilon_seed: EpsilonSeed,
    /// `theta` as a fraction of `N` for [`EpsilonSeed::Theta`].
    pub theta_fraction: f64,
    /// Window `l` of the ideal/nadir change rate.
    pub window: usize,
    pub switch_threshold: f64,
    pub rate_floor: f64,
    pub operator: Operator,
    pub eta_c: f64,
    pub p_c: f64,
    pub de_f: f64,
    pub de_cr: f64,
    pub eta_m: f64,
    /// Per-gene mutation probability; `None` means `1 / n`.
    pub p_m: Option<f64>,
    pub seed: u64,
}

impl RunConfig {
    /// Default settings for `problem`: `N = 300`, `T_max = 1000`, and
    /// `K = 10` for two objectives or `K = 15` for three.
    pub fn new(problem: &str, num_objectives: usize, algorithm: Algorithm, seed: u64) -> Self {
        Self {
            problem: problem.to_string(),
            algorithm,
            population_size: 300,
            subregions: if num_objectives >= 3 { 15 } else { 10 },
            max_generations: 1000,
            dominance_slack: 0.01,
            merge_fraction: 0.9,
            tau: 0.1,
            alpha: 0.95,
            cp: 2.0,
            control_generation: None,
            control_origin: ControlOrigin::Absolute,
            epsilon_seed: EpsilonSeed::MaxViolation,
            theta_fraction: 0.05,
            window: DEFAULT_WINDOW,
            switch_threshold: DEFAULT_SWITCH_THRESHOLD,
            rate_floor: DEFAULT_RATE_FLOOR,
            operator: Operator::Sbx,
            eta_c: 20.0,
            p_c: 1.0,
            de_f: 0.5,
            de_cr: 1.0,
            eta_m: 20.0,
            p_m: None,
            seed,
        }
    }

    /// Subpopulation size `S = N / K`.
    pub fn subpopulation_size(&self) -> usize {
        self.population_size / self.subregions.max(1)
    }

    pub fn effective_control_generation(&self) -> usize {
        self.control_generation
            .unwrap_or_else(|| (0.8 * self.max_generations as f64).round() as usize)
    }

    pub fn effective_mutation_rate(&self, dimension: usize) -> f64 {
        self.p_m.unwrap_or(1.0 / dimension.max(1) as f64)
    }

    pub fn theta(&self) -> usize {
        (self.theta_fraction * self.population_size as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.population_size < 2 {
            return fail(format!("population size must be at least 2, got {}", self.population_size));
        }
        if self.subregions == 0 {
            return fail("subregion count must be positive".into());
        }
        if !self.population_size.is_multiple_of(self.subregions) {
            return fail(format!(
                "population size {} is not a multiple of the subregion count {}",
                self.population_size, self.subregions
            ));
        }
        let unit = |name: &str, v: f64| -> Result<()> {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must lie in [0, 1], got {v}")))
            }
        };
        unit("tau", self.tau)?;
        unit("alpha", self.alpha)?;
        unit("merge_fraction", self.merge_fraction)?;
        unit("theta_fraction", self.theta_fraction)?;
        unit("p_c", self.p_c)?;
        unit("de_cr", self.de_cr)?;
        if let Some(p) = self.p_m {
            unit("p_m", p)?;
        }
        let non_negative = [
            ("dominance_slack", self.dominance_slack),
            ("cp", self.cp),
            ("eta_c", self.eta_c),
            ("eta_m", self.eta_m),
            ("de_f", self.de_f),
            ("switch_threshold", self.switch_threshold),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return fail(format!("{name} must be a finite non-negative number, got {v}"));
            }
        }
        if self.rate_floor.is_nan() || self.rate_floor <= 0.0 {
            return fail(format!("rate_floor must be positive, got {}", self.rate_floor));
        }
        if self.window == 0 {
            return fail("window must be positive".into());
        }
        if self.control_generation == Some(0) {
            return fail("control generation must be positive".into());
        }
        Ok(())
    }
}
