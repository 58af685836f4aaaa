//! Campaign configuration: a flat TOML document whose keys mirror the run
//! parameters, with defaults matching the standard benchmark protocol.
//!
//! Unknown keys are rejected so that a misspelt parameter can never silently
//! fall back to its default.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use ppsm2m::engine::{Algorithm, EpsilonSeed, Operator, RunConfig};
use ppsm2m::metrics::ReferencePointRule;
use ppsm2m::pps::ControlOrigin;
use ppsm2m::problems;

use crate::error::ConfigError;

/// Every setting of an experiment campaign.
///
/// The run budget is given either as `max_generations` or as
/// `max_evaluations`; the latter is converted to `max_evaluations / N - 1`
/// generations, so that the initial population plus every generation spends
/// exactly the budget when it is a multiple of `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CampaignConfig {
    pub algorithms: Vec<String>,
    pub problems: Vec<String>,
    /// Independent runs per (algorithm, problem) cell.
    pub runs: usize,
    /// Run `i` uses seed `base_seed + i`.
    pub base_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Directory searched for `<PROBLEM>.pf` reference fronts before the
    /// built-in ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_dir: Option<PathBuf>,
    /// Minimum number of points of a built-in reference front.
    pub reference_density: usize,
    /// Hypervolume reference point rule: `scaled` or `offset`.
    pub hv_reference: String,

    pub population_size: usize,
    /// `None`: 10 subregions for two objectives, 15 for three.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subregions: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_generations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_evaluations: Option<usize>,

    pub dominance_slack: f64,
    pub merge_fraction: f64,
    pub tau: f64,
    pub alpha: f64,
    pub cp: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub control_generation: Option<usize>,
    pub control_origin: String,
    pub epsilon_seed: String,
    pub theta_fraction: f64,
    pub window: usize,
    pub switch_threshold: f64,
    pub rate_floor: f64,

    pub operator: String,
    pub eta_c: f64,
    pub p_c: f64,
    pub de_f: f64,
    pub de_cr: f64,
    pub eta_m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_m: Option<f64>,
}

/// Total evaluations of one run under the standard protocol.
pub const DEFAULT_MAX_EVALUATIONS: usize = 300_000;

impl Default for CampaignConfig {
    fn default() -> Self {
        let run = RunConfig::new("", 2, Algorithm::PpsM2m, 0);
        Self {
            algorithms: Algorithm::ALL.iter().map(|a| a.name().to_string()).collect(),
            problems: (1..=14).map(|i| format!("LIR-CMOP{i}")).collect(),
            runs: 30,
            base_seed: 1,
            output_dir: None,
            reference_dir: None,
            reference_density: 1000,
            hv_reference: ReferencePointRule::default().name().to_string(),
            population_size: run.population_size,
            subregions: None,
            max_generations: None,
            max_evaluations: None,
            dominance_slack: run.dominance_slack,
            merge_fraction: run.merge_fraction,
            tau: run.tau,
            alpha: run.alpha,
            cp: run.cp,
            control_generation: None,
            control_origin: run.control_origin.name().to_string(),
            epsilon_seed: run.epsilon_seed.name().to_string(),
            theta_fraction: run.theta_fraction,
            window: run.window,
            switch_threshold: run.switch_threshold,
            rate_floor: run.rate_floor,
            operator: run.operator.name().to_string(),
            eta_c: run.eta_c,
            p_c: run.p_c,
            de_f: run.de_f,
            de_cr: run.de_cr,
            eta_m: run.eta_m,
            p_m: None,
        }
    }
}

/// One optimizer run of a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub run_index: usize,
    pub config: RunConfig,
}

/// 1-based line on which `key` is assigned in `text`, if it is.
pub fn line_of_key(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|line| {
        line.trim_start()
            .strip_prefix(key)
            .is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl CampaignConfig {
    /// Parses and validates a campaign document.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: Self = toml::from_str(text).map_err(|e| ConfigError {
            line: e.span().map(|span| line_of_offset(text, span.start)),
            message: e.message().trim().to_string(),
        })?;
        config.validate().map_err(|(keys, message)| ConfigError {
            line: keys.iter().find_map(|key| line_of_key(text, key)),
            message,
        })?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("campaign settings are always representable")
    }

    /// Checks every value, naming the keys that may be at fault on failure.
    pub fn validate(&self) -> Result<(), (Vec<&'static str>, String)> {
        self.check().map_err(|(key, message)| (vec![key], message))?;
        for problem in &self.problems {
            let config = self.run_config(problem, Algorithm::PpsM2m, self.base_seed);
            if let Err(e) = config.validate() {
                let message = e.to_string();
                return Err((offending_keys(&message), message));
            }
        }
        Ok(())
    }

    fn check(&self) -> Result<(), (&'static str, String)> {
        if self.algorithms.is_empty() {
            return Err(("algorithms", "at least one algorithm is required".into()));
        }
        for name in &self.algorithms {
            Algorithm::from_str(name).map_err(|e| ("algorithms", e.to_string()))?;
        }
        if self.problems.is_empty() {
            return Err(("problems", "at least one problem is required".into()));
        }
        for name in &self.problems {
            problems::by_name(name).map_err(|e| ("problems", e.to_string()))?;
        }
        if self.runs == 0 {
            return Err(("runs", "at least one run per cell is required".into()));
        }
        if self.base_seed.checked_add(self.runs as u64).is_none() {
            return Err(("base_seed", "base_seed + runs overflows a 64-bit seed".into()));
        }
        if self.reference_density == 0 {
            return Err(("reference_density", "reference_density must be positive".into()));
        }
        ReferencePointRule::from_str(&self.hv_reference).map_err(|e| ("hv_reference", e.to_string()))?;
        ControlOrigin::from_str(&self.control_origin).map_err(|e| ("control_origin", e.to_string()))?;
        EpsilonSeed::from_str(&self.epsilon_seed).map_err(|e| ("epsilon_seed", e.to_string()))?;
        Operator::from_str(&self.operator).map_err(|e| ("operator", e.to_string()))?;
        if self.max_generations.is_some() && self.max_evaluations.is_some() {
            return Err((
                "max_evaluations",
                "give either max_generations or max_evaluations, not both".into(),
            ));
        }
        if let Some(evals) = self.max_evaluations {
            if evals < self.population_size {
                return Err((
                    "max_evaluations",
                    format!(
                        "max_evaluations {evals} does not cover the initial population of {}",
                        self.population_size
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Generation budget `T_max`.
    pub fn generations(&self) -> usize {
        match (self.max_generations, self.max_evaluations) {
            (Some(t), _) => t,
            (None, evals) => {
                let evals = evals.unwrap_or(DEFAULT_MAX_EVALUATIONS);
                (evals / self.population_size.max(1)).saturating_sub(1)
            }
        }
    }

    pub fn hv_rule(&self) -> ReferencePointRule {
        self.hv_reference.parse().unwrap_or_default()
    }

    /// Fully resolved run settings for one cell and seed. Assumes the
    /// campaign validated.
    pub fn run_config(&self, problem: &str, algorithm: Algorithm, seed: u64) -> RunConfig {
        let instance = problems::by_name(problem).ok();
        let m = instance.as_ref().map_or(2, |p| p.num_objectives());
        let canonical = instance.as_ref().map_or(problem.to_string(), |p| p.name().to_string());
        let base = RunConfig::new(&canonical, m, algorithm, seed);
        RunConfig {
            population_size: self.population_size,
            subregions: self.subregions.unwrap_or(base.subregions),
            max_generations: self.generations(),
            dominance_slack: self.dominance_slack,
            merge_fraction: self.merge_fraction,
            tau: self.tau,
            alpha: self.alpha,
            cp: self.cp,
            control_generation: self.control_generation,
            control_origin: self.control_origin.parse().unwrap_or_default(),
            epsilon_seed: self.epsilon_seed.parse().unwrap_or_default(),
            theta_fraction: self.theta_fraction,
            window: self.window,
            switch_threshold: self.switch_threshold,
            rate_floor: self.rate_floor,
            operator: self.operator.parse().unwrap_or_default(),
            eta_c: self.eta_c,
            p_c: self.p_c,
            de_f: self.de_f,
            de_cr: self.de_cr,
            eta_m: self.eta_m,
            p_m: self.p_m,
            ..base
        }
    }

    /// Every run of the campaign, ordered by algorithm, problem and seed.
    pub fn jobs(&self) -> Vec<Job> {
        let mut jobs = Vec::new();
        for algorithm in &self.algorithms {
            let algorithm: Algorithm = algorithm.parse().expect("validated algorithm");
            for problem in &self.problems {
                for run_index in 0..self.runs {
                    jobs.push(Job {
                        run_index,
                        config: self.run_config(problem, algorithm, self.base_seed + run_index as u64),
                    });
                }
            }
        }
        jobs
    }
}

/// Keys a run-configuration error message may refer to, most likely first.
fn offending_keys(message: &str) -> Vec<&'static str> {
    const KEYS: [(&str, &str); 18] = [
        ("population size", "population_size"),
        ("subregion", "subregions"),
        ("control generation", "control_generation"),
        ("dominance_slack", "dominance_slack"),
        ("merge_fraction", "merge_fraction"),
        ("theta_fraction", "theta_fraction"),
        ("switch_threshold", "switch_threshold"),
        ("rate_floor", "rate_floor"),
        ("window", "window"),
        ("tau", "tau"),
        ("alpha", "alpha"),
        ("eta_c", "eta_c"),
        ("eta_m", "eta_m"),
        ("p_c", "p_c"),
        ("p_m", "p_m"),
        ("de_f", "de_f"),
        ("de_cr", "de_cr"),
        ("cp", "cp"),
    ];
    KEYS.iter()
        .filter(|(needle, _)| message.contains(needle))
        .map(|(_, key)| *key)
        .collect()
}
