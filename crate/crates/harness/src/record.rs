//! Run record files: a self-describing text rendering of one optimizer run.
//!
//! Layout (see `docs/formats.md`):
//!
//! ```text
//! # ppsm2m run record
//! # generator: ...          provenance, excluded from comparisons
//! == config ==              TOML: every run parameter
//! == outcome ==             TOML: sizes, evaluations, switch generation
//! == metrics ==             TOML: final IGD and HV, or why unavailable
//! == trace ==               one row per generation
//! == front ==               feasible non-dominated final solutions
//! == population ==          the whole final population
//! ```
//!
//! Everything after the `#` header is a pure function of the run, so two
//! runs with equal settings produce byte-identical bodies.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use ppsm2m::engine::{RunConfig, RunRecord, TraceRow};
use ppsm2m::metrics::{hv, hv_reference_point, igd, ReferencePointRule};
use ppsm2m::problems::ReferenceFront;
use ppsm2m::Individual;

use crate::error::FormatError;
use crate::sections::{self, cell, find, push_floats, section_marker};

pub const RECORD_MAGIC: &str = "# ppsm2m run record";
pub const RECORD_EXTENSION: &str = "record";

const TRACE_COLUMNS: [&str; 6] = ["generation", "evaluations", "stage", "r_k", "epsilon", "feasible_ratio"];

/// Final quality indicators of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metrics {
    /// IGD of the final front; infinite when the run found no feasible
    /// solution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub igd: Option<f64>,
    /// HV of the final front; zero when the run found no feasible solution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hv: Option<f64>,
    pub hv_rule: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hv_reference: Vec<f64>,
    /// Size of the reference front the indicators were measured against.
    pub reference_points: usize,
    /// `built-in` or the file name of the reference front.
    pub reference_source: String,
    /// Why the indicators are missing, when they are.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unavailable: Option<String>,
}

impl Metrics {
    /// Indicators of `run` against `reference`; a missing reference leaves
    /// them unavailable rather than zero.
    pub fn measure(
        run: &RunRecord,
        reference: Result<&ReferenceFront, String>,
        rule: ReferencePointRule,
        source: &str,
    ) -> Self {
        let front = run.front_objectives();
        let unavailable = |reason: String| Metrics {
            igd: None,
            hv: None,
            hv_rule: rule.name().to_string(),
            hv_reference: Vec::new(),
            reference_points: 0,
            reference_source: source.to_string(),
            unavailable: Some(reason),
        };
        let reference = match reference {
            Ok(front) => front,
            Err(reason) => return unavailable(reason),
        };
        let point = match hv_reference_point(reference, rule) {
            Ok(point) => point,
            Err(e) => return unavailable(e.to_string()),
        };
        let (igd_value, hv_value) = if front.is_empty() {
            (Ok(f64::INFINITY), Ok(0.0))
        } else {
            (igd(reference, &front), hv(&front, &point))
        };
        match (igd_value, hv_value) {
            (Ok(igd_value), Ok(hv_value)) => Metrics {
                igd: Some(igd_value),
                hv: Some(hv_value),
                hv_rule: rule.name().to_string(),
                hv_reference: point,
                reference_points: reference.len(),
                reference_source: source.to_string(),
                unavailable: None,
            },
            (Err(e), _) | (_, Err(e)) => unavailable(e.to_string()),
        }
    }
}

/// A run together with its indicators, as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredRun {
    pub run: RunRecord,
    pub metrics: Metrics,
}

/// Run parameters as written in the `config` section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigSection {
    problem: String,
    algorithm: String,
    seed: u64,
    population_size: usize,
    subregions: usize,
    max_generations: usize,
    dominance_slack: f64,
    merge_fraction: f64,
    tau: f64,
    alpha: f64,
    cp: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    control_generation: Option<usize>,
    control_origin: String,
    epsilon_seed: String,
    theta_fraction: f64,
    window: usize,
    switch_threshold: f64,
    rate_floor: f64,
    operator: String,
    eta_c: f64,
    p_c: f64,
    de_f: f64,
    de_cr: f64,
    eta_m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_m: Option<f64>,
}

impl From<&RunConfig> for ConfigSection {
    fn from(c: &RunConfig) -> Self {
        Self {
            problem: c.problem.clone(),
            algorithm: c.algorithm.name().to_string(),
            seed: c.seed,
            population_size: c.population_size,
            subregions: c.subregions,
            max_generations: c.max_generations,
            dominance_slack: c.dominance_slack,
            merge_fraction: c.merge_fraction,
            tau: c.tau,
            alpha: c.alpha,
            cp: c.cp,
            control_generation: c.control_generation,
            control_origin: c.control_origin.name().to_string(),
            epsilon_seed: c.epsilon_seed.name().to_string(),
            theta_fraction: c.theta_fraction,
            window: c.window,
            switch_threshold: c.switch_threshold,
            rate_floor: c.rate_floor,
            operator: c.operator.name().to_string(),
            eta_c: c.eta_c,
            p_c: c.p_c,
            de_f: c.de_f,
            de_cr: c.de_cr,
            eta_m: c.eta_m,
            p_m: c.p_m,
        }
    }
}

impl ConfigSection {
    fn into_run_config(self, line: usize) -> Result<RunConfig, FormatError> {
        let bad = |e: ppsm2m::Error| FormatError::new(line, e.to_string());
        Ok(RunConfig {
            problem: self.problem,
            algorithm: self.algorithm.parse().map_err(bad)?,
            seed: self.seed,
            population_size: self.population_size,
            subregions: self.subregions,
            max_generations: self.max_generations,
            dominance_slack: self.dominance_slack,
            merge_fraction: self.merge_fraction,
            tau: self.tau,
            alpha: self.alpha,
            cp: self.cp,
            control_generation: self.control_generation,
            control_origin: self.control_origin.parse().map_err(bad)?,
            epsilon_seed: self.epsilon_seed.parse().map_err(bad)?,
            theta_fraction: self.theta_fraction,
            window: self.window,
            switch_threshold: self.switch_threshold,
            rate_floor: self.rate_floor,
            operator: self.operator.parse().map_err(bad)?,
            eta_c: self.eta_c,
            p_c: self.p_c,
            de_f: self.de_f,
            de_cr: self.de_cr,
            eta_m: self.eta_m,
            p_m: self.p_m,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutcomeSection {
    num_objectives: usize,
    dimension: usize,
    evaluations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    switch_generation: Option<usize>,
    front_size: usize,
    population_size: usize,
}

fn individual_columns(m: usize, n: usize) -> Vec<String> {
    let mut columns = vec!["phi".to_string()];
    columns.extend((1..=m).map(|i| format!("f{i}")));
    columns.extend((1..=n).map(|i| format!("x{i}")));
    columns
}

fn push_individuals(out: &mut String, name: &str, members: &[Individual], m: usize, n: usize) {
    let _ = writeln!(out, "{}", section_marker(name));
    let _ = writeln!(out, "{}", individual_columns(m, n).join(" "));
    for ind in members {
        let mut row = vec![ind.phi];
        row.extend_from_slice(&ind.f);
        row.extend_from_slice(&ind.x);
        push_floats(out, &row);
        out.push('\n');
    }
}

fn toml_text<T: Serialize>(value: &T) -> String {
    toml::to_string(value).expect("record sections are always representable")
}

/// The deterministic part of a record file.
pub fn body(stored: &StoredRun) -> String {
    let run = &stored.run;
    let mut out = String::new();
    let _ = writeln!(out, "{}", section_marker("config"));
    out.push_str(&toml_text(&ConfigSection::from(&run.config)));
    let _ = writeln!(out, "{}", section_marker("outcome"));
    out.push_str(&toml_text(&OutcomeSection {
        num_objectives: run.num_objectives,
        dimension: run.dimension,
        evaluations: run.evaluations,
        switch_generation: run.switch_generation,
        front_size: run.front.len(),
        population_size: run.population.len(),
    }));
    let _ = writeln!(out, "{}", section_marker("metrics"));
    out.push_str(&toml_text(&stored.metrics));
    let _ = writeln!(out, "{}", section_marker("trace"));
    let _ = writeln!(out, "{}", TRACE_COLUMNS.join(" "));
    for row in &run.trace {
        let stage = if row.push_stage { "push" } else { "pull" };
        let _ = write!(out, "{} {} {stage} ", row.generation, row.evaluations);
        push_floats(&mut out, &[row.r_k, row.epsilon, row.feasible_ratio]);
        out.push('\n');
    }
    push_individuals(&mut out, "front", &run.front, run.num_objectives, run.dimension);
    push_individuals(&mut out, "population", &run.population, run.num_objectives, run.dimension);
    out
}

/// Provenance header: generator version and creation time.
pub fn header() -> String {
    let created = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    format!(
        "{RECORD_MAGIC}\n# generator: ppsm2m-harness {} ({})\n# created: {created} (unix seconds)\n",
        env!("CARGO_PKG_VERSION"),
        env!("PPSM2M_GIT_DESCRIBE"),
    )
}

pub fn to_text(stored: &StoredRun) -> String {
    header() + &body(stored)
}

fn parse_individuals(
    section: &sections::Section,
    m: usize,
    n: usize,
) -> Result<Vec<Individual>, FormatError> {
    let columns = individual_columns(m, n);
    let header: Vec<&str> = columns.iter().map(String::as_str).collect();
    section
        .table(&header)?
        .into_iter()
        .map(|(line, cells)| {
            if cells.len() != header.len() {
                return Err(FormatError::new(line, format!("expected {} values", header.len())));
            }
            let values = cells
                .iter()
                .zip(&header)
                .map(|(v, c)| cell::<f64>(line, c, v))
                .collect::<Result<Vec<f64>, _>>()?;
            Ok(Individual::new(values[1 + m..].to_vec(), values[1..1 + m].to_vec(), values[0]))
        })
        .collect()
}

/// Whether `text` starts like a record file.
pub fn is_record(text: &str) -> bool {
    text.starts_with(RECORD_MAGIC)
}

pub fn parse(text: &str) -> Result<StoredRun, FormatError> {
    if !is_record(text) {
        return Err(FormatError::new(1, format!("not a run record (expected `{RECORD_MAGIC}`)")));
    }
    let all = sections::split(text)?;
    let config_section = find(&all, "config")?;
    let config = config_section
        .toml::<ConfigSection>()?
        .into_run_config(config_section.line)?;
    let outcome: OutcomeSection = find(&all, "outcome")?.toml()?;
    let metrics: Metrics = find(&all, "metrics")?.toml()?;
    let trace = find(&all, "trace")?
        .table(&TRACE_COLUMNS)?
        .into_iter()
        .map(|(line, cells)| {
            if cells.len() != TRACE_COLUMNS.len() {
                return Err(FormatError::new(line, format!("expected {} values", TRACE_COLUMNS.len())));
            }
            let push_stage = match cells[2] {
                "push" => true,
                "pull" => false,
                other => return Err(FormatError::new(line, format!("bad stage `{other}`"))),
            };
            Ok(TraceRow {
                generation: cell(line, "generation", cells[0])?,
                evaluations: cell(line, "evaluations", cells[1])?,
                push_stage,
                r_k: cell(line, "r_k", cells[3])?,
                epsilon: cell(line, "epsilon", cells[4])?,
                feasible_ratio: cell(line, "feasible_ratio", cells[5])?,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (m, n) = (outcome.num_objectives, outcome.dimension);
    let front = parse_individuals(find(&all, "front")?, m, n)?;
    let population = parse_individuals(find(&all, "population")?, m, n)?;
    if front.len() != outcome.front_size || population.len() != outcome.population_size {
        return Err(FormatError::new(1, "section sizes disagree with the outcome section"));
    }
    Ok(StoredRun {
        run: RunRecord {
            config,
            num_objectives: m,
            dimension: n,
            trace,
            population,
            front,
            evaluations: outcome.evaluations,
            switch_generation: outcome.switch_generation,
        },
        metrics,
    })
}

/// Reads and parses a record file, prefixing errors with its path.
pub fn load(path: &Path) -> anyhow::Result<StoredRun> {
    let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

/// `<problem>__<algorithm>__seed<seed>.record`
pub fn file_name(config: &RunConfig) -> String {
    format!(
        "{}__{}__seed{}.{RECORD_EXTENSION}",
        config.problem,
        config.algorithm.name(),
        config.seed
    )
}

/// Record files directly inside `dir`, sorted by name.
pub fn list(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|ext| ext == RECORD_EXTENSION))
        .collect();
    files.sort();
    Ok(files)
}
