//! Per-cell statistics over a directory of run records, plus Friedman mean
//! ranks across the algorithms.
//!
//! Layout (see `docs/formats.md`):
//!
//! ```text
//! # ppsm2m summary
//! == cells ==        problem algorithm runs igd_mean igd_std hv_mean hv_std
//! == ranks ==        algorithm igd_mean_rank hv_mean_rank   (when computable)
//! == excluded ==     problems left out of the ranks, one per line
//! ```
//!
//! A cell whose indicators are unavailable in any of its records shows
//! `unavailable` instead of numbers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Result};

use ppsm2m::engine::Algorithm;
use ppsm2m::problems;
use ppsm2m::stats::{friedman_mean_ranks, Direction};

use crate::error::FormatError;
use crate::record::{self, Metrics};
use crate::sections::{self, cell, find, section_marker};

pub const SUMMARY_MAGIC: &str = "# ppsm2m summary";

const CELL_COLUMNS: [&str; 7] = ["problem", "algorithm", "runs", "igd_mean", "igd_std", "hv_mean", "hv_std"];
const RANK_COLUMNS: [&str; 3] = ["algorithm", "igd_mean_rank", "hv_mean_rank"];
const UNAVAILABLE: &str = "unavailable";

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// Sample statistics (`n - 1` denominator; zero spread for one value).
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 || values.iter().all(|v| *v == values[0]) {
            0.0
        } else {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Self { mean, std }
    }
}

/// One (problem, algorithm) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub problem: String,
    pub algorithm: String,
    pub runs: usize,
    /// `None` when any record of the cell lacks indicators.
    pub igd: Option<MeanStd>,
    pub hv: Option<MeanStd>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub cells: Vec<Cell>,
    /// `(algorithm, IGD mean rank, HV mean rank)`.
    pub ranks: Vec<(String, f64, f64)>,
    pub excluded: Vec<String>,
}

fn problem_order(name: &str) -> (usize, String) {
    let names = problems::names();
    (names.iter().position(|n| n == name).unwrap_or(names.len()), name.to_string())
}

fn algorithm_order(name: &str) -> (usize, String) {
    let index = Algorithm::ALL.iter().position(|a| a.name() == name).unwrap_or(Algorithm::ALL.len());
    (index, name.to_string())
}

impl Summary {
    /// Aggregates metrics keyed by `(problem, algorithm)`.
    pub fn from_metrics(groups: &BTreeMap<(String, String), Vec<Metrics>>) -> Self {
        let mut keys: Vec<&(String, String)> = groups.keys().collect();
        keys.sort_by_key(|(p, a)| (problem_order(p), algorithm_order(a)));
        let cells: Vec<Cell> = keys
            .into_iter()
            .map(|key| {
                let metrics = &groups[key];
                let column = |pick: fn(&Metrics) -> Option<f64>| {
                    metrics.iter().map(pick).collect::<Option<Vec<f64>>>().map(|v| MeanStd::of(&v))
                };
                Cell {
                    problem: key.0.clone(),
                    algorithm: key.1.clone(),
                    runs: metrics.len(),
                    igd: column(|m| m.igd),
                    hv: column(|m| m.hv),
                }
            })
            .collect();
        let (ranks, excluded) = rank(&cells);
        Self { cells, ranks, excluded }
    }

    /// Reads every record in `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let files = record::list(dir)?;
        if files.is_empty() {
            bail!("no .{} files in {}", record::RECORD_EXTENSION, dir.display());
        }
        let mut groups: BTreeMap<(String, String), Vec<Metrics>> = BTreeMap::new();
        for path in files {
            let stored = record::load(&path)?;
            let key = (stored.run.config.problem.clone(), stored.run.config.algorithm.name().to_string());
            groups.entry(key).or_default().push(stored.metrics);
        }
        Ok(Self::from_metrics(&groups))
    }

    pub fn algorithms(&self) -> Vec<String> {
        let mut names: Vec<String> = self.cells.iter().map(|c| c.algorithm.clone()).collect();
        names.sort_by_key(|a| algorithm_order(a));
        names.dedup();
        names
    }

    pub fn problems(&self) -> Vec<String> {
        let mut names: Vec<String> = self.cells.iter().map(|c| c.problem.clone()).collect();
        names.sort_by_key(|p| problem_order(p));
        names.dedup();
        names
    }

    pub fn cell(&self, problem: &str, algorithm: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.problem == problem && c.algorithm == algorithm)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{SUMMARY_MAGIC}\n# generator: ppsm2m-harness {} ({})\n",
            env!("CARGO_PKG_VERSION"),
            env!("PPSM2M_GIT_DESCRIBE")
        );
        let _ = writeln!(out, "{}", section_marker("cells"));
        let _ = writeln!(out, "{}", CELL_COLUMNS.join(" "));
        let pair = |v: Option<MeanStd>| v.map_or(format!("{UNAVAILABLE} {UNAVAILABLE}"), |s| format!("{:?} {:?}", s.mean, s.std));
        for c in &self.cells {
            let _ = writeln!(out, "{} {} {} {} {}", c.problem, c.algorithm, c.runs, pair(c.igd), pair(c.hv));
        }
        if !self.ranks.is_empty() {
            let _ = writeln!(out, "{}", section_marker("ranks"));
            let _ = writeln!(out, "{}", RANK_COLUMNS.join(" "));
            for (name, igd, hv) in &self.ranks {
                let _ = writeln!(out, "{name} {igd:?} {hv:?}");
            }
        }
        if !self.excluded.is_empty() {
            let _ = writeln!(out, "{}", section_marker("excluded"));
            for p in &self.excluded {
                let _ = writeln!(out, "{p}");
            }
        }
        out
    }

    /// Human-readable tables of the cells and ranks.
    pub fn to_markdown(&self) -> String {
        let algorithms = self.algorithms();
        let mut out = String::new();
        for (title, pick) in [("IGD", 0), ("HV", 1)] {
            let _ = writeln!(out, "### Mean (std) {title}\n");
            let _ = writeln!(out, "| Problem | {} |", algorithms.join(" | "));
            let _ = writeln!(out, "|---|{}", "---|".repeat(algorithms.len()));
            for problem in self.problems() {
                let row: Vec<String> = algorithms
                    .iter()
                    .map(|a| {
                        let stats = self.cell(&problem, a).and_then(|c| if pick == 0 { c.igd } else { c.hv });
                        match (self.cell(&problem, a), stats) {
                            (None, _) => "—".to_string(),
                            (Some(_), None) => UNAVAILABLE.to_string(),
                            (Some(_), Some(s)) => format!("{:.4e} ({:.2e})", s.mean, s.std),
                        }
                    })
                    .collect();
                let _ = writeln!(out, "| {problem} | {} |", row.join(" | "));
            }
            out.push('\n');
        }
        if !self.ranks.is_empty() {
            let _ = writeln!(out, "### Friedman mean ranks\n");
            let _ = writeln!(out, "| Algorithm | IGD | HV |\n|---|---|---|");
            for (name, igd, hv) in &self.ranks {
                let _ = writeln!(out, "| {name} | {igd:.4} | {hv:.4} |");
            }
        }
        if !self.excluded.is_empty() {
            let _ = writeln!(out, "\nLeft out of the ranks (incomplete rows): {}", self.excluded.join(", "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        if !is_summary(text) {
            return Err(FormatError::new(1, format!("not a summary (expected `{SUMMARY_MAGIC}`)")));
        }
        let all = sections::split(text)?;
        let stats = |line: usize, mean: &str, std: &str, name: &str| -> Result<Option<MeanStd>, FormatError> {
            if mean == UNAVAILABLE {
                return Ok(None);
            }
            Ok(Some(MeanStd {
                mean: cell(line, &format!("{name}_mean"), mean)?,
                std: cell(line, &format!("{name}_std"), std)?,
            }))
        };
        let cells = find(&all, "cells")?
            .table(&CELL_COLUMNS)?
            .into_iter()
            .map(|(line, v)| {
                if v.len() != CELL_COLUMNS.len() {
                    return Err(FormatError::new(line, format!("expected {} values", CELL_COLUMNS.len())));
                }
                Ok(Cell {
                    problem: v[0].to_string(),
                    algorithm: v[1].to_string(),
                    runs: cell(line, "runs", v[2])?,
                    igd: stats(line, v[3], v[4], "igd")?,
                    hv: stats(line, v[5], v[6], "hv")?,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ranks = match all.iter().find(|s| s.name == "ranks") {
            None => Vec::new(),
            Some(section) => section
                .table(&RANK_COLUMNS)?
                .into_iter()
                .map(|(line, v)| {
                    if v.len() != RANK_COLUMNS.len() {
                        return Err(FormatError::new(line, "expected 3 values"));
                    }
                    Ok((v[0].to_string(), cell(line, "igd_mean_rank", v[1])?, cell(line, "hv_mean_rank", v[2])?))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        let excluded = all
            .iter()
            .find(|s| s.name == "excluded")
            .map(|s| s.lines.iter().map(|(_, l)| l.trim()).filter(|l| !l.is_empty()).map(String::from).collect())
            .unwrap_or_default();
        Ok(Self { cells, ranks, excluded })
    }
}

pub fn is_summary(text: &str) -> bool {
    text.starts_with(SUMMARY_MAGIC)
}

/// Friedman mean ranks over the problems whose row is complete for every
/// algorithm. Needs at least two algorithms and two complete problems.
fn rank(cells: &[Cell]) -> (Vec<(String, f64, f64)>, Vec<String>) {
    let summary = Summary { cells: cells.to_vec(), ranks: Vec::new(), excluded: Vec::new() };
    let algorithms = summary.algorithms();
    if algorithms.len() < 2 {
        return (Vec::new(), Vec::new());
    }
    let mut igd_rows = Vec::new();
    let mut hv_rows = Vec::new();
    let mut excluded = Vec::new();
    for problem in summary.problems() {
        let row: Option<Vec<(f64, f64)>> = algorithms
            .iter()
            .map(|a| {
                let c = summary.cell(&problem, a)?;
                let (igd, hv) = (c.igd?.mean, c.hv?.mean);
                (!igd.is_nan() && !hv.is_nan()).then_some((igd, hv))
            })
            .collect();
        match row {
            Some(row) => {
                igd_rows.push(row.iter().map(|r| r.0).collect::<Vec<f64>>());
                hv_rows.push(row.iter().map(|r| r.1).collect::<Vec<f64>>());
            }
            None => excluded.push(problem),
        }
    }
    let igd = friedman_mean_ranks(&igd_rows, Direction::LowerBetter);
    let hv = friedman_mean_ranks(&hv_rows, Direction::HigherBetter);
    match (igd, hv) {
        (Ok(igd), Ok(hv)) => (
            algorithms.into_iter().zip(igd).zip(hv).map(|((a, i), h)| (a, i, h)).collect(),
            excluded,
        ),
        _ => (Vec::new(), excluded),
    }
}
