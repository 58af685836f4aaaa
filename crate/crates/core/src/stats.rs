//! Friedman mean ranks and Holm step-down p-value adjustment.

use std::fmt::Write;

use crate::{Error, Result};

/// Whether smaller or larger values are better when ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LowerBetter,
    HigherBetter,
}

/// Ranks `row` from 1 (best) to `row.len()`, giving tied values the mean of
/// the ranks they span.
pub fn average_ranks(row: &[f64], direction: Direction) -> Vec<f64> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| match direction {
        Direction::LowerBetter => row[a].total_cmp(&row[b]),
        Direction::HigherBetter => row[b].total_cmp(&row[a]),
    });
    let mut ranks = vec![0.0; row.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && row[order[end]] == row[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1 ..= end
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

/// Mean rank of each algorithm (column) over the problems (rows).
///
/// `NaN` cells count as missing and are rejected, as are ragged rows.
pub fn friedman_mean_ranks(matrix: &[Vec<f64>], direction: Direction) -> Result<Vec<f64>> {
    if matrix.len() < 2 {
        return Err(Error::Matrix(format!(
            "need at least 2 problems, got {}",
            matrix.len()
        )));
    }
    let width = matrix[0].len();
    if width < 2 {
        return Err(Error::Matrix(format!("need at least 2 algorithms, got {width}")));
    }
    let mut totals = vec![0.0; width];
    for (r, row) in matrix.iter().enumerate() {
        if row.len() != width {
            return Err(Error::Matrix(format!(
                "row {r} has {} cells, expected {width}",
                row.len()
            )));
        }
        if let Some(c) = row.iter().position(|v| v.is_nan()) {
            return Err(Error::Matrix(format!("missing cell at row {r}, column {c}")));
        }
        for (t, rank) in totals.iter_mut().zip(average_ranks(row, direction)) {
            *t += rank;
        }
    }
    Ok(totals.into_iter().map(|t| t / matrix.len() as f64).collect())
}

/// Holm step-down adjusted p-values, returned in input order.
pub fn holm_adjust(p_values: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidConfig(format!("p-value {bad} is outside [0, 1]")));
    }
    let k = p_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut adjusted = vec![0.0; k];
    let mut running = 0.0f64;
    for (j, &i) in order.iter().enumerate() {
        running = running.max(((k - j) as f64 * p_values[i]).min(1.0));
        adjusted[i] = running;
    }
    Ok(adjusted)
}

/// Markdown table of algorithms and their mean ranks, best first.
pub fn rank_table(algorithms: &[String], ranks: &[f64]) -> String {
    let mut rows: Vec<(&String, f64)> = algorithms.iter().zip(ranks.iter().copied()).collect();
    rows.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut out = String::from("| Algorithm | Mean rank |\n|---|---|\n");
    for (name, rank) in rows {
        let _ = writeln!(out, "| {name} | {rank:.4} |");
    }
    out
}
