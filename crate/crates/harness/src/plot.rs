//! Plot data and SVG charts from a record or a summary.
//!
//! From a record: `front.dat`, `reference.dat`, `gaps.dat`, `trace.dat`,
//! plus `front.svg` (two objectives only), `epsilon.svg` and `rate.svg`.
//! From a summary: `igd_bars.dat` and `igd_bars.svg`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use ppsm2m::problems::{ReferenceFront, Registered};

use crate::record::{self, StoredRun};
use crate::sections::push_floats;
use crate::summary::{self, Summary};
use crate::svg::{padded_range, Chart};

const FRONT_COLOR: &str = "#1f77b4";
const REFERENCE_COLOR: &str = "#999999";
const GAP_COLOR: &str = "#ff7f0e";
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

/// Intervals of the first objective that the sorted reference front skips:
/// consecutive points farther apart than ten times the median spacing.
pub fn front_gaps(reference: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let mut f1: Vec<f64> = reference.iter().map(|p| p[0]).collect();
    f1.sort_by(f64::total_cmp);
    f1.dedup();
    if f1.len() < 3 {
        return Vec::new();
    }
    let mut steps: Vec<f64> = f1.windows(2).map(|w| w[1] - w[0]).collect();
    let span = f1[f1.len() - 1] - f1[0];
    steps.sort_by(f64::total_cmp);
    let median = steps[steps.len() / 2];
    let threshold = (10.0 * median).max(1e-3 * span);
    f1.windows(2).filter(|w| w[1] - w[0] > threshold).map(|w| (w[0], w[1])).collect()
}

fn write(out: &Path, name: &str, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = out.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    files.push(path);
    Ok(())
}

fn points_text(header: &str, points: &[Vec<f64>]) -> String {
    let mut out = format!("# {header}\n");
    for p in points {
        push_floats(&mut out, p);
        out.push('\n');
    }
    out
}

fn objective_header(m: usize) -> String {
    (1..=m).map(|i| format!("f{i}")).collect::<Vec<_>>().join(" ")
}

/// Writes plot files for `input` (a record or a summary) into `out`.
pub fn plot(input: &Path, out: &Path, reference_dir: Option<&Path>) -> Result<Vec<PathBuf>> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    if record::is_record(&text) {
        let stored = record::parse(&text).with_context(|| input.display().to_string())?;
        let reference = Registered::with_reference_dir(&stored.run.config.problem, reference_dir)
            .and_then(|r| r.reference(stored.metrics.reference_points.max(1000)));
        plot_record(&stored, reference.ok().as_ref(), out)
    } else if summary::is_summary(&text) {
        let summary = Summary::parse(&text).with_context(|| input.display().to_string())?;
        plot_summary(&summary, out)
    } else {
        bail!("{} is neither a run record nor a summary", input.display())
    }
}

pub fn plot_record(stored: &StoredRun, reference: Option<&ReferenceFront>, out: &Path) -> Result<Vec<PathBuf>> {
    let run = &stored.run;
    let config = &run.config;
    let m = run.num_objectives;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut files = Vec::new();
    let front = run.front_objectives();
    write(out, "front.dat", &points_text(&objective_header(m), &front), &mut files)?;
    let gaps = reference.map(|r| front_gaps(&r.points)).unwrap_or_default();
    if let Some(reference) = reference {
        write(out, "reference.dat", &points_text(&objective_header(m), &reference.points), &mut files)?;
        let mut text = String::from("# f1_from f1_to\n");
        for (a, b) in &gaps {
            push_floats(&mut text, &[*a, *b]);
            text.push('\n');
        }
        write(out, "gaps.dat", &text, &mut files)?;
    }

    let mut trace = String::from("# generation stage epsilon r_k feasible_ratio\n");
    for row in &run.trace {
        let _ = write!(trace, "{} {} ", row.generation, if row.push_stage { "push" } else { "pull" });
        push_floats(&mut trace, &[row.epsilon, row.r_k, row.feasible_ratio]);
        trace.push('\n');
    }
    write(out, "trace.dat", &trace, &mut files)?;

    let title = format!("{} on {} (seed {})", config.algorithm, config.problem, config.seed);
    if m == 2 {
        let reference_points: Vec<(f64, f64)> = reference.map_or(Vec::new(), |r| r.points.iter().map(|p| (p[0], p[1])).collect());
        let front_points: Vec<(f64, f64)> = front.iter().map(|p| (p[0], p[1])).collect();
        let all = || reference_points.iter().chain(&front_points);
        let mut chart = Chart::new(padded_range(all().map(|p| p.0)), padded_range(all().map(|p| p.1)));
        for (i, (a, b)) in gaps.iter().enumerate() {
            chart.band(*a, *b, GAP_COLOR, if i == 0 { "gap in the true front" } else { "" });
        }
        if !reference_points.is_empty() {
            chart.points(&reference_points, 1.2, REFERENCE_COLOR, "true front");
        }
        chart.points(&front_points, 3.0, FRONT_COLOR, "final non-dominated set");
        write(out, "front.svg", &chart.render(&title, "f1", "f2", true), &mut files)?;
    }

    let generations: Vec<f64> = run.trace.iter().map(|r| r.generation as f64).collect();
    let x_range = (0.0, generations.last().copied().unwrap_or(0.0).max(1.0));
    let epsilon: Vec<(f64, f64)> = run.trace.iter().map(|r| (r.generation as f64, r.epsilon)).collect();
    let mut chart = Chart::new(x_range, padded_range(epsilon.iter().map(|p| p.1).chain([0.0])));
    chart.line(&epsilon, FRONT_COLOR, "epsilon level");
    if let Some(switch) = run.switch_generation {
        chart.vline(switch as f64, GAP_COLOR, "push/pull switch");
    }
    chart.vline(config.effective_control_generation() as f64, "#2ca02c", "control generation");
    write(out, "epsilon.svg", &chart.render(&title, "generation", "epsilon(k)", true), &mut files)?;

    let rate: Vec<(f64, f64)> = run
        .trace
        .iter()
        .filter(|r| r.r_k.is_finite() && r.r_k > 0.0)
        .map(|r| (r.generation as f64, r.r_k.log10()))
        .collect();
    let threshold = config.switch_threshold.max(f64::MIN_POSITIVE).log10();
    let mut chart = Chart::new(x_range, padded_range(rate.iter().map(|p| p.1).chain([threshold])));
    chart.line(&rate, FRONT_COLOR, "log10 r_k");
    chart.line(&[(x_range.0, threshold), (x_range.1, threshold)], GAP_COLOR, "switch threshold");
    write(out, "rate.svg", &chart.render(&title, "generation", "log10 r_k", true), &mut files)?;
    Ok(files)
}

pub fn plot_summary(summary: &Summary, out: &Path) -> Result<Vec<PathBuf>> {
    let algorithms = summary.algorithms();
    let problems = summary.problems();
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut files = Vec::new();
    let mut text = format!("# problem {}\n", algorithms.join(" "));
    for problem in &problems {
        text.push_str(problem);
        for a in &algorithms {
            match summary.cell(problem, a).and_then(|c| c.igd) {
                Some(s) => {
                    let _ = write!(text, " {:?}", s.mean);
                }
                None => text.push_str(" unavailable"),
            }
        }
        text.push('\n');
    }
    write(out, "igd_bars.dat", &text, &mut files)?;

    // bars relative to the worst finite mean of each problem
    let mut chart = Chart::new((0.0, problems.len().max(1) as f64), (0.0, 1.05));
    let width = 0.8 / algorithms.len().max(1) as f64;
    for (pi, problem) in problems.iter().enumerate() {
        let means: Vec<Option<f64>> = algorithms
            .iter()
            .map(|a| summary.cell(problem, a).and_then(|c| c.igd).map(|s| s.mean).filter(|v| v.is_finite()))
            .collect();
        let worst = means.iter().flatten().fold(0.0f64, |a, b| a.max(*b));
        for (ai, mean) in means.iter().enumerate() {
            if let Some(mean) = mean {
                let x0 = pi as f64 + 0.1 + ai as f64 * width;
                let height = if worst > 0.0 { mean / worst } else { 0.0 };
                chart.bar(x0, x0 + width, height, PALETTE[ai % PALETTE.len()]);
            }
        }
        chart.label_x(pi as f64 + 0.5, problem);
    }
    for (ai, a) in algorithms.iter().enumerate() {
        chart.add_legend(a, PALETTE[ai % PALETTE.len()]);
    }
    write(
        out,
        "igd_bars.svg",
        &chart.render("Mean IGD relative to the worst per problem", "problem", "relative mean IGD", false),
        &mut files,
    )?;
    Ok(files)
}
