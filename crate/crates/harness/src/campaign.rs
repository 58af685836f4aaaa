//! Campaign execution: every (algorithm, problem, seed) run on a worker
//! pool, each written to its own record file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use log::info;

use ppsm2m::engine::run_problem;
use ppsm2m::par::Execution;
use ppsm2m::problems::{self, Registered, ReferenceFront};

use crate::config::{CampaignConfig, Job};
use crate::record::{self, Metrics, StoredRun};
use crate::sections::write_atomic;

/// Reference front of one problem, or why there is none.
struct Reference {
    front: Result<ReferenceFront, String>,
    source: String,
}

fn load_references(config: &CampaignConfig) -> Result<BTreeMap<String, Reference>> {
    let mut references = BTreeMap::new();
    for name in &config.problems {
        let registered = Registered::with_reference_dir(name, config.reference_dir.as_deref())?;
        let canonical = registered.problem.name().to_string();
        if references.contains_key(&canonical) {
            continue;
        }
        let source = registered
            .reference_file
            .as_ref()
            .and_then(|p| p.file_name())
            .map_or_else(|| "built-in".to_string(), |f| f.to_string_lossy().into_owned());
        let front = registered.reference(config.reference_density).map_err(|e| e.to_string());
        if let Err(reason) = &front {
            log::warn!("{canonical}: indicators will be unavailable: {reason}");
        }
        references.insert(canonical, Reference { front, source });
    }
    Ok(references)
}

/// Runs one job and measures its final front.
fn execute(job: &Job, config: &CampaignConfig, reference: &Reference, exec: Execution) -> Result<StoredRun> {
    let problem = problems::by_name(&job.config.problem)?;
    let run = run_problem(problem.as_ref(), &job.config, exec)
        .with_context(|| format!("{} on {}", job.config.algorithm, job.config.problem))?;
    let metrics = Metrics::measure(&run, reference.front.as_ref().map_err(Clone::clone), config.hv_rule(), &reference.source);
    Ok(StoredRun { run, metrics })
}

fn run_jobs<F>(jobs: &[Job], workers: usize, task: F) -> Result<Vec<Result<PathBuf>>>
where
    F: Fn(&Job) -> Result<PathBuf> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .context("building the worker pool")?;
        Ok(pool.install(|| jobs.par_iter().map(&task).collect()))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        Ok(jobs.iter().map(task).collect())
    }
}

/// Executes every run of `config`, writing one record per run into `out`.
/// Returns the written paths in job order.
///
/// With more than one worker each run is itself sequential; a single worker
/// lets a run use data parallelism internally. Results are identical either
/// way.
pub fn run_campaign(config: &CampaignConfig, out: &Path, workers: usize) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let references = load_references(config)?;
    let jobs = config.jobs();
    let exec = if workers > 1 { Execution::Sequential } else { Execution::Parallel };
    info!("{} runs on {} worker(s) into {}", jobs.len(), workers.max(1), out.display());
    let results = run_jobs(&jobs, workers, |job| {
        let reference = &references[&job.config.problem];
        let stored = execute(job, config, reference, exec)?;
        let path = out.join(record::file_name(&job.config));
        write_atomic(&path, &record::to_text(&stored)).with_context(|| format!("writing {}", path.display()))?;
        info!(
            "{} {} seed {}: IGD {}",
            job.config.algorithm,
            job.config.problem,
            job.config.seed,
            stored.metrics.igd.map_or("unavailable".to_string(), |v| format!("{v:.4e}"))
        );
        Ok(path)
    })?;
    results.into_iter().collect()
}
