use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use ppsm2m::problems::{self, reference_file_name};
use ppsm2m_harness::{plot, run_campaign, CampaignConfig, Summary, OUTPUT_ENV};

#[derive(Parser)]
#[command(name = "ppsm2m", version = env!("CARGO_PKG_VERSION"), about = "Constrained multi-objective optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (algorithm, problem, seed) of a campaign and write one record per run.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Concurrent runs.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Record directory; overrides the config's `output_dir`.
        #[arg(long, env = OUTPUT_ENV)]
        out: Option<PathBuf>,
    },
    /// Tabulate mean and standard deviation of IGD and HV over a record directory.
    Summarize {
        #[arg(long, env = OUTPUT_ENV)]
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit plot data and SVG charts from a record or a summary.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Directory with `<PROBLEM>.pf` reference fronts.
        #[arg(long)]
        reference_dir: Option<PathBuf>,
    },
    /// Write built-in reference fronts as `<PROBLEM>.pf` files.
    Reference {
        /// Problems to export; all registered ones when omitted.
        #[arg(long = "problem")]
        problems: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        density: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the registered problems.
    Problems,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Run { config, workers, out } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let campaign = CampaignConfig::parse(&text).map_err(|e| anyhow!("{}: {e}", config.display()))?;
            let out = out
                .or_else(|| campaign.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("results"));
            let written = run_campaign(&campaign, &out, workers)?;
            println!("wrote {} record(s) to {}", written.len(), out.display());
        }
        Command::Summarize { dir, out } => {
            let summary = Summary::from_dir(&dir)?;
            if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(&out, summary.to_text()).with_context(|| format!("writing {}", out.display()))?;
            print!("{}", summary.to_markdown());
        }
        Command::Plot { input, out, reference_dir } => {
            for file in plot::plot(&input, &out, reference_dir.as_deref())? {
                println!("{}", file.display());
            }
        }
        Command::Reference { problems: names, density, out } => {
            fs::create_dir_all(&out)?;
            let names = if names.is_empty() { problems::names() } else { names };
            for name in names {
                let problem = problems::by_name(&name)?;
                let front = problem.reference_front(density)?;
                let path = out.join(reference_file_name(problem.name()));
                let comment = format!("{} reference front, {} points", problem.name(), front.len());
                fs::write(&path, front.to_text(Some(&comment))).with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
            }
        }
        Command::Problems => {
            for name in problems::names() {
                println!("{name}");
            }
        }
    }
    Ok(())
}
