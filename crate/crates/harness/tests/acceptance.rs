//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status
//! when any criterion fails.
//!
//! `ACCEPTANCE_ONLY=3,8` restricts the run to the listed criteria (the rest
//! print SKIP). Run artifacts of the end-to-end criteria are kept under the
//! cargo target directory in `acceptance/`.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Instant, SystemTime};

use ppsm2m::decomposition::{allocate_subpops, uniform_directions, NormalizationState};
use ppsm2m::engine::{run_with, Algorithm, Operator, RunConfig};
use ppsm2m::metrics::{hv, igd};
use ppsm2m::par::Execution;
use ppsm2m::pps::{ControlOrigin, EpsilonSchedule};
use ppsm2m::problems::{ReferenceFront, SpecCmop};
use ppsm2m::ranking::{nondominated_sort, Pareto};
use ppsm2m::stats::{friedman_mean_ranks, holm_adjust, Direction};
use ppsm2m::Individual;
use ppsm2m_harness::plot::plot_record;
use ppsm2m_harness::record::{self, StoredRun};
use ppsm2m_harness::sections::body;
use ppsm2m_harness::{run_campaign, CampaignConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Outcome);

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn artifacts(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).expect("artifact directory");
    dir
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..m).map(|_| rng.random::<f64>()).collect()).collect()
}

fn individuals(points: &[Vec<f64>]) -> Vec<Individual> {
    points.iter().map(|f| Individual::new(vec![], f.clone(), 0.0)).collect()
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

// ---------------------------------------------------------------- sorting

fn peel(points: &[Vec<f64>]) -> Vec<BTreeSet<usize>> {
    let better = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y);
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let front: BTreeSet<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| better(&points[j], &points[i])))
            .collect();
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

fn sorting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut compared = 0;
    for m in [2, 3] {
        for round in 0..50 {
            let mut points = random_points(&mut rng, 200, m);
            if round % 5 == 4 {
                // coarse grid: ties and duplicates
                points.iter_mut().flatten().for_each(|v| *v = (*v * 6.0).floor());
            }
            let mut pop = individuals(&points);
            let sorted: Vec<BTreeSet<usize>> = nondominated_sort(&mut pop, &Pareto)
                .fronts
                .into_iter()
                .map(|f| f.into_iter().collect())
                .collect();
            ensure(sorted == peel(&points), || format!("m={m}, population {round}: fronts differ from peeling"))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} populations of 200 (m=2 and m=3) match repeated peeling exactly"))
}

// ------------------------------------------------------------- allocation

fn angle_argmin(shifted: &[f64], directions: &[Vec<f64>]) -> usize {
    let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let angle = |d: &[f64]| {
        if norm(shifted) == 0.0 {
            0.0
        } else {
            let cos = shifted.iter().zip(d).map(|(a, b)| a * b).sum::<f64>() / (norm(shifted) * norm(d));
            cos.clamp(-1.0, 1.0).acos()
        }
    };
    let mut best = 0;
    for j in 1..directions.len() {
        if angle(&directions[j]) < angle(&directions[best]) {
            best = j;
        }
    }
    best
}

fn allocation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for (m, k) in [(2, 10), (3, 15)] {
        let directions = uniform_directions(m, k).map_err(|e| e.to_string())?;
        for round in 0..100 {
            let points: Vec<Vec<f64>> = random_points(&mut rng, 300, m)
                .into_iter()
                .map(|p| p.into_iter().map(|v| 4.0 * v - 1.0).collect())
                .collect();
            let pop = individuals(&points);
            let mut norm = NormalizationState::new(m);
            norm.update(&pop);
            let allocation = allocate_subpops(&pop, &directions, &norm, 300 / k);
            let mut expected = vec![Vec::new(); k];
            for (i, p) in points.iter().enumerate() {
                let shifted: Vec<f64> = p.iter().zip(norm.fbar()).map(|(v, lo)| v - lo).collect();
                expected[angle_argmin(&shifted, directions.vectors())].push(i);
            }
            ensure(allocation.buckets == expected, || format!("m={m}, K={k}, population {round}: buckets differ"))?;
        }
    }
    Ok("100 populations of 300 each for (m=2, K=10) and (m=3, K=15) match the brute-force argmin exactly".into())
}

// ---------------------------------------------------------------- metrics

fn hv_sweep_2d(set: &[Vec<f64>], r: &[f64]) -> f64 {
    let mut inside: Vec<&Vec<f64>> = set.iter().filter(|p| p[0] < r[0] && p[1] < r[1]).collect();
    inside.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut level = r[1];
    let mut area = 0.0;
    for p in inside {
        if p[1] < level {
            area += (r[0] - p[0]) * (level - p[1]);
            level = p[1];
        }
    }
    area
}

fn metric_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for m in [2, 3] {
        for _ in 0..30 {
            let front = random_points(&mut rng, 200, m);
            let set = random_points(&mut rng, 50, m);
            let mut total = 0.0;
            for p in &front {
                let mut best = f64::INFINITY;
                for a in &set {
                    best = best.min(p.iter().zip(a).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt());
                }
                total += best;
            }
            let expected = total / front.len() as f64;
            let got = igd(&ReferenceFront::analytic(front), &set).map_err(|e| e.to_string())?;
            ensure(got == expected, || format!("igd {got} vs double loop {expected}"))?;
        }
    }

    let r = [1.0, 1.0];
    let hand: [(Vec<Vec<f64>>, f64); 5] = [
        (vec![vec![0.5, 0.5]], 0.25),
        (vec![vec![0.0, 0.5], vec![0.5, 0.0]], 0.75),
        (vec![vec![0.0, 0.75], vec![0.25, 0.5], vec![0.5, 0.0]], 0.0625 + 0.125 + 0.5),
        (vec![vec![0.25, 0.25], vec![0.5, 0.5]], 0.5625),
        (vec![vec![1.0, 0.0], vec![0.0, 1.0]], 0.0),
    ];
    for (set, expected) in &hand {
        let got = hv(set, &r).map_err(|e| e.to_string())?;
        ensure(got == *expected && hv_sweep_2d(set, &r) == *expected, || format!("hv {set:?}: {got} vs {expected}"))?;
    }
    for _ in 0..200 {
        let set = random_points(&mut rng, 30, 2);
        let r = [1.05, 1.1];
        let (got, expected) = (hv(&set, &r).map_err(|e| e.to_string())?, hv_sweep_2d(&set, &r));
        ensure((got - expected).abs() <= 1e-12, || format!("2-D hv {got} vs sweep {expected}"))?;
    }

    let set: Vec<Vec<f64>> = random_points(&mut rng, 12, 3)
        .into_iter()
        .map(|p| {
            let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            p.iter().map(|v| v / norm).collect()
        })
        .collect();
    let r = [1.2, 1.2, 1.2];
    let samples = 10_000_000u64;
    let mut hits = 0u64;
    for _ in 0..samples {
        let s = [rng.random::<f64>() * r[0], rng.random::<f64>() * r[1], rng.random::<f64>() * r[2]];
        if set.iter().any(|p| p.iter().zip(&s).all(|(a, b)| a <= b)) {
            hits += 1;
        }
    }
    let estimate = hits as f64 / samples as f64 * r.iter().product::<f64>();
    let exact = hv(&set, &r).map_err(|e| e.to_string())?;
    let error = (exact - estimate).abs() / estimate;
    ensure(error <= 0.01, || format!("3-D hv {exact} vs Monte Carlo {estimate} ({:.3}% off)", 100.0 * error))?;
    Ok(format!(
        "igd equals the double loop; 2-D hv matches hand cases and the sweep; 3-D hv {exact:.6} vs 1e7-sample estimate {estimate:.6} ({:.3}% off)",
        100.0 * error
    ))
}

// -------------------------------------------------------- epsilon schedule

fn epsilon_schedule() -> Outcome {
    let tc = 800;
    let tolerance = 1e-12;
    // low feasibility: geometric decay by 1 - tau = 0.9
    let mut s = EpsilonSchedule::new(0.1, 0.95, 2.0, tc, ControlOrigin::Absolute);
    s.seed(1.0, 0);
    let mut expected = 1.0;
    for k in 1..tc {
        expected *= 0.9;
        let got = s.update(k, 0.3);
        ensure((got - expected).abs() <= tolerance, || format!("decay branch at k={k}: {got} vs {expected}"))?;
    }
    // high feasibility: eps0 (1 - k/Tc)^cp
    let mut s = EpsilonSchedule::new(0.1, 0.95, 2.0, tc, ControlOrigin::Absolute);
    s.seed(3.5, 0);
    for k in 1..tc {
        let expected = 3.5 * (1.0 - k as f64 / tc as f64).powi(2);
        let got = s.update(k, 0.97);
        ensure((got - expected).abs() <= tolerance, || format!("polynomial branch at k={k}: {got} vs {expected}"))?;
    }
    // hard zero from Tc on, whatever the feasibility ratio
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for k in tc..tc + 400 {
        let got = s.update(k, rng.random::<f64>());
        ensure(got == 0.0, || format!("zero branch at k={k}: {got}"))?;
    }
    Ok("geometric 0.9 decay, eps0(1-k/800)^2 and the hard zero from k=800 all within 1e-12".into())
}

// ------------------------------------------------------------------ switch

fn switch_behaviour() -> Outcome {
    let mut switches = Vec::new();
    for seed in 1..=10 {
        let config = RunConfig::new("SPEC-CMOP0", 2, Algorithm::PpsM2m, seed);
        let run = run_with(&config, Execution::default()).map_err(|e| e.to_string())?;
        ensure(config.max_generations == 1000, || "budget is not 1000 generations".into())?;
        let first_low = run.trace.iter().find(|r| r.r_k <= 1e-3).map(|r| r.generation);
        ensure(first_low.is_some(), || format!("seed {seed}: r_k never fell to 1e-3"))?;
        let transitions = run.trace.windows(2).filter(|w| w[0].push_stage != w[1].push_stage).count();
        let back = run.trace.windows(2).any(|w| !w[0].push_stage && w[1].push_stage);
        let switch = run.switch_generation;
        ensure(switch.is_some() && transitions == 1 && !back, || {
            format!("seed {seed}: switch {switch:?}, {transitions} stage transitions")
        })?;
        switches.push(switch.unwrap_or_default());
    }
    Ok(format!("r_k <= 1e-3 and exactly one push->pull switch on 10/10 seeds (switch generations {switches:?})"))
}

// -------------------------------------------------------------- synthetic

fn synthetic_end_to_end() -> Outcome {
    let out = artifacts("spec-cmop1");
    let config = CampaignConfig::parse(
        "algorithms = [\"PPS-M2M\"]\nproblems = [\"SPEC-CMOP1\"]\nruns = 10\nbase_seed = 1\n\
         population_size = 100\nsubregions = 10\nmax_generations = 500\n",
    )
    .map_err(|e| e.to_string())?;
    let records = run_campaign(&config, &out.join("records"), workers()).map_err(|e| format!("{e:#}"))?;
    let half_width = SpecCmop::gap_half_width();
    let mut values = Vec::new();
    let mut in_gap = 0;
    for path in &records {
        let stored: StoredRun = record::load(path).map_err(|e| format!("{e:#}"))?;
        let seed = stored.run.config.seed;
        values.push(stored.metrics.igd.unwrap_or(f64::INFINITY));
        let plots = out.join(format!("plots-seed{seed}"));
        let reference = ppsm2m::problems::Registered::new("SPEC-CMOP1")
            .and_then(|r| r.reference(1000))
            .map_err(|e| e.to_string())?;
        plot_record(&stored, Some(&reference), &plots).map_err(|e| format!("{e:#}"))?;
        let front = fs::read_to_string(plots.join("front.dat")).map_err(|e| e.to_string())?;
        for line in front.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
            let f1: f64 = line.split_whitespace().next().and_then(|v| v.parse().ok()).ok_or("bad front.dat row")?;
            if (f1 - 0.5).abs() < half_width {
                in_gap += 1;
            }
        }
    }
    let good = values.iter().filter(|v| **v <= 5e-3).count();
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.2e}")).collect();
    ensure(good >= 9, || format!("IGD <= 5e-3 on only {good}/10 seeds: [{}]", shown.join(", ")))?;
    ensure(in_gap == 0, || format!("{in_gap} plotted front points inside |f1-0.5| < sqrt(0.02)"))?;
    Ok(format!(
        "IGD <= 5e-3 on {good}/10 seeds [{}]; plotted fronts have no point in the gap",
        shown.join(", ")
    ))
}

// ------------------------------------------------------ full-scale LIR runs

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn paper_scale() -> Outcome {
    let out = artifacts("lir-cmop5-8");
    let config = CampaignConfig::parse(
        "algorithms = [\"PPS-M2M\", \"NSGA-II-CDP\", \"M2M-CDP\"]\n\
         problems = [\"LIR-CMOP5\", \"LIR-CMOP6\", \"LIR-CMOP7\", \"LIR-CMOP8\"]\n\
         runs = 10\nbase_seed = 1\npopulation_size = 300\nmax_evaluations = 300000\noperator = \"de\"\n",
    )
    .map_err(|e| e.to_string())?;
    let records = run_campaign(&config, &out, workers()).map_err(|e| format!("{e:#}"))?;
    let runs: Vec<StoredRun> = records.iter().map(|p| record::load(p)).collect::<Result<_, _>>().map_err(|e| format!("{e:#}"))?;
    let igd_of = |problem: &str, algorithm: Algorithm| -> Vec<f64> {
        runs.iter()
            .filter(|r| r.run.config.problem == problem && r.run.config.algorithm == algorithm)
            .map(|r| r.metrics.igd.unwrap_or(f64::INFINITY))
            .collect()
    };
    let published = [("LIR-CMOP5", 8.343e-3), ("LIR-CMOP6", 9.631e-3), ("LIR-CMOP7", 9.335e-3), ("LIR-CMOP8", 9.351e-3)];
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for (problem, paper) in published {
        let pps = igd_of(problem, Algorithm::PpsM2m);
        if pps.len() != 10 {
            return Err(format!("{problem}: {} PPS-M2M runs instead of 10", pps.len()));
        }
        let mean = pps.iter().sum::<f64>() / pps.len() as f64;
        let nsga = median(&mut igd_of(problem, Algorithm::Nsga2Cdp));
        let m2m = median(&mut igd_of(problem, Algorithm::M2mCdp));
        let line = format!(
            "{problem}: PPS-M2M mean {mean:.3e} (limit {:.3e}), NSGA-II-CDP median {nsga:.3e}, M2M-CDP median {m2m:.3e}",
            5.0 * paper
        );
        if mean.is_nan() || mean > 5.0 * paper {
            failures.push(format!("{problem} mean above 5x the published value"));
        }
        if mean.is_nan() || mean >= nsga || mean >= m2m {
            failures.push(format!("{problem} mean not below both baseline medians"));
        }
        lines.push(line);
    }
    let detail = lines.join("; ");
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{} -- {detail}", failures.join(", ")))
    }
}

// -------------------------------------------------------------- statistics

const ALGORITHMS: usize = 7;

/// Mean IGD per LIR-CMOP1..14 (rows) for PPS-M2M, M2M, MOEA/D-Epsilon,
/// MOEA/D-CDP, MOEA/D-SR, C-MOEA/D and NSGA-II-CDP (columns).
const PUBLISHED_IGD: [[f64; ALGORITHMS]; 14] = [
    [2.341e-02, 3.106e-02, 5.74e-02, 1.11e-01, 1.81e-02, 1.26e-01, 3.23e-01],
    [1.604e-02, 2.742e-02, 5.39e-02, 1.43e-01, 9.63e-03, 1.40e-01, 3.03e-01],
    [3.330e-02, 4.383e-02, 8.81e-02, 2.61e-01, 1.78e-01, 2.80e-01, 4.08e-01],
    [3.738e-02, 4.187e-02, 6.51e-02, 2.53e-01, 1.95e-01, 2.59e-01, 3.85e-01],
    [8.343e-03, 2.941e-01, 1.15e+00, 1.05e+00, 1.04e+00, 1.10e+00, 5.53e-01],
    [9.631e-03, 5.356e-01, 1.27e+00, 1.09e+00, 9.43e-01, 1.31e+00, 5.74e-01],
    [9.335e-03, 5.237e-01, 1.51e+00, 1.46e+00, 1.08e+00, 1.56e+00, 2.38e-01],
    [9.351e-03, 7.924e-01, 1.62e+00, 1.38e+00, 1.01e+00, 1.58e+00, 6.02e-01],
    [2.886e-01, 4.599e-01, 4.90e-01, 4.81e-01, 4.85e-01, 4.81e-01, 6.44e-01],
    [1.894e-02, 2.291e-01, 2.13e-01, 2.16e-01, 1.92e-01, 2.13e-01, 5.97e-01],
    [1.194e-02, 4.400e-01, 3.47e-01, 3.42e-01, 3.16e-01, 3.81e-01, 4.87e-01],
    [8.071e-02, 1.488e-01, 2.52e-01, 2.69e-01, 2.06e-01, 2.50e+00, 5.80e-01],
    [1.858e-01, 9.751e-01, 1.20e+00, 1.21e+00, 8.86e-01, 1.18e+00, 1.39e+01],
    [1.759e-01, 9.429e-01, 1.02e+00, 1.11e+00, 1.03e+00, 1.25e+00, 1.36e+01],
];

/// Mean HV, same layout.
const PUBLISHED_HV: [[f64; ALGORITHMS]; 14] = [
    [1.003e+00, 9.897e-01, 9.590e-01, 7.540e-01, 9.960e-01, 7.410e-01, 5.160e-01],
    [1.334e+00, 1.321e+00, 1.280e+00, 1.060e+00, 1.340e+00, 1.070e+00, 8.240e-01],
    [8.499e-01, 8.407e-01, 7.980e-01, 4.860e-01, 5.910e-01, 4.710e-01, 4.080e-01],
    [1.059e+00, 1.051e+00, 1.020e+00, 7.350e-01, 8.150e-01, 7.310e-01, 6.170e-01],
    [1.451e+00, 1.084e+00, 4.300e-02, 1.630e-01, 1.820e-01, 9.720e-02, 9.390e-01],
    [1.119e+00, 5.337e-01, 5.400e-02, 1.880e-01, 3.020e-01, 2.330e-02, 4.130e-01],
    [3.002e+00, 2.021e+00, 3.030e-01, 3.740e-01, 9.880e-01, 2.040e-01, 2.400e+00],
    [3.002e+00, 1.498e+00, 1.060e-01, 5.170e-01, 1.100e+00, 1.660e-01, 1.900e+00],
    [3.287e+00, 2.826e+00, 2.740e+00, 2.770e+00, 2.750e+00, 2.770e+00, 2.060e+00],
    [3.212e+00, 2.845e+00, 2.890e+00, 2.880e+00, 2.930e+00, 2.890e+00, 2.040e+00],
    [4.359e+00, 3.115e+00, 3.340e+00, 3.350e+00, 3.380e+00, 3.240e+00, 3.110e+00],
    [5.449e+00, 5.221e+00, 4.880e+00, 4.830e+00, 5.030e+00, 4.890e+00, 3.280e+00],
    [4.856e+00, 1.518e+00, 4.550e-01, 4.630e-01, 1.890e+00, 6.290e-01, 0.000e+00],
    [5.425e+00, 1.744e+00, 1.330e+00, 8.810e-01, 1.270e+00, 1.800e-01, 0.000e+00],
];

const PUBLISHED_IGD_RANKS: [f64; ALGORITHMS] = [1.1429, 2.9286, 4.6786, 4.8929, 3.1429, 5.5714, 5.6429];
const PUBLISHED_HV_RANKS: [f64; ALGORITHMS] = [1.0714, 2.9286, 4.8214, 4.8929, 3.2143, 5.3571, 5.7143];

/// Unadjusted p-values of the IGD post-hoc comparison against PPS-M2M, in
/// the order NSGA-II-CDP, C-MOEA/D, MOEA/D-CDP, MOEA/D-Epsilon, MOEA/D-SR, M2M.
const PUBLISHED_UNADJUSTED_P: [f64; 6] = [0.0, 0.0, 0.000004, 0.000015, 0.014306, 0.028739];

fn statistics() -> Outcome {
    let rows = |table: &[[f64; ALGORITHMS]; 14]| table.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
    let checks = [
        ("IGD", rows(&PUBLISHED_IGD), Direction::LowerBetter, PUBLISHED_IGD_RANKS),
        ("HV", rows(&PUBLISHED_HV), Direction::HigherBetter, PUBLISHED_HV_RANKS),
    ];
    let mut shown = Vec::new();
    for (name, matrix, direction, expected) in checks {
        let ranks = friedman_mean_ranks(&matrix, direction).map_err(|e| e.to_string())?;
        let rounded: Vec<String> = ranks.iter().map(|r| format!("{r:.4}")).collect();
        let wanted: Vec<String> = expected.iter().map(|r| format!("{r:.4}")).collect();
        ensure(rounded == wanted, || format!("{name} mean ranks [{}] vs [{}]", rounded.join(", "), wanted.join(", ")))?;
        shown.push(format!("{name} ranks [{}]", rounded.join(", ")));
    }
    let adjusted = holm_adjust(&PUBLISHED_UNADJUSTED_P).map_err(|e| e.to_string())?;
    let (sr, m2m) = (adjusted[4], adjusted[5]);
    ensure(format!("{sr:.6}") == "0.028612" && format!("{m2m:.6}") == "0.028739", || {
        format!("Holm SR {sr:.6} (want 0.028612), M2M {m2m:.6} (want 0.028739)")
    })?;
    Ok(format!("{}; Holm SR {sr:.6}, M2M {m2m:.6}", shown.join("; ")))
}

// ------------------------------------------------------------- determinism

fn determinism() -> Outcome {
    let config = CampaignConfig::parse(
        "algorithms = [\"PPS-M2M\", \"NSGA-II-CDP\", \"M2M-CDP\"]\n\
         problems = [\"SPEC-CMOP1\", \"LIR-CMOP2\", \"LIR-CMOP13\"]\nruns = 2\nbase_seed = 40\n\
         population_size = 60\nmax_generations = 40\nwindow = 5\ncontrol_generation = 30\n",
    )
    .map_err(|e| e.to_string())?;
    let out = artifacts("determinism");
    let mut bodies = Vec::new();
    for (round, workers) in [(0, 1), (1, 1), (2, 3)] {
        let dir = out.join(format!("round{round}"));
        let files = run_campaign(&config, &dir, workers).map_err(|e| format!("{e:#}"))?;
        let texts: Vec<String> = files.iter().map(|f| fs::read_to_string(f).map(|t| body(&t).to_string())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        bodies.push(texts);
    }
    ensure(bodies[0] == bodies[1], || "repeated campaign produced different record bodies".into())?;
    ensure(bodies[0] == bodies[2], || "worker count changed record bodies".into())?;

    let mut compared = 0;
    for algorithm in [Algorithm::PpsM2m, Algorithm::Nsga2Cdp, Algorithm::M2mCdp] {
        for problem in ["SPEC-CMOP1", "LIR-CMOP6"] {
            let config = RunConfig {
                population_size: 60,
                max_generations: 40,
                window: 5,
                control_generation: Some(30),
                operator: Operator::De,
                ..RunConfig::new(problem, 2, algorithm, 9)
            };
            let sequential = run_with(&config, Execution::Sequential).map_err(|e| e.to_string())?;
            let parallel = run_with(&config, Execution::Parallel).map_err(|e| e.to_string())?;
            ensure(sequential == parallel, || format!("{algorithm} on {problem}: sequential and parallel runs differ"))?;
            compared += 1;
        }
    }
    Ok(format!(
        "{} record bodies byte-identical over two repeats and 1 vs 3 workers; {compared} sequential/parallel run pairs identical",
        bodies[0].len()
    ))
}

// -------------------------------------------------------- invariant suites

const INVARIANT_SUITES: [&str; 3] = ["properties", "engine", "config_roundtrip"];

fn newest_binary(dir: &Path, stem: &str) -> Option<PathBuf> {
    let prefix = format!("{stem}-");
    fs::read_dir(dir)
        .ok()?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.extension().is_none()
                && p.file_name().and_then(|n| n.to_str()).is_some_and(|n| {
                    n.strip_prefix(&prefix).is_some_and(|hash| hash.chars().all(|c| c.is_ascii_hexdigit()))
                })
        })
        .max_by_key(|p| fs::metadata(p).and_then(|m| m.modified()).unwrap_or(SystemTime::UNIX_EPOCH))
}

fn invariant_suites() -> Outcome {
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let deps = exe.parent().ok_or("no test binary directory")?;
    let mut passed = Vec::new();
    for suite in INVARIANT_SUITES {
        let binary = newest_binary(deps, suite)
            .ok_or_else(|| format!("test binary `{suite}` not built; run `cargo test --workspace`"))?;
        let output = Command::new(&binary)
            .env("RUST_BACKTRACE", "0")
            .output()
            .map_err(|e| format!("running {}: {e}", binary.display()))?;
        let stdout = String::from_utf8_lossy(&output.stdout);
        let summary = stdout.lines().rfind(|l| l.starts_with("test result:")).unwrap_or("no summary").to_string();
        ensure(output.status.success(), || format!("suite `{suite}` failed: {summary}"))?;
        let count = summary.split_whitespace().skip_while(|w| *w != "ok.").nth(1).unwrap_or("?").to_string();
        passed.push(format!("{suite} ({count} passed)"));
    }
    Ok(format!("1000-case property suites pass: {}", passed.join(", ")))
}

// ------------------------------------------------------------------- main

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "non-dominated sorting vs peeling", sorting),
        (2, "subpopulation allocation vs argmin", allocation),
        (3, "IGD/HV oracles", metric_oracles),
        (4, "epsilon schedule branches", epsilon_schedule),
        (5, "push->pull switch on SPEC-CMOP0", switch_behaviour),
        (6, "SPEC-CMOP1 end to end", synthetic_end_to_end),
        (7, "LIR-CMOP5-8 at full scale", paper_scale),
        (8, "Friedman ranks and Holm adjustment", statistics),
        (9, "determinism", determinism),
        (10, "invariant property suites", invariant_suites),
    ];
    let only: Option<BTreeSet<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (number, title, check) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&number)) {
            println!("SKIP criterion {number} ({title})");
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panic: {message}"))
        });
        let seconds = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {number} ({title}, {seconds:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {number} ({title}, {seconds:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
