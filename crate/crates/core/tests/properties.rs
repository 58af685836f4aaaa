//! Invariants of the data model, decomposition, ranking, stage control,
//! metrics, statistics and problem modules, each checked on 1000 random
//! cases.

use std::collections::BTreeSet;

use ppsm2m::decomposition::{allocate_subpops, uniform_directions, NormalizationState};
use ppsm2m::metrics::{hv, igd};
use ppsm2m::model::{
    cdp_compare, dominates, eps_cdp_compare, eps_dominates, evaluate, overall_violation, pareto_compare,
    DEFAULT_EQUALITY_TOLERANCE,
};
use ppsm2m::pps::{BoundsHistory, ControlOrigin, EpsilonSchedule, StageFlag, DEFAULT_RATE_FLOOR};
use ppsm2m::problems::{by_name, LirCmop, ReferenceFront, SpecCmop};
use ppsm2m::ranking::{crowding_distance, nondominated_sort, truncate_by_rank_crowding, Cdp, Pareto};
use ppsm2m::stats::{friedman_mean_ranks, Direction};
use ppsm2m::{Comparison, Individual};
use proptest::prelude::*;

fn vector(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, m)
}

/// Objective vectors on a coarse grid so that ties and duplicates occur.
fn grid_vector(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0..6u8).prop_map(f64::from), m)
}

fn individual(m: usize) -> impl Strategy<Value = Individual> {
    (
        prop_oneof![vector(m), grid_vector(m)],
        prop_oneof![Just(0.0), 0.0..3.0f64],
    )
        .prop_map(|(f, phi)| Individual::new(vec![], f, phi))
}

fn population(m: usize, max: usize) -> impl Strategy<Value = Vec<Individual>> {
    prop::collection::vec(individual(m), 1..max)
}

fn feasible(points: Vec<Vec<f64>>) -> Vec<Individual> {
    points.into_iter().map(|f| Individual::new(vec![], f, 0.0)).collect()
}

fn front_sets(fronts: Vec<Vec<usize>>) -> Vec<BTreeSet<usize>> {
    fronts.into_iter().map(|f| f.into_iter().collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    // ---- data model ----

    #[test]
    fn violation_is_nonnegative_zero_on_feasible_and_additive(
        g1 in prop::collection::vec(-1.0..1.0f64, 0..5),
        g2 in prop::collection::vec(-1.0..1.0f64, 0..5),
        h1 in prop::collection::vec(-1e-3..1e-3f64, 0..3),
        h2 in prop::collection::vec(-1e-3..1e-3f64, 0..3),
    ) {
        let delta = DEFAULT_EQUALITY_TOLERANCE;
        let whole: f64 = overall_violation(&[g1.clone(), g2.clone()].concat(), &[h1.clone(), h2.clone()].concat(), delta);
        prop_assert!(whole >= 0.0);
        let satisfied = g1.iter().chain(&g2).all(|&g| g >= 0.0) && h1.iter().chain(&h2).all(|h| h.abs() <= delta);
        prop_assert_eq!(whole == 0.0, satisfied);
        let parts = overall_violation(&g1, &h1, delta) + overall_violation(&g2, &h2, delta);
        prop_assert!((whole - parts).abs() <= 1e-12 * (1.0 + whole));
    }

    #[test]
    fn cdp_is_antisymmetric(a in individual(2), b in individual(2)) {
        let ab = cdp_compare(&a, &b);
        prop_assert_eq!(ab, cdp_compare(&b, &a).reverse());
        prop_assert!(!(ab == Comparison::FirstBetter && cdp_compare(&b, &a) == Comparison::FirstBetter));
    }

    #[test]
    fn cdp_on_feasible_pairs_is_dominance(fa in vector(3), fb in vector(3)) {
        let a = Individual::new(vec![], fa.clone(), 0.0);
        let b = Individual::new(vec![], fb.clone(), 0.0);
        let expected = if dominates(&fa, &fb) {
            Comparison::FirstBetter
        } else if dominates(&fb, &fa) {
            Comparison::SecondBetter
        } else {
            Comparison::Incomparable
        };
        prop_assert_eq!(cdp_compare(&a, &b), expected);
    }

    #[test]
    fn fully_relaxed_epsilon_cdp_is_dominance(a in individual(2), b in individual(2)) {
        let level = a.phi.max(b.phi) + 1.0;
        prop_assert_eq!(eps_cdp_compare(&a, &b, level), pareto_compare(&a.f, &b.f));
    }

    #[test]
    fn zero_slack_epsilon_dominance_is_dominance(
        fa in prop_oneof![vector(2), grid_vector(2)],
        fb in prop_oneof![vector(2), grid_vector(2)],
    ) {
        prop_assert_eq!(eps_dominates(&fa, &fb, 0.0), dominates(&fa, &fb));
    }

    // ---- decomposition ----

    #[test]
    fn allocation_partitions_the_pool(pop in population(3, 80), k in prop::sample::select(vec![1usize, 3, 6, 10, 15, 21])) {
        let directions = uniform_directions(3, k).unwrap();
        let mut norm = NormalizationState::new(3);
        norm.update(&pop);
        let allocation = allocate_subpops(&pop, &directions, &norm, 4);
        let mut all: Vec<usize> = allocation.buckets.concat();
        all.sort_unstable();
        prop_assert_eq!(all, (0..pop.len()).collect::<Vec<_>>());
    }

    #[test]
    fn allocation_is_scale_free(
        points in prop::collection::vec(prop::collection::vec(0.0..4.0f64, 2), 1..60),
        power in -8..8i32,
        k in 2..12usize,
    ) {
        // the origin is part of the pool, so shifting is exact and scaling by
        // a power of two changes no angle
        let with_origin: Vec<Vec<f64>> = std::iter::once(vec![0.0, 0.0]).chain(points).collect();
        let scale = 2f64.powi(power);
        let scaled: Vec<Vec<f64>> = with_origin.iter().map(|p| p.iter().map(|v| v * scale).collect()).collect();
        let directions = uniform_directions(2, k).unwrap();
        let assign = |pts: Vec<Vec<f64>>| {
            let pop = feasible(pts);
            let mut norm = NormalizationState::new(2);
            norm.update(&pop);
            allocate_subpops(&pop, &directions, &norm, 1).buckets
        };
        prop_assert_eq!(assign(with_origin), assign(scaled));
    }

    #[test]
    fn directions_are_deterministic(m in 2..4usize, k in 1..40usize) {
        prop_assert_eq!(format!("{:?}", uniform_directions(m, k)), format!("{:?}", uniform_directions(m, k)));
    }

    // ---- ranking ----

    #[test]
    fn cdp_sort_of_feasible_population_is_pareto_sort(points in prop::collection::vec(grid_vector(2), 1..60)) {
        let mut a = feasible(points.clone());
        let mut b = feasible(points);
        prop_assert_eq!(nondominated_sort(&mut a, &Cdp), nondominated_sort(&mut b, &Pareto));
    }

    #[test]
    fn fronts_are_stable_under_permutation(
        pop in population(2, 60),
        keys in prop::collection::vec(any::<u32>(), 60),
    ) {
        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.sort_by_key(|&i| (keys[i], i));
        let mut original = pop.clone();
        let mut permuted: Vec<Individual> = order.iter().map(|&i| pop[i].clone()).collect();
        let expected = front_sets(nondominated_sort(&mut original, &Cdp).fronts);
        let mapped: Vec<BTreeSet<usize>> = nondominated_sort(&mut permuted, &Cdp)
            .fronts
            .into_iter()
            .map(|f| f.into_iter().map(|p| order[p]).collect())
            .collect();
        prop_assert_eq!(mapped, expected);
    }

    #[test]
    fn truncation_respects_front_order(pop in population(2, 60), s in 1..60usize) {
        let mut sorted = pop.clone();
        let ranks = nondominated_sort(&mut sorted, &Cdp).ranks(pop.len());
        let mut work = pop.clone();
        let keep = truncate_by_rank_crowding(&mut work, s, &Cdp);
        prop_assert_eq!(keep.len(), s.min(pop.len()));
        let worst_kept = keep.iter().map(|&i| ranks[i]).max().unwrap();
        let kept: BTreeSet<usize> = keep.iter().copied().collect();
        for (i, &rank) in ranks.iter().enumerate() {
            if !kept.contains(&i) {
                prop_assert!(rank >= worst_kept, "dropped rank {} while keeping rank {}", rank, worst_kept);
            }
        }
    }

    #[test]
    fn crowding_is_permutation_invariant(
        points in prop::collection::vec(vector(3), 1..40),
        keys in prop::collection::vec(any::<u32>(), 40),
    ) {
        let n = points.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (keys[i], i));
        let mut pop = feasible(points);
        let front: Vec<usize> = (0..n).collect();
        let distance = crowding_distance(&mut pop, &front);
        let shuffled: Vec<usize> = order.clone();
        let distance_shuffled = crowding_distance(&mut pop, &shuffled);
        for (p, &i) in shuffled.iter().enumerate() {
            let (a, b) = (distance_shuffled[p], distance[i]);
            prop_assert!(a == b || (a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    // ---- stage control ----

    #[test]
    fn change_rate_is_nonnegative_and_zero_when_frozen(
        pops in prop::collection::vec(population(2, 10), 1..30),
        window in 1..8usize,
    ) {
        let mut history = BoundsHistory::new(window, DEFAULT_RATE_FLOOR);
        for pop in &pops {
            history.update(pop);
            prop_assert!(history.change_rate() >= 0.0);
        }
        let frozen = pops.last().unwrap();
        for _ in 0..=window {
            history.update(frozen);
        }
        prop_assert_eq!(history.change_rate(), 0.0);
    }

    #[test]
    fn change_rate_depends_only_on_the_window(
        entries in prop::collection::vec((vector(2), vector(2)), 1..30),
        window in 1..6usize,
    ) {
        let mut long = BoundsHistory::new(window, DEFAULT_RATE_FLOOR);
        for (z, n) in &entries {
            long.push(z.clone(), n.clone());
        }
        let tail = &entries[entries.len().saturating_sub(window + 1)..];
        let mut short = BoundsHistory::new(window, DEFAULT_RATE_FLOOR);
        for (z, n) in tail {
            short.push(z.clone(), n.clone());
        }
        prop_assert_eq!(long.change_rate(), short.change_rate());
        prop_assert_eq!(long, short);
    }

    #[test]
    fn schedule_follows_its_regimes(
        eps0 in 1e-3..100.0f64,
        tau in 0.01..0.9f64,
        cp in 0.5..5.0f64,
        tc in 10..400usize,
        ratios in prop::collection::vec(0.0..1.0f64, 1..60),
        high in any::<bool>(),
    ) {
        let alpha = 0.95;
        let mut s = EpsilonSchedule::new(tau, alpha, cp, tc, ControlOrigin::Absolute);
        s.seed(eps0, 0);
        let mut previous = eps0;
        for k in 1..=tc + 5 {
            let rf = if high { 1.0 } else { ratios[k % ratios.len()] * alpha * 0.999 };
            let eps = s.update(k, rf);
            if k >= tc {
                prop_assert_eq!(eps, 0.0);
            } else if high {
                prop_assert!((eps - eps0 * (1.0 - k as f64 / tc as f64).powf(cp)).abs() <= 1e-12 * eps0);
            } else {
                // strictly decreasing until the level underflows to zero
                prop_assert!(eps < previous || previous < f64::MIN_POSITIVE);
                prop_assert!((eps - (1.0 - tau) * previous).abs() <= 1e-12 * previous);
            }
            previous = eps;
        }
    }

    #[test]
    fn switch_fires_at_most_once(rates in prop::collection::vec(0.0..2e-3f64, 1..200)) {
        let mut flag = StageFlag::new(1e-3);
        let fired = rates.iter().filter(|&&r| flag.observe(r)).count();
        prop_assert!(fired <= 1);
        prop_assert_eq!(fired == 1, rates.iter().any(|&r| r <= 1e-3));
    }

    // ---- metrics ----

    #[test]
    fn igd_never_grows_when_points_are_added(
        front in prop::collection::vec(vector(2), 1..40),
        set in prop::collection::vec(vector(2), 1..20),
        extra in vector(2),
    ) {
        let reference = ReferenceFront::analytic(front);
        let before = igd(&reference, &set).unwrap();
        let mut bigger = set.clone();
        bigger.push(extra);
        prop_assert!(igd(&reference, &bigger).unwrap() <= before);
    }

    #[test]
    fn hv_grows_strictly_with_a_new_nondominated_point(
        set in prop::collection::vec(prop::collection::vec(0.0..1.0f64, 3), 0..15),
        extra in prop::collection::vec(0.0..1.0f64, 3),
    ) {
        let r = [1.0, 1.0, 1.0];
        prop_assume!(!set.iter().any(|p| p.iter().zip(&extra).all(|(a, b)| a <= b)));
        let before = hv(&set, &r).unwrap();
        let mut bigger = set.clone();
        bigger.push(extra);
        prop_assert!(hv(&bigger, &r).unwrap() > before);
    }

    #[test]
    fn hv_ignores_order_and_dominated_points(
        set in prop::collection::vec(prop::collection::vec(0.0..1.0f64, 2), 0..30),
        keys in prop::collection::vec(any::<u32>(), 30),
    ) {
        let r = [1.0, 1.0];
        let value = hv(&set, &r).unwrap();
        let mut order: Vec<usize> = (0..set.len()).collect();
        order.sort_by_key(|&i| (keys[i], i));
        let permuted: Vec<Vec<f64>> = order.iter().map(|&i| set[i].clone()).collect();
        prop_assert!((hv(&permuted, &r).unwrap() - value).abs() <= 1e-12);
        let nondominated: Vec<Vec<f64>> = set
            .iter()
            .filter(|p| !set.iter().any(|q| dominates(q, p)))
            .cloned()
            .collect();
        prop_assert!((hv(&nondominated, &r).unwrap() - value).abs() <= 1e-12);
        prop_assert_eq!(hv(&[], &r).unwrap(), 0.0);
    }

    // ---- statistics ----

    #[test]
    fn mean_ranks_sum_to_the_rank_total(
        rows in prop::collection::vec(prop::collection::vec(prop_oneof![0.0..1.0f64, (0..3u8).prop_map(f64::from)], 5), 2..15),
    ) {
        let ranks = friedman_mean_ranks(&rows, Direction::LowerBetter).unwrap();
        let a = ranks.len() as f64;
        prop_assert!((ranks.iter().sum::<f64>() - a * (a + 1.0) / 2.0).abs() <= 1e-9);
    }

    #[test]
    fn mean_ranks_ignore_monotone_row_transforms(
        rows in prop::collection::vec(prop::collection::vec(0.0..1.0f64, 4), 2..15),
        scales in prop::collection::vec(0.1..10.0f64, 15),
        shifts in prop::collection::vec(-5.0..5.0f64, 15),
    ) {
        let transformed: Vec<Vec<f64>> = rows
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|v| (scales[i] * v + shifts[i]).exp()).collect())
            .collect();
        prop_assert_eq!(
            friedman_mean_ranks(&rows, Direction::LowerBetter).unwrap(),
            friedman_mean_ranks(&transformed, Direction::LowerBetter).unwrap()
        );
    }

    // ---- problems ----

    #[test]
    fn evaluation_is_pure(id in 1..=14u8, x in prop::collection::vec(0.0..=1.0f64, 30)) {
        let problem = LirCmop::new(id).unwrap();
        let first = evaluate(&problem, &x).unwrap();
        for _ in 0..3 {
            let again = evaluate(&problem, &x).unwrap();
            prop_assert!(first.f.iter().zip(&again.f).all(|(a, b)| a.to_bits() == b.to_bits()));
            prop_assert_eq!(first.phi.to_bits(), again.phi.to_bits());
        }
    }

    #[test]
    fn synthetic_front_preimages_are_feasible(t in 0.0..=1.0f64) {
        let problem = SpecCmop::constrained();
        let x = [t, 0.0];
        let ind = evaluate(&problem, &x).unwrap();
        prop_assert!((ind.f[0] + ind.f[1] - 1.0).abs() <= 1e-15);
        let outside_gap = (t - 0.5).abs() >= SpecCmop::gap_half_width();
        prop_assert_eq!(ind.phi <= 1e-9, outside_gap);
    }
}

#[test]
fn objective_counts_follow_the_suite() {
    for id in 1..=14u8 {
        let problem = by_name(&format!("LIR-CMOP{id}")).unwrap();
        assert_eq!(problem.num_objectives(), if id >= 13 { 3 } else { 2 });
    }
}

#[test]
fn evaluator_is_bit_identical_over_a_thousand_calls() {
    let problem = LirCmop::new(7).unwrap();
    let x: Vec<f64> = (0..30).map(|i| (i as f64 * 0.377).fract()).collect();
    let first = evaluate(&problem, &x).unwrap();
    for _ in 0..1000 {
        assert_eq!(evaluate(&problem, &x).unwrap(), first);
    }
}
