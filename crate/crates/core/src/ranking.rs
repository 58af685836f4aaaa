//! Non-dominated sorting, crowding distance and rank-then-crowding truncation
//! under a pluggable preference relation.

use std::cmp::Ordering;

use crate::model::{self, Comparison, Individual};

/// A preference relation used to sort a population into fronts.
///
/// Implementations must be antisymmetric: `compare(a, b)` is `FirstBetter`
/// exactly when `compare(b, a)` is `SecondBetter`.
pub trait Relation: Sync {
    fn compare(&self, a: &Individual, b: &Individual) -> Comparison;
}

impl<F> Relation for F
where
    F: Fn(&Individual, &Individual) -> Comparison + Sync,
{
    fn compare(&self, a: &Individual, b: &Individual) -> Comparison {
        self(a, b)
    }
}

/// Plain Pareto dominance on objectives; constraints are never read.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pareto;

impl Relation for Pareto {
    fn compare(&self, a: &Individual, b: &Individual) -> Comparison {
        model::pareto_compare(&a.f, &b.f)
    }
}

/// Constraint-domination principle.
#[derive(Debug, Clone, Copy, Default)]
pub struct Cdp;

impl Relation for Cdp {
    fn compare(&self, a: &Individual, b: &Individual) -> Comparison {
        model::cdp_compare(a, b)
    }
}

/// Constraint-domination with violations up to the level treated as feasible.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonCdp(pub f64);

impl Relation for EpsilonCdp {
    fn compare(&self, a: &Individual, b: &Individual) -> Comparison {
        model::eps_cdp_compare(a, b, self.0)
    }
}

/// Epsilon-level constraint handling combined with epsilon-dominance on the
/// objectives, used when all sub-populations are merged.
///
/// Pairs that epsilon-dominate each other are decided by Pareto dominance and
/// then by per-member tie keys (lower wins, see [`merged_sort`]).
#[derive(Debug, Clone, Copy)]
pub struct EpsilonMerged {
    pub level: f64,
    pub slack: f64,
}

impl EpsilonMerged {
    /// Comparison with explicit tie keys: `a` wins an otherwise undecided
    /// mutual epsilon-dominance when `tie_a < tie_b` lexicographically.
    pub fn compare_with_ties(
        &self,
        a: &Individual,
        b: &Individual,
        tie_a: (usize, usize),
        tie_b: (usize, usize),
    ) -> Comparison {
        model::constrained_compare(a, b, self.level, |fa, fb| {
            match model::eps_pareto_compare(fa, fb, self.slack) {
                Comparison::Incomparable
                    if model::eps_dominates(fa, fb, self.slack) && tie_a != tie_b =>
                {
                    if tie_a < tie_b {
                        Comparison::FirstBetter
                    } else {
                        Comparison::SecondBetter
                    }
                }
                decided => decided,
            }
        })
    }
}

impl Relation for EpsilonMerged {
    fn compare(&self, a: &Individual, b: &Individual) -> Comparison {
        self.compare_with_ties(a, b, (0, 0), (0, 0))
    }
}

/// Sort for the merged selection phase. Mutual epsilon-dominance is settled
/// first by each member's front index under plain epsilon constraint
/// domination in `pop`, which favours convergence without preferring any
/// region of the front, and then by `tie_order` (a distinct key per member,
/// lower wins), so that of two members closer than the slack at most one is
/// in the first front.
pub fn merged_sort(pop: &mut [Individual], relation: &EpsilonMerged, tie_order: &[usize]) -> FrontPartition {
    assert_eq!(tie_order.len(), pop.len(), "one tie key per member");
    let levels = {
        let cdp = EpsilonCdp(relation.level);
        sort_indices(pop.len(), |i, j| cdp.compare(&pop[i], &pop[j])).ranks(pop.len())
    };
    let partition = sort_indices(pop.len(), |i, j| {
        relation.compare_with_ties(&pop[i], &pop[j], (levels[i], tie_order[i]), (levels[j], tie_order[j]))
    });
    for (r, front) in partition.fronts.iter().enumerate() {
        for &i in front {
            pop[i].rank = Some(r);
        }
    }
    partition
}

/// Fronts `F_1, F_2, ...` as indices into the sorted population.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrontPartition {
    pub fronts: Vec<Vec<usize>>,
}

impl FrontPartition {
    pub fn len(&self) -> usize {
        self.fronts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }

    /// Front index (0-based) of every population member.
    pub fn ranks(&self, n: usize) -> Vec<usize> {
        let mut ranks = vec![usize::MAX; n];
        for (r, front) in self.fronts.iter().enumerate() {
            for &i in front {
                ranks[i] = r;
            }
        }
        ranks
    }
}

/// Fast non-dominated sort. Sets every individual's `rank` (0 = first front).
///
/// Members caught in a preference cycle (possible only with a relation that
/// is not transitive) are collected into one trailing front instead of being
/// dropped.
pub fn nondominated_sort<R: Relation + ?Sized>(pop: &mut [Individual], relation: &R) -> FrontPartition {
    let partition = sort_indices(pop.len(), |i, j| relation.compare(&pop[i], &pop[j]));
    for (r, front) in partition.fronts.iter().enumerate() {
        for &i in front {
            pop[i].rank = Some(r);
        }
    }
    partition
}

/// Fast non-dominated sort of `n` items under a comparison of their indices;
/// same front semantics as [`nondominated_sort`].
pub fn sort_indices<C>(n: usize, compare: C) -> FrontPartition
where
    C: Fn(usize, usize) -> Comparison,
{
    let mut beaten_by_count = vec![0usize; n];
    let mut beats: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            match compare(i, j) {
                Comparison::FirstBetter => {
                    beats[i].push(j);
                    beaten_by_count[j] += 1;
                }
                Comparison::SecondBetter => {
                    beats[j].push(i);
                    beaten_by_count[i] += 1;
                }
                Comparison::Incomparable => {}
            }
        }
    }

    let mut fronts = Vec::new();
    let mut assigned = 0;
    let mut current: Vec<usize> = (0..n).filter(|&i| beaten_by_count[i] == 0).collect();
    while !current.is_empty() {
        assigned += current.len();
        let mut next = Vec::new();
        for &i in &current {
            for &j in &beats[i] {
                beaten_by_count[j] -= 1;
                if beaten_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    if assigned < n {
        let mut seen = vec![false; n];
        fronts.iter().flatten().for_each(|&i| seen[i] = true);
        fronts.push((0..n).filter(|&i| !seen[i]).collect());
    }
    FrontPartition { fronts }
}

/// Crowding distance of each member of `front` (indices into `pop`), in the
/// order of `front`. Also stored on the individuals.
pub fn crowding_distance(pop: &mut [Individual], front: &[usize]) -> Vec<f64> {
    let mut distance = vec![0.0; front.len()];
    if front.len() <= 2 {
        distance.iter_mut().for_each(|d| *d = f64::INFINITY);
    } else {
        let m = pop[front[0]].f.len();
        let mut order: Vec<usize> = (0..front.len()).collect();
        for obj in 0..m {
            let value = |p: usize| pop[front[p]].f[obj];
            order.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(front[a].cmp(&front[b])));
            let first = order[0];
            let last = order[order.len() - 1];
            distance[first] = f64::INFINITY;
            distance[last] = f64::INFINITY;
            let span = value(last) - value(first);
            if span <= 0.0 {
                continue;
            }
            for w in order.windows(3) {
                distance[w[1]] += (value(w[2]) - value(w[0])) / span;
            }
        }
    }
    for (p, &i) in front.iter().enumerate() {
        pop[i].crowding = Some(distance[p]);
    }
    distance
}

/// Sorts and annotates the whole population with ranks and crowding
/// distances (used by tournament selection).
pub fn rank_and_crowd<R: Relation + ?Sized>(pop: &mut [Individual], relation: &R) -> FrontPartition {
    let partition = nondominated_sort(pop, relation);
    for front in &partition.fronts {
        crowding_distance(pop, front);
    }
    partition
}

/// Indices of the `s` survivors: whole fronts while they fit, then the
/// splitting front's members by descending crowding distance (ties by index).
///
/// Returns every index when `pop` has at most `s` members.
pub fn truncate_by_rank_crowding<R: Relation + ?Sized>(
    pop: &mut [Individual],
    s: usize,
    relation: &R,
) -> Vec<usize> {
    let partition = nondominated_sort(pop, relation);
    truncate_partition(pop, s, &partition)
}

/// Survivors of an already computed partition, chosen as in
/// [`truncate_by_rank_crowding`]. Ranks are taken from `partition` and
/// crowding distances are stored on the individuals.
pub fn truncate_partition(pop: &mut [Individual], s: usize, partition: &FrontPartition) -> Vec<usize> {
    for (r, front) in partition.fronts.iter().enumerate() {
        for &i in front {
            pop[i].rank = Some(r);
        }
    }
    if pop.len() <= s {
        return partition.fronts.concat();
    }
    let mut selected = Vec::with_capacity(s);
    for front in &partition.fronts {
        let distance = crowding_distance(pop, front);
        if selected.len() + front.len() <= s {
            selected.extend_from_slice(front);
            if selected.len() == s {
                break;
            }
            continue;
        }
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| {
            distance[b]
                .partial_cmp(&distance[a])
                .unwrap_or(Ordering::Equal)
                .then(front[a].cmp(&front[b]))
        });
        let remaining = s - selected.len();
        selected.extend(order[..remaining].iter().map(|&p| front[p]));
        break;
    }
    selected
}

/// Like [`truncate_partition`], except that the splitting front is thinned
/// one member at a time: the member with the smallest crowding distance among
/// the already selected members and the remaining candidates is dropped and
/// distances are recomputed. Survivors therefore fill gaps left by better
/// fronts instead of clustering next to them.
pub fn truncate_partition_filling(pop: &mut [Individual], s: usize, partition: &FrontPartition) -> Vec<usize> {
    for (r, front) in partition.fronts.iter().enumerate() {
        for &i in front {
            pop[i].rank = Some(r);
        }
    }
    if pop.len() <= s {
        return partition.fronts.concat();
    }
    let mut selected = Vec::with_capacity(s);
    for front in &partition.fronts {
        if selected.len() + front.len() <= s {
            selected.extend_from_slice(front);
            if selected.len() == s {
                break;
            }
            continue;
        }
        let mut candidates = front.clone();
        while selected.len() + candidates.len() > s {
            let mut union = selected.clone();
            union.extend_from_slice(&candidates);
            let distance = crowding_distance(pop, &union);
            let offset = selected.len();
            let most_crowded = (0..candidates.len())
                .min_by(|&a, &b| {
                    distance[offset + a]
                        .partial_cmp(&distance[offset + b])
                        .unwrap_or(Ordering::Equal)
                        .then(candidates[b].cmp(&candidates[a]))
                })
                .expect("front is not empty");
            candidates.remove(most_crowded);
        }
        selected.extend(candidates);
        break;
    }
    selected
}

/// Convenience wrapper returning the surviving individuals themselves.
pub fn select<R: Relation + ?Sized>(mut pop: Vec<Individual>, s: usize, relation: &R) -> Vec<Individual> {
    let keep = truncate_by_rank_crowding(&mut pop, s, relation);
    let mut slots: Vec<Option<Individual>> = pop.into_iter().map(Some).collect();
    keep.into_iter()
        .map(|i| slots[i].take().expect("selected twice"))
        .collect()
}
