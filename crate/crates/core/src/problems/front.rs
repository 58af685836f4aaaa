use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::model::dominates;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrontSource {
    Analytic,
    File(PathBuf),
}

/// A finite representative sample `P*` of a true Pareto front.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFront {
    pub points: Vec<Vec<f64>>,
    pub source: FrontSource,
}

impl ReferenceFront {
    pub fn analytic(points: Vec<Vec<f64>>) -> Self {
        Self {
            points,
            source: FrontSource::Analytic,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn ideal(&self) -> Vec<f64> {
        self.fold(f64::INFINITY, f64::min)
    }

    pub fn nadir(&self) -> Vec<f64> {
        self.fold(f64::NEG_INFINITY, f64::max)
    }

    fn fold(&self, init: f64, op: fn(f64, f64) -> f64) -> Vec<f64> {
        let mut out = vec![init; self.dimension()];
        for p in &self.points {
            for (o, &v) in out.iter_mut().zip(p) {
                *o = op(*o, v);
            }
        }
        out
    }

    /// O(n²) audit that no point dominates another.
    pub fn is_mutually_nondominated(&self) -> bool {
        self.points.iter().enumerate().all(|(i, a)| {
            self.points
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !dominates(a, b))
        })
    }

    /// Parses one objective vector per line; blank lines and lines starting
    /// with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| {
                        Error::ReferenceFront(format!("line {}: bad number `{tok}`", lineno + 1))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if let Some(first) = points.first() {
                if first.len() != row.len() {
                    return Err(Error::ReferenceFront(format!(
                        "line {}: expected {} values, found {}",
                        lineno + 1,
                        first.len(),
                        row.len()
                    )));
                }
            }
            points.push(row);
        }
        if points.is_empty() {
            return Err(Error::ReferenceFront("no points".into()));
        }
        Ok(Self::analytic(points))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::ReferenceFront(format!("{}: {e}", path.display())))?;
        let mut front = Self::parse(&text)
            .map_err(|e| Error::ReferenceFront(format!("{}: {e}", path.display())))?;
        front.source = FrontSource::File(path.to_path_buf());
        Ok(front)
    }

    pub fn to_text(&self, comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(comment) = comment {
            for line in comment.lines() {
                let _ = writeln!(out, "# {line}");
            }
        }
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|v| format!("{v:.17e}")).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// Keeps the points no other point dominates, dropping exact duplicates.
pub fn nondominated_filter(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut points = points;
    points.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    points.dedup();
    if points.first().is_some_and(|p| p.len() == 2) {
        // lexicographic order: a point survives iff its f2 beats every earlier one
        let mut kept: Vec<Vec<f64>> = Vec::new();
        let mut best_f2 = f64::INFINITY;
        for p in points {
            if p[1] < best_f2 {
                best_f2 = p[1];
                kept.push(p);
            }
        }
        return kept;
    }
    let keep: Vec<bool> = points
        .iter()
        .map(|a| !points.iter().any(|b| dominates(b, a)))
        .collect();
    points
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

/// Picks `count` points spread evenly by arc length along a densely sampled
/// bi-objective front (sorted by f1). Steps longer than `jump` are treated as
/// gaps between disconnected pieces and contribute no length.
pub(crate) fn spread_by_arc_length(dense: &[Vec<f64>], count: usize, jump: f64) -> Vec<Vec<f64>> {
    if dense.len() <= count {
        return dense.to_vec();
    }
    let mut cumulative = Vec::with_capacity(dense.len());
    let mut total = 0.0;
    cumulative.push(0.0);
    for w in dense.windows(2) {
        let step = ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt();
        if step <= jump {
            total += step;
        }
        cumulative.push(total);
    }
    let mut targets = count;
    loop {
        let mut picked: Vec<usize> = Vec::with_capacity(targets);
        let mut cursor = 0;
        for t in 0..targets {
            let s = total * t as f64 / (targets - 1).max(1) as f64;
            while cursor + 1 < cumulative.len() && cumulative[cursor + 1] <= s {
                cursor += 1;
            }
            let best = if cursor + 1 < cumulative.len()
                && (cumulative[cursor + 1] - s) < (s - cumulative[cursor])
            {
                cursor + 1
            } else {
                cursor
            };
            picked.push(best);
        }
        // piece endpoints next to gaps are always kept
        for i in 0..dense.len().saturating_sub(1) {
            if cumulative[i + 1] == cumulative[i] {
                picked.push(i);
                picked.push(i + 1);
            }
        }
        picked.push(0);
        picked.push(dense.len() - 1);
        picked.sort_unstable();
        picked.dedup();
        if picked.len() >= count || targets >= dense.len() {
            return picked.into_iter().map(|i| dense[i].clone()).collect();
        }
        targets += count - picked.len();
    }
}

/// Constrained front of a bi-objective problem whose attainable region is
/// `{f2 >= lower(f1)}` and whose constraints depend on the objectives only.
///
/// For each sampled `f1` the smallest feasible `f2 >= lower(f1)` is located by
/// an upward scan followed by bisection. Corners the sampling grid would miss
/// are located exactly: jumps of that envelope are bisected in `f1`, interior
/// minima are refined by golden-section search and the left end of every
/// plateau is bisected. The non-dominated subset is then spread by arc
/// length. Fronts made of short pieces are resampled inside each piece.
pub(crate) fn lower_envelope_front<L, F>(
    f1_range: (f64, f64),
    lower: L,
    feasible: F,
    density: usize,
) -> Vec<Vec<f64>>
where
    L: Fn(f64) -> f64,
    F: Fn(f64, f64) -> bool,
{
    const SAMPLES_PER_POINT: usize = 20;

    let envelope = Envelope {
        lower: &lower,
        feasible: &feasible,
    };
    let (mut candidates, h) = envelope.candidates(f1_range, (density * SAMPLES_PER_POINT).max(2000));
    let jump = 50.0 * h.max(Envelope::SCAN_STEP);
    if candidates.len() < density {
        // fronts made of short pieces: resample inside each piece
        let pieces: Vec<(f64, f64)> = piece_spans(&candidates, jump);
        let total: f64 = pieces.iter().map(|(a, b)| b - a).sum();
        let mut extra = Vec::new();
        for &(a, b) in &pieces {
            let n = ((b - a) / total * (4 * density) as f64).ceil().max(3.0) as usize;
            extra.extend(envelope.candidates((a, b), n).0);
        }
        candidates.extend(extra);
        candidates = strictly_improving(nondominated_filter(candidates));
    }
    spread_by_arc_length(&candidates, density, jump)
}

/// `f1` extents of the connected pieces (more than one point) of a front.
fn piece_spans(front: &[Vec<f64>], jump: f64) -> Vec<(f64, f64)> {
    let mut spans = Vec::new();
    let mut start = 0;
    for i in 1..=front.len() {
        let connected = i < front.len() && {
            let (p, q) = (&front[i - 1], &front[i]);
            ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt() <= jump
        };
        if !connected {
            if i - 1 > start {
                spans.push((front[start][0], front[i - 1][0]));
            }
            start = i;
        }
    }
    spans
}

/// Drops points of a sorted bi-objective front whose `f2` improvement on
/// their predecessor is below a nanometre; such points only arise from
/// samples straddling a corner.
fn strictly_improving(front: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut kept: Vec<Vec<f64>> = Vec::new();
    let mut best_f2 = f64::INFINITY;
    for p in front {
        if p[1] < best_f2 - 1e-9 {
            best_f2 = p[1];
            kept.push(p);
        }
    }
    kept
}

struct Envelope<'a> {
    lower: &'a dyn Fn(f64) -> f64,
    feasible: &'a dyn Fn(f64, f64) -> bool,
}

impl Envelope<'_> {
    const SCAN_STEP: f64 = 2e-3;
    const SCAN_SPAN: f64 = 6.0;
    const JUMP: f64 = 10.0 * Self::SCAN_STEP;
    const BISECTIONS: usize = 60;

    /// Smallest feasible `f2 >= lower(f1)`, if any lies within the scan span.
    fn lowest(&self, f1: f64) -> Option<f64> {
        let base = (self.lower)(f1);
        if (self.feasible)(f1, base) {
            return Some(base);
        }
        let mut below = base;
        let mut f2 = base;
        let mut above = loop {
            f2 += Self::SCAN_STEP;
            if f2 > base + Self::SCAN_SPAN {
                return None;
            }
            if (self.feasible)(f1, f2) {
                break f2;
            }
            below = f2;
        };
        for _ in 0..Self::BISECTIONS {
            let mid = 0.5 * (below + above);
            if (self.feasible)(f1, mid) {
                above = mid;
            } else {
                below = mid;
            }
        }
        Some(above)
    }

    fn is_jump(a: Option<f64>, b: Option<f64>) -> bool {
        match (a, b) {
            (Some(a), Some(b)) => (a - b).abs() > Self::JUMP,
            (None, None) => false,
            _ => true,
        }
    }

    /// Envelope samples in increasing `f1`, with both sides of every jump.
    fn grid(&self, (lo, hi): (f64, f64), samples: usize) -> Vec<(f64, Option<f64>)> {
        let h = (hi - lo) / (samples - 1) as f64;
        let mut grid: Vec<(f64, Option<f64>)> = Vec::with_capacity(samples + 16);
        for i in 0..samples {
            let f1 = lo + h * i as f64;
            let here = self.lowest(f1);
            if let Some(&(p1, before)) = grid.last() {
                if Self::is_jump(before, here) {
                    let (mut a, mut va) = (p1, before);
                    let (mut b, mut vb) = (f1, here);
                    for _ in 0..Self::BISECTIONS {
                        let mid = 0.5 * (a + b);
                        let vm = self.lowest(mid);
                        if Self::is_jump(va, vm) {
                            (b, vb) = (mid, vm);
                        } else {
                            (a, va) = (mid, vm);
                        }
                    }
                    grid.push((a, va));
                    grid.push((b, vb));
                }
            }
            grid.push((f1, here));
        }
        grid
    }

    /// Minimum of the envelope on `[a, b]`, assuming it is unimodal there.
    fn golden_minimum(&self, mut a: f64, mut b: f64) -> Option<(f64, f64)> {
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let value = |t: f64| self.lowest(t).unwrap_or(f64::INFINITY);
        for _ in 0..Self::BISECTIONS * 2 {
            let c = b - ratio * (b - a);
            let d = a + ratio * (b - a);
            if value(c) <= value(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let t = 0.5 * (a + b);
        self.lowest(t).map(|v| (t, v))
    }

    /// Smallest `f1` in `(from, to]` whose envelope reaches `level`.
    fn plateau_start(&self, mut from: f64, mut to: f64, level: f64) -> (f64, f64) {
        let reaches = |t: f64| self.lowest(t).is_some_and(|v| v <= level);
        for _ in 0..Self::BISECTIONS {
            let mid = 0.5 * (from + to);
            if reaches(mid) {
                to = mid;
            } else {
                from = mid;
            }
        }
        (to, self.lowest(to).unwrap_or(level))
    }

    fn candidates(&self, range: (f64, f64), samples: usize) -> (Vec<Vec<f64>>, f64) {
        let h = (range.1 - range.0) / (samples - 1) as f64;
        let grid = self.grid(range, samples);
        let mut dense: Vec<Vec<f64>> = grid
            .iter()
            .filter_map(|&(f1, v)| v.map(|f2| vec![f1, f2]))
            .collect();
        for w in grid.windows(3) {
            if let [(a, Some(va)), (_, Some(vm)), (b, Some(vb))] = *w {
                if vm < va && vm < vb {
                    dense.extend(self.golden_minimum(a, b).map(|(t, v)| vec![t, v]));
                }
            }
        }
        for w in grid.windows(3) {
            if let [(a, before), (m, Some(vm)), (_, Some(vn))] = *w {
                let flat_right = (vn - vm).abs() <= 1e-12;
                let higher_left = before.is_none_or(|v| v > vm);
                if flat_right && higher_left {
                    let (t, v) = self.plateau_start(a, m, vm);
                    dense.push(vec![t, v]);
                }
            }
        }
        (strictly_improving(nondominated_filter(dense)), h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let front = ReferenceFront::analytic(vec![vec![0.0, 1.0], vec![0.25, 0.5], vec![1.0, 0.0]]);
        let text = front.to_text(Some("three points\nsecond line"));
        assert!(text.starts_with("# three points\n# second line\n"));
        assert_eq!(ReferenceFront::parse(&text).unwrap().points, front.points);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = ReferenceFront::parse("0 1\n# c\n0.5 x\n").unwrap_err();
        assert!(err.to_string().contains("line 3"));
        let err = ReferenceFront::parse("0 1\n0.5\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(ReferenceFront::parse("# nothing\n").is_err());
    }

    #[test]
    fn filter_removes_dominated_and_duplicates() {
        let pts = vec![
            vec![1.0, 1.0],
            vec![0.0, 2.0],
            vec![1.0, 1.0],
            vec![2.0, 2.0],
            vec![2.0, 0.5],
        ];
        assert_eq!(
            nondominated_filter(pts),
            vec![vec![0.0, 2.0], vec![1.0, 1.0], vec![2.0, 0.5]]
        );
        let pts3 = vec![vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0], vec![0.0, 3.0, 1.0]];
        assert_eq!(nondominated_filter(pts3).len(), 2);
    }

    #[test]
    fn envelope_of_a_line_with_a_hole() {
        // front f1 + f2 = 1 with a disc of radius 0.2 at (0.5, 0.5) removed
        let pts = lower_envelope_front(
            (0.0, 1.0),
            |f1| 1.0 - f1,
            |f1, f2| (f1 - 0.5).powi(2) + (f2 - 0.5).powi(2) >= 0.04,
            200,
        );
        assert!(pts.len() >= 200);
        let r = 0.02f64.sqrt();
        assert!(pts.iter().all(|p| (p[0] + p[1] - 1.0).abs() < 1e-7));
        assert!(pts.iter().all(|p| (p[0] - 0.5).abs() >= r - 1e-9));
    }
}
