//! Exponential-time exact solvers.
//!
//! * [`shortest_path_through`]: Held-Karp over subsets for the shortest path
//!   from a start through a fixed vertex set, optionally constrained to end in
//!   a given subset. Also used by the block search in `starpath`.
//! * [`exact_bounded_degree_mst`]: minimum-weight spanning tree under a degree
//!   cap, by enumerating every labeled tree through its Prüfer sequence.
//! * [`average_path_coefficients`]: exact per-pair edge frequencies over the
//!   family of block paths whose average bounds the block cost.

use std::collections::BTreeMap;

use num_rational::Rational64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dist, Point, PointSet};
use crate::mst::WeightedTree;

/// Largest mandatory vertex set accepted by the bitmask solver.
pub const MAX_INTERIOR: usize = 20;

/// Largest point count accepted by the Prüfer enumeration.
pub const MAX_PRUFER_N: usize = 9;

/// Subset dynamic program over a start point and `k` nodes.
///
/// `cost[mask * k + j]` is the length of the shortest path that leaves the
/// start, visits exactly the nodes in `mask` and stops at node `j`.
pub(crate) struct HeldKarp {
    k: usize,
    cost: Vec<f64>,
    prev: Vec<u8>,
}

const NO_PREV: u8 = u8::MAX;

impl HeldKarp {
    pub(crate) fn new(start: &[f64], nodes: &[&[f64]]) -> Self {
        let k = nodes.len();
        debug_assert!(k <= MAX_INTERIOR);
        let full = 1usize << k;
        let mut cost = vec![f64::INFINITY; full * k];
        let mut prev = vec![NO_PREV; full * k];
        let mut d = vec![0.0; k * k];
        for a in 0..k {
            for b in 0..k {
                d[a * k + b] = dist(nodes[a], nodes[b]);
            }
        }
        for j in 0..k {
            cost[(1 << j) * k + j] = dist(start, nodes[j]);
        }
        for mask in 1..full {
            for last in 0..k {
                if mask & (1 << last) == 0 {
                    continue;
                }
                let here = cost[mask * k + last];
                if !here.is_finite() {
                    continue;
                }
                for next in 0..k {
                    if mask & (1 << next) != 0 {
                        continue;
                    }
                    let to = mask | (1 << next);
                    let cand = here + d[last * k + next];
                    if cand < cost[to * k + next] {
                        cost[to * k + next] = cand;
                        prev[to * k + next] = last as u8;
                    }
                }
            }
        }
        Self { k, cost, prev }
    }

    /// Length of the best full path ending at node `end`.
    pub(crate) fn length_to(&self, end: usize) -> f64 {
        self.cost[((1usize << self.k) - 1) * self.k + end]
    }

    /// Node order (local indices) of the best full path ending at `end`.
    pub(crate) fn order_to(&self, end: usize) -> Vec<usize> {
        let k = self.k;
        let mut mask = (1usize << k) - 1;
        let mut at = end;
        let mut order = Vec::with_capacity(k);
        loop {
            order.push(at);
            let p = self.prev[mask * k + at];
            mask &= !(1 << at);
            if p == NO_PREV {
                break;
            }
            at = p as usize;
        }
        order.reverse();
        order
    }
}

/// Where a path query starts.
#[derive(Debug, Clone, PartialEq)]
pub enum PathStart {
    /// A vertex of the query's point set.
    Vertex(usize),
    /// An external point not in the set.
    Point(Point),
}

#[derive(Debug, Clone)]
pub struct PathQuery<'a> {
    pub points: &'a PointSet,
    pub start: PathStart,
    /// Vertices the path must visit, each exactly once.
    pub interior: Vec<usize>,
    /// Allowed final vertices; `None` means any interior vertex.
    pub ends: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSolution {
    pub length: f64,
    /// Visited vertices in order. Starts with the start vertex when the query
    /// starts at a vertex; an external start point has no index and is omitted.
    pub order: Vec<usize>,
}

impl PathQuery<'_> {
    fn validate(&self) -> Result<()> {
        let n = self.points.len();
        if self.interior.len() > MAX_INTERIOR {
            return Err(Error::TooLarge {
                what: "path interior",
                size: self.interior.len(),
                limit: MAX_INTERIOR,
            });
        }
        let mut seen = vec![false; n];
        for &v in &self.interior {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, len: n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidArgument(format!("vertex {v} repeated in interior")));
            }
        }
        match &self.start {
            PathStart::Vertex(s) => {
                if *s >= n {
                    return Err(Error::IndexOutOfRange { index: *s, len: n });
                }
                if seen[*s] {
                    return Err(Error::InvalidArgument(format!(
                        "start vertex {s} is also in the interior"
                    )));
                }
            }
            PathStart::Point(p) => {
                if p.dim() != self.points.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: self.points.dim(),
                        found: p.dim(),
                    });
                }
            }
        }
        if let Some(ends) = &self.ends {
            if let Some(&e) = ends.iter().find(|&&e| e >= n || !seen[e]) {
                return Err(Error::InvalidArgument(format!(
                    "allowed end {e} is not an interior vertex"
                )));
            }
            if ends.is_empty() && !self.interior.is_empty() {
                return Err(Error::InvalidArgument("empty set of allowed ends".into()));
            }
        }
        Ok(())
    }

    fn start_coords(&self) -> &[f64] {
        match &self.start {
            PathStart::Vertex(s) => self.points.coords(*s),
            PathStart::Point(p) => p.coords(),
        }
    }
}

/// Shortest path from `q.start` through every interior vertex, ending at an
/// allowed end. Ties between ends go to the one listed first in the interior.
pub fn shortest_path_through(q: &PathQuery<'_>) -> Result<PathSolution> {
    q.validate()?;
    let mut order = match q.start {
        PathStart::Vertex(s) => vec![s],
        PathStart::Point(_) => Vec::new(),
    };
    if q.interior.is_empty() {
        return Ok(PathSolution { length: 0.0, order });
    }
    let nodes: Vec<&[f64]> = q.interior.iter().map(|&v| q.points.coords(v)).collect();
    let hk = HeldKarp::new(q.start_coords(), &nodes);
    let mut best: Option<(f64, usize)> = None;
    for (local, v) in q.interior.iter().enumerate() {
        if let Some(ends) = &q.ends {
            if !ends.contains(v) {
                continue;
            }
        }
        let len = hk.length_to(local);
        if best.is_none_or(|(b, _)| len < b) {
            best = Some((len, local));
        }
    }
    let (length, end) = best.expect("validated: at least one allowed end");
    order.extend(hk.order_to(end).into_iter().map(|l| q.interior[l]));
    Ok(PathSolution { length, order })
}

/// Minimum-weight spanning tree whose maximum degree is at most `maxdeg`,
/// found by enumerating all `n^(n-2)` labeled trees.
///
/// Among trees of equal weight the one with the lexicographically smallest
/// sorted edge list is returned.
pub fn exact_bounded_degree_mst(ps: &PointSet, maxdeg: usize) -> Result<WeightedTree> {
    let n = ps.len();
    if n > MAX_PRUFER_N {
        return Err(Error::TooLarge { what: "point count", size: n, limit: MAX_PRUFER_N });
    }
    if n == 1 {
        return WeightedTree::from_pairs(ps, &[]);
    }
    if n == 2 {
        if maxdeg < 1 {
            return Err(Error::DegreeInfeasible { n, maxdeg });
        }
        return WeightedTree::from_pairs(ps, &[(0, 1)]);
    }
    if maxdeg < 2 {
        return Err(Error::DegreeInfeasible { n, maxdeg });
    }
    let dm = ps.distance_matrix();
    let len = n - 2;
    let best = (0..n)
        .into_par_iter()
        .filter_map(|first| best_with_prefix(&dm, n, len, first, maxdeg))
        .reduce_with(|a, b| if better(&b, &a) { b } else { a });
    let (_, keys) = best.ok_or(Error::DegreeInfeasible { n, maxdeg })?;
    WeightedTree::from_pairs(ps, &keys)
}

type Candidate = (f64, Vec<(usize, usize)>);

fn better(a: &Candidate, b: &Candidate) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Best tree among Prüfer sequences starting with `first`.
fn best_with_prefix(
    dm: &[Vec<f64>],
    n: usize,
    len: usize,
    first: usize,
    maxdeg: usize,
) -> Option<Candidate> {
    let mut seq = vec![0usize; len];
    seq[0] = first;
    let mut best: Option<Candidate> = None;
    let mut degree = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);
    loop {
        degree.iter_mut().for_each(|d| *d = 1);
        for &a in &seq {
            degree[a] += 1;
        }
        if degree.iter().all(|&d| d <= maxdeg) {
            decode_prufer(&seq, &mut degree, &mut edges);
            let w: f64 = edges.iter().map(|&(u, v)| dm[u][v]).sum();
            let improves = match &best {
                None => true,
                Some((bw, _)) => w <= *bw,
            };
            if improves {
                let mut keys: Vec<_> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
                keys.sort_unstable();
                let cand = (w, keys);
                if best.as_ref().is_none_or(|b| better(&cand, b)) {
                    best = Some(cand);
                }
            }
        }
        // odometer over positions 1..len
        let mut pos = len;
        loop {
            if pos <= 1 {
                return best;
            }
            pos -= 1;
            seq[pos] += 1;
            if seq[pos] < n {
                break;
            }
            seq[pos] = 0;
        }
    }
}

/// Decodes a Prüfer sequence; `degree` must hold `1 + occurrences`.
fn decode_prufer(seq: &[usize], degree: &mut [usize], edges: &mut Vec<(usize, usize)>) {
    edges.clear();
    for &a in seq {
        let leaf = degree.iter().position(|&d| d == 1).expect("a leaf always exists");
        edges.push((leaf, a));
        degree[leaf] -= 1;
        degree[a] -= 1;
    }
    let mut rest = degree.iter().enumerate().filter(|&(_, &d)| d == 1).map(|(i, _)| i);
    let (u, v) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((u, v));
}

/// How the endpoint constraint on the averaged block paths is read.
///
/// Vertices are labeled `1..=n+1`. Every path starts at `n+1` and visits all
/// other labels. The two readings differ in how the final vertices are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointReading {
    /// The path ends at vertex 1 or vertex 2; everything else is free. This
    /// reading reproduces the published coefficients.
    EndsAtOneOrTwo,
    /// The last two vertices of the path are 1 and 2 in either order.
    LastTwoAreOneAndTwo,
}

/// Unordered vertex pair `(i, j)`, `i < j`, 1-based labels.
pub type LabelPair = (usize, usize);

/// Average number of times each pair is an edge, over all admissible paths on
/// labels `1..=n+1`, as exact rationals.
pub fn average_path_coefficients(
    n: usize,
    reading: EndpointReading,
) -> Result<BTreeMap<LabelPair, Rational64>> {
    if !(3..=8).contains(&n) {
        return Err(Error::InvalidArgument(format!("n = {n} outside 3..=8")));
    }
    let mut counts: BTreeMap<LabelPair, i64> = BTreeMap::new();
    for i in 1..=n + 1 {
        for j in i + 1..=n + 1 {
            counts.insert((i, j), 0);
        }
    }
    let mut total = 0i64;
    let mut labels: Vec<usize> = (1..=n).collect();
    for_each_permutation(&mut labels, 0, &mut |perm| {
        let admissible = match reading {
            EndpointReading::EndsAtOneOrTwo => perm[n - 1] <= 2,
            EndpointReading::LastTwoAreOneAndTwo => perm[n - 1] <= 2 && perm[n - 2] <= 2,
        };
        if !admissible {
            return;
        }
        total += 1;
        let mut prev = n + 1;
        for &v in perm.iter() {
            *counts.get_mut(&(prev.min(v), prev.max(v))).unwrap() += 1;
            prev = v;
        }
    });
    Ok(counts
        .into_iter()
        .map(|(pair, c)| (pair, Rational64::new(c, total)))
        .collect())
}

/// The closed-form coefficient pattern of the averaged block path on labels
/// `1..=n+1` (pairs with coefficient 0 are included).
pub fn closed_form_path_coefficients(n: usize) -> BTreeMap<LabelPair, Rational64> {
    let m = (n - 1) as i64;
    let top = n + 1;
    let mut out = BTreeMap::new();
    for i in 1..=top {
        for j in i + 1..=top {
            let c = match (i, j) {
                (1, 2) => Rational64::new(1, m),
                (1 | 2, t) if t == top => Rational64::new(1, 2 * m),
                (1 | 2, _) => Rational64::new(3, 2 * m),
                (_, t) if t == top => Rational64::new(1, m),
                _ => Rational64::new(2, m),
            };
            out.insert((i, j), c);
        }
    }
    out
}

fn for_each_permutation<F: FnMut(&[usize])>(items: &mut [usize], k: usize, f: &mut F) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Edge list helper for callers that assemble trees from oracle output.
pub fn tree_from_order(ps: &PointSet, order: &[usize]) -> Result<WeightedTree> {
    let pairs: Vec<_> = order.windows(2).map(|w| (w[0], w[1])).collect();
    WeightedTree::from_pairs(ps, &pairs)
}
