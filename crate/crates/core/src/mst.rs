//! Euclidean minimum spanning trees and the weighted tree type shared by every
//! tree-producing operation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    /// The endpoints with the smaller index first.
    pub fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// A spanning tree given as an edge list with cached weights and degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTree {
    n: usize,
    edges: Vec<Edge>,
    total_weight: f64,
    degrees: Vec<usize>,
}

impl WeightedTree {
    /// Builds a tree over `ps` from vertex pairs, weighting each edge by the
    /// Euclidean distance of its endpoints. Fails unless the pairs form a
    /// spanning tree.
    pub fn from_pairs(ps: &PointSet, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = ps.len();
        let edges = pairs
            .iter()
            .map(|&(u, v)| {
                if u >= n || v >= n {
                    return Err(Error::IndexOutOfRange { index: u.max(v), len: n });
                }
                Ok(Edge { u, v, w: ps.dist(u, v) })
            })
            .collect::<Result<Vec<_>>>()?;
        let tree = Self::from_edges_unchecked(n, edges);
        tree.check_spanning()?;
        Ok(tree)
    }

    pub(crate) fn from_edges_unchecked(n: usize, edges: Vec<Edge>) -> Self {
        let mut degrees = vec![0; n];
        for e in &edges {
            degrees[e.u] += 1;
            degrees[e.v] += 1;
        }
        let total_weight = edges.iter().map(|e| e.w).sum();
        Self { n, edges, total_weight, degrees }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Sorted list of normalized `(min, max)` edge keys.
    pub fn edge_keys(&self) -> Vec<(usize, usize)> {
        let mut keys: Vec<_> = self.edges.iter().map(Edge::key).collect();
        keys.sort_unstable();
        keys
    }

    /// Adjacency lists, neighbors in edge-list order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    /// n-1 edges, no self loops, connected.
    pub fn check_spanning(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyInput);
        }
        if self.edges.len() != self.n - 1 {
            return Err(Error::Verification(format!(
                "tree on {} vertices has {} edges",
                self.n,
                self.edges.len()
            )));
        }
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            if !uf.union(e.u, e.v) {
                return Err(Error::Verification(format!(
                    "edge ({}, {}) closes a cycle",
                    e.u, e.v
                )));
            }
        }
        Ok(())
    }

    /// Spanning check plus recomputation of every edge weight from the
    /// coordinates, to `rel_tol` relative.
    pub fn validate(&self, ps: &PointSet, rel_tol: f64) -> Result<()> {
        if ps.len() != self.n {
            return Err(Error::Verification(format!(
                "tree has {} vertices but point set has {}",
                self.n,
                ps.len()
            )));
        }
        self.check_spanning()?;
        let mut sum = 0.0;
        for e in &self.edges {
            let d = ps.dist(e.u, e.v);
            if (d - e.w).abs() > rel_tol * d.max(1.0) {
                return Err(Error::Verification(format!(
                    "edge ({}, {}) has weight {} but endpoints are {} apart",
                    e.u, e.v, e.w, d
                )));
            }
            sum += d;
        }
        if (sum - self.total_weight).abs() > rel_tol * sum.max(1.0) {
            return Err(Error::Verification(format!(
                "cached total {} differs from recomputed {}",
                self.total_weight, sum
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> TreeJson {
        TreeJson {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| (e.u, e.v, e.w))
                .collect(),
            total_weight: self.total_weight,
            max_degree: self.max_degree(),
        }
    }
}

/// Serialized tree: `{"n", "edges": [[u, v, w], ...], "total_weight", "max_degree"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeJson {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
    pub total_weight: f64,
    pub max_degree: usize,
}

impl TreeJson {
    /// Rebuilds the tree, recomputing weights from `ps`.
    pub fn into_tree(self, ps: &PointSet) -> Result<WeightedTree> {
        if self.n != ps.len() {
            return Err(Error::InvalidArgument(format!(
                "tree has {} vertices but point set has {}",
                self.n,
                ps.len()
            )));
        }
        let pairs: Vec<_> = self.edges.iter().map(|&(u, v, _)| (u, v)).collect();
        WeightedTree::from_pairs(ps, &pairs)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Minimum spanning tree of the complete Euclidean graph on `ps`.
///
/// Dense Prim starting from vertex 0. Among candidate edges of equal length the
/// one with the lexicographically smallest `(tree vertex, outside vertex)` pair
/// wins, so symmetric inputs give reproducible trees. Each edge is stored as
/// `(tree vertex, newly added vertex)`.
pub fn mst(ps: &PointSet) -> WeightedTree {
    let n = ps.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut link = vec![usize::MAX; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    if n == 0 {
        return WeightedTree::from_edges_unchecked(0, edges);
    }
    in_tree[0] = true;
    for w in 1..n {
        best[w] = ps.dist(0, w);
        link[w] = 0;
    }
    for _ in 1..n {
        let mut pick = usize::MAX;
        for w in 0..n {
            if in_tree[w] {
                continue;
            }
            if pick == usize::MAX
                || best[w] < best[pick]
                || (best[w] == best[pick] && (link[w], w) < (link[pick], pick))
            {
                pick = w;
            }
        }
        in_tree[pick] = true;
        edges.push(Edge { u: link[pick], v: pick, w: best[pick] });
        for w in 0..n {
            if in_tree[w] {
                continue;
            }
            let d = ps.dist(pick, w);
            if d < best[w] || (d == best[w] && pick < link[w]) {
                best[w] = d;
                link[w] = pick;
            }
        }
    }
    WeightedTree::from_edges_unchecked(n, edges)
}
