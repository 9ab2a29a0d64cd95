//! Degree-3 spanning trees from the Euclidean MST.
//!
//! Root the MST, then at every vertex replace the star to its children by a
//! path from the vertex through the children built by [`crate::starpath`].
//! Each child keeps its own subtree. A vertex ends up adjacent to at most two
//! siblings or its parent in its parent's path, plus its first own child, so
//! the degree is at most 3, and each star costs at most `R_STAR` times its
//! MST weight.

use rayon::prelude::*;

use crate::constants::R_STAR;
use crate::error::{Error, Result};
use crate::geometry::{PointSet, StarInstance};
use crate::mst::{mst, Edge, WeightedTree};
use crate::starpath::build_path;

/// A tree hung from a root; children keep adjacency order.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

impl RootedTree {
    pub fn new(tree: &WeightedTree, root: usize) -> Result<Self> {
        let n = tree.n();
        if root >= n {
            return Err(Error::IndexOutOfRange { index: root, len: n });
        }
        let adj = tree.adjacency();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut visited = vec![false; n];
        let mut stack = vec![root];
        visited[root] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some(v);
                    children[v].push(w);
                    stack.push(w);
                }
            }
        }
        if visited.iter().any(|&seen| !seen) {
            return Err(Error::Verification("tree is not connected".into()));
        }
        Ok(Self { root, parent, children })
    }
}

/// Vertex of minimum degree, lowest index on ties.
pub fn root_choice(tree: &WeightedTree) -> usize {
    tree.degrees()
        .iter()
        .enumerate()
        .min_by_key(|&(i, &d)| (d, i))
        .map_or(0, |(i, _)| i)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tree3Options {
    /// Return the MST unchanged when its maximum degree is already at most 3.
    pub keep_if_feasible: bool,
}

#[derive(Debug, Clone)]
pub struct Tree3Result {
    pub tree: WeightedTree,
    pub mst: WeightedTree,
}

impl Tree3Result {
    /// `tree weight / MST weight`; 1 when the MST has weight zero.
    pub fn ratio(&self) -> f64 {
        let w = self.mst.total_weight();
        if w > 0.0 {
            self.tree.total_weight() / w
        } else {
            1.0
        }
    }
}

pub fn degree3_tree(ps: &PointSet) -> Result<Tree3Result> {
    degree3_tree_with(ps, Tree3Options::default())
}

pub fn degree3_tree_with(ps: &PointSet, opts: Tree3Options) -> Result<Tree3Result> {
    let base = mst(ps);
    if opts.keep_if_feasible && base.max_degree() <= 3 {
        return Ok(Tree3Result { tree: base.clone(), mst: base });
    }
    let tree = rewire(ps, &base)?;
    Ok(Tree3Result { tree, mst: base })
}

/// Replaces every vertex-to-children star of `tree` (rooted by
/// [`root_choice`]) with a path.
pub fn rewire(ps: &PointSet, tree: &WeightedTree) -> Result<WeightedTree> {
    let rooted = RootedTree::new(tree, root_choice(tree))?;
    let stars: Vec<usize> = (0..ps.len()).filter(|&v| !rooted.children[v].is_empty()).collect();
    let paths = stars
        .par_iter()
        .map(|&v| star_path_edges(ps, v, &rooted.children[v]))
        .collect::<Result<Vec<_>>>()?;
    let edges: Vec<Edge> = paths.into_iter().flatten().collect();
    let out = WeightedTree::from_edges_unchecked(ps.len(), edges);
    out.check_spanning()?;
    Ok(out)
}

fn star_path_edges(ps: &PointSet, v: usize, children: &[usize]) -> Result<Vec<Edge>> {
    let center = ps.get(v)?;
    let origin = center.sub(center)?;
    let satellites = children
        .iter()
        .map(|&c| ps.get(c)?.sub(center))
        .collect::<Result<Vec<_>>>()?;
    let star = StarInstance::new(origin, satellites)?;
    let plan = build_path(&star)?;
    let mut prev = v;
    let mut edges = Vec::with_capacity(children.len());
    for &local in &plan.order {
        let next = children[local];
        edges.push(Edge { u: prev, v: next, w: ps.dist(prev, next) });
        prev = next;
    }
    Ok(edges)
}

/// Checks the degree-3 guarantees of a result: spanning, degree at most 3,
/// weights consistent with coordinates, and ratio within `rel_tol` of
/// [`R_STAR`].
pub fn verify(ps: &PointSet, result: &Tree3Result, rel_tol: f64) -> Result<()> {
    result.tree.validate(ps, rel_tol)?;
    if result.tree.max_degree() > 3 {
        return Err(Error::Verification(format!("max degree {}", result.tree.max_degree())));
    }
    let bound = R_STAR * result.mst.total_weight() * (1.0 + rel_tol);
    if result.tree.total_weight() > bound {
        return Err(Error::Verification(format!(
            "weight {} exceeds {R_STAR} x MST weight {}",
            result.tree.total_weight(),
            result.mst.total_weight()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(rows.iter().map(|r| r.to_vec())).unwrap()
    }

    #[test]
    fn root_choice_examples() {
        let path = set(&[&[0.0], &[1.0], &[2.0], &[3.0]]);
        assert_eq!(root_choice(&mst(&path)), 0);
        let star = set(&[&[0.0, 0.0], &[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0], &[0.0, -1.0]]);
        let t = WeightedTree::from_pairs(&star, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(root_choice(&t), 1);
        // every tree has two leaves; here they are 7 and 8
        let pts: Vec<Vec<f64>> = (0..9).map(|i| vec![i as f64]).collect();
        let ps = PointSet::from_rows(pts).unwrap();
        let t = WeightedTree::from_pairs(&ps, &[(7, 0), (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 8)])
            .unwrap();
        assert_eq!(root_choice(&t), 7);
    }

    #[test]
    fn collinear_points_keep_the_mst() {
        let ps = set(&[&[0.0], &[1.0], &[2.5], &[4.0]]);
        let r = degree3_tree(&ps).unwrap();
        assert_eq!(r.tree.edge_keys(), r.mst.edge_keys());
        assert_eq!(r.ratio(), 1.0);
    }

    #[test]
    fn antipodal_star() {
        let ps = set(&[&[0.0], &[1.0], &[-1.0]]);
        let r = degree3_tree(&ps).unwrap();
        assert_eq!(r.mst.total_weight(), 2.0);
        assert!(r.tree.total_weight() <= 3.0);
        verify(&ps, &r, 1e-9).unwrap();
    }

    #[test]
    fn high_degree_star_is_reduced() {
        let mut rows = vec![vec![0.0, 0.0]];
        // five unit satellites: neighbouring chords exceed the radius
        for k in 0..5 {
            let a = k as f64 * std::f64::consts::TAU / 5.0;
            rows.push(vec![a.cos(), a.sin()]);
        }
        let ps = PointSet::from_rows(rows).unwrap();
        let r = degree3_tree(&ps).unwrap();
        assert!(r.mst.max_degree() > 3);
        verify(&ps, &r, 1e-9).unwrap();
    }

    #[test]
    fn keep_if_feasible_returns_mst() {
        let ps = set(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0]]);
        let r = degree3_tree_with(&ps, Tree3Options { keep_if_feasible: true }).unwrap();
        assert_eq!(r.tree, r.mst);
    }

    #[test]
    fn single_point() {
        let r = degree3_tree(&set(&[&[1.0, 2.0]])).unwrap();
        assert_eq!(r.tree.edges().len(), 0);
        assert_eq!(r.ratio(), 1.0);
    }
}
