//! A family of point sets on which every degree-3 spanning tree is about
//! 1.447 times heavier than the MST.
//!
//! In `7N` dimensions: the origin `O`; points `p_1..p_N`, with `p_i` at
//! distance `1 - alpha` from `O` along axis `7i`; and for each `p_i` seven
//! points `q_{i,1..7}` forming a regular simplex of circumradius `sqrt(6)` in
//! the six axes just before `7i`, lifted to height 1 along axis `7i`. The MST
//! is `O -> p_i -> q_{i,j}`, whose vertices `p_i` have degree 8.
//!
//! The lower bound charges every vertex `c(O) = 0`, `c(p) = sqrt(2)(1-alpha)/2`,
//! `c(q) = sqrt(14)/2` so that every edge `AB` has length at least
//! `c(A) + c(B)`; a degree-3 tree has at most 3 charge-0 and `3N` `p`-charged
//! edge endpoints, the rest pay the `q` charge.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::mst::WeightedTree;

pub const SIMPLEX_VERTICES: usize = 7;
pub const SIMPLEX_DIM: usize = 6;

/// Largest `N` for which instances are built and fully checked.
pub const MAX_VERIFIED_N: usize = 3;

/// `-1 - sqrt(7) + sqrt(4 + 4 sqrt(7))`, the `alpha` at which
/// `sqrt(14) + sqrt(2)(1 - alpha) = 2 sqrt(6 + alpha^2)`.
pub fn alpha_star() -> f64 {
    let s7 = 7f64.sqrt();
    -1.0 - s7 + (4.0 + 4.0 * s7).sqrt()
}

/// `sqrt(14) + sqrt(2)(1 - alpha) - 2 sqrt(6 + alpha^2)`.
pub fn alpha_identity_residual(alpha: f64) -> f64 {
    14f64.sqrt() + 2f64.sqrt() * (1.0 - alpha) - 2.0 * (6.0 + alpha * alpha).sqrt()
}

/// Seven vertices of a regular simplex in six dimensions, centered at the
/// origin with circumradius `sqrt(6)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexLayer {
    pub vertices: Vec<[f64; SIMPLEX_DIM]>,
}

/// Maps the scaled standard basis of `R^7`, centered, into the hyperplane
/// orthogonal to the all-ones vector using the Helmert basis
/// `h_k = (1, .., 1, -k, 0, ..) / sqrt(k(k+1))`, `k = 1..6`.
pub fn build_simplex() -> SimplexLayer {
    let scale = (SIMPLEX_VERTICES as f64).sqrt();
    let vertices = (0..SIMPLEX_VERTICES)
        .map(|i| {
            let mut v = [0.0; SIMPLEX_DIM];
            for (slot, coord) in v.iter_mut().enumerate() {
                let k = slot + 1;
                let norm = ((k * (k + 1)) as f64).sqrt();
                let h = match i.cmp(&k) {
                    std::cmp::Ordering::Less => 1.0,
                    std::cmp::Ordering::Equal => -(k as f64),
                    std::cmp::Ordering::Greater => 0.0,
                };
                *coord = scale * h / norm;
            }
            v
        })
        .collect();
    SimplexLayer { vertices }
}

/// Role of each point in an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    Origin,
    /// `p_i`, 1-based copy index.
    Hub(usize),
    /// `q_{i,j}`, 1-based copy and simplex indices.
    Leaf(usize, usize),
}

#[derive(Debug, Clone)]
pub struct LowerBoundInstance {
    pub copies: usize,
    pub alpha: f64,
    pub points: PointSet,
    pub roles: Vec<Role>,
    /// `O -> p_i -> q_{i,j}`.
    pub tree: WeightedTree,
}

/// Point order: `O`, then `p_1..p_N`, then `q_{1,1..7}, .., q_{N,1..7}`.
pub fn build_instance(copies: usize, alpha: f64) -> Result<LowerBoundInstance> {
    check_args(copies, alpha)?;
    let dim = SIMPLEX_VERTICES * copies;
    let simplex = build_simplex();
    let mut rows = vec![vec![0.0; dim]];
    let mut roles = vec![Role::Origin];
    // 1-based axis 7i is 0-based index 7i - 1
    let axis = |i: usize| SIMPLEX_VERTICES * i - 1;
    for i in 1..=copies {
        let mut p = vec![0.0; dim];
        p[axis(i)] = 1.0 - alpha;
        rows.push(p);
        roles.push(Role::Hub(i));
    }
    for i in 1..=copies {
        for (j, v) in simplex.vertices.iter().enumerate() {
            let mut q = vec![0.0; dim];
            q[axis(i)] = 1.0;
            for k in 1..=SIMPLEX_DIM {
                q[axis(i) - k] = v[k - 1];
            }
            rows.push(q);
            roles.push(Role::Leaf(i, j + 1));
        }
    }
    let points = PointSet::from_rows(rows)?;
    let mut pairs = Vec::with_capacity(points.len() - 1);
    for i in 1..=copies {
        pairs.push((0, i));
    }
    for i in 1..=copies {
        for j in 0..SIMPLEX_VERTICES {
            pairs.push((i, 1 + copies + (i - 1) * SIMPLEX_VERTICES + j));
        }
    }
    let tree = WeightedTree::from_pairs(&points, &pairs)?;
    let inst = LowerBoundInstance { copies, alpha, points, roles, tree };
    inst.check_distances(1e-9)?;
    Ok(inst)
}

fn check_args(copies: usize, alpha: f64) -> Result<()> {
    if copies == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} outside (0, 1)")));
    }
    Ok(())
}

/// Which distance identity a pair of points is governed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Identity {
    /// `d(p_i, p_h) = sqrt(2)(1 - alpha)`
    HubHub,
    /// `d(q_{i,j}, q_{i,k}) = sqrt(14)`
    LeafLeafSame,
    /// `d(q_{i,j}, q_{h,k}) = sqrt(14)`, `h != i`
    LeafLeafOther,
    /// `d(p_i, q_{i,j}) = sqrt(6 + alpha^2)`
    HubOwnLeaf,
}

impl LowerBoundInstance {
    pub fn expected(&self, id: Identity) -> f64 {
        match id {
            Identity::HubHub => 2f64.sqrt() * (1.0 - self.alpha),
            Identity::LeafLeafSame | Identity::LeafLeafOther => 14f64.sqrt(),
            Identity::HubOwnLeaf => (6.0 + self.alpha * self.alpha).sqrt(),
        }
    }

    /// Largest relative deviation for each of the pair identities, plus the
    /// designated tree weight against `sigma`.
    pub fn identity_errors(&self) -> Vec<(String, f64)> {
        let ids = [Identity::HubHub, Identity::LeafLeafSame, Identity::LeafLeafOther, Identity::HubOwnLeaf];
        let mut worst = [0.0f64; 4];
        let n = self.points.len();
        for a in 0..n {
            for b in a + 1..n {
                let id = match (self.roles[a], self.roles[b]) {
                    (Role::Hub(_), Role::Hub(_)) => Identity::HubHub,
                    (Role::Leaf(i, _), Role::Leaf(h, _)) if i == h => Identity::LeafLeafSame,
                    (Role::Leaf(..), Role::Leaf(..)) => Identity::LeafLeafOther,
                    (Role::Hub(i), Role::Leaf(h, _)) if i == h => Identity::HubOwnLeaf,
                    _ => continue,
                };
                let e = self.expected(id);
                let slot = ids.iter().position(|&x| x == id).unwrap();
                worst[slot] = worst[slot].max((self.points.dist(a, b) - e).abs() / e);
            }
        }
        let s = sigma(self.copies, self.alpha);
        let mut out: Vec<(String, f64)> = ids.iter().zip(worst).map(|(id, w)| (format!("{id:?}"), w)).collect();
        out.push(("Sigma".into(), (self.tree.total_weight() - s).abs() / s));
        out
    }

    pub fn check_distances(&self, rel_tol: f64) -> Result<()> {
        for (name, err) in self.identity_errors() {
            if err > rel_tol {
                return Err(Error::Verification(format!("{name} identity off by {err:e} (relative)")));
            }
        }
        Ok(())
    }

    /// Half-edge charge of point `k`.
    pub fn charge(&self, k: usize) -> f64 {
        match self.roles[k] {
            Role::Origin => 0.0,
            Role::Hub(_) => 2f64.sqrt() * (1.0 - self.alpha) / 2.0,
            Role::Leaf(..) => 14f64.sqrt() / 2.0,
        }
    }

    /// `min over pairs of d(A, B) - c(A) - c(B)`; nonnegative when the charges
    /// are valid half-edge lengths.
    pub fn min_charge_slack(&self) -> f64 {
        let n = self.points.len();
        let mut worst = f64::INFINITY;
        for a in 0..n {
            for b in a + 1..n {
                worst = worst.min(self.points.dist(a, b) - self.charge(a) - self.charge(b));
            }
        }
        worst
    }
}

/// MST weight of the instance: `N (1 - alpha + 7 sqrt(6 + alpha^2))`.
pub fn sigma(copies: usize, alpha: f64) -> f64 {
    copies as f64 * (1.0 - alpha + 7.0 * (6.0 + alpha * alpha).sqrt())
}

/// `3N sqrt(2)(1 - alpha)/2 + (13N - 3) sqrt(14)/2`.
pub fn sigma3_lower_bound(copies: usize, alpha: f64) -> f64 {
    let n = copies as f64;
    3.0 * n * (2f64.sqrt() * (1.0 - alpha) / 2.0) + (13.0 * n - 3.0) * (14f64.sqrt() / 2.0)
}

pub fn finite_ratio(copies: usize, alpha: f64) -> f64 {
    sigma3_lower_bound(copies, alpha) / sigma(copies, alpha)
}

/// Limit of [`finite_ratio`] as `N` grows.
pub fn limit_ratio(alpha: f64) -> f64 {
    (3.0 * (2f64.sqrt() * (1.0 - alpha) / 2.0) + 13.0 * (14f64.sqrt() / 2.0))
        / (1.0 - alpha + 7.0 * (6.0 + alpha * alpha).sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundReport {
    pub n: usize,
    pub alpha: f64,
    pub points: usize,
    pub dim: usize,
    pub sigma: f64,
    pub sigma3_lb: f64,
    pub ratio: f64,
    pub limit_ratio: f64,
}

pub fn report(copies: usize, alpha: f64) -> LowerBoundReport {
    LowerBoundReport {
        n: copies,
        alpha,
        points: 8 * copies + 1,
        dim: 7 * copies,
        sigma: sigma(copies, alpha),
        sigma3_lb: sigma3_lower_bound(copies, alpha),
        ratio: finite_ratio(copies, alpha),
        limit_ratio: limit_ratio(alpha),
    }
}
