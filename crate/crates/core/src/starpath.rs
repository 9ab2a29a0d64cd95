//! Hamiltonian paths from a star center through its satellites, no longer
//! than `R_STAR` times the star weight.
//!
//! Satellites are ranked by distance to the center, largest first, and the
//! ranks are cut into blocks from the top: each step takes the smallest block
//! size `n` in `3..=10` whose path condition holds on the remaining distances.
//! The last few ranks form a base block solved exhaustively. Missing ranks
//! (past the last satellite) are phantom points sitting on the center; they
//! keep every block and endpoint well defined and are dropped from the emitted
//! path, which can only shorten it.
//!
//! The path runs from the center through the base block, then through the
//! blocks from innermost to outermost. For a block whose first two ranks are
//! `a_1`, `a_2` and whose inner neighbours are `a_{n+1}`, `a_{n+2}`, the four
//! connector paths `Q[k][j]` go from `a_{n+k}` through the whole block to
//! `a_j`. A two-state dynamic program over the endpoint choice picks the best
//! combination.

use serde::Serialize;

use crate::coeff::CoefficientTable;
use crate::constants::{LP_VARS, MAX_BLOCK, MIN_BLOCK, N3_RATIO, R_STAR};
use crate::error::{Error, Result};
use crate::geometry::{dist, star_weight, StarInstance};
use crate::oracles::HeldKarp;

/// Largest number of remaining ranks solved directly as the base block.
pub const BASE_MAX: usize = 4;

/// Satellite distances sorted largest first, with the rank-to-satellite map.
/// Satellites at distance zero are kept apart.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    sorted: Vec<f64>,
    perm: Vec<usize>,
    zeros: Vec<usize>,
}

impl DistanceProfile {
    /// Ties are broken by original satellite index.
    pub fn of(star: &StarInstance) -> Self {
        let c = star.center().coords();
        let d: Vec<f64> = star.satellites().iter().map(|a| dist(c, a.coords())).collect();
        let mut perm: Vec<usize> = (0..d.len()).filter(|&i| d[i] > 0.0).collect();
        perm.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
        let zeros = (0..d.len()).filter(|&i| d[i] == 0.0).collect();
        Self { sorted: perm.iter().map(|&i| d[i]).collect(), perm, zeros }
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Satellites sitting exactly on the center, in input order.
    pub fn zero_satellites(&self) -> &[usize] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// `len` distances starting at rank `start`, zero past the end.
    pub fn padded(&self, start: usize, len: usize) -> Vec<f64> {
        (start..start + len).map(|r| self.sorted.get(r).copied().unwrap_or(0.0)).collect()
    }
}

/// Both sides of the block condition evaluated at selection time; the block
/// is admissible when `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockCondition {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
}

impl BlockCondition {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// Evaluates the sufficient condition for a block of size `n` on block-local
/// distances `d` (largest first, zero padded as needed).
///
/// For `n = 3` it is `d4 <= 0.541 d3`. For larger `n`:
///
/// ```text
/// B[n] (d_{n+1} + d_{n+2})/2 + B[n,n] (d_n - (d_{n+1} + d_{n+2})/2)
///     + sum_{i<n} B[n,i] (d_i - d_{i+1})  <=  r* (d_1 + ... + d_n)
/// ```
pub fn block_condition(d: &[f64], n: usize, table: &CoefficientTable) -> BlockCondition {
    let at = |i: usize| d.get(i - 1).copied().unwrap_or(0.0);
    if n == MIN_BLOCK {
        return BlockCondition { n, lhs: at(4), rhs: N3_RATIO * at(3) };
    }
    let inner = (at(n + 1) + at(n + 2)) / 2.0;
    let mut lhs = table.b_n(n) * inner + table.b_ni(n, n) * (at(n) - inner);
    for i in 1..n {
        lhs += table.b_ni(n, i) * (at(i) - at(i + 1));
    }
    let rhs = table.r_star * (1..=n).map(at).sum::<f64>();
    BlockCondition { n, lhs, rhs }
}

/// Smallest block size in `3..=10` whose condition holds on `tail`.
///
/// `tail` holds the remaining distances, largest first; missing entries count
/// as zero. Failing every size is an error: the linear system certificate
/// rules it out, so reaching it means the coefficients are wrong.
pub fn select_block_size(tail: &[f64], table: &CoefficientTable) -> Result<BlockCondition> {
    if tail.iter().any(|d| !d.is_finite() || *d < 0.0) || tail.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument("distances must be finite, nonnegative and nonincreasing".into()));
    }
    let mut d = tail.to_vec();
    d.resize(d.len().max(LP_VARS), 0.0);
    (MIN_BLOCK..=MAX_BLOCK)
        .map(|n| block_condition(&d, n, table))
        .find(BlockCondition::holds)
        .ok_or_else(|| Error::NoBlockSize { profile: d[..LP_VARS].to_vec() })
}

/// One block of the decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockRecord {
    /// First (largest) rank in the block, 0-based.
    pub first_rank: usize,
    pub size: usize,
    /// Ranks in the block past the last real satellite.
    pub phantoms: usize,
    /// `None` for the base block.
    pub condition: Option<BlockCondition>,
    /// `q_lengths[k][j]`: from inner endpoint `k` through the block to its
    /// rank `j`. For the base block, row 0 holds the paths from the center.
    pub q_lengths: [[f64; 2]; 2],
}

/// A constructed path and how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathPlan {
    /// Satellite indices in visiting order; the path starts at the center.
    pub order: Vec<usize>,
    /// Length of the emitted path, recomputed from coordinates.
    pub length: f64,
    /// Length tracked by the dynamic program, phantoms included. Never less
    /// than `length`.
    pub planned_length: f64,
    pub star_weight: f64,
    /// Outermost block first; the base block is last.
    pub blocks: Vec<BlockRecord>,
    /// Chosen endpoint (0 or 1) at the top of each block, outermost first.
    pub endpoints: Vec<u8>,
}

impl PathPlan {
    /// `length / star_weight`; 1 for a star of weight zero.
    pub fn ratio(&self) -> f64 {
        if self.star_weight > 0.0 {
            self.length / self.star_weight
        } else {
            1.0
        }
    }

    /// Re-checks the plan against `star`: the order is a permutation of the
    /// satellites, the stored length matches the coordinates to `rel_tol`, the
    /// ratio bound holds with slack `rel_tol * S`, and every block condition
    /// held.
    pub fn verify(&self, star: &StarInstance, rel_tol: f64) -> Result<()> {
        let m = star.satellites().len();
        let mut seen = vec![false; m];
        for &i in &self.order {
            if i >= m || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Verification(format!("satellite {i} repeated or out of range")));
            }
        }
        if self.order.len() != m {
            return Err(Error::Verification(format!("path visits {} of {m} satellites", self.order.len())));
        }
        let len = path_length(star, &self.order);
        let scale = len.max(self.star_weight).max(f64::MIN_POSITIVE);
        if (len - self.length).abs() > rel_tol * scale {
            return Err(Error::Verification(format!("stored length {} vs recomputed {len}", self.length)));
        }
        if len > self.planned_length + rel_tol * scale {
            return Err(Error::Verification(format!(
                "emitted length {len} exceeds planned {}",
                self.planned_length
            )));
        }
        if len > R_STAR * self.star_weight + rel_tol * self.star_weight {
            return Err(Error::Verification(format!(
                "length {len} exceeds {R_STAR} x star weight {}",
                self.star_weight
            )));
        }
        for b in &self.blocks {
            if let Some(c) = &b.condition {
                if !c.holds() || !(MIN_BLOCK..=MAX_BLOCK).contains(&b.size) || c.n != b.size {
                    return Err(Error::Verification(format!("illegal block {b:?}")));
                }
            } else if b.size > BASE_MAX.max(2) {
                return Err(Error::Verification(format!("base block too large: {b:?}")));
            }
        }
        Ok(())
    }
}

/// Length of the path center -> satellites in `order`.
pub fn path_length(star: &StarInstance, order: &[usize]) -> f64 {
    let sats = star.satellites();
    let mut at = star.center().coords();
    let mut total = 0.0;
    for &i in order {
        let next = sats[i].coords();
        total += dist(at, next);
        at = next;
    }
    total
}

pub fn build_path(star: &StarInstance) -> Result<PathPlan> {
    build_path_with(star, CoefficientTable::shared())
}

/// Decomposes the ranks into blocks, solves every block exhaustively for all
/// endpoint pairs and joins them with a two-state dynamic program.
pub fn build_path_with(star: &StarInstance, table: &CoefficientTable) -> Result<PathPlan> {
    let profile = DistanceProfile::of(star);
    let m = profile.len();
    let center = star.center().coords();
    let pos = |rank: usize| -> &[f64] {
        if rank < m {
            star.satellites()[profile.perm[rank]].coords()
        } else {
            center
        }
    };

    let mut cuts: Vec<(usize, usize, BlockCondition)> = Vec::new();
    let mut s = 0;
    while m.saturating_sub(s) > BASE_MAX {
        let cond = select_block_size(&profile.padded(s, LP_VARS), table)?;
        cuts.push((s, cond.n, cond));
        s += cond.n;
    }
    let base_size = m.saturating_sub(s).max(2);

    let block_nodes = |first: usize, size: usize| -> Vec<&[f64]> { (first..first + size).map(pos).collect() };

    // base block: from the center, ending at its rank 0 or 1
    let base = HeldKarp::new(center, &block_nodes(s, base_size));
    let mut best = [base.length_to(0), base.length_to(1)];
    let mut records = vec![BlockRecord {
        first_rank: s,
        size: base_size,
        phantoms: (s + base_size).saturating_sub(m.max(s)),
        condition: None,
        q_lengths: [best, [f64::NAN, f64::NAN]],
    }];

    // innermost block first
    let mut solved: Vec<[HeldKarp; 2]> = Vec::with_capacity(cuts.len());
    let mut came_from: Vec<[usize; 2]> = Vec::with_capacity(cuts.len());
    for &(first, size, cond) in cuts.iter().rev() {
        let nodes = block_nodes(first, size);
        let from = [
            HeldKarp::new(pos(first + size), &nodes),
            HeldKarp::new(pos(first + size + 1), &nodes),
        ];
        let q = [
            [from[0].length_to(0), from[0].length_to(1)],
            [from[1].length_to(0), from[1].length_to(1)],
        ];
        let mut next = [0.0; 2];
        let mut choice = [0usize; 2];
        for j in 0..2 {
            let via = [best[0] + q[0][j], best[1] + q[1][j]];
            choice[j] = if via[1] < via[0] { 1 } else { 0 };
            next[j] = via[choice[j]];
        }
        best = next;
        came_from.push(choice);
        solved.push(from);
        records.push(BlockRecord {
            first_rank: first,
            size,
            phantoms: (first + size).saturating_sub(m.max(first)),
            condition: Some(cond),
            q_lengths: q,
        });
    }
    records.reverse();

    // walk back from the outermost block
    let mut end = if best[1] < best[0] { 1 } else { 0 };
    let planned_length = best[end];
    let mut endpoints = Vec::with_capacity(cuts.len() + 1);
    let mut segments: Vec<Vec<usize>> = Vec::with_capacity(cuts.len() + 1);
    for (idx, &(first, _, _)) in cuts.iter().enumerate() {
        let inner = cuts.len() - 1 - idx;
        let k = came_from[inner][end];
        endpoints.push(end as u8);
        segments.push(solved[inner][k].order_to(end).into_iter().map(|l| first + l).collect());
        end = k;
    }
    endpoints.push(end as u8);
    segments.push(base.order_to(end).into_iter().map(|l| s + l).collect());

    let mut order: Vec<usize> = profile.zeros.clone();
    for seg in segments.iter().rev() {
        order.extend(seg.iter().filter(|&&r| r < m).map(|&r| profile.perm[r]));
    }
    let length = path_length(star, &order);
    Ok(PathPlan {
        order,
        length,
        planned_length,
        star_weight: star_weight(star),
        blocks: records,
        endpoints,
    })
}
