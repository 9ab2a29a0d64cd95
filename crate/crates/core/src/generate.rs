//! Seeded instance generators.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)` (the
//! `rand_chacha` ChaCha stream cipher with 8 rounds, seeded through
//! `rand_core`'s PCG32-based `seed_from_u64` expansion), so a
//! `(kind, n, dim, seed)` tuple always yields the same coordinates.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Pareto, StandardNormal};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::lower_bound::{alpha_star, build_instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    /// Uniform in the unit ball.
    UniformBall,
    /// Standard normal coordinates.
    Gaussian,
    /// Tight normal clusters around widely spread centers.
    Clustered,
    /// The simplex-layer lower-bound instance with `n` copies at the optimal
    /// alpha; `dim` is ignored (the instance lives in `7n` dimensions).
    LowerBoundFamily,
    /// Points on the `{0, 1, 2}^dim` grid: many exactly equal distances and
    /// occasional duplicate points.
    NearTie,
    /// Uniform directions with Pareto-distributed radii.
    HeavyTailed,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 6] = [
        InstanceKind::UniformBall,
        InstanceKind::Gaussian,
        InstanceKind::Clustered,
        InstanceKind::LowerBoundFamily,
        InstanceKind::NearTie,
        InstanceKind::HeavyTailed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::UniformBall => "uniform-ball",
            InstanceKind::Gaussian => "gaussian",
            InstanceKind::Clustered => "clustered",
            InstanceKind::LowerBoundFamily => "lower-bound-family",
            InstanceKind::NearTie => "near-tie",
            InstanceKind::HeavyTailed => "heavy-tailed",
        }
    }
}

impl Serialize for InstanceKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InstanceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown instance kind {s:?}")))
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer; derives independent per-instance seeds from a suite
/// seed and an instance id.
pub fn derive_seed(base: u64, id: u64) -> u64 {
    let mut z = base ^ id.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_direction(r: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(r)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn generate_instances(kind: InstanceKind, n: usize, dim: usize, seed: u64) -> Result<PointSet> {
    if n == 0 || dim == 0 {
        return Err(Error::InvalidArgument("n and dim must be at least 1".into()));
    }
    let mut r = rng(seed);
    let rows: Vec<Vec<f64>> = match kind {
        InstanceKind::LowerBoundFamily => return Ok(build_instance(n, alpha_star())?.points),
        InstanceKind::UniformBall => (0..n)
            .map(|_| {
                let radius = r.random::<f64>().powf(1.0 / dim as f64);
                unit_direction(&mut r, dim).into_iter().map(|x| x * radius).collect()
            })
            .collect(),
        InstanceKind::Gaussian => (0..n).map(|_| (0..dim).map(|_| StandardNormal.sample(&mut r)).collect()).collect(),
        InstanceKind::Clustered => {
            let k = (n / 10).max(1);
            let spread = Normal::new(0.0, 10.0).expect("valid normal");
            let centers: Vec<Vec<f64>> = (0..k).map(|_| (0..dim).map(|_| spread.sample(&mut r)).collect()).collect();
            let tight = Normal::new(0.0, 0.3).expect("valid normal");
            (0..n)
                .map(|_| {
                    let c = &centers[r.random_range(0..k)];
                    c.iter().map(|x| x + tight.sample(&mut r)).collect()
                })
                .collect()
        }
        InstanceKind::NearTie => (0..n).map(|_| (0..dim).map(|_| r.random_range(0..3) as f64).collect()).collect(),
        InstanceKind::HeavyTailed => {
            let pareto = Pareto::new(1.0, 1.2).expect("valid pareto");
            (0..n)
                .map(|_| {
                    let radius: f64 = pareto.sample(&mut r);
                    unit_direction(&mut r, dim).into_iter().map(|x| x * radius).collect()
                })
                .collect()
        }
    };
    PointSet::from_rows(rows)
}

/// One randomized case of a benchmark or property suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteCase {
    pub id: u64,
    pub kind: InstanceKind,
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
}

impl SuiteCase {
    pub fn points(&self) -> Result<PointSet> {
        generate_instances(self.kind, self.n, self.dim, self.seed)
    }
}

/// `count` cases cycling through `kinds`, with `n` uniform in
/// `min_n..=max_n` and `dim` uniform in `1..=max_dim`, all drawn from `base`.
pub fn random_suite(
    base: u64,
    count: usize,
    kinds: &[InstanceKind],
    min_n: usize,
    max_n: usize,
    max_dim: usize,
) -> Result<Vec<SuiteCase>> {
    if kinds.is_empty() || min_n == 0 || min_n > max_n || max_dim == 0 {
        return Err(Error::InvalidArgument("empty suite parameters".into()));
    }
    let mut r = rng(base);
    Ok((0..count as u64)
        .map(|id| SuiteCase {
            id,
            kind: kinds[id as usize % kinds.len()],
            n: r.random_range(min_n..=max_n),
            dim: r.random_range(1..=max_dim),
            seed: derive_seed(base, id),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        for kind in InstanceKind::ALL {
            let a = generate_instances(kind, 20, 3, 7).unwrap();
            let b = generate_instances(kind, 20, 3, 7).unwrap();
            assert_eq!(a, b, "{kind}");
        }
        let a = generate_instances(InstanceKind::Gaussian, 5, 2, 1).unwrap();
        let b = generate_instances(InstanceKind::Gaussian, 5, 2, 2).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn near_ties_repeat_distances() {
        let ps = generate_instances(InstanceKind::NearTie, 30, 2, 3).unwrap();
        let m = ps.distance_matrix();
        let mut all: Vec<f64> = (0..30).flat_map(|i| (i + 1..30).map(move |j| (i, j))).map(|(i, j)| m[i][j]).collect();
        let total = all.len();
        all.sort_by(f64::total_cmp);
        all.dedup();
        assert!(all.len() * 10 < total);
    }

    #[test]
    fn lower_bound_family_size() {
        let ps = generate_instances(InstanceKind::LowerBoundFamily, 2, 1, 0).unwrap();
        assert_eq!((ps.len(), ps.dim()), (17, 14));
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in InstanceKind::ALL {
            assert_eq!(kind.name().parse::<InstanceKind>().unwrap(), kind);
        }
        assert!("torus".parse::<InstanceKind>().is_err());
    }

    #[test]
    fn suite_is_reproducible_and_in_range() {
        let kinds = [InstanceKind::Gaussian, InstanceKind::NearTie];
        let a = random_suite(5, 50, &kinds, 2, 40, 8).unwrap();
        assert_eq!(a, random_suite(5, 50, &kinds, 2, 40, 8).unwrap());
        assert!(a.iter().all(|c| (2..=40).contains(&c.n) && (1..=8).contains(&c.dim)));
        assert_eq!(a[3].kind, InstanceKind::NearTie);
        assert!(random_suite(5, 1, &[], 2, 3, 1).is_err());
    }

    #[test]
    fn uniform_ball_inside_unit_ball() {
        let ps = generate_instances(InstanceKind::UniformBall, 100, 4, 11).unwrap();
        assert!(ps.points().iter().all(|p| p.norm() <= 1.0 + 1e-12));
    }
}
