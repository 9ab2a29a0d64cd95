//! Upper bounds on weighted sums of pairwise distances between points confined
//! to balls around the origin, and the block coefficients derived from them.
//!
//! For weights `w_ij` and radii `l_i`, the maximum over arrangements of
//! `sum w_ij |a_i - a_j|` equals the minimum over positive `x` of
//!
//! ```text
//! sqrt(sum_{i<j} w_ij^2 / (x_i x_j)) * sqrt(sum_i l_i^2 x_i) * sqrt(sum_i x_i)
//! ```
//!
//! so evaluating the right side at any fixed positive `x` is a valid upper
//! bound. We never minimize; the multiplier rows in [`crate::constants`] are
//! evaluated as given.
//!
//! Labels in the `f`/`g` weight patterns are 1-based in the docs and 0-based in
//! the maps.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::constants::{self, MAX_BLOCK, MIN_BLOCK, N3_X, R_STAR};
use crate::error::{Error, Result};
use crate::oracles::{average_path_coefficients, EndpointReading};

/// Pair weights and per-point radii of a weighted distance sum.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSumSpec {
    n: usize,
    weights: BTreeMap<(usize, usize), f64>,
    radii: Vec<f64>,
}

impl WeightedSumSpec {
    pub fn new(n: usize, weights: BTreeMap<(usize, usize), f64>, radii: Vec<f64>) -> Result<Self> {
        if radii.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: radii.len() });
        }
        if radii.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::InvalidArgument("radii must be finite and nonnegative".into()));
        }
        for (&(i, j), &w) in &weights {
            if i >= j || j >= n {
                return Err(Error::InvalidArgument(format!("weight key ({i}, {j}) must satisfy i < j < {n}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidArgument(format!("weight {w} on ({i}, {j})")));
            }
        }
        Ok(Self { n, weights, radii })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.weights
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn with_radii(&self, radii: Vec<f64>) -> Result<Self> {
        Self::new(self.n, self.weights.clone(), radii)
    }

    /// `sum w_ij |a_i - a_j|` for a concrete arrangement.
    pub fn evaluate(&self, points: &[Vec<f64>]) -> f64 {
        self.weights
            .iter()
            .map(|(&(i, j), &w)| w * crate::geometry::dist(&points[i], &points[j]))
            .sum()
    }
}

/// Strictly positive multipliers, one per point.
#[derive(Debug, Clone, PartialEq)]
pub struct XVector(Vec<f64>);

impl XVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidArgument(format!("multiplier {v} is not strictly positive")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

pub fn young_upper_bound(spec: &WeightedSumSpec, x: &XVector) -> Result<f64> {
    let x = x.values();
    if x.len() != spec.n {
        return Err(Error::DimensionMismatch { expected: spec.n, found: x.len() });
    }
    let pair_term: f64 = spec.weights.iter().map(|(&(i, j), &w)| w * w / (x[i] * x[j])).sum();
    let radius_term: f64 = spec.radii.iter().zip(x).map(|(l, xi)| l * l * xi).sum();
    let x_sum: f64 = x.iter().sum();
    Ok(pair_term.sqrt() * radius_term.sqrt() * x_sum.sqrt())
}

/// Weight pattern of `f(i)` on `i` unit vectors: `|u1 u2|`, `3/2` on pairs
/// joining `u1` or `u2` to `u3..ui`, and `2` on pairs inside `u3..ui`.
pub fn build_f_spec(i: usize) -> Result<WeightedSumSpec> {
    if !(MIN_BLOCK..=MAX_BLOCK).contains(&i) {
        return Err(Error::InvalidArgument(format!("f({i}) is defined for 3..=10")));
    }
    let mut w = BTreeMap::new();
    w.insert((0, 1), 1.0);
    for j in 2..i {
        w.insert((0, j), 1.5);
        w.insert((1, j), 1.5);
        for k in j + 1..i {
            w.insert((j, k), 2.0);
        }
    }
    WeightedSumSpec::new(i, w, vec![1.0; i])
}

/// Weight pattern of `g(n)` on `n + 1` unit vectors: the `f(n)` pattern plus
/// an apex `u_{n+1}` joined with weight `1/2` to `u1`, `u2` and weight `1` to
/// `u3..un`.
pub fn build_g_spec(n: usize) -> Result<WeightedSumSpec> {
    if !(MIN_BLOCK..=MAX_BLOCK).contains(&n) {
        return Err(Error::InvalidArgument(format!("g({n}) is defined for 3..=10")));
    }
    let apex = n;
    let mut w = build_f_spec(n)?.weights;
    w.insert((0, apex), 0.5);
    w.insert((1, apex), 0.5);
    for j in 2..n {
        w.insert((j, apex), 1.0);
    }
    WeightedSumSpec::new(n + 1, w, vec![1.0; n + 1])
}

pub fn f_x_vector(i: usize) -> Result<XVector> {
    let row = constants::f_row(i).ok_or_else(|| Error::InvalidArgument(format!("no f row for i = {i}")))?;
    let mut v = vec![row.x12, row.x12];
    v.resize(i, row.x_rest);
    XVector::new(v)
}

pub fn g_x_vector(n: usize) -> Result<XVector> {
    let row = constants::g_row(n).ok_or_else(|| Error::InvalidArgument(format!("no g row for n = {n}")))?;
    let mut v = vec![row.x12, row.x12];
    v.resize(n, row.x_mid);
    v.push(row.x_last);
    XVector::new(v)
}

/// Integer numerator of the per-slot constant in `B_{n,i}` for `i >= 3`:
/// `1 + 3(n-i) + (i-2) + 2(n-i)(i-2)`, which is over `n - 1`.
pub fn b_ni_constant_numerator(n: usize, i: usize) -> i64 {
    let (n, i) = (n as i64, i as i64);
    1 + 3 * (n - i) + (i - 2) + 2 * (n - i) * (i - 2)
}

/// Where a recomputed value came from.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub table: &'static str,
    pub row: usize,
    pub x: Vec<f64>,
}

/// The block coefficients `B_n`, `B_{n,i}` together with the bounds they came
/// from.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientTable {
    pub r_star: f64,
    pub f_bound: BTreeMap<usize, f64>,
    pub g_bound: BTreeMap<usize, f64>,
    pub b_n: BTreeMap<usize, f64>,
    /// Keyed by `(n, i)` for `1 <= i <= n`, `3 <= n <= 10`. Serialized as
    /// `{"n": {"i": value}}`.
    #[serde(serialize_with = "nested_pairs")]
    pub b_ni: BTreeMap<(usize, usize), f64>,
    pub f_provenance: BTreeMap<usize, Provenance>,
    pub g_provenance: BTreeMap<usize, Provenance>,
}

fn nested_pairs<S: serde::Serializer>(map: &BTreeMap<(usize, usize), f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut nested: BTreeMap<usize, BTreeMap<usize, f64>> = BTreeMap::new();
    for (&(n, i), &v) in map {
        nested.entry(n).or_default().insert(i, v);
    }
    serde::Serialize::serialize(&nested, s)
}

impl CoefficientTable {
    pub fn b_n(&self, n: usize) -> f64 {
        self.b_n[&n]
    }

    pub fn b_ni(&self, n: usize, i: usize) -> f64 {
        self.b_ni[&(n, i)]
    }

    /// Cached table computed on first use.
    pub fn shared() -> &'static CoefficientTable {
        static TABLE: OnceLock<CoefficientTable> = OnceLock::new();
        TABLE.get_or_init(compute_table)
    }
}

/// Evaluates every `f`/`g` bound at its published multiplier row and derives
/// `B_n = g(n)/(n-1)`, `B_{n,1} = 3/2`, `B_{n,2} = 3` and, for `i >= 3`,
/// `B_{n,i} = (f(i) + 1 + 3(n-i) + (i-2) + 2(n-i)(i-2)) / (n-1)`.
pub fn compute_table() -> CoefficientTable {
    let mut f_bound = BTreeMap::new();
    let mut f_provenance = BTreeMap::new();
    for i in MIN_BLOCK..=MAX_BLOCK {
        let x = f_x_vector(i).expect("embedded f row");
        let v = young_upper_bound(&build_f_spec(i).expect("f spec"), &x).expect("f bound");
        f_bound.insert(i, v);
        f_provenance.insert(i, Provenance { table: "f", row: i, x: x.values().to_vec() });
    }
    let mut g_bound = BTreeMap::new();
    let mut g_provenance = BTreeMap::new();
    for n in MIN_BLOCK..=MAX_BLOCK {
        let x = g_x_vector(n).expect("embedded g row");
        let v = young_upper_bound(&build_g_spec(n).expect("g spec"), &x).expect("g bound");
        g_bound.insert(n, v);
        g_provenance.insert(n, Provenance { table: "g", row: n, x: x.values().to_vec() });
    }
    let mut b_n = BTreeMap::new();
    let mut b_ni = BTreeMap::new();
    for n in MIN_BLOCK..=MAX_BLOCK {
        let denom = (n - 1) as f64;
        b_n.insert(n, g_bound[&n] / denom);
        b_ni.insert((n, 1), 1.5);
        b_ni.insert((n, 2), 3.0);
        for i in 3..=n {
            let c = b_ni_constant_numerator(n, i) as f64;
            b_ni.insert((n, i), (f_bound[&i] + c) / denom);
        }
    }
    CoefficientTable { r_star: R_STAR, f_bound, g_bound, b_n, b_ni, f_provenance, g_provenance }
}

/// Bound on the averaged 3-block path when the fourth point sits at distance
/// `ratio * d3` and the top three at `d3` (in units of `d3`).
///
/// Uses the averaged path coefficients for `n = 3` as weights, radii
/// `(1, 1, 1, ratio)` and the dedicated multiplier row.
pub fn n3_special_bound(ratio: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::InvalidArgument(format!("ratio {ratio} outside [0, 1]")));
    }
    let coeffs = average_path_coefficients(3, EndpointReading::EndsAtOneOrTwo)?;
    let weights: BTreeMap<_, _> = coeffs
        .iter()
        .filter(|(_, c)| **c != Rational64::from_integer(0))
        .map(|(&(i, j), c)| ((i - 1, j - 1), c.to_f64().expect("small rational")))
        .collect();
    let spec = WeightedSumSpec::new(4, weights, vec![1.0, 1.0, 1.0, ratio])?;
    young_upper_bound(&spec, &XVector::new(N3_X.to_vec())?)
}
