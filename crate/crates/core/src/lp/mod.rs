//! The linear system over sorted star distances `d1 >= d2 >= ... >= d12`
//! whose infeasibility guarantees that some block size in `3..=10` always
//! admits a cheap enough block path, together with an exact certificate
//! checker.
//!
//! Each block row says "blocks of size `n` fail": the coefficient-weighted
//! path bound exceeds `r* (3 d3 + d4 + ... + dn)` (the top three distances
//! folded into `d3`). The size-3 row says `d4 > 0.541 d3`. If all rows could
//! hold at once the path construction could get stuck; a certificate shows
//! they cannot.
//!
//! All arithmetic on constraints and certificates is exact. The printed
//! decimals are parsed as rationals (`4.6568 = 5821/1250`).

mod simplex;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::coeff::CoefficientTable;
use crate::constants::{self, LP_VARS, N3_RATIO_DECIMAL, R_STAR_DECIMAL};
use crate::error::{Error, Result};
use simplex::{check_exact, exact_basic_solution, from_int, to_f64, Outcome, StandardForm};

pub type Rational = BigRational;

/// Parses a plain decimal such as `-12.034` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("not a decimal: {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let denom = BigInt::from(10).pow(frac.len() as u32);
    let q = Rational::new(digits, denom);
    Ok(if neg { -q } else { q })
}

fn decimal(s: &str) -> Rational {
    parse_decimal(s).expect("embedded decimal constant")
}

/// Renders a rational as `"p/q"` (or `"p"` for integers).
pub fn format_rational(q: &Rational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
        })
    }
}

/// `coeffs . d  (relation)  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub id: String,
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
    /// Block size for block rows.
    pub block: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn constraint(&self, id: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.id == id)
    }

    /// The same system with constraint `id` removed.
    pub fn without(&self, id: &str) -> Self {
        Self {
            num_vars: self.num_vars,
            constraints: self.constraints.iter().filter(|c| c.id != id).cloned().collect(),
        }
    }

    /// The system without the `d1 = 1` normalization; every remaining row is
    /// homogeneous.
    pub fn homogeneous(&self) -> Self {
        self.without(NORMALIZATION_ID)
    }
}

pub const NORMALIZATION_ID: &str = "d1_norm";
pub const N3_ID: &str = "n3_ratio";

pub fn order_id(i: usize) -> String {
    format!("order_{i}")
}

pub fn block_id(n: usize) -> String {
    format!("block_{n}")
}

fn var(i: usize) -> usize {
    i - 1
}

/// Builds the 19-row system: `d1 = 1`, the 11 ordering rows, the size-3 rule
/// `d4 > 0.541 d3`, and one row per block size `4..=10` with the printed
/// coefficients.
///
/// The size-3 row is strict: with every row closed the system is satisfied by
/// `d1 = 1`, `d3 = ... = d12 = 0`, so the strict inequality is what makes it
/// infeasible. The block rows keep the printed `>=`, which only strengthens the
/// infeasibility claim.
pub fn build_block_system() -> LinearProgram {
    let zero = || vec![Rational::zero(); LP_VARS];
    let mut constraints = Vec::new();

    let mut norm = zero();
    norm[var(1)] = from_int(1);
    constraints.push(Constraint {
        id: NORMALIZATION_ID.into(),
        coeffs: norm,
        relation: Relation::Eq,
        rhs: from_int(1),
        block: None,
    });

    for i in 1..LP_VARS {
        let mut c = zero();
        c[var(i)] = from_int(1);
        c[var(i + 1)] = from_int(-1);
        constraints.push(Constraint {
            id: order_id(i),
            coeffs: c,
            relation: Relation::Ge,
            rhs: Rational::zero(),
            block: None,
        });
    }

    let mut n3 = zero();
    n3[var(4)] = from_int(1);
    n3[var(3)] = -decimal(N3_RATIO_DECIMAL);
    constraints.push(Constraint {
        id: N3_ID.into(),
        coeffs: n3,
        relation: Relation::Gt,
        rhs: Rational::zero(),
        block: Some(3),
    });

    let r_star = decimal(R_STAR_DECIMAL);
    let half = Rational::new(1.into(), 2.into());
    for row in constants::PRINTED_ROWS {
        let n = row.n;
        let printed: Vec<Rational> = row.coeffs.iter().map(|s| decimal(s)).collect();
        let mut c = zero();
        for (slot, i) in (3..n).enumerate() {
            c[var(i)] += &printed[slot];
            c[var(i + 1)] -= &printed[slot];
        }
        let last = &printed[n - 3];
        c[var(n)] += last;
        c[var(n + 1)] -= last * &half;
        c[var(n + 2)] -= last * &half;
        let tail = &printed[n - 2];
        c[var(n + 1)] += tail;
        c[var(n + 2)] += tail;
        for (k, rhs_coeff) in folded_rhs(n).into_iter().enumerate() {
            c[k] -= &r_star * from_int(rhs_coeff);
        }
        constraints.push(Constraint {
            id: block_id(n),
            coeffs: c,
            relation: Relation::Ge,
            rhs: Rational::zero(),
            block: Some(n),
        });
    }
    LinearProgram { num_vars: LP_VARS, constraints }
}

/// Integer coefficients of `3 d3 + d4 + ... + dn` over `d1..d12`.
fn folded_rhs(n: usize) -> Vec<i64> {
    let mut v = vec![0; LP_VARS];
    v[var(3)] = 3;
    for i in 4..=n {
        v[var(i)] = 1;
    }
    v
}

/// Nonnegative multipliers (free for equalities) keyed by constraint id.
#[derive(Debug, Clone, PartialEq)]
pub struct FarkasCertificate {
    pub multipliers: BTreeMap<String, Rational>,
}

/// The contradiction `0 >= constant` (or `0 > constant` when `strict`) that a
/// valid certificate derives.
#[derive(Debug, Clone, PartialEq)]
pub struct Contradiction {
    pub constant: Rational,
    pub strict: bool,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.strict { ">" } else { ">=" };
        write!(f, "0 {rel} {}", format_rational(&self.constant))
    }
}

impl FarkasCertificate {
    /// Checks the certificate against `lp` in exact arithmetic: multipliers
    /// for inequalities are nonnegative, the combined variable coefficients
    /// vanish, and the combined constant is impossible. Ids absent from the
    /// certificate count as zero; nonzero multipliers on ids absent from `lp`
    /// are rejected.
    pub fn verify(&self, lp: &LinearProgram) -> Result<Contradiction> {
        for (id, y) in &self.multipliers {
            if !y.is_zero() && lp.constraint(id).is_none() {
                return Err(Error::Verification(format!("multiplier on unknown constraint {id}")));
            }
        }
        let mut combined = vec![Rational::zero(); lp.num_vars];
        let mut constant = Rational::zero();
        let mut strict = false;
        for c in &lp.constraints {
            let Some(y) = self.multipliers.get(&c.id) else { continue };
            if y.is_zero() {
                continue;
            }
            if c.relation != Relation::Eq && y.is_negative() {
                return Err(Error::Verification(format!("negative multiplier on {}", c.id)));
            }
            for (acc, a) in combined.iter_mut().zip(&c.coeffs) {
                *acc += y * a;
            }
            constant += y * &c.rhs;
            strict |= c.relation == Relation::Gt;
        }
        if let Some(k) = combined.iter().position(|v| !v.is_zero()) {
            return Err(Error::Verification(format!(
                "combined coefficient of d{} is {}",
                k + 1,
                format_rational(&combined[k])
            )));
        }
        if constant.is_positive() || (strict && constant.is_zero()) {
            Ok(Contradiction { constant, strict })
        } else {
            Err(Error::Verification(format!(
                "combination yields 0 {} {}, which is satisfiable",
                if strict { ">" } else { ">=" },
                format_rational(&constant)
            )))
        }
    }

    pub fn to_json(&self) -> BTreeMap<String, String> {
        self.multipliers
            .iter()
            .map(|(id, q)| (id.clone(), format_rational(q)))
            .collect()
    }
}

/// Result of analysing a system: an infeasibility certificate or an exact
/// feasible point.
#[derive(Debug, Clone)]
pub enum LpOutcome {
    Infeasible(FarkasCertificate),
    Feasible(Vec<Rational>),
}

const TOLERANCES: [f64; 3] = [1e-9, 1e-11, 1e-7];

/// Certificate if the system is infeasible, otherwise a feasible point. Every
/// answer is verified exactly before it is returned.
pub fn analyze(lp: &LinearProgram) -> Result<LpOutcome> {
    if let Some(cert) = find_certificate(lp)? {
        return Ok(LpOutcome::Infeasible(cert));
    }
    if let Some(point) = find_feasible_point(lp)? {
        return Ok(LpOutcome::Feasible(point));
    }
    Err(Error::Solver("neither a certificate nor a feasible point was found".into()))
}

/// Infeasibility certificate for `lp`. A feasible system is an error carrying
/// the witness point.
pub fn check_infeasible(lp: &LinearProgram) -> Result<FarkasCertificate> {
    match analyze(lp)? {
        LpOutcome::Infeasible(cert) => Ok(cert),
        LpOutcome::Feasible(point) => Err(Error::Feasible {
            witness: point.iter().map(format_rational).collect(),
        }),
    }
}

/// Multiplier search as a standard-form feasibility problem.
///
/// Columns: one `y_i >= 0` per inequality, `y+`/`y-` per equality, and a
/// slack `t`. Rows: `sum_i y_i a_i = 0`, `sum_i y_i b_i - t = 0`, and
/// `sum_i y_i b_i + sum_{strict} y_i = 1`. Any solution is a certificate.
fn find_certificate(lp: &LinearProgram) -> Result<Option<FarkasCertificate>> {
    let mut columns: Vec<(usize, i64)> = Vec::new();
    for (i, c) in lp.constraints.iter().enumerate() {
        columns.push((i, 1));
        if c.relation == Relation::Eq {
            columns.push((i, -1));
        }
    }
    let t_col = columns.len();
    let ncols = t_col + 1;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for k in 0..lp.num_vars {
        rows.push(
            columns
                .iter()
                .map(|&(i, s)| &lp.constraints[i].coeffs[k] * from_int(s))
                .chain(std::iter::once(Rational::zero()))
                .collect(),
        );
        rhs.push(Rational::zero());
    }
    let b_row: Vec<Rational> = columns.iter().map(|&(i, s)| &lp.constraints[i].rhs * from_int(s)).collect();
    rows.push(b_row.iter().cloned().chain(std::iter::once(from_int(-1))).collect());
    rhs.push(Rational::zero());
    rows.push(
        columns
            .iter()
            .zip(&b_row)
            .map(|(&(i, _), b)| {
                if lp.constraints[i].relation == Relation::Gt {
                    b + from_int(1)
                } else {
                    b.clone()
                }
            })
            .chain(std::iter::once(Rational::zero()))
            .collect(),
    );
    rhs.push(from_int(1));

    let Some(z) = solve_exact(&rows, &rhs, &vec![0.0; ncols])? else {
        return Ok(None);
    };
    let mut multipliers = BTreeMap::new();
    for (col, &(i, s)) in columns.iter().enumerate() {
        let entry = multipliers
            .entry(lp.constraints[i].id.clone())
            .or_insert_with(Rational::zero);
        *entry += &z[col] * from_int(s);
    }
    let cert = FarkasCertificate { multipliers };
    cert.verify(lp)?;
    Ok(Some(cert))
}

/// Maximizes a common margin `eps <= 1` on the strict rows.
///
/// Columns: `x+`, `x-` per variable, one slack per inequality, `eps` and its
/// upper-bound slack.
fn find_feasible_point(lp: &LinearProgram) -> Result<Option<Vec<Rational>>> {
    let nv = lp.num_vars;
    let ineq: Vec<usize> = (0..lp.constraints.len())
        .filter(|&i| lp.constraints[i].relation != Relation::Eq)
        .collect();
    let eps_col = 2 * nv + ineq.len();
    let ncols = eps_col + 2;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (i, c) in lp.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols];
        for k in 0..nv {
            row[k] = c.coeffs[k].clone();
            row[nv + k] = -c.coeffs[k].clone();
        }
        if let Some(s) = ineq.iter().position(|&j| j == i) {
            row[2 * nv + s] = from_int(-1);
        }
        if c.relation == Relation::Gt {
            row[eps_col] = from_int(-1);
        }
        rows.push(row);
        rhs.push(c.rhs.clone());
    }
    let mut cap = vec![Rational::zero(); ncols];
    cap[eps_col] = from_int(1);
    cap[eps_col + 1] = from_int(1);
    rows.push(cap);
    rhs.push(from_int(1));
    let mut objective = vec![0.0; ncols];
    objective[eps_col] = 1.0;

    let Some(z) = solve_exact(&rows, &rhs, &objective)? else {
        return Ok(None);
    };
    let has_strict = lp.constraints.iter().any(|c| c.relation == Relation::Gt);
    if has_strict && !z[eps_col].is_positive() {
        return Ok(None);
    }
    let x: Vec<Rational> = (0..nv).map(|k| &z[k] - &z[nv + k]).collect();
    if !satisfies(lp, &x) {
        return Err(Error::Solver("feasible point failed exact verification".into()));
    }
    Ok(Some(x))
}

/// Whether `x` satisfies every constraint exactly.
pub fn satisfies(lp: &LinearProgram, x: &[Rational]) -> bool {
    lp.constraints.iter().all(|c| {
        let lhs: Rational = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match c.relation {
            Relation::Ge => lhs >= c.rhs,
            Relation::Gt => lhs > c.rhs,
            Relation::Eq => lhs == c.rhs,
        }
    })
}

/// Float simplex to pick a basis, then an exact solve on that basis. Retries
/// with other tolerances if the exact solution is not a valid vertex.
fn solve_exact(rows: &[Vec<Rational>], rhs: &[Rational], objective: &[f64]) -> Result<Option<Vec<Rational>>> {
    let sf = StandardForm {
        rows: rows.iter().map(|r| r.iter().map(to_f64).collect()).collect(),
        rhs: rhs.iter().map(to_f64).collect(),
        objective: objective.to_vec(),
    };
    let mut saw_infeasible = false;
    for tol in TOLERANCES {
        match simplex::solve(&sf, tol).map_err(Error::Solver)? {
            Outcome::Optimal { basis } => {
                if let Some(z) = exact_basic_solution(rows, rhs, &basis, objective.len()) {
                    if check_exact(rows, rhs, &z) {
                        return Ok(Some(z));
                    }
                }
            }
            Outcome::Infeasible => saw_infeasible = true,
            Outcome::Unbounded => return Err(Error::Solver("unexpectedly unbounded".into())),
        }
    }
    if saw_infeasible {
        Ok(None)
    } else {
        Err(Error::Solver("no tolerance produced an exactly valid basis".into()))
    }
}

/// One printed coefficient next to the value recomputed from the bounds.
#[derive(Debug, Clone, Serialize)]
pub struct SlotGap {
    pub n: usize,
    /// The term the coefficient multiplies, e.g. `d3 - d4`.
    pub term: String,
    /// Name of the recomputed quantity, e.g. `B[4,3]` or `B[4]/2`.
    pub source: String,
    pub printed: f64,
    pub recomputed: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub slots: Vec<SlotGap>,
}

impl CrossCheckReport {
    pub fn min_gap(&self) -> f64 {
        self.slots.iter().map(|s| s.gap).fold(f64::INFINITY, f64::min)
    }

    pub fn max_gap(&self) -> f64 {
        self.slots.iter().map(|s| s.gap).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Pairs every printed block coefficient in `lp` with its recomputed value:
/// `B[n,i]` on `d_i - d_{i+1}` for `3 <= i < n`, `B[n,n]` on
/// `d_n - (d_{n+1} + d_{n+2})/2`, and `B[n]/2` on `d_{n+1} + d_{n+2}`. Any
/// printed value below its recomputed counterpart is an error.
pub fn cross_check_coefficients(lp: &LinearProgram, table: &CoefficientTable) -> Result<CrossCheckReport> {
    let mut slots = Vec::new();
    for c in &lp.constraints {
        let Some(n) = c.block.filter(|&n| n >= 4) else { continue };
        let row = constants::printed_row(n)
            .ok_or_else(|| Error::InvalidArgument(format!("no printed row for n = {n}")))?;
        let printed = |k: usize| to_f64(&decimal(row.coeffs[k]));
        for (k, i) in (3..n).enumerate() {
            slots.push(slot(n, format!("d{i} - d{}", i + 1), format!("B[{n},{i}]"), printed(k), table.b_ni(n, i)));
        }
        slots.push(slot(
            n,
            format!("d{n} - (d{} + d{})/2", n + 1, n + 2),
            format!("B[{n},{n}]"),
            printed(n - 3),
            table.b_ni(n, n),
        ));
        slots.push(slot(
            n,
            format!("d{} + d{}", n + 1, n + 2),
            format!("B[{n}]/2"),
            printed(n - 2),
            table.b_n(n) / 2.0,
        ));
    }
    let report = CrossCheckReport { slots };
    if let Some(bad) = report.slots.iter().find(|s| s.gap < 0.0) {
        return Err(Error::Verification(format!(
            "printed {} for {} on {} (n = {}) is below recomputed {}",
            bad.printed, bad.source, bad.term, bad.n, bad.recomputed
        )));
    }
    Ok(report)
}

fn slot(n: usize, term: String, source: String, printed: f64, recomputed: f64) -> SlotGap {
    SlotGap { n, term, source, printed, recomputed, gap: printed - recomputed }
}
