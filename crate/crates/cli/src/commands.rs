use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use bdst::coeff::CoefficientTable;
use bdst::geometry::{load_points, write_points, PointSet, StarInstance};
use bdst::lower_bound::{self, alpha_star, build_instance, MAX_VERIFIED_N};
use bdst::lp::{self, format_rational, LpOutcome};
use bdst::mst::{mst as euclid_mst, TreeJson};
use bdst::oracles::{
    average_path_coefficients, closed_form_path_coefficients, exact_bounded_degree_mst, shortest_path_through,
    EndpointReading, PathQuery, PathStart,
};
use bdst::starpath::{build_path, BlockRecord};
use bdst::tree3::{degree3_tree_with, verify as verify_tree3, Tree3Options};

use crate::{CliError, Report};

fn read_points(path: &Path) -> Result<PointSet, CliError> {
    let file = File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    load_points(file).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError { code: 1, message: e.to_string() })?;
    text.push('\n');
    Ok(text)
}

fn ok<T: Serialize>(value: &T) -> Result<Report, CliError> {
    Ok(Report { body: to_json(value)?, failure: None })
}

fn checked<T: Serialize>(value: &T, check: bdst::Result<()>) -> Result<Report, CliError> {
    Ok(Report { body: to_json(value)?, failure: check.err().map(|e| e.to_string()) })
}

pub fn mst(points: &Path) -> Result<Report, CliError> {
    let ps = read_points(points)?;
    ok(&euclid_mst(&ps).to_json())
}

#[derive(Serialize)]
struct Tree3Json {
    #[serde(flatten)]
    tree: TreeJson,
    mst_weight: f64,
    ratio: f64,
}

pub fn tree3(points: &Path, keep_if_feasible: bool, tolerance: f64) -> Result<Report, CliError> {
    let ps = read_points(points)?;
    let result = degree3_tree_with(&ps, Tree3Options { keep_if_feasible })?;
    let body = Tree3Json { tree: result.tree.to_json(), mst_weight: result.mst.total_weight(), ratio: result.ratio() };
    checked(&body, verify_tree3(&ps, &result, tolerance))
}

#[derive(Serialize)]
struct StarpathJson<'a> {
    center_index: usize,
    /// Point indices in visiting order, center excluded.
    order: Vec<usize>,
    length: f64,
    planned_length: f64,
    star_weight: f64,
    ratio: f64,
    blocks: &'a [BlockRecord],
}

pub fn starpath(points: &Path, center: usize, tolerance: f64) -> Result<Report, CliError> {
    let ps = read_points(points)?;
    let star = StarInstance::from_point_set(&ps, center)?;
    let plan = build_path(&star)?;
    let body = StarpathJson {
        center_index: center,
        order: plan.order.iter().map(|&i| if i < center { i } else { i + 1 }).collect(),
        length: plan.length,
        planned_length: plan.planned_length,
        star_weight: plan.star_weight,
        ratio: plan.ratio(),
        blocks: &plan.blocks,
    };
    checked(&body, plan.verify(&star, tolerance))
}

pub fn bounds_table() -> Result<Report, CliError> {
    ok(CoefficientTable::shared())
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
enum LpJson {
    Infeasible {
        dropped: Vec<String>,
        /// The derived contradiction, e.g. `0 > 0`.
        contradiction: String,
        multipliers: BTreeMap<String, String>,
    },
    Feasible {
        dropped: Vec<String>,
        /// Exact satisfying point `d1..d12`.
        witness: Vec<String>,
    },
}

pub fn verify_lp(drop: &[String]) -> Result<Report, CliError> {
    let mut system = lp::build_block_system();
    for id in drop {
        if system.constraint(id).is_none() {
            return Err(CliError::input(format!("no constraint with id {id:?}")));
        }
        system = system.without(id);
    }
    let dropped = drop.to_vec();
    match lp::analyze(&system)? {
        LpOutcome::Infeasible(cert) => {
            let contradiction = cert.verify(&system)?;
            ok(&LpJson::Infeasible { dropped, contradiction: contradiction.to_string(), multipliers: cert.to_json() })
        }
        LpOutcome::Feasible(point) => {
            let body = LpJson::Feasible { dropped, witness: point.iter().map(format_rational).collect() };
            Ok(Report { body: to_json(&body)?, failure: Some("the system is feasible".into()) })
        }
    }
}

#[derive(Serialize)]
struct Eq2Row {
    n: usize,
    pairs: usize,
    matches: bool,
    /// `"i-j": "p/q"` for every label pair.
    coefficients: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct Eq2Counterexample {
    n: usize,
    pair: (usize, usize),
    closed_form: String,
    literal_reading: String,
}

#[derive(Serialize)]
struct Eq2Json {
    rows: Vec<Eq2Row>,
    literal_reading_counterexample: Option<Eq2Counterexample>,
}

pub fn verify_eq2() -> Result<Report, CliError> {
    let mut rows = Vec::new();
    let mut counterexample = None;
    for n in 3..=8 {
        let averaged = average_path_coefficients(n, EndpointReading::EndsAtOneOrTwo)?;
        let closed = closed_form_path_coefficients(n);
        rows.push(Eq2Row {
            n,
            pairs: closed.len(),
            matches: averaged == closed,
            coefficients: averaged.iter().map(|((i, j), q)| (format!("{i}-{j}"), q.to_string())).collect(),
        });
        if counterexample.is_none() {
            let literal = average_path_coefficients(n, EndpointReading::LastTwoAreOneAndTwo)?;
            counterexample = closed.iter().find(|(pair, q)| literal.get(pair) != Some(q)).map(|(&pair, q)| {
                Eq2Counterexample {
                    n,
                    pair,
                    closed_form: q.to_string(),
                    literal_reading: literal.get(&pair).map_or_else(|| "0".into(), |v| v.to_string()),
                }
            });
        }
    }
    let failure = rows.iter().find(|r| !r.matches).map(|r| format!("coefficients differ at n = {}", r.n));
    Ok(Report { body: to_json(&Eq2Json { rows, literal_reading_counterexample: counterexample })?, failure })
}

#[derive(Serialize)]
struct PathJson {
    length: f64,
    order: Vec<usize>,
}

pub fn oracle_path(points: &Path, start: usize, ends: &[usize]) -> Result<Report, CliError> {
    let ps = read_points(points)?;
    if start >= ps.len() {
        return Err(bdst::Error::IndexOutOfRange { index: start, len: ps.len() }.into());
    }
    let query = PathQuery {
        points: &ps,
        start: PathStart::Vertex(start),
        interior: (0..ps.len()).filter(|&i| i != start).collect(),
        ends: (!ends.is_empty()).then(|| ends.to_vec()),
    };
    let sol = shortest_path_through(&query)?;
    ok(&PathJson { length: sol.length, order: sol.order })
}

pub fn oracle_bdmst(points: &Path, maxdeg: usize) -> Result<Report, CliError> {
    let ps = read_points(points)?;
    ok(&exact_bounded_degree_mst(&ps, maxdeg)?.to_json())
}

#[derive(Serialize)]
struct Checks {
    /// Largest relative error of each distance identity.
    identity_errors: BTreeMap<String, f64>,
    /// `min d(A,B) - c(A) - c(B)` over all pairs.
    min_charge_slack: f64,
    mst_weight: f64,
}

#[derive(Serialize)]
struct LowerBoundJson {
    #[serde(flatten)]
    report: lower_bound::LowerBoundReport,
    /// Present when the instance was built and checked (`N <= 3`).
    checks: Option<Checks>,
}

pub fn lowerbound(copies: usize, alpha: Option<f64>, out: Option<&PathBuf>, tolerance: f64) -> Result<Report, CliError> {
    let alpha = alpha.unwrap_or_else(alpha_star);
    let needs_instance = out.is_some() || copies <= MAX_VERIFIED_N;
    let instance = if needs_instance { Some(build_instance(copies, alpha)?) } else { None };
    if instance.is_none() && !(copies >= 1 && alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::input(format!("need N >= 1 and 0 < alpha < 1, got N = {copies}, alpha = {alpha}")));
    }
    if let (Some(inst), Some(path)) = (&instance, out) {
        let file = File::create(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        write_points(BufWriter::new(file), &inst.points)?;
    }
    let report = lower_bound::report(copies, alpha);
    let mut failure = None;
    let checks = match &instance {
        Some(inst) if copies <= MAX_VERIFIED_N => {
            let mst_weight = euclid_mst(&inst.points).total_weight();
            let identity_errors: BTreeMap<String, f64> = inst.identity_errors().into_iter().collect();
            let min_charge_slack = inst.min_charge_slack();
            if let Some((name, err)) = identity_errors.iter().find(|(_, &e)| e > tolerance) {
                failure = Some(format!("{name} identity off by {err:e}"));
            } else if (mst_weight - report.sigma).abs() > tolerance * report.sigma {
                failure = Some(format!("MST weight {mst_weight} differs from sigma {}", report.sigma));
            } else if min_charge_slack < -tolerance {
                failure = Some(format!("charge slack {min_charge_slack} is negative"));
            }
            Some(Checks { identity_errors, min_charge_slack, mst_weight })
        }
        _ => None,
    };
    Ok(Report { body: to_json(&LowerBoundJson { report, checks })?, failure })
}
