//! Randomized suite over tree3 and starpath.
//!
//! Instance `id` draws its point set from the suite seed via
//! [`bdst::generate::random_suite`]; results are collected in id order, so the
//! report does not depend on the thread count.

use rayon::prelude::*;
use serde::Serialize;

use bdst::constants::R_STAR;
use bdst::generate::{random_suite, InstanceKind, SuiteCase};
use bdst::geometry::StarInstance;
use bdst::starpath::build_path;
use bdst::tree3::{degree3_tree, verify};

use crate::{CliError, Format, Report};

pub struct Params {
    pub seed: u64,
    pub instances: usize,
    pub max_n: usize,
    pub max_dim: usize,
    pub max_satellites: usize,
    pub kinds: Vec<InstanceKind>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Tree3,
    Starpath,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub task: Task,
    pub id: u64,
    pub kind: InstanceKind,
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    pub ratio: f64,
    pub max_degree: usize,
    pub ok: bool,
    pub error: String,
}

#[derive(Debug, Serialize)]
struct Summary {
    seed: u64,
    instances: usize,
    r_star: f64,
    max_tree3_ratio: f64,
    max_starpath_ratio: f64,
    failures: usize,
    rows: Vec<Row>,
}

fn tree3_row(case: &SuiteCase, tol: f64) -> Row {
    let outcome = case.points().and_then(|ps| {
        let r = degree3_tree(&ps)?;
        let check = verify(&ps, &r, tol);
        Ok((r.ratio(), r.tree.max_degree(), check))
    });
    row(Task::Tree3, case, outcome)
}

/// A star whose satellites are `case.n` generated points and whose center is
/// one extra generated point.
fn starpath_row(case: &SuiteCase, tol: f64) -> Row {
    let outcome = SuiteCase { n: case.n + 1, ..*case }.points().and_then(|ps| {
        let star = StarInstance::from_point_set(&ps, 0)?;
        let plan = build_path(&star)?;
        let check = plan.verify(&star, tol);
        Ok((plan.ratio(), 0, check))
    });
    row(Task::Starpath, case, outcome)
}

fn row(task: Task, case: &SuiteCase, outcome: bdst::Result<(f64, usize, bdst::Result<()>)>) -> Row {
    let (ratio, max_degree, error) = match outcome {
        Ok((ratio, deg, Ok(()))) => (ratio, deg, String::new()),
        Ok((ratio, deg, Err(e))) => (ratio, deg, e.to_string()),
        Err(e) => (f64::NAN, 0, e.to_string()),
    };
    Row {
        task,
        id: case.id,
        kind: case.kind,
        n: case.n,
        dim: case.dim,
        seed: case.seed,
        ratio,
        max_degree,
        ok: error.is_empty(),
        error,
    }
}

pub fn rows(p: &Params) -> Result<Vec<Row>, CliError> {
    if p.max_n < 1 || p.max_satellites < 1 {
        return Err(CliError::input("max-n and max-satellites must be at least 1"));
    }
    let trees = random_suite(p.seed, p.instances, &p.kinds, 1, p.max_n, p.max_dim)?;
    let stars = random_suite(p.seed ^ 0x5354_4152, p.instances, &p.kinds, 1, p.max_satellites, p.max_dim)?;
    let mut out: Vec<Row> = trees.par_iter().map(|c| tree3_row(c, p.tolerance)).collect();
    out.extend(stars.par_iter().map(|c| starpath_row(c, p.tolerance)).collect::<Vec<_>>());
    Ok(out)
}

fn max_ratio(rows: &[Row], task: Task) -> f64 {
    rows.iter().filter(|r| r.task == task && r.ratio.is_finite()).map(|r| r.ratio).fold(0.0, f64::max)
}

pub fn run(p: &Params, format: Format) -> Result<Report, CliError> {
    let rows = rows(p)?;
    let failures = rows.iter().filter(|r| !r.ok).count();
    let failure = (failures > 0).then(|| format!("{failures} instance(s) failed; see the error column"));
    let body = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| CliError { code: 1, message: e.to_string() })?;
            }
            let bytes = w.into_inner().map_err(|e| CliError { code: 1, message: e.to_string() })?;
            String::from_utf8(bytes).map_err(|e| CliError { code: 1, message: e.to_string() })?
        }
        Format::Json => {
            let summary = Summary {
                seed: p.seed,
                instances: p.instances,
                r_star: R_STAR,
                max_tree3_ratio: max_ratio(&rows, Task::Tree3),
                max_starpath_ratio: max_ratio(&rows, Task::Starpath),
                failures,
                rows,
            };
            let mut text = serde_json::to_string_pretty(&summary).map_err(|e| CliError { code: 1, message: e.to_string() })?;
            text.push('\n');
            text
        }
    };
    Ok(Report { body, failure })
}
