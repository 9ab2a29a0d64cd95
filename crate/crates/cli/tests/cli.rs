use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bdst() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bdst"))
}

fn run(args: &[&str]) -> Output {
    bdst().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"))
}

fn assert_valid(name: &str, doc: &Value) {
    let schema: Value = serde_json::from_str(&fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("not JSON ({e}): {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn two_point_star(dir: &TempDir) -> String {
    write(dir, "star.txt", "# center, then two antipodal satellites\n0\n1\n-1\n")
}

fn ring_star(dir: &TempDir, satellites: usize) -> String {
    let mut text = String::from("0 0\n");
    for k in 0..satellites {
        let a = k as f64 * std::f64::consts::TAU / satellites as f64;
        text.push_str(&format!("{} {}\n", 3.0 * a.cos(), 3.0 * a.sin()));
    }
    write(dir, "ring.txt", &text)
}

#[test]
fn starpath_on_the_two_point_star_has_ratio_three_halves() {
    let dir = TempDir::new().unwrap();
    let out = run(&["starpath", "--center-index", "0", &two_point_star(&dir)]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_valid("starpath", &doc);
    assert_eq!(doc["ratio"], 1.5);
    assert_eq!(doc["length"], 3.0);
    let mut order: Vec<u64> = doc["order"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    order.sort_unstable();
    assert_eq!(order, vec![1, 2]);
}

#[test]
fn starpath_maps_back_to_file_indices() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "p.txt", "5 0\n0 0\n1 0\n");
    let doc = json_of(&run(&["starpath", "--center-index", "1", &pts]));
    assert_valid("starpath", &doc);
    assert_eq!(doc["order"], serde_json::json!([2, 0]));
    assert_eq!(doc["length"], 5.0);
}

#[test]
fn tree3_on_the_two_point_star_keeps_the_mst() {
    // the MST of three collinear points is already a path
    let dir = TempDir::new().unwrap();
    let out = run(&["tree3", &two_point_star(&dir)]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_valid("tree3", &doc);
    assert_eq!(doc["ratio"], 1.0);
    assert_eq!(doc["mst_weight"], 2.0);
}

#[test]
fn tree3_reduces_a_high_degree_mst() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "five.txt", "0 0\n1 0\n0.309017 0.951057\n-0.809017 0.587785\n-0.809017 -0.587785\n0.309017 -0.951057\n");
    let mst = json_of(&run(&["mst", &pts]));
    assert_valid("tree", &mst);
    assert_eq!(mst["max_degree"], 5);
    for extra in [&[][..], &["--keep-if-feasible"][..]] {
        let mut args = vec!["tree3", pts.as_str()];
        args.extend_from_slice(extra);
        let out = run(&args);
        assert_eq!(code(&out), 0);
        let doc = json_of(&out);
        assert_valid("tree3", &doc);
        assert!(doc["max_degree"].as_u64().unwrap() <= 3);
        assert!(doc["ratio"].as_f64().unwrap() <= 1.559);
    }
}

#[test]
fn malformed_points_exit_2_with_line_number() {
    let dir = TempDir::new().unwrap();
    let pts = write(&dir, "bad.txt", "0 0\n1 oops\n");
    let out = run(&["mst", &pts]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(out.stdout.is_empty());

    let ragged = write(&dir, "ragged.txt", "0 0\n1\n");
    assert_eq!(code(&run(&["tree3", &ragged])), 2);
    assert_eq!(code(&run(&["mst", "/nonexistent/points.txt"])), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["mst"])), 2);
    assert_eq!(code(&run(&["verify", "lp", "--bogus"])), 2);
    assert_eq!(code(&run(&["verify", "lp", "--format", "csv"])), 2);
    assert_eq!(code(&run(&["verify", "lp", "--drop", "no_such_row"])), 2);
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(&["starpath", "--center-index", "7", &two_point_star(&dir)])), 2);
    assert_eq!(code(&run(&["lowerbound", "--n", "0"])), 2);
    assert_eq!(code(&run(&["lowerbound", "--n", "1", "--alpha", "1.5"])), 2);
}

#[test]
fn verify_lp_emits_an_infeasibility_certificate() {
    let out = run(&["verify", "lp"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json_of(&out);
    assert_valid("verify_lp", &doc);
    assert_eq!(doc["status"], "infeasible");
    let multipliers = doc["multipliers"].as_object().unwrap();
    // only the equality row may carry a negative multiplier
    assert!(multipliers.iter().filter(|(id, _)| *id != "d1_norm").all(|(_, v)| !v.as_str().unwrap().starts_with('-')));
    assert!(multipliers.contains_key("block_10"));
}

#[test]
fn verify_lp_without_the_last_block_row_is_feasible() {
    let out = run(&["verify", "lp", "--drop", "block_10"]);
    assert_eq!(code(&out), 1);
    let doc = json_of(&out);
    assert_valid("verify_lp", &doc);
    assert_eq!(doc["status"], "feasible");
    assert_eq!(doc["witness"].as_array().unwrap().len(), 12);
}

#[test]
fn verify_eq2_matches_and_reports_the_literal_counterexample() {
    let out = run(&["verify", "eq2"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_valid("verify_eq2", &doc);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["matches"] == true));
    assert_eq!(rows[0]["coefficients"]["1-2"], "1/2");
    let cex = &doc["literal_reading_counterexample"];
    assert_ne!(cex["closed_form"], cex["literal_reading"]);
}

#[test]
fn bounds_table_has_fixed_first_columns() {
    let out = run(&["bounds", "table"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_valid("bounds_table", &doc);
    for n in 3..=10 {
        assert_eq!(doc["b_ni"][n.to_string()]["1"], 1.5);
        assert_eq!(doc["b_ni"][n.to_string()]["2"], 3.0);
    }
    assert_eq!(doc["r_star"], 1.559);
}

#[test]
fn oracles_on_small_inputs() {
    let dir = TempDir::new().unwrap();
    let line = write(&dir, "line.txt", "0\n1\n2\n3\n");
    let out = run(&["oracle", "path", &line, "--start", "0", "--end", "2"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_valid("oracle_path", &doc);
    assert_eq!(doc["order"], serde_json::json!([0, 1, 3, 2]));
    assert_eq!(doc["length"], 4.0);

    let ring = ring_star(&dir, 8);
    let out = run(&["oracle", "bdmst", &ring, "--maxdeg", "2"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_valid("tree", &doc);
    assert!(doc["max_degree"].as_u64().unwrap() <= 2);

    // ten points exceed the enumeration limit
    let big = ring_star(&dir, 9);
    assert_eq!(code(&run(&["oracle", "bdmst", &big])), 2);
}

#[test]
fn lowerbound_writes_instance_and_report() {
    let dir = TempDir::new().unwrap();
    let pts = dir.path().join("lb.txt");
    let out = run(&["lowerbound", "--n", "2", "--out", pts.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json_of(&out);
    assert_valid("lowerbound", &doc);
    assert_eq!(doc["points"], 17);
    assert_eq!(doc["dim"], 14);
    let sigma = doc["sigma"].as_f64().unwrap();
    assert!((doc["checks"]["mst_weight"].as_f64().unwrap() - sigma).abs() <= 1e-9 * sigma);

    let text = fs::read_to_string(&pts).unwrap();
    assert_eq!(text.lines().count(), 17);
    assert!(text.lines().all(|l| l.split_whitespace().count() == 14));
    let mst = json_of(&run(&["mst", pts.to_str().unwrap()]));
    assert!((mst["total_weight"].as_f64().unwrap() - sigma).abs() <= 1e-9 * sigma);
}

#[test]
fn lowerbound_large_n_is_formula_only() {
    let out = run(&["lowerbound", "--n", "1000"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_valid("lowerbound", &doc);
    assert!(doc["checks"].is_null());
    let (ratio, limit) = (doc["ratio"].as_f64().unwrap(), doc["limit_ratio"].as_f64().unwrap());
    assert!(ratio < limit && limit - ratio < 1e-3);
    assert!((limit - 1.4473).abs() < 1e-4);
}

#[test]
fn bench_is_deterministic_across_thread_counts() {
    let args = ["bench", "--seed", "42", "--instances", "40", "--max-n", "60"];
    let one = bdst().args(args).env("BDST_THREADS", "1").output().unwrap();
    let four = bdst().args(args).env("BDST_THREADS", "4").output().unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let doc = json_of(&one);
    assert_valid("bench", &doc);
    assert_eq!(doc["failures"], 0);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 80);
    assert!(doc["max_tree3_ratio"].as_f64().unwrap() <= 1.559);
    assert!(doc["max_starpath_ratio"].as_f64().unwrap() <= 1.559);
}

#[test]
fn bench_csv_has_one_row_per_instance() {
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("bench.csv");
    let out = run(&[
        "bench", "--seed", "3", "--instances", "10", "--max-n", "30", "--kinds", "gaussian,heavy-tailed",
        "--format", "csv", "--out", csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "task,id,kind,n,dim,seed,ratio,max_degree,ok,error");
    assert_eq!(lines.count(), 20);
}

#[test]
fn bad_thread_setting_is_an_input_error() {
    let out = bdst().args(["verify", "eq2"]).env("BDST_THREADS", "zero").output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn same_input_same_bytes() {
    let dir = TempDir::new().unwrap();
    let ring = ring_star(&dir, 9);
    for args in [vec!["tree3", ring.as_str()], vec!["starpath", "--center-index", "0", ring.as_str()]] {
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}
