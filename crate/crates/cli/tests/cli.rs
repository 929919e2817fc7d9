use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn warmq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_warmq"))
        .args(args)
        .env_remove("WARMQ_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = warmq(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn assert_schema(name: &str, v: &Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{v}");
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn steady_two_qubits_at_unit_occupation() {
    let v = json(&["steady", "--nbar", "1", "--qubits", "2"]);
    assert_schema("steady", &v);
    let d: Vec<f64> = v["diagonal"].as_array().unwrap().iter().map(f).collect();
    assert_eq!(d, vec![1.0 / 9.0, 2.0 / 9.0, 2.0 / 9.0, 4.0 / 9.0]);
}

#[test]
fn steady_at_zero_temperature() {
    let v = json(&["steady", "--nbar", "0", "--qubits", "2"]);
    let d: Vec<f64> = v["diagonal"].as_array().unwrap().iter().map(f).collect();
    assert_eq!(d, vec![0.0, 0.0, 0.0, 1.0]);
}

#[test]
fn steady_from_temperature() {
    let v = json(&["steady", "--omega", "1", "--kt", "1.4427", "--qubits", "1"]);
    assert!((f(&v["nbar"]) - 1.0).abs() < 1e-4);
    assert!((f(&v["diagonal"][0]) - 1.0 / 3.0).abs() < 1e-4);
    assert!((f(&v["diagonal"][1]) - 2.0 / 3.0).abs() < 1e-4);
}

#[test]
fn floats_have_seventeen_significant_digits() {
    let out = stdout(&warmq(&["steady", "--nbar", "1"]));
    assert!(out.contains("1.1111111111111110e-1"), "{out}");
}

#[test]
fn occupation_sources_are_exclusive() {
    for args in [
        &["steady", "--nbar", "1", "--omega", "1", "--kt", "1"][..],
        &["steady", "--omega", "1"][..],
        &["steady"][..],
        &["steady", "--nbar", "-1"][..],
        &["steady", "--nbar", "nan"][..],
    ] {
        assert_eq!(warmq(args).status.code(), Some(2), "{args:?}");
    }
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn lambda_column(rows: &[Vec<String>]) -> Vec<f64> {
    rows.iter().map(|r| r[2].parse().unwrap()).collect()
}

#[test]
fn trajectory_csv_layout() {
    let out = warmq(&["trajectory", "--nbar", "1", "--state", "bell+", "--points", "41"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["t", "omega_t", "lambda", "concurrence", "classification"]);
    assert_eq!(rows.len(), 41);
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 0.0);
    let lambda = lambda_column(&rows);
    let changes = lambda.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    assert_eq!(changes, 1);
}

#[test]
fn trajectory_zero_temperature_bell_stays_entangled() {
    let out = warmq(&["trajectory", "--nbar", "0", "--state", "bell-", "--points", "50"]);
    let (_, rows) = csv_rows(&stdout(&out));
    assert!(lambda_column(&rows).iter().all(|&l| l > 0.0));
    assert!(rows.iter().all(|r| r[4] == "entangled"));
}

#[test]
fn trajectory_mixed_state_dies_even_when_cold() {
    let out = warmq(&["trajectory", "--nbar", "0", "--state", "mixed", "--points", "50"]);
    let (_, rows) = csv_rows(&stdout(&out));
    let lambda = lambda_column(&rows);
    assert!((lambda[0] - 0.5).abs() < 1e-12);
    assert!(*lambda.last().unwrap() <= 0.0);
}

#[test]
fn trajectory_json_validates() {
    let v = json(&["trajectory", "--nbar", "0.5", "--points", "7", "--format", "json"]);
    assert_schema("trajectory", &v);
    assert_eq!(v["points"].as_array().unwrap().len(), 7);
    let p = &v["points"][3];
    assert!((f(&p["t_scaled"]) - 2.0 * f(&p["t"])).abs() < 1e-15);
}

#[test]
fn trajectory_rejects_wrong_size() {
    assert_eq!(warmq(&["trajectory", "--nbar", "1", "--state", "random:3", "--qubits", "3"]).status.code(), Some(2));
    assert_eq!(warmq(&["trajectory", "--nbar", "1", "--points", "1"]).status.code(), Some(2));
    assert_eq!(warmq(&["trajectory", "--nbar", "1", "--state", "diagonal:0.5,0.5"]).status.code(), Some(2));
    assert_eq!(warmq(&["trajectory", "--nbar", "1", "--state", "bogus"]).status.code(), Some(2));
}

#[test]
fn esd_reports_root_and_closed_form_estimate() {
    let v = json(&["esd", "--nbar", "1", "--gamma", "1", "--state", "bell+"]);
    assert_schema("esd", &v);
    assert_eq!(v["kind"], "finite");
    assert!((f(&v["gamma_sq_at_esd"]) - 0.39401664065177244).abs() < 1e-9);
    assert!((f(&v["paper_formula_value"]) - 1.4307).abs() < 1e-4);
    assert!((f(&v["t_esd_scaled"]) - 3.0 * f(&v["t_esd"])).abs() < 1e-14);
}

#[test]
fn esd_cold_bell_is_asymptotic() {
    let v = json(&["esd", "--nbar", "0", "--state", "bell+"]);
    assert_schema("esd", &v);
    assert_eq!(v["kind"], "asymptotic");
    assert!(v["t_esd"].is_null() && v["paper_formula_value"].is_null());
}

#[test]
fn esd_thermal_state_is_already_separable() {
    let v = json(&["esd", "--nbar", "1", "--state", "thermal"]);
    assert_schema("esd", &v);
    assert_eq!(v["kind"], "finite");
    assert_eq!(f(&v["t_esd"]), 0.0);
    assert_eq!(v["already_separable"], true);
}

#[test]
fn esd_rescales_with_gamma() {
    let a = json(&["esd", "--nbar", "2", "--gamma", "1"]);
    let b = json(&["esd", "--nbar", "2", "--gamma", "4"]);
    assert!((f(&a["t_esd"]) - 4.0 * f(&b["t_esd"])).abs() < 1e-9);
    assert!((f(&a["t_esd_scaled"]) - f(&b["t_esd_scaled"])).abs() < 1e-9);
}

#[test]
fn neighborhood_small_radius() {
    let v = json(&["neighborhood", "--nbar", "1", "--qubits", "2", "--epsilon", "0.01", "--samples", "100000", "--seed", "7"]);
    assert_schema("neighborhood", &v);
    assert_eq!(v["npt_found"], 0);
    assert!(f(&v["boundary_estimate"]) > 0.01);
}

#[test]
fn neighborhood_zero_radius() {
    let v = json(&["neighborhood", "--nbar", "1", "--epsilon", "0", "--samples", "50", "--restarts", "0"]);
    assert_schema("neighborhood", &v);
    assert_eq!(v["npt_found"], 0);
    assert!(v["boundary_estimate"].is_null());
}

#[test]
fn neighborhood_is_byte_identical_for_a_seed() {
    let args = ["neighborhood", "--state", "diagonal:0.1,0.2,0.3,0.4", "--epsilon", "0.2", "--samples", "3000", "--seed", "11"];
    let a = warmq(&args);
    let b = warmq(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_warmq"));
        c.args(["neighborhood", "--nbar", "1", "--epsilon", "0.3", "--samples", "500", "--restarts", "0"]);
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        match env {
            Some(e) => c.env("WARMQ_SEED", e),
            None => c.env_remove("WARMQ_SEED"),
        };
        c.output().unwrap()
    };
    let from_env = run(Some("5"), None);
    let from_flag = run(Some("99"), Some("5"));
    assert_eq!(from_env.stdout, from_flag.stdout);
    let v: Value = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(run(Some("not-a-number"), None).status.code(), Some(2));
}

#[test]
fn validate_default_grid_passes() {
    let v = json(&["validate"]);
    assert_schema("validate", &v);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn validate_detects_a_rate_error() {
    let out = warmq(&["validate", "--grid", "0.5,1", "--inject-rate-error", "1e-3"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_schema("validate", &v);
    assert_eq!(v["checks"][0]["passed"], false);
}

#[test]
fn validate_empty_grid_is_a_config_error() {
    assert_eq!(warmq(&["validate", "--grid", ""]).status.code(), Some(2));
    assert_eq!(warmq(&["validate", "--grid", "1,-2"]).status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# two warm qubits\nnbar = 1\nqubits=2\nstate = bell+\npoints = 9\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = warmq(&["trajectory", "--config", cfg]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(csv_rows(&stdout(&out)).1.len(), 9);
    let out = warmq(&["trajectory", "--config", cfg, "--points", "4"]);
    assert_eq!(csv_rows(&stdout(&out)).1.len(), 4);

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "temperature = 3\n").unwrap();
    assert_eq!(warmq(&["steady", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(warmq(&["steady", "--config", "/nonexistent/warmq.cfg"]).status.code(), Some(2));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("steady.json");
    let out = warmq(&["steady", "--nbar", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_schema("steady", &v);
}

#[test]
fn csv_only_for_trajectory() {
    assert_eq!(warmq(&["steady", "--nbar", "1", "--format", "csv"]).status.code(), Some(2));
}
