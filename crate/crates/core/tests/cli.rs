use std::fs;
use std::path::Path;
use std::process::Command;

use logrs::skeleton::{ram_cycles, Order, Skeleton};
use serde_json::Value;
use tempfile::TempDir;

fn logrs(dir: &Path, args: &[&str]) -> (i32, String) {
    logrs_env(dir, args, &[])
}

fn logrs_env(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_logrs"));
    cmd.current_dir(dir).args(args).env_remove("LOGRS_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn fixtures() -> TempDir {
    let t = TempDir::new().unwrap();
    let d = t.path();
    write(d, "square.json", r#"{"P": [], "Q": [[0, 0], [2, 0]]}"#);
    write(d, "cube.json", r#"{"P": [], "Q": [[0, 0], [0, 0], [3, 0]]}"#);
    write(d, "exp.json", r#"{"P": [[0, 0], [1, 0]], "Q": [[1, 0]], "c0": [1, 0]}"#);
    write(d, "two.json", r#"{"P": [], "Q": [[-1, 0], [0, 0], [1, 0]]}"#);
    t
}

#[test]
fn analyze_square() {
    let t = fixtures();
    let (code, _) = logrs(t.path(), &["analyze", "--out", "a", "square.json"]);
    assert_eq!(code, 0);
    let r = read_json(&t.path().join("a/report.json"));
    let finite = r["ram_data"]["finite"].as_array().unwrap();
    assert_eq!(finite.len(), 1);
    assert_eq!(finite[0]["order"], 2);
    assert!(finite[0]["pos"][0].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(r["parabolicity"]["verdict"], "Parabolic");
    assert_eq!(r["seed"], 0);
}

#[test]
fn analyze_exponential() {
    let t = fixtures();
    let (code, _) = logrs(t.path(), &["analyze", "--out", "a", "exp.json"]);
    assert_eq!(code, 0);
    let r = read_json(&t.path().join("a/report.json"));
    let inf = r["ram_data"]["infinite"].as_array().unwrap();
    assert_eq!(inf.len(), 1);
    assert!(inf[0][0].as_f64().unwrap().abs() < 1e-12 && inf[0][1].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(r["nonlinearity"]["poly_part"].as_array().unwrap().len(), 1);
}

#[test]
fn malformed_input_names_the_field() {
    let t = fixtures();
    write(t.path(), "bad.json", r#"{"P": [], "Q": [[0, 0], ["x", 0]]}"#);
    let (code, stderr) = logrs(t.path(), &["analyze", "--out", "a", "bad.json"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("Q[1][0]"), "{stderr}");
    let r = read_json(&t.path().join("a/report.json"));
    assert_eq!(r["error"]["field"], "Q[1][0]");

    write(t.path(), "truncated.json", r#"{"P": [], "Q": [[0, "#);
    assert_eq!(logrs(t.path(), &["analyze", "--out", "b", "truncated.json"]).0, 2);
    assert_eq!(
        logrs(t.path(), &["skeleton", "--z0", "1;2", "--out", "c", "cube.json"]).0,
        2
    );
    assert_eq!(logrs(t.path(), &["frobnicate", "cube.json"]).0, 2);
}

#[test]
fn skeleton_of_cube_is_one_three_cycle() {
    let t = fixtures();
    let (code, _) = logrs(t.path(), &["skeleton", "--radius", "2", "--out", "s", "cube.json"]);
    assert_eq!(code, 0);
    let g = Skeleton::from_json(&read_json(&t.path().join("s/skeleton.json"))).unwrap();
    assert_eq!(g.vertices.len(), 3);
    let ram = ram_cycles(&g).unwrap();
    assert_eq!(ram.len(), 1);
    assert_eq!(ram[0].order, Order::Finite(3));
    assert!(t.path().join("s/skeleton.svg").exists());
    assert_eq!(read_json(&t.path().join("s/run.json"))["seed"], 0);
}

#[test]
fn skeleton_of_exponential_is_a_path() {
    let t = fixtures();
    let (code, _) = logrs(
        t.path(),
        &["skeleton", "--radius", "3", "--z0", "0.4,0.7", "--out", "s", "exp.json"],
    );
    assert_eq!(code, 0);
    let g = Skeleton::from_json(&read_json(&t.path().join("s/skeleton.json"))).unwrap();
    assert_eq!((g.vertices.len(), g.edges.len()), (7, 6));
    let ram = ram_cycles(&g).unwrap();
    assert_eq!(ram.len(), 1);
    assert_eq!(ram[0].order, Order::Infinite);
}

#[test]
fn collinear_base_value_is_a_numerical_error() {
    let t = fixtures();
    let (code, stderr) = logrs(t.path(), &["skeleton", "--z0", "0,0", "--out", "s", "two.json"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("GenericityViolation"));
    let r = read_json(&t.path().join("s/skeleton.json"));
    assert_eq!(r["error"]["kind"], "GenericityViolation");
}

#[test]
fn truncation_closes_the_chain() {
    let t = fixtures();
    assert_eq!(
        logrs(t.path(), &["skeleton", "--radius", "4", "--out", "s", "exp.json"]).0,
        0
    );
    let (code, _) = logrs(t.path(), &["truncate", "--n", "2", "--out", "t", "s/skeleton.json"]);
    assert_eq!(code, 0);
    let g = Skeleton::from_json(&read_json(&t.path().join("t/truncated.json"))).unwrap();
    let ram = ram_cycles(&g).unwrap();
    assert_eq!(ram.len(), 1);
    assert_eq!(ram[0].order, Order::Finite(g.vertices.len()));
    assert_eq!(logrs(t.path(), &["truncate", "--out", "u", "s/skeleton.json"]).0, 2);
}

#[test]
fn fit_round_trip() {
    let t = fixtures();
    write(
        t.path(),
        "target.json",
        r#"{"finite": [], "infinite": [[-0.886226925452758, 0], [0.886226925452758, 0]],
            "normalization": {"value": [0, 0], "slope": [1, 0]}}"#,
    );
    write(
        t.path(),
        "init.json",
        r#"{"P": [[0, 0], [0.02, 0.01], [-0.9, 0.05]], "Q": [[1.05, 0]]}"#,
    );
    let (code, stderr) = logrs(t.path(), &["fit", "--out", "f", "target.json", "init.json"]);
    assert_eq!(code, 0, "{stderr}");
    let r = read_json(&t.path().join("f/fit.json"));
    assert_eq!(r["converged"], true);
    assert!(r["residual"].as_f64().unwrap() <= 1e-8);
    let lead = &r["pq"]["P"][2];
    assert!((lead[0].as_f64().unwrap() + 1.0).abs() < 1e-6);

    let (code, stderr) = logrs_env(
        t.path(),
        &["fit", "--out", "g", "target.json", "init.json"],
        &[("LOGRS_TOL", "-1")],
    );
    assert_eq!(code, 2);
    assert!(stderr.contains("LOGRS_TOL"));
    let (code, _) = logrs_env(
        t.path(),
        &["fit", "--out", "h", "target.json", "init.json"],
        &[("LOGRS_TOL", "1e-10")],
    );
    assert_eq!(code, 0);
    assert_eq!(read_json(&t.path().join("h/fit.json"))["tol"].as_f64(), Some(1e-10));
}

#[test]
fn validate_reports_a_corrupted_edge() {
    let t = fixtures();
    assert_eq!(logrs(t.path(), &["skeleton", "--out", "s", "cube.json"]).0, 0);
    let (code, _) = logrs(t.path(), &["validate", "--out", "v", "s/skeleton.json"]);
    assert_eq!(code, 0);
    assert_eq!(read_json(&t.path().join("v/violations.json"))["count"], 0);

    let mut g = read_json(&t.path().join("s/skeleton.json"));
    g["edges"][0]["v_side"] = g["edges"][0]["u_side"].clone();
    write(t.path(), "corrupt.json", &g.to_string());
    let (code, _) = logrs(t.path(), &["validate", "--out", "w", "corrupt.json"]);
    assert_eq!(code, 0);
    let v = read_json(&t.path().join("w/violations.json"));
    let axiom3: Vec<&Value> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["axiom"] == 3)
        .collect();
    assert_eq!(axiom3.len(), 1);
    assert_eq!(axiom3[0]["edge"], 0);
}

#[test]
fn render_draws_layers_in_order() {
    let t = fixtures();
    assert_eq!(logrs(t.path(), &["skeleton", "--out", "s", "two.json"]).0, 0);
    let (code, _) = logrs(t.path(), &["render", "--mesh", "0.1", "--out", "r", "s/skeleton.json"]);
    assert_eq!(code, 0);
    let svg = fs::read_to_string(t.path().join("r/cells.svg")).unwrap();
    let at = |id: &str| svg.find(&format!("id=\"{id}\"")).unwrap();
    assert!(at("stars") < at("slits") && at("slits") < at("edges") && at("edges") < at("labels"));
    let cells = read_json(&t.path().join("r/cells.json"));
    assert!(cells["owner"]
        .as_array()
        .unwrap()
        .iter()
        .all(|o| o.as_i64().unwrap() >= 0));
    assert_eq!(cells["seed"], 0);
}

#[test]
fn artifacts_are_byte_stable() {
    let t = fixtures();
    let runs: [&[&str]; 3] = [
        &["skeleton", "--radius", "3", "--seed", "5", "--out", "x", "exp.json"],
        &["analyze", "--mesh", "0.2", "--seed", "5", "--out", "x", "two.json"],
        &["render", "--out", "x", "x/skeleton.json"],
    ];
    for args in runs {
        assert_eq!(logrs(t.path(), args).0, 0);
        let first: Vec<(String, Vec<u8>)> = listing(&t.path().join("x"));
        assert_eq!(logrs(t.path(), args).0, 0);
        assert_eq!(first, listing(&t.path().join("x")), "{args:?}");
    }
    // A different seed picks a different base value, and says so.
    assert_eq!(
        logrs(t.path(), &["skeleton", "--seed", "6", "--out", "y", "exp.json"]).0,
        0
    );
    let run = read_json(&t.path().join("y/run.json"));
    assert_eq!(run["seed"], 6);
    assert_ne!(run["z0"], read_json(&t.path().join("x/run.json"))["z0"]);
}

fn listing(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}
