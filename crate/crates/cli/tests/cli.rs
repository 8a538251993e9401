use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squaretile"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let o = run(&full);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: Value = serde_json::from_str(&stdout(&o)).expect("valid JSON");
    assert_eq!(v["schema_version"], 1, "{args:?}");
    let again: Value = serde_json::from_str(&v.to_string()).unwrap();
    assert_eq!(v, again);
    v
}

const QUICK: [&str; 4] = ["--steps", "20000", "--runs", "3"];

#[test]
fn verify_torus_passes() {
    let mut args = vec!["verify", "--surface", "torus", "--T", "60"];
    args.extend(QUICK);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("pass"), "{out}");
    assert!(out.contains("exact sum 1 "), "{out}");
}

#[test]
fn ekz_wollmilchsau_json() {
    let v = json(&["ekz", "--surface", "eierlegende-wollmilchsau"]);
    assert_eq!(v["exponent_sum"], "1");
    assert_eq!(v["combinatorial_term"], "1/2");
    assert_eq!(v["sv_term"], "1/2");
    assert_eq!(v["c_area_coefficient"], "3/2");
}

#[test]
fn figure_four_cylinders() {
    let o = run(&["cylinders", "--surface", "figure4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("(4,2), (1,1), (3,1)"));
    let v = json(&["cylinders", "--surface", "figure4", "--direction", "-1,1"]);
    let area: u64 = v["cylinders"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["w"].as_u64().unwrap() * c["h"].as_u64().unwrap())
        .sum();
    assert_eq!(area, 12);
}

#[test]
fn explicit_permutations() {
    let v = json(&["info", "--h", "(0 1)", "--v", "(0 2)", "--n", "3"]);
    assert_eq!(v["stratum"], "H(2)");
    assert_eq!(v["genus"], 2);
    let v = json(&["info", "--h", "1,2,0", "--v", "0,1,2"]);
    assert_eq!(v["genus"], 1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["info"]).status.code(), Some(2));
    assert_eq!(
        run(&["info", "--surface", "torus", "--bogus"])
            .status
            .code(),
        Some(2)
    );

    let bad = run(&["info", "--h", "()", "--v", "()", "--n", "2"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Disconnected"));
    let bad = run(&["info", "--surface", "dodecahedron"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("UnknownSurface"));
    let bad = run(&["lyapunov", "--surface", "torus", "--runs", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("InvalidConfig"));

    let mut args = vec![
        "verify",
        "--surface",
        "l(2,2)",
        "--T",
        "30",
        "--tol-lyap",
        "0",
    ];
    args.extend(QUICK);
    assert_eq!(run(&args).status.code(), Some(3));
}

#[test]
fn every_json_path_parses() {
    json(&["info", "--surface", "l(3,2)"]);
    let v = json(&["orbit", "--surface", "l(2,2)", "--graph"]);
    assert_eq!(v["size"], 3);
    assert_eq!(v["edges"].as_array().unwrap().len(), 9);
    json(&["orbit", "--surface", "figure4"]);
    json(&["catalog"]);
    let mut args = vec!["lyapunov", "--surface", "l(2,2)"];
    args.extend(QUICK);
    let v = json(&args);
    assert_eq!(v["normalized"][0], 1.0);
    let v = json(&["count", "--surface", "torus", "--T", "2", "--per-direction"]);
    assert_eq!(v["n_area"], 4.0);
    assert_eq!(v["per_direction"].as_array().unwrap().len(), 4);
    let v = json(&["count", "--surface", "torus", "--T", "40"]);
    assert!(v["c_area_estimate"]["relative_error"].as_f64().unwrap() < 0.05);
    let mut args = vec!["verify", "--surface", "torus", "--T", "40"];
    args.extend(QUICK);
    assert_eq!(json(&args)["verdict"], "pass");
}

#[test]
fn csv_curve() {
    let o = run(&[
        "count",
        "--surface",
        "l(2,2)",
        "--T",
        "30",
        "--samples",
        "6",
        "--csv",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("T,n_area,n_area_over_T2,n_sc"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    assert!(rows
        .windows(2)
        .all(|w| w[0][1] <= w[1][1] && w[0][3] <= w[1][3]));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("squaretile-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = run(&["ekz", "--surface", "torus", "--json", "--out", p]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["exponent_sum"], "1");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn thread_count_does_not_change_results() {
    let mut base = vec!["lyapunov", "--surface", "l(3,2)"];
    base.extend(QUICK);
    let mut one = base.clone();
    one.extend(["--threads", "1"]);
    let mut three = base.clone();
    three.extend(["--threads", "3"]);
    let a = json(&one);
    let b = json(&three);
    assert_eq!(a["raw_exponents"], b["raw_exponents"]);
    assert_eq!(a["config"]["seed"], b["config"]["seed"]);
}

#[test]
fn verify_whole_catalog_with_defaults() {
    let o = run(&["verify", "--all"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert_eq!(
        out.lines().filter(|l| l.contains(": pass:")).count(),
        catalog_len()
    );
}

fn catalog_len() -> usize {
    let v = json(&["catalog"]);
    v["entries"].as_array().unwrap().len()
}
