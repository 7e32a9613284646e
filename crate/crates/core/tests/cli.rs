use std::path::Path;
use std::process::{Command, Output};

use polybalance::pipeline::{BalanceResult, Instance};
use polybalance::ChebPoly;
use serde_json::Value;

fn polybalance(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polybalance"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn gen_balance_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for n in ["4", "8", "16"] {
        for seed in 0..20 {
            let seed = seed.to_string();
            let gen = polybalance(d, &["gen", "--n", n, "--seed", &seed, "--out", "inst.json"]);
            assert_eq!(code(&gen), 0, "{}", String::from_utf8_lossy(&gen.stderr));
            let bal = polybalance(d, &["balance", "--in", "inst.json", "--seed", &seed, "--out", "res.json"]);
            assert_eq!(code(&bal), 0, "{}", String::from_utf8_lossy(&bal.stderr));
            let ver = polybalance(d, &["verify", "--in", "res.json", "--instance", "inst.json"]);
            assert_eq!(code(&ver), 0, "n={n} seed={seed}: {}", String::from_utf8_lossy(&ver.stderr));
        }
    }
}

#[test]
fn tampered_result_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    polybalance(d, &["gen", "--n", "8", "--seed", "1", "--out", "inst.json"]);
    polybalance(d, &["balance", "--in", "inst.json", "--out", "res.json"]);
    let text = std::fs::read_to_string(d.join("res.json")).unwrap();
    let mut r: BalanceResult = serde_json::from_str(&text).unwrap();
    r.signs.flip(3);
    std::fs::write(d.join("bad.json"), serde_json::to_string(&r).unwrap()).unwrap();
    let out = polybalance(d, &["verify", "--in", "bad.json", "--instance", "inst.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn duplicated_polynomial_balances_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let inst = Instance {
        polys: vec![ChebPoly::basis(1), ChebPoly::basis(1)],
        degree_bound: 2,
    };
    std::fs::write(d.join("pair.json"), serde_json::to_string(&inst).unwrap()).unwrap();
    let out = polybalance(d, &["balance", "--in", "pair.json", "--solver", "brute", "--out", "r.json"]);
    assert_eq!(code(&out), 0);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(r["grid_discrepancy"], 0.0);
    assert_eq!(r["certificate"]["certified_bound"], 0.0);
}

#[test]
fn monomial_input_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let text = r#"{"polys": [{"basis": "monomial", "coeffs": [0.0, 1.0]},
                             {"basis": "chebyshev", "coeffs": [0.0, 1.0]}],
                  "degree_bound": 2}"#;
    std::fs::write(d.join("mixed.json"), text).unwrap();
    let out = polybalance(d, &["balance", "--in", "mixed.json", "--solver", "brute"]);
    assert_eq!(code(&out), 0);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["grid_discrepancy"], 0.0);
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&polybalance(d, &["balance", "--in", "missing.json"])), 1);
    std::fs::write(d.join("bad.json"), r#"{"polys": [{"basis": "legendre", "coeffs": [1.0]}], "degree_bound": 1}"#).unwrap();
    assert_eq!(code(&polybalance(d, &["balance", "--in", "bad.json"])), 1);
    // sup hypothesis violated: 2·T_1 on one polynomial
    std::fs::write(d.join("big.json"), r#"{"polys": [{"basis": "chebyshev", "coeffs": [0.0, 2.0]}], "degree_bound": 1}"#).unwrap();
    assert_eq!(code(&polybalance(d, &["balance", "--in", "big.json"])), 1);
    assert_eq!(code(&polybalance(d, &["gen", "--M", "3"])), 1);
    assert_eq!(code(&polybalance(d, &["balance", "--solver", "simplex"])), 1);
    assert_eq!(code(&polybalance(d, &["lower-bound", "--n", "30"])), 1);
}

#[test]
fn bench_brute_dominates_greedy() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = polybalance(
        d,
        &["bench", "--ns", "4,8,16", "--solvers", "brute,greedy", "--seeds", "3", "--csv", "plot.csv"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3 * 2 * 3);
    for brute in rows.iter().filter(|r| r["solver"] == "brute") {
        let greedy = rows
            .iter()
            .find(|r| r["solver"] == "greedy" && r["n"] == brute["n"] && r["seed"] == brute["seed"])
            .unwrap();
        let g = |r: &Value, k: &str| r[k].as_f64().unwrap();
        assert!(g(brute, "grid_discrepancy") <= g(greedy, "grid_discrepancy"));
        assert!(g(brute, "certified_bound") < g(brute, "bound_30_sqrt_n"));
    }
    let csv = std::fs::read_to_string(d.join("plot.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,solver,grid_discrepancy,certified_bound,bound_30_sqrt_n");
    assert_eq!(lines.count(), rows.len());
}

#[test]
fn empty_bench_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = polybalance(d, &["bench", "--ns", "4", "--solvers", "brute", "--brute-max", "2", "--csv", "p.csv"]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(d.join("p.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn rs_and_lower_bound_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = polybalance(d, &["rs", "--n", "256"]);
    assert_eq!(code(&out), 0);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["ratio"].as_f64().unwrap() <= 6.0);
    let out = polybalance(d, &["lower-bound", "--n", "6"]);
    assert_eq!(code(&out), 0);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["min_sup"].as_f64().unwrap() >= r["bound"].as_f64().unwrap());
}

#[test]
fn l2_and_degree_d_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    polybalance(d, &["gen", "--n", "8", "--l2", "--seed", "2", "--out", "l2.json"]);
    let out = polybalance(d, &["balance-l2", "--in", "l2.json", "--solver", "komlos", "--out", "r.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let ver = polybalance(d, &["verify", "--in", "r.json", "--instance", "l2.json"]);
    assert_eq!(code(&ver), 0);

    polybalance(d, &["gen", "--n", "5", "--d", "20", "--seed", "2", "--out", "dd.json"]);
    let out = polybalance(d, &["balance-d", "--in", "dd.json", "--solver", "pcolor", "--out", "r2.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(d.join("r2.json")).unwrap()).unwrap();
    assert_eq!(r["m"], 180);
    let ver = polybalance(d, &["verify", "--in", "r2.json", "--instance", "dd.json"]);
    assert_eq!(code(&ver), 0);
}
