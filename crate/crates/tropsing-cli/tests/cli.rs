use std::process::{Command, Output};

use serde_json::{json, Value};
use tropsing::geom::{LatticePolytope, PolytopeJson};

fn fixture(name: &str) -> String {
    format!("{}/../tropsing/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropsing")).args(args).env_remove("TROPSING_SEED").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn delta_example() {
    let out = run(&["delta", "--b1", "2", "--b2", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), json!({"delta": 1, "milnor": 2, "j_sequence": [1]}));
}

#[test]
fn delta_with_coefficient_file() {
    let dir = std::env::temp_dir().join(format!("tropsing-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("coeffs.json");
    // Ratios agree at k = 2: 0-degenerate, so the oracle exceeds the closed form.
    std::fs::write(&path, r#"{"f1": {"2": [1, 1], "3": [2, 1]}, "f2": {"4": [1, 1], "5": [4, 1]}}"#).unwrap();
    let out = run(&["delta", "--b1", "2,3", "--b2", "4,5", "--coeffs", path.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["nondegenerate"], json!(false));
    assert!(v["oracle"].as_u64().unwrap() > v["delta"].as_u64().unwrap());
}

#[test]
fn strata_t0_example() {
    let out = run(&["strata", "--b1", "0,1,2", "--b2", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!((entries[0]["name"].as_str(), entries[0]["degree"].as_u64()), (Some("T_0"), Some(3)));
}

#[test]
fn input_errors_exit_2() {
    let dup = run(&["project", "--a1", &fixture("duplicate.json"), "--a2", &fixture("unit_lift_a2.json")]);
    assert_eq!(dup.status.code(), Some(2));
    assert_eq!(json_of(&dup)["error"]["kind"], "DuplicatePoint");
    let exceptional = run(&["strata", "--b1", "0", "--b2", "0,1"]);
    assert_eq!(exceptional.status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["utrop", "--a1", &fixture("unit_lift_a1.json"), "--a2", &fixture("unit_lift_a2.json"), "--dir", "2,4"]).status.code(), Some(2));
}

#[test]
fn cross_check_disagreement_exits_3_with_context() {
    let out = run(&["strata", "--b1", "0,1,3", "--b2", "0,2,3", "--cross-check"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json_of(&out);
    assert_eq!(v["error"]["kind"], "InconsistencyDetected");
    assert!(v["error"]["context"].is_array());
}

#[test]
fn unit_lift_pipeline() {
    let (a1, a2) = (fixture("unit_lift_a1.json"), fixture("unit_lift_a2.json"));
    let census = json_of(&run(&["project", "--a1", &a1, "--a2", &a2]));
    assert_eq!((census["nodes"].as_u64(), census["total_delta"].as_u64()), (Some(0), Some(1)));
    let utrop = json_of(&run(&["utrop", "--a1", &a1, "--a2", &a2]));
    assert_eq!(utrop["thsum_total"], 1);
    assert_eq!((utrop["g_direct"].as_u64(), utrop["g_closed"].as_u64()), (Some(8), Some(0)));
    let newton: PolytopeJson = serde_json::from_slice(&run(&["newton", "--a1", &a1, "--a2", &a2]).stdout).unwrap();
    let triangle = LatticePolytope::from_lattice_points(&[vec![0, 0], vec![0, 2], vec![3, 0]]).unwrap();
    assert_eq!(LatticePolytope::try_from(&newton).unwrap(), triangle);
}

#[test]
fn outputs_are_deterministic_and_round_trip() {
    let (a1, a2) = (fixture("unit_lift_a1.json"), fixture("unit_lift_a2.json"));
    for args in [
        vec!["project", "--a1", &a1, "--a2", &a2],
        vec!["utrop", "--a1", &a1, "--a2", &a2],
        vec!["strata", "--b1", "0,1,2", "--b2", "0,4", "--cross-check"],
        vec!["delta", "--b1", "4", "--b2", "6,7", "--oracle"],
        vec!["vdm-sweep", "--k", "2", "--max-order", "6", "--max-exp", "5", "--jobs", "2"],
    ] {
        let (first, second) = (run(&args), run(&args));
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        let v = json_of(&first);
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v);
        assert!(!String::from_utf8_lossy(&first.stdout).contains('.'), "no floats in {args:?}");
    }
}

#[test]
fn conjecture_counterexamples_exit_3() {
    let out = run(&["vdm-sweep", "--k", "3", "--max-order", "6", "--max-exp", "4"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json_of(&out);
    assert_eq!(v["error"]["kind"], "ConjectureCounterexample");
    assert_eq!(v["error"]["context"]["contradicts_proved_range"], false);
}

#[test]
fn selftest_subset_passes() {
    let out = run(&["--report", "selftest", "--only", "3,5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!(v["outputs"]["criteria"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}
