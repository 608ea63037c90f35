use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fano-delta"))
        .args(args)
        .env_remove("FANO_DELTA_DEEP")
        .output()
        .expect("run binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let o = bin(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

/// Every rational string in a JSON document.
fn rationals(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) if s.parse::<fano_delta::Rational>().is_ok() => out.push(s.clone()),
        Value::Array(xs) => xs.iter().for_each(|x| rationals(x, out)),
        Value::Object(m) => m.values().for_each(|x| rationals(x, out)),
        _ => {}
    }
}

#[test]
fn documented_examples() {
    let v = json(&["bundle", "--n", "1", "--r", "2", "--delta-v", "1", "--a", "0", "--b", "0"]);
    assert_eq!(v["value"], "6/7");
    assert_eq!(v["minimizers"], serde_json::json!(["V0"]));
    assert_eq!(json(&["cone", "--n", "2", "--r", "1", "--delta-v", "ge1", "--c", "0"])["value"], "2/3");
    assert_eq!(json(&["angle", "--n", "2", "--lambda", "2/3"])["endpoint"], "3/4");
}

#[test]
fn every_document_is_versioned() {
    for args in [
        vec!["bundle", "--n", "2", "--r", "3/2", "--delta-v", "4/5"],
        vec!["cone", "--n", "1", "--r", "1", "--delta-v", "1"],
        vec!["cone-iterate", "--n", "2", "--d", "3", "--i", "2"],
        vec!["branched-cone", "--n", "2", "--k", "2", "--d", "3", "--l", "1"],
        vec!["angle", "--n", "3", "--lambda", "1/2"],
        vec!["calabi", "--n", "1", "--r", "2"],
    ] {
        assert_eq!(json(&args)["schema"], "1", "{args:?}");
    }
}

#[test]
fn human_and_json_agree_on_rationals() {
    let cases: [&[&str]; 4] = [
        &["bundle", "--n", "1", "--r", "2", "--delta-v", "13/14"],
        &["cone", "--n", "3", "--r", "5", "--delta-v", "1/2", "--c", "1/4"],
        &["cone-iterate", "--n", "3", "--d", "2", "--i", "3", "--delta-v0", "3/4"],
        &["calabi", "--n", "2", "--r", "3", "--mu", "2"],
    ];
    for args in cases {
        let v = json(args);
        let human = stdout(&bin(args));
        let mut rs = Vec::new();
        rationals(&v, &mut rs);
        assert!(!rs.is_empty());
        for r in rs {
            assert!(human.contains(&r), "{r} missing from human output of {args:?}:\n{human}");
        }
    }
}

#[test]
fn check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["branched-cone", "--n", "3", "--k", "2", "--d", "5", "--l", "1"];
    let path = dir.path().join("out.json");
    let mut full = args.to_vec();
    full.push("--json");
    std::fs::write(&path, bin(&full).stdout).unwrap();
    let p = path.to_str().unwrap();
    let mut check = args.to_vec();
    check.extend(["--check", p]);
    let o = bin(&check);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = bin(&["branched-cone", "--n", "4", "--k", "2", "--d", "5", "--l", "1", "--check", p]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn exit_code_taxonomy() {
    assert_eq!(bin(&["bundle", "--n", "1", "--r", "two", "--delta-v", "1"]).status.code(), Some(2));
    assert_eq!(bin(&["bundle", "--n", "1", "--r", "2", "--delta-v", "0.5"]).status.code(), Some(2));
    let o = bin(&["bundle", "--n", "1", "--r", "1/2", "--delta-v", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("1-r < a < 1"), "{err}");
    assert_eq!(bin(&["cone", "--n", "1", "--r", "1", "--delta-v", "1", "--c", "1"]).status.code(), Some(3));
    assert_eq!(bin(&["branched-cone", "--n", "2", "--k", "2", "--d", "2", "--l", "1"]).status.code(), Some(3));
    assert_eq!(bin(&["angle", "--n", "2", "--lambda", "1/4"]).status.code(), Some(3));
}

#[test]
fn calabi_csv() {
    let o = bin(&["calabi", "--n", "1", "--r", "2", "--csv", "4"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "tau,phi,phi_decimal");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("1,0,"));
    assert!(lines[5].starts_with("3,0,"));
}

#[test]
fn verify_default_and_env_deep() {
    let o = bin(&["verify", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["summary"]["deep"], false);
    let o = Command::new(env!("CARGO_BIN_EXE_fano-delta"))
        .args(["verify", "--json"])
        .env("FANO_DELTA_DEEP", "1")
        .output()
        .unwrap();
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["deep"], true);
}

#[test]
fn verify_grid_file() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.json");
    std::fs::write(&grid, r#"{"n":[1,2],"r":["2"],"a":["0"],"b":["0"],"c":["0"],"delta":["1","ge1"]}"#).unwrap();
    let report = dir.path().join("report.json");
    let o = bin(&["verify", "--grid", grid.to_str().unwrap(), "--json", report.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 failed"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert!(v["reports"].as_array().unwrap().iter().any(|r| r["target"].as_str().unwrap().contains("bundle(n=2, r=2")));
    assert_eq!(bin(&["verify", "--grid", "/no/such/grid.json"]).status.code(), Some(2));
}
