use std::process::{Command, Output};

use serde_json::Value;

fn hypext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypext")).args(args).env_remove("HYPEXT_TOL").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn max_injrad_reports_the_radius() {
    let out = hypext(&["max-injrad", "--chi", "-1", "--n", "0", "--b", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["r"].as_f64().unwrap() - 1.2636095392328894).abs() < 1e-11);
}

#[test]
fn bad_signatures_exit_with_two() {
    assert_eq!(hypext(&["max-injrad", "--chi", "1", "--n", "0", "--b", "1"]).status.code(), Some(2));
    assert_eq!(hypext(&["pants", "--b1", "-1", "--b2", "1", "--b3", "1"]).status.code(), Some(2));
    assert_eq!(hypext(&["cutlocus", "--b1", "1", "--b2", "1", "--b3", "1", "--gamma", "4"]).status.code(), Some(2));
    assert_eq!(hypext(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn tolerance_comes_from_the_environment() {
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_hypext"))
            .args(["max-injrad", "--chi", "-2", "--n", "1", "--b", "1"])
            .env("HYPEXT_TOL", tol)
            .output()
            .unwrap()
    };
    assert_eq!(run("1e-10").status.code(), Some(0));
    assert_eq!(run("0.5").status.code(), Some(2));
    assert_eq!(run("nonsense").status.code(), Some(2));
}

#[test]
fn build_surface_writes_a_loadable_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.json");
    let svg = dir.path().join("surface.svg");
    let out = hypext(&[
        "build-surface",
        "--chi",
        "-3",
        "--n",
        "2",
        "--b",
        "1",
        "--out",
        path.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let dec = hypext::surface_builder::parse_decomposition(&text).unwrap();
    assert_eq!(dec.triangle_count(), 5);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let no_flag = hypext(&["build-surface", "--chi", "-1", "--n", "0", "--b", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(no_flag.status.code(), Some(2));
}

#[test]
fn pants_classifies_and_scans() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let out = hypext(&[
        "pants",
        "--b1",
        "1",
        "--b2",
        "1",
        "--b3",
        "40",
        "--scan",
        "32",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["case"], "Boundary");
    assert!((v["value"].as_f64().unwrap() - 20.000000020966716).abs() < 1e-9);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("s,t,u,v,l1,l2,l3,sys,is_max\n"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",1")).count(), 1);
}

#[test]
fn cutlocus_of_a_thin_domain_falls_back_to_rays() {
    let out = hypext(&["cutlocus", "--b1", "1", "--b2", "1", "--b3", "40", "--gamma", "3", "--grid", "32", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["quadrilateral_count"], 4);
}

#[test]
fn verify_runs_selected_criteria() {
    let out = hypext(&["verify", "--only", "1,4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ids: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, [1, 4]);
    assert_eq!(hypext(&["verify", "--only", "11"]).status.code(), Some(2));
}

#[test]
fn corrupted_fixtures_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("constants.json");
    let mut fx: Value = serde_json::from_str(hypext::oracle::BUNDLED_FIXTURES).unwrap();
    for c in fx["constants"].as_array_mut().unwrap() {
        if c["name"] == "threshold_b3_1_1" {
            c["value"] = Value::from(3.1);
        }
    }
    std::fs::write(&path, serde_json::to_string(&fx).unwrap()).unwrap();
    let out = hypext(&["verify", "--only", "7", "--fixtures", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL criterion  7"));
}

#[test]
fn fixtures_to_stdout_match_the_bundled_values() {
    let out = hypext(&["fixtures", "--out", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let fresh = hypext::oracle::FixtureFile::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let bundled = hypext::oracle::bundled_fixtures().unwrap();
    for f in &fresh.constants {
        assert_eq!(f.value, bundled.get(&f.name).unwrap(), "{}", f.name);
    }
}
