use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coamoeba")).args(args).output().expect("binary runs")
}

#[test]
fn tessellate_reports_counts() {
    let out = run(&["tessellate", "--n", "3"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("OFF"));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cells=4 facets=14 edges=36 vertices=24"), "{err}");
}

#[test]
fn geometric_formats_stop_at_three_dimensions() {
    assert_eq!(run(&["tessellate", "--n", "5", "--format", "off"]).status.code(), Some(1));
    assert!(run(&["tessellate", "--n", "5", "--format", "json"]).status.success());
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|k| dir.path().join(format!("r{k}.json"))).collect();
    for p in &paths {
        let out = run(&["verify", "--n", "3", "--report", p.to_str().unwrap()]);
        assert!(out.status.success());
        assert_eq!(String::from_utf8_lossy(&out.stdout).lines().next(), Some("n=3 pass"));
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    let a = run(&["dump", "--category", "coamoeba", "--n", "3"]);
    let b = run(&["dump", "--category", "coamoeba", "--n", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_range_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_coamoeba"))
        .args(["verify"])
        .env("COAMOEBA_MAX_N", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().filter(|l| l.starts_with("n=")).count(), 2);
}

#[test]
fn sign_flip_fails_verification() {
    let out = run(&["verify", "--n", "3", "--inject-sign-flip"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("n=3 fail"));
    assert!(text.contains("coamoeba_route"));
}

#[test]
fn unsupported_dimension_exits_one() {
    assert_eq!(run(&["verify", "--n", "9"]).status.code(), Some(1));
}

#[test]
fn quotient_writes_category() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    let out = run(&["quotient", "--n", "2", "--sublattice", "1,1;3,0", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("objects=9 index=3"));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(json["objects"].as_array().unwrap().len(), 9);
}

#[test]
fn rank_deficient_sublattice_exits_one() {
    let out = run(&["quotient", "--n", "2", "--sublattice", "1,2;2,4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("finite index"));
}

#[test]
fn malformed_sublattice_exits_one() {
    assert_eq!(run(&["quotient", "--n", "2", "--sublattice", "1,x"]).status.code(), Some(1));
}

#[test]
fn delta_window_must_cover_cones() {
    assert_eq!(run(&["dump", "--category", "delta", "--n", "3", "--window-radius", "2"]).status.code(), Some(1));
    let out = run(&["dump", "--category", "delta", "--n", "3"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["objects"].as_array().unwrap().len(), 7);
}
