use std::process::{Command, Output};

use serde_json::{json, Value};

fn tropctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropctl")).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = tropctl(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("tropctl-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gauss_value_of_one_plus_t() {
    let v = json_of(&["gauss", "--poly", "1+T", "--r", "2", "--field", "Q-trivial"]);
    assert_eq!(v["value"], json!({"exp": {"2": "1"}}));
    assert_eq!(v["schema"], "tropctl.gauss/v1");
}

#[test]
fn profile_of_the_nodal_quadric() {
    let v = json_of(&["profile", "--poly", "Y^2 - X*(X-1)", "--range", "1/4:4"]);
    assert_eq!(
        v["pieces"],
        json!([{"lt": "1", "count": 1}, {"at": "1", "count": 1}, {"gt": "1", "count": 2}])
    );
}

#[test]
fn tropical_line_renders_three_rays() {
    let svg = tmp("line.svg");
    let v = json_of(&["trop", "--poly", "1+T1+T2", "--field", "Q-trivial", "--render", svg.to_str().unwrap()]);
    assert_eq!(v["dimension"], 1);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("stroke-width=\"2\"").count(), 3);
    assert!(text.starts_with("<?xml") && text.contains("version=\"1.1\""));
}

#[test]
fn render_is_a_function_of_the_artifact() {
    let (artifact, a, b) = (tmp("closure.json"), tmp("a.svg"), tmp("b.svg"));
    let out = tropctl(&[
        "closure",
        "--set",
        "t1 < 1 & t2 < t1",
        "--out",
        artifact.to_str().unwrap(),
        "--render",
        a.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = tropctl(&["render", "--input", artifact.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn artifacts_round_trip() {
    let runs: &[&[&str]] = &[
        &["trop", "--poly", "1+T1+T2"],
        &["qe", "--set", "t1 <= t2 & t2 <= 2", "--eliminate", "2"],
        &["star", "--poly", "1+T1+T2", "--at", "1,1"],
        &["skeleton-preimage", "--poly", "Y^2 - X*(X-1)", "--range", "1/4:4", "--separators", "Y;Y - X"],
        &["stabilize", "--poly", "Y^2 - X*(X-1)", "--range", "1/4:4"],
    ];
    for args in runs {
        let v = json_of(args);
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
        for key in ["set", "carrier", "cone"] {
            if let Some(s) = v.get(key) {
                let d = tropcore::linarith::DefinableSet::from_json(s).unwrap();
                assert_eq!(&d.to_json(), s, "{args:?} {key}");
            }
        }
    }
}

#[test]
fn set_operations() {
    let qe = json_of(&["qe", "--set", "t1 <= t2 & t2 <= 2", "--eliminate", "2"]);
    let d = tropcore::linarith::DefinableSet::from_json(&qe["set"]).unwrap();
    assert!(d.set_eq(&tropcore::linarith::parse_set("t1 <= 2", 1).unwrap()));
    assert_eq!(json_of(&["dim", "--set", "t1 = t2"])["dimension"], 1);
    assert_eq!(json_of(&["dim", "--set", "t1 = t2 | t1 <= 1", "--at", "1/2,1/2"])["dimension"], 2);
    assert_eq!(json_of(&["connected", "--set", "t1 < 1 | t1 > 2"])["connected"], false);
    assert_eq!(json_of(&["connected", "--set", "t1 <= 1 | t1 >= 1"])["connected"], true);
    let c = json_of(&["closure", "--set", "t1 < 1 & 1 < t1"]);
    assert_eq!(c["set"]["or"], json!([]));
}

#[test]
fn extensions_and_residues() {
    let e = json_of(&["extensions", "--poly", "Y^2 - X*(X-1)", "--r", "2"]);
    assert_eq!(e["count"], 2);
    let e = json_of(&["extensions", "--poly", "Y^2 - X*(X-1)", "--r", "1/2"]);
    assert_eq!(e["count"], 1);
    assert_eq!(e["extensions"][0]["ramification"], 2);
    let r = json_of(&["residue", "--poly", "1+T", "--r", "1"]);
    assert_eq!(r["degree"], json!({"exp": {}}));
}

#[test]
fn monomial_skeleton_preimage() {
    let v = json_of(&["skeleton-preimage", "--matrix", "1,1;0,1", "--radius", "2"]);
    assert_eq!(v["immersion"], true);
    let singular = json_of(&["skeleton-preimage", "--matrix", "1,1;1,1"]);
    assert!(singular["diagnostic"].is_string());
}

#[test]
fn exit_codes() {
    assert_eq!(tropctl(&["gauss", "--poly", "1+", "--r", "2"]).status.code(), Some(2));
    assert_eq!(tropctl(&["gauss", "--poly", "1+T", "--r", "2", "--field", "Q-real"]).status.code(), Some(2));
    assert_eq!(tropctl(&["nonsense"]).status.code(), Some(2));
    let wild = tropctl(&["stabilize", "--poly", "Y^2 - X", "--range", "1/4:4", "--field", "Q-padic:2"]);
    assert_eq!(wild.status.code(), Some(3));
    let mismatch = tropctl(&["dim", "--set", "t1 <= 1", "--at", "1,1"]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn precision_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_tropctl"))
        .env("TROPCTL_PRECISION", "lots")
        .args(["gauss", "--poly", "1+T", "--r", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_tropctl"))
        .env("TROPCTL_PRECISION", "16")
        .args(["profile", "--poly", "Y^2 - X*(X-1)", "--range", "1/4:4"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
