use std::path::PathBuf;

use theta_deform::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_UNDECIDED, EXIT_USAGE};

fn thetadeform(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("thetadeform").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("thetadeform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn exit_codes() {
    assert_eq!(thetadeform(&["hopf-check", "su:3"]).0, EXIT_PASS);
    assert_eq!(thetadeform(&["hopf-check", "su:3", "--theta-full", "generic4"]).0, EXIT_FAIL);
    assert_eq!(thetadeform(&["act-check", "su2-on-su3"]).0, EXIT_FAIL);
    assert_eq!(thetadeform(&["act-check", "su2-on-su3", "--params", "theta=0"]).0, EXIT_PASS);
    assert_eq!(thetadeform(&["act-check", "identity"]).0, EXIT_PASS);
    // the determinant relation has degree 4, above the bound
    let (code, out, _) = thetadeform(&["act-check", "su3-on-s5", "--structural", "--degree-bound", "2"]);
    assert_eq!(code, EXIT_UNDECIDED, "{out}");
    assert_eq!(thetadeform(&["--help"]).0, 0);
    assert_eq!(thetadeform(&["--version"]).0, 0);
}

#[test]
fn usage_errors() {
    for args in [
        &["relations", "nope:3"][..],
        &["act-check", "unknown-spec"],
        &["relations", "su:3", "--params", "theta"],
        &["relations", "sphere:3", "--matrix", "[[0,1],[1,0]]"],
        &["hopf-check", "sphere:3"],
        &["relations", "/nonexistent/file.json"],
        &["frobnicate"],
    ] {
        let (code, _, err) = thetadeform(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn text_output() {
    let (code, out, _) = thetadeform(&["relations", "su:3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains("u11 u12")).count(), 1);
    assert!(out.contains("u11 u23 = e^{2πi(2*theta)} u23 u11"), "{out}");
    assert!(out.contains("[u11,u22] = 0"), "{out}");

    let (_, out, _) = thetadeform(&["act-check", "su3-on-su4"]);
    assert!(out.contains("extends iff"), "{out}");
    assert!(out.contains("lambda12 - theta = 0"), "{out}");

    let (_, out, _) = thetadeform(&["relations", "su:3", "--format", "latex"]);
    assert!(out.contains("u_{11}"), "{out}");
}

#[test]
fn presentation_round_trip() {
    for algebra in ["su:3", "sphere:4", "torus:3"] {
        let (code, exported, _) = thetadeform(&["export", algebra, "--format", "json"]);
        assert_eq!(code, 0);
        let path = scratch(&format!("{}.json", algebra.replace(':', "-")), &exported);
        let path = path.to_str().unwrap();
        let (code, again, _) = thetadeform(&["export", path, "--format", "json"]);
        assert_eq!(code, 0);
        let a: serde_json::Value = serde_json::from_str(&exported).unwrap();
        let b: serde_json::Value = serde_json::from_str(&again).unwrap();
        assert_eq!(a["relations"], b["relations"], "{algebra}");
        assert_eq!(a["deformation_matrix"], b["deformation_matrix"], "{algebra}");
        assert_eq!(a["generators"], b["generators"], "{algebra}");

        let direct = thetadeform(&["relations", algebra, "--format", "json"]).1;
        let loaded = thetadeform(&["relations", path, "--format", "json"]).1;
        let direct: serde_json::Value = serde_json::from_str(&direct).unwrap();
        let loaded: serde_json::Value = serde_json::from_str(&loaded).unwrap();
        assert_eq!(direct["exchange"], loaded["exchange"], "{algebra}");
    }
}

#[test]
fn spec_file_round_trip() {
    let (code, spec, _) = thetadeform(&["export", "--spec", "su3-on-s5"]);
    assert_eq!(code, 0);
    let path = scratch("su3-on-s5.json", &spec);
    let from_file = thetadeform(&["act-check", path.to_str().unwrap(), "--format", "json"]);
    let builtin = thetadeform(&["act-check", "su3-on-s5", "--format", "json"]);
    assert_eq!(from_file.0, builtin.0);
    let a: serde_json::Value = serde_json::from_str(&from_file.1).unwrap();
    let b: serde_json::Value = serde_json::from_str(&builtin.1).unwrap();
    assert_eq!(a["report"], b["report"]);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["relations", "su:4", "--with-stars", "--format", "json"][..],
        &["hopf-check", "su:3", "--format", "json"],
        &["fixed-points", "su3-on-su4", "--format", "json"],
        &["act-check", "su3-on-s5"],
    ] {
        let first = thetadeform(args);
        let second = thetadeform(args);
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn approximate_phases_are_opt_in() {
    let (_, plain, _) = thetadeform(&["export", "su:3", "--format", "json", "--params", "theta=1/8"]);
    assert!(!plain.contains("approx_phases"));
    let (code, approx, _) = thetadeform(&["export", "su:3", "--format", "json", "--params", "theta=1/8", "--approx"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&approx).unwrap();
    assert!(v["approx_phases"].is_array() || v["approx_phases"].is_object(), "{approx}");
}
