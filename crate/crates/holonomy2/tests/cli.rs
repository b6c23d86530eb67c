use std::path::PathBuf;
use std::process::Command;

use holonomy2::fixtures::{gl1, xdy_control};
use holonomy2::formats::{write_binary, McPairFile, SurfaceFile};
use holonomy2::run;
use holonomy2_core::forms::{MCPair, PolyForm, ValueSpace};
use holonomy2_core::loopspace::SampledSurface;
use holonomy2_core::rational::q;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn json_run(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("holonomy2").chain(args.iter().copied()));
    assert!(!out.stdout.is_empty(), "no report, stderr: {}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).expect("report is JSON"))
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let out = run(["holonomy2", flag]);
        assert_eq!(out.code, 0, "{flag}");
        assert!(!out.stdout.is_empty());
    }
    assert_eq!(run(["holonomy2", "crossed", "--help"]).code, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(["holonomy2", "--bogus"]).code, 2);
    assert_eq!(run(["holonomy2"]).code, 2);
    assert_eq!(run(["holonomy2", "selftest", "--seed", "minus-one"]).code, 2);
    let out = run(["holonomy2", "hochschild", "check-cycle", "--dga", &fixture("dga/truncated_mc.json"), "--element", "y"]);
    assert_eq!(out.code, 2, "{}", out.stderr);
}

#[test]
fn unreadable_and_malformed_inputs_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"dim\": 2, ").unwrap();
    let out = run(["holonomy2", "crossed", "validate", bad.to_str().unwrap()]);
    assert_eq!(out.code, 3);
    assert!(out.stdout.is_empty() && out.stderr.starts_with("holonomy2:"));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(["holonomy2", "crossed", "validate", missing.to_str().unwrap()]).code, 3);
    // Structure constants of the wrong shape.
    std::fs::write(&bad, r#"{"dim": 2, "basis": ["a", "b"], "c": [[["0"]]]}"#).unwrap();
    assert_eq!(run(["holonomy2", "crossed", "validate", bad.to_str().unwrap()]).code, 3);
}

#[test]
fn peiffer_violation_names_axiom_b() {
    let (code, r) = json_run(&["crossed", "validate", &fixture("crossed/peiffer_violation.json")]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "fail");
    let c = check(&r, "crossed-module axioms");
    let violations = c["data"]["violations"].as_array().unwrap();
    assert!(violations.iter().any(|v| v["axiom"] == "b"), "{c}");
    assert!(c["details"].as_array().unwrap().iter().any(|d| d.as_str().unwrap().contains("axiom (b)")));
}

#[test]
fn valid_crossed_module_passes_with_digest() {
    let path = fixture("crossed/identity_sl2.json");
    let (code, r) = json_run(&["crossed", "validate", &path]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], "holonomy2/report-v1");
    let digest = r["inputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    assert!(r["checks"][0].get("millis").is_none());
}

#[test]
fn skeletal_splice_and_compare() {
    assert_eq!(json_run(&["crossed", "skeletal", &fixture("crossed/heis_centre.json")]).0, 0);
    assert_eq!(json_run(&["crossed", "splice", &fixture("sequences/nonzero_class.json")]).0, 0);
    let (code, r) = json_run(&[
        "crossed",
        "compare",
        &fixture("crossed/aff2_module.json"),
        &fixture("crossed/aff2_splice.json"),
        "--maps",
        &fixture("crossed/aff2_maps.json"),
    ]);
    assert_eq!(code, 0, "{r}");
}

#[test]
fn check_mc_on_pair_files() {
    assert_eq!(json_run(&["forms", "check-mc", &fixture("pairs/gl1_mc.json")]).0, 0);
    let (code, r) = json_run(&["forms", "check-mc", &fixture("pairs/xdy_control.json"), "--l3", "factorial"]);
    assert_eq!(code, 1, "{r}");
}

#[test]
fn holonomy_of_flat_torus_from_binary_grid() {
    let dir = tempfile::tempdir().unwrap();
    let pair = MCPair {
        a: PolyForm::zero(2, ValueSpace::L0, 1),
        b: PolyForm::zero(2, ValueSpace::Lm1, 1).with_term(q(1), &[0, 0], &[0, 1], 0),
    };
    let pair_path = dir.path().join("pair.json");
    std::fs::write(&pair_path, serde_json::to_vec(&McPairFile::from_pair(&pair, &gl1())).unwrap()).unwrap();
    let s = SampledSurface::from_fn(128, 128, 2, |t, s| vec![s, t]).unwrap();
    let grid_path = dir.path().join("torus.bin");
    std::fs::write(&grid_path, write_binary(&[128, 128, 2], s.grid())).unwrap();
    let (code, r) = json_run(&[
        "holonomy",
        "--pair",
        pair_path.to_str().unwrap(),
        "--surface",
        grid_path.to_str().unwrap(),
        "--grid",
        "128x128",
        "--tau-winding",
        "0,1",
        "--sigma-winding",
        "1,0",
        "--expect",
        "1",
        "--rtol",
        "1e-9",
    ]);
    assert_eq!(code, 0, "{r}");
    assert!((r["output"]["holonomy"][0].as_f64().unwrap().abs() - 1.0).abs() < 1e-9);
    assert_eq!(r["inputs"].as_array().unwrap().len(), 2);

    // Same surface as JSON, wrong declared grid.
    let file = SurfaceFile { p: 128, m: 128, n: 2, grid: s.grid().to_vec(), tau_winding: None, sigma_winding: None };
    let json_path = dir.path().join("torus.json");
    std::fs::write(&json_path, serde_json::to_vec(&file).unwrap()).unwrap();
    let out = run([
        "holonomy2",
        "holonomy",
        "--pair",
        pair_path.to_str().unwrap(),
        "--surface",
        json_path.to_str().unwrap(),
        "--grid",
        "64x64",
    ]);
    assert_eq!(out.code, 3);
    let out = run(["holonomy2", "holonomy", "--pair", pair_path.to_str().unwrap(), "--surface", json_path.to_str().unwrap(), "--stencil", "3"]);
    assert_eq!(out.code, 2);
}

#[test]
fn holonomy_mismatch_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    let pair_path = dir.path().join("pair.json");
    std::fs::write(&pair_path, serde_json::to_vec(&McPairFile::from_pair(&xdy_control(), &gl1())).unwrap()).unwrap();
    let s = SampledSurface::from_fn(32, 32, 2, |t, s| {
        let (u, v) = (std::f64::consts::TAU * s, std::f64::consts::TAU * t);
        vec![0.2 * (1.0 - u.cos()) * (1.0 + 0.5 * v.cos()), 0.2 * u.sin()]
    })
    .unwrap();
    let grid_path = dir.path().join("s.bin");
    std::fs::write(&grid_path, write_binary(&[32, 32, 2], s.grid())).unwrap();
    let (code, r) = json_run(&[
        "holonomy",
        "--pair",
        pair_path.to_str().unwrap(),
        "--surface",
        grid_path.to_str().unwrap(),
        "--expect",
        "1000",
    ]);
    assert_eq!(code, 1);
    assert_eq!(check(&r, "matches expected value")["status"], "fail");
}

#[test]
fn check_cycle_follows_maurer_cartan() {
    let dga = fixture("dga/truncated_mc.json");
    let (code, r) = json_run(&["hochschild", "check-cycle", "--dga", &dga, "--element", "x", "--trunc", "4"]);
    assert_eq!(code, 0, "{r}");
    // 2x is not Maurer-Cartan: d(2x) = -2 x^2 but (2x)^2 = 4 x^2.
    let (code, r) = json_run(&["hochschild", "check-cycle", "--dga", &dga, "--element", "2 x", "--trunc", "4"]);
    assert_eq!(code, 0, "the equivalence still holds: {r}");
    let data = &check(&r, "cycle iff maurer-cartan")["data"];
    assert_eq!(data["is_mc"], false);
    assert_eq!(data["curvature"], serde_json::json!(["2 x2"]));
    assert_eq!(data["vanishing_by_length"], serde_json::json!([true, false, false, false, false]));
}

#[test]
fn higher_hochschild_commands() {
    let dga = fixture("dga/acyclic_pair.json");
    assert_eq!(json_run(&["hh", "d2-check", "--dga", &dga, "--model", "circle", "--samples", "20"]).0, 0);
    assert_eq!(json_run(&["hh", "d2-check", "--dga", &dga, "--model", &fixture("simplicial/torus3.json"), "--cutoff", "3", "--samples", "20"]).0, 0);
    assert_eq!(json_run(&["hh", "compare-circle", "--dga", &dga, "--level", "2"]).0, 0);
    assert_eq!(run(["holonomy2", "hh", "d2-check", "--dga", &dga, "--model", "sphere"]).code, 3);
}

#[test]
fn reports_are_deterministic_unless_timed() {
    let a = run(["holonomy2", "selftest", "--seed", "5"]);
    let b = run(["holonomy2", "selftest", "--seed", "5"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    let timed: Value = serde_json::from_str(&run(["holonomy2", "--timings", "selftest"]).stdout).unwrap();
    assert!(timed["checks"].as_array().unwrap().iter().all(|c| c["millis"].is_number()));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_holonomy2");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["--no-such-flag"]), Some(2));
    assert_eq!(code(&["crossed", "validate", &fixture("crossed/peiffer_violation.json")]), Some(1));
    assert_eq!(code(&["crossed", "validate", "/nonexistent/x.json"]), Some(3));
}
