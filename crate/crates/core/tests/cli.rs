use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    p.to_str().unwrap().to_string()
}

fn dp2(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_dp2")).args(args).output().expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v)
}

fn tmp(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("dp2-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn demo_passes() {
    let (code, v) = dp2(&["demo", "--paper"]);
    assert_eq!(code, 0, "{v:#}");
    let surfaces = v["surfaces"].as_array().unwrap();
    assert_eq!(surfaces.len(), 3);
    for s in surfaces {
        assert_eq!(s["ok"], true);
        assert_eq!(s["genus"], 0);
        assert_eq!(s["case"], "conic");
    }
}

#[test]
fn demo_is_deterministic() {
    let a = Command::new(env!("CARGO_BIN_EXE_dp2")).args(["demo", "--paper"]).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_dp2"))
        .args(["demo", "--paper"])
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_map_on_rho2() {
    let (code, v) = dp2(&["verify-map", "--surface", &data("x2.json"), "--map", &data("rho2.json"), "--curve", &data("c2.json")]);
    assert_eq!(code, 0, "{v:#}");
    let r = &v["report"];
    assert_eq!(r["equation_holds"], true);
    assert_eq!(r["nonconstant"], true);
    assert_eq!(r["degree_ratio"], 2);
    assert_eq!(r["component_degrees"], serde_json::json!([8, 8, 8, 16]));
}

#[test]
fn verify_map_reports_a_residual() {
    let bad = tmp(
        "bad_map.json",
        r#"{"rho": [{"affine": "t(t^2+1)(t^4-1)", "degree": 8}, {"affine": "-t^4", "degree": 8},
                    {"affine": "t^8 + 1", "degree": 8}, {"affine": "t^2(t^2+1)(t^10+1)", "degree": 16}]}"#,
    );
    let (code, v) = dp2(&["verify-map", "--surface", &data("x2.json"), "--map", &bad]);
    assert_eq!(code, 1);
    assert_eq!(v["failure"]["kind"], "EquationFails");
    assert!(v["failure"]["residual"].is_array());
}

#[test]
fn check_curve_on_x2() {
    let (code, v) = dp2(&["check-curve", "--surface", &data("x2.json"), "--curve", &data("c2.json")]);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["multiplicity"], 3);
    assert_eq!(v["ordinary"], true);
    assert_eq!(v["q_on_branch"], true);
    assert_eq!(v["integral"], true);
    assert_eq!(v["profile"]["even_everywhere"], true);
    assert_eq!(v["case"], "conic");
}

#[test]
fn check_curve_rejects_wrong_point() {
    let c = tmp("c_wrong.json", r#"{"h": "x^4 - x^2*y^2 - y^4 + x^2*y*z + y*z^3", "Q": [1, 0, 0], "d": 4}"#);
    let (code, v) = dp2(&["check-curve", "--surface", &data("x2.json"), "--curve", &c]);
    assert_eq!(code, 1, "{v:#}");
    assert_eq!(v["ok"], false);
}

#[test]
fn smooth_points_branch_parametrize() {
    for i in 1..=3 {
        let (code, v) = dp2(&["smooth", "--surface", &data(&format!("x{i}.json"))]);
        assert_eq!(code, 0);
        assert_eq!(v["smooth"]["smooth"], true);
    }
    let (code, v) = dp2(&["points", "--surface", &data("x3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 28);
    let (code, v) = dp2(&["branch", "--surface", &data("x1.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], 4);
    let (code, v) = dp2(&["parametrize", "--curve", &data("c1.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["identity_holds"], true);
    assert_eq!(v["theta"].as_array().unwrap().len(), 3);
}

#[test]
fn singular_surface_fails_smooth() {
    let s = tmp("sing.json", r#"{"field": {"p": 5}, "g": "x^4 + y^4"}"#);
    let (code, v) = dp2(&["smooth", "--surface", &s]);
    assert_eq!(code, 1);
    assert_eq!(v["smooth"]["smooth"], false);
}

#[test]
fn lift_writes_a_certificate() {
    let out = std::env::temp_dir().join(format!("dp2-cert-{}.json", std::process::id()));
    let out_s = out.to_str().unwrap();
    let (code, v) = dp2(&["lift", "--surface", &data("x3.json"), "--curve", &data("c3.json"), "--out", out_s]);
    assert_eq!(code, 0, "{v:#}");
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cert["case"], "conic");
    assert_eq!(cert["field_of_definition"], 1);
    // the certificate's map verifies on its own
    let map = tmp("cert_map.json", &serde_json::to_string(&serde_json::json!({"rho": cert["rho"], "field_of_definition": 1})).unwrap());
    let (code, _) = dp2(&["verify-map", "--surface", &data("x3.json"), "--map", &map]);
    assert_eq!(code, 0);
}

#[test]
fn search_finds_h1() {
    let out = std::env::temp_dir().join(format!("dp2-hits-{}.json", std::process::id()));
    let (code, v) = dp2(&["search", "--surface", &data("x1.json"), "--Q", "0,0,1", "--d", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["stats"]["candidates"], 9841);
    let hits: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(hits.as_array().unwrap().len(), v["stats"]["hits"].as_u64().unwrap() as usize);
}

#[test]
fn search_cap_and_env() {
    let (code, v) = dp2(&["search", "--surface", &data("x1.json"), "--Q", "0,0,1", "--d", "4", "--max-candidates", "100"]);
    assert_eq!(code, 1);
    assert_eq!(v["failure"]["kind"], "SearchSpaceTooLarge");
    let out = Command::new(env!("CARGO_BIN_EXE_dp2"))
        .args(["search", "--surface", &data("x1.json"), "--Q", "0,0,1", "--d", "4"])
        .env("DP2_MAX_CANDIDATES", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_2() {
    let bad_json = tmp("bad.json", "{ not json");
    assert_eq!(dp2(&["smooth", "--surface", &bad_json]).0, 2);
    let bad_field = tmp("bad_field.json", r#"{"field": {"p": 9}, "g": "x^4"}"#);
    assert_eq!(dp2(&["smooth", "--surface", &bad_field]).0, 2);
    let char2 = tmp("char2.json", r#"{"field": {"p": 2}, "g": "x^4"}"#);
    assert_eq!(dp2(&["smooth", "--surface", &char2]).0, 2);
    let wrong_degree = tmp("deg.json", r#"{"field": {"p": 3}, "g": "x^3*y + z"}"#);
    assert_eq!(dp2(&["branch", "--surface", &wrong_degree]).0, 2);
    assert_eq!(dp2(&["search", "--surface", &data("x1.json"), "--Q", "0,0", "--d", "4"]).0, 2);
    assert_eq!(dp2(&["search", "--surface", &data("x1.json"), "--Q", "0,0,0", "--d", "4"]).0, 2);
    assert_eq!(dp2(&["points", "--surface", "/nonexistent/x.json"]).0, 2);
}
