use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bubble(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bubble")).args(args).output().expect("bubble runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn read_json(p: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn construct_triple_has_four_vertices_and_six_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "t.json");
    let o = bubble(&["construct", "--shape", "triple", "--kappa", "1", "-o", &out]);
    assert_eq!(code(&o), 0);
    let doc = read_json(&out);
    assert_eq!(doc["format_version"], "1");
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 6);
    let regions: std::collections::BTreeSet<String> =
        doc["faces"].as_array().unwrap().iter().map(|f| f["region_label"].to_string()).filter(|r| r != "0").collect();
    assert_eq!(regions.len(), 3);
}

#[test]
fn construct_circle_and_fivegon() {
    let o = bubble(&["construct", "--shape", "circle", "--area", "3.141592653589793"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["faces"].as_array().unwrap().len(), 2);

    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "f.json");
    let o = bubble(&[
        "construct",
        "--shape",
        "ngon",
        "--kind",
        "fivegon",
        "--kappa",
        "1",
        "--u",
        "0.3",
        "--v",
        "0.7",
        "-o",
        &out,
    ]);
    assert_eq!(code(&o), 0);
    let m: Value = serde_json::from_str(&stdout(&bubble(&["measure", &out]))).unwrap();
    assert_eq!(m["face_details"][0]["sides"], 5);
}

#[test]
fn construct_errors() {
    assert_eq!(code(&bubble(&["construct", "--shape", "dodecahedron"])), 2);
    assert_eq!(code(&bubble(&["construct", "--shape", "ngon", "--kind", "fourgon"])), 2);
    assert_eq!(code(&bubble(&["construct", "--shape", "ngon", "--kind", "fivegon", "--u", "0.1", "--v", "2"])), 3);
    assert_eq!(code(&bubble(&["construct", "--shape", "circle", "--area", "-1"])), 3);
    assert_eq!(code(&bubble(&["construct", "--shape", "double", "--areas", "1,2,3"])), 2);
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let t = path(dir.path(), "t.json");
    bubble(&["construct", "--shape", "triple", "-o", &t]);
    let o = bubble(&["validate", &t]);
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["angles_2pi3"]["pass"], true);

    let r = path(dir.path(), "r.json");
    bubble(&["construct", "--shape", "circle-radii", "--areas", "1,2", "-o", &r]);
    let o = bubble(&["validate", &r]);
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["angles_2pi3"]["pass"], false);

    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&bubble(&["validate", &bad])), 2);
    assert_eq!(code(&bubble(&["validate", &path(dir.path(), "missing.json")])), 2);

    let mut doc = read_json(&t);
    doc["edges"][2]["face_left"] = serde_json::json!(42);
    std::fs::write(&bad, doc.to_string()).unwrap();
    assert_eq!(code(&bubble(&["validate", &bad])), 2);
}

#[test]
fn tolerance_flag_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let p = path(dir.path(), "p.json");
    bubble(&["construct", "--shape", "perturbed-triple", "-o", &p]);
    assert_eq!(code(&bubble(&["validate", &p])), 1);
    assert_eq!(code(&bubble(&["validate", &p, "--tol", "1.0"])), 0);
}

#[test]
fn measure_reports_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let t = path(dir.path(), "t.json");
    bubble(&["construct", "--shape", "triple", "-o", &t]);
    let m: Value = serde_json::from_str(&stdout(&bubble(&["measure", &t]))).unwrap();
    let pi = std::f64::consts::PI;
    assert!((m["perimeter"].as_f64().unwrap() - (3.0 * pi + 2.0 * 3f64.sqrt())).abs() < 1e-12);
    assert!((m["pressures"]["1"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(m["euler_characteristic"], 2);
}

#[test]
fn apply_move_by_face_name() {
    let dir = tempfile::tempdir().unwrap();
    let ring = path(dir.path(), "ring.json");
    let out = path(dir.path(), "out.json");
    bubble(&["construct", "--shape", "swap-ring", "-o", &ring]);
    let o = bubble(&["apply-move", &ring, "--move", "swap-regions", "--faces", "f1,f2", "-o", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let b = 2.0 / 3f64.sqrt();
    assert!((s["perimeter_delta"].as_f64().unwrap() + 2.0 * b).abs() < 1e-9);
    assert_eq!(s["witness"], "shorter");
    assert_eq!(read_json(&out)["format_version"], "1");

    let lenses = path(dir.path(), "lenses.json");
    bubble(&["construct", "--shape", "lenses", "-o", &lenses]);
    let o = bubble(&["apply-move", &lenses, "--move", "slide2gon", "--faces", "top", "--displacement", "-0.1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(s["witness"], "equal_length_nonregular");
}

#[test]
fn apply_move_errors() {
    let dir = tempfile::tempdir().unwrap();
    let ring = path(dir.path(), "ring.json");
    bubble(&["construct", "--shape", "pop-ring", "-o", &ring]);
    assert_eq!(code(&bubble(&["apply-move", &ring, "--move", "swap-regions", "--faces", "nope,f1"])), 2);
    assert_eq!(code(&bubble(&["apply-move", &ring, "--move", "swap-regions", "--faces", "t"])), 2);
    // 3-gons of different regions cannot pop into each other.
    assert_eq!(code(&bubble(&["apply-move", &ring, "--move", "pop-and-expand", "--faces", "t,n2"])), 3);
    assert_eq!(code(&bubble(&["apply-move", &ring, "--move", "pop-and-expand", "--faces", "t,n1"])), 0);
}

#[test]
fn minimize_prints_trace() {
    let dir = tempfile::tempdir().unwrap();
    let t = path(dir.path(), "t.json");
    let out = path(dir.path(), "m.json");
    bubble(&["construct", "--shape", "triple", "-o", &t]);
    let o = bubble(&["minimize", &t, "--areas", "1,1,1", "-o", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 2);
    for l in &lines[..lines.len() - 1] {
        for key in ["iter=", "perimeter=", "max_area_residual=", "grad_norm="] {
            assert!(l.contains(key), "{l}");
        }
    }
    assert!(lines.last().unwrap().starts_with("done converged=true"));
    let m: Value = serde_json::from_str(&stdout(&bubble(&["measure", &out]))).unwrap();
    let s = (1.0 / (std::f64::consts::PI / 2.0 + 1.0 / 3f64.sqrt())).sqrt();
    let expected = s * (3.0 * std::f64::consts::PI + 2.0 * 3f64.sqrt());
    assert!((m["perimeter"].as_f64().unwrap() - expected).abs() / expected < 1e-6);
}

#[test]
fn minimize_errors() {
    let dir = tempfile::tempdir().unwrap();
    let t = path(dir.path(), "t.json");
    bubble(&["construct", "--shape", "triple", "-o", &t]);
    assert_eq!(code(&bubble(&["minimize", &t, "--areas", "1,1"])), 2);
    assert_eq!(code(&bubble(&["minimize", &t, "--areas", "1,-1,1"])), 3);
    assert_eq!(code(&bubble(&["minimize", &t, "--areas", "1,1,1", "--max-iter", "2"])), 1);
}

#[test]
fn verify_lemmas_passes() {
    let o = bubble(&["verify-lemmas"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    for name in ["central_edge_ratio_k1", "perimeter_pressure_triple", "pop_balance_angle", "gauss_bonnet_flower"] {
        assert!(text.lines().any(|l| l.starts_with(name) && l.ends_with("PASS")), "{name}");
    }
    for l in text.lines().filter(|l| l.contains("measured=")) {
        assert!(l.contains("expected=") && l.contains("residual="), "{l}");
    }
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let t = path(dir.path(), "t.json");
    let (a, b) = (path(dir.path(), "a.svg"), path(dir.path(), "b.svg"));
    bubble(&["construct", "--shape", "flower", "-o", &t]);
    assert_eq!(code(&bubble(&["render", &t, "-o", &a])), 0);
    assert_eq!(code(&bubble(&["render", &t, "--out", &b])), 0);
    let (sa, sb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(sa, sb);
    let text = String::from_utf8(sa).unwrap();
    let edges = read_json(&t)["edges"].as_array().unwrap().len();
    assert_eq!(text.matches("<path id=\"edge-").count(), edges);

    let empty = path(dir.path(), "empty.json");
    std::fs::write(&empty, r#"{"format_version":"1","vertices":[],"edges":[],"faces":[{"id":0,"region_label":0}]}"#)
        .unwrap();
    let o = bubble(&["render", &empty]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("<svg"));
}
