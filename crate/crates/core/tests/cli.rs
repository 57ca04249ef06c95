use std::process::{Command, Output};

use divquad::formats::read_cloud;
use divquad::variety::eval_defining;
use divquad::{AlgebraDim, Field, VarietySpec};

fn divquad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divquad")).args(args).output().unwrap()
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_algebra_octonions() {
    let out = divquad(&["verify-algebra", "--n", "8", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["summary"]["all_passed"], true);
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"associativity-witness[n=8]"));
    assert!(!names.contains(&"associativity[n=8]"));
}

#[test]
fn sample_writes_points_on_the_variety() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pts.jsonl");
    let out = divquad(&["sample", "--n", "2", "--count", "100", "--seed", "7", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["output"]["records"], 100);

    let records = read_cloud(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    assert_eq!(records.len(), 100);
    let spec = VarietySpec::standard(AlgebraDim::COMPLEX, Field::Complex);
    for rec in &records {
        assert_eq!((rec.n, rec.m, rec.s, rec.field), (2, 3, 1, Field::Complex));
        assert!(eval_defining(&spec, &rec.point).unwrap().norm() <= 1e-10);
    }
}

#[test]
fn sample_to_stdout_sends_report_to_stderr() {
    let out = divquad(&["sample", "--n", "1", "--count", "5", "--field", "real"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.starts_with("1 2 1 real ")));
    let r: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(r["command"], "sample");
}

#[test]
fn seeds_change_the_cloud() {
    let a = divquad(&["sample", "--n", "4", "--count", "3", "--seed", "1"]).stdout;
    let b = divquad(&["sample", "--n", "4", "--count", "3", "--seed", "2"]).stdout;
    assert_ne!(a, b);
}

#[test]
fn predict_quaternionic() {
    let out = divquad(&["predict", "--n", "4", "--field", "complex"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let p = &r["predictions"][0];
    let betti: Vec<u64> = p["betti"].as_array().unwrap().iter().map(|b| b.as_u64().unwrap()).collect();
    assert_eq!(betti.len(), 14);
    assert_eq!(&betti[5..9], &[5, 10, 10, 5]);
    assert_eq!(p["prediction"]["descriptor"]["dimension"], 13);
    assert_eq!(p["freeness"]["verdict"], "torsion-free-not-free");
    // fixed sets for 1..=5 circles
    assert_eq!(r["predictions"].as_array().unwrap().len(), 6);
}

#[test]
fn predict_general_frames() {
    let r = report(&divquad(&["predict", "--n", "2", "--frame", "none", "--s", "3"]));
    assert_eq!(r["predictions"][0]["prediction"]["descriptor"]["kind"], "stiefel");
    let r = report(&divquad(&["predict", "--n", "4", "--m", "2"]));
    assert_eq!(r["predictions"][0]["prediction"]["descriptor"]["a"], 4);
    assert_eq!(r["predictions"][0]["freeness"]["verdict"], "free");
    let r = report(&divquad(&["predict", "--n", "4", "--s", "2"]));
    assert_eq!(r["predictions"][0]["prediction"]["status"], "no-prediction");
}

#[test]
fn frame_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, "1 0\n0.6 0.8\n").unwrap();
    let out = divquad(&["verify-variety", "--n", "2", "--frame", good.to_str().unwrap(), "--count", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 0\n-1 0\n").unwrap();
    let out = divquad(&["sample", "--n", "2", "--frame", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weakly hyperbolic"));
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(divquad(&["predict", "--n", "3"]).status.code(), Some(2));
    assert_eq!(divquad(&["predict", "--n", "2", "--field", "p-adic"]).status.code(), Some(2));
    assert_eq!(divquad(&["sample"]).status.code(), Some(2));
    assert_eq!(divquad(&["verify-maps", "--frame", "none"]).status.code(), Some(2));
    assert_eq!(divquad(&["sample", "--n", "2", "--frame", "/nonexistent/frame"]).status.code(), Some(2));
}

#[test]
fn failing_checks_exit_1() {
    // an impossible tolerance makes the residual check fail
    let out = divquad(&["verify-variety", "--n", "2", "--count", "20", "--tol=1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["summary"]["all_passed"], false);
}

#[test]
fn timing_is_opt_in() {
    let r = report(&divquad(&["verify-simplex", "--n", "1"]));
    assert!(r.get("timing_ms").is_none());
    let r = report(&divquad(&["verify-simplex", "--n", "1", "--timing"]));
    assert!(r["timing_ms"].as_f64().unwrap() >= 0.0);
}
