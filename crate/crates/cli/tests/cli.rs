use std::path::Path;
use std::process::{Command, Output};

use hankelkit_cli::report::{AnalysisReport, SCHEMA};
use hankelkit_core::{Tri, WitnessKind};

fn hankelkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hankelkit")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> AnalysisReport {
    let out = hankelkit(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    AnalysisReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn write_input(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

/// Every "no" verdict carries a witness that reproduces.
fn assert_witnessed(r: &AnalysisReport) {
    let has = |kinds: &[WitnessKind]| r.witnesses.iter().any(|w| kinds.contains(&w.kind) && w.value <= 0.0);
    if r.verdicts.psd == Tri::No {
        assert!(has(&[WitnessKind::FormPoint]));
    }
    if r.verdicts.strong == Tri::No {
        assert!(has(&[WitnessKind::MatrixVector]));
    }
    if r.verdicts.pd == Tri::No {
        assert!(has(&[WitnessKind::FormPoint, WitnessKind::FormZero]));
    }
}

#[test]
fn truncated_unit_sextic_has_both_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = vec!["0"; 13];
    v[0] = "1";
    v[6] = "1";
    v[12] = "1";
    let input = write_input(dir.path(), "t.json", &format!(r#"{{"m": 6, "n": 3, "v": [{}]}}"#, v.join(",")));
    let r = report(&["analyze", "--input", &input]);
    assert_eq!(r.schema, SCHEMA);
    assert_eq!((r.verdicts.psd, r.verdicts.strong), (Tri::No, Tri::No));
    assert_eq!(r.detected_family.as_deref(), Some("truncated"));
    assert_witnessed(&r);
}

#[test]
fn zero_and_hilbert_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_input(dir.path(), "z.json", r#"{"m": 4, "n": 3, "v": [0,0,0,0,0,0,0,0,0]}"#);
    let r = report(&["analyze", "--input", &zero]);
    assert_eq!((r.verdicts.psd, r.verdicts.strong), (Tri::Yes, Tri::Yes));
    assert_witnessed(&r);

    let v: Vec<String> = (0..9).map(|k| format!("{:e}", 1.0 / (k as f64 + 1.0))).collect();
    let hilbert = write_input(dir.path(), "h.json", &format!(r#"{{"m": 4, "n": 3, "v": [{}]}}"#, v.join(",")));
    let r = report(&["analyze", "--input", &hilbert]);
    assert_eq!((r.verdicts.psd, r.verdicts.strong), (Tri::Yes, Tri::Yes));
    assert!(r.certificates.iter().all(|c| c.verified) && !r.certificates.is_empty());
}

#[test]
fn family_examples() {
    let r = report(&["family", "noncd", "--k", "3"]);
    let Some(hankelkit_cli::family::FamilyRecord::Noncd { analysis }) = &r.family_record else { panic!() };
    assert!(analysis.identity_holds);
    assert_eq!(analysis.obstruction.coefficient, "-1");

    let r = report(&["family", "truncated", "--m", "6", "--n", "3", "--v0", "1146", "--vmid", "1", "--vend", "1146"]);
    assert_eq!(r.verdicts.psd, Tri::Yes);
    assert!(r.certificates.iter().any(|c| c.name == "sextic threshold decomposition" && c.verified));

    let r = report(&["family", "moment", "--h", "uniform01", "--m", "2", "--n", "2"]);
    for (got, want) in r.input.v.iter().zip([1.0, 0.5, 1.0 / 3.0]) {
        assert!((got - want).abs() < 1e-12);
    }

    let r = report(&["family", "noncd", "--k", "4"]);
    assert_eq!(r.verdicts.psd, Tri::No);
    assert_witnessed(&r);
}

#[test]
fn family_document_matches_family_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(
        dir.path(),
        "f.json",
        r#"{"family": "quasi-truncated", "params": {"m": 6, "n": 3, "v0": 2000, "v1": 1e-6, "vmid": 1, "vend1": 1e-6, "vend": 2000}}"#,
    );
    let a = report(&["analyze", "--input", &input]);
    let b = report(&[
        "family", "quasi-truncated", "--m", "6", "--v0", "2000", "--v1", "1e-6", "--vmid", "1", "--vend1", "1e-6", "--vend",
        "2000",
    ]);
    assert_eq!(a.without_timings(), b.without_timings());
    assert_eq!(a.verdicts.sos, Tri::Yes);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let args = ["family", "truncated", "--m", "6", "--v0", "1100", "--vmid", "1", "--vend", "1100", "--refute", "--seed", "7"];
    let a = report(&args);
    let b = report(&args);
    assert_eq!(a.seed, 7);
    assert!(a.refutation.as_ref().is_some_and(|r| r.found));
    let strip = |r: &AnalysisReport| r.without_timings().to_json();
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(AnalysisReport::from_json(&a.to_json()).unwrap(), a);
}

#[test]
fn out_and_quiet_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = hankelkit(&["family", "noncd", "--k", "2", "--out", path.to_str().unwrap(), "--quiet"]);
    assert!(out.status.success());
    // x1^4 - x1²x2² + x2^4 = (x1² - x2²)² + (x1 x2)² vanishes only at the origin.
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "psd=yes sos=yes strong=no pd=yes");
    let r = AnalysisReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.verdicts.sos, Tri::Yes);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_input(dir.path(), "bad.json", r#"{"m": 2, "n": 2, "v": [1, 2]}"#);
    assert_eq!(hankelkit(&["analyze", "--input", &bad]).status.code(), Some(2));
    let garbage = write_input(dir.path(), "garbage.json", "{ not json");
    assert_eq!(hankelkit(&["analyze", "--input", &garbage]).status.code(), Some(2));
    assert_eq!(hankelkit(&["analyze", "--input", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(hankelkit(&["family", "nonesuch", "--k", "3"]).status.code(), Some(2));
    assert_eq!(hankelkit(&["family", "noncd", "--k", "1"]).status.code(), Some(2));

    let out = hankelkit(&["family", "moment", "--h", "uniform01", "--m", "4", "--n", "3", "--corrupt-certificates"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed verification"));
}

#[test]
fn verify_suite_exit_codes() {
    let out = hankelkit(&["verify-suite"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).matches("PASS").count(), 10);

    // Tightened tolerances move criteria to "boundary", never to failure.
    let out = hankelkit(&["verify-suite", "--tolerance-scale", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("BOUNDARY") && !text.contains("FAIL "));

    let out = hankelkit(&["verify-suite", "--inject-fault", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    let failed: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].contains("[ 5] non-decomposable family"));
}
