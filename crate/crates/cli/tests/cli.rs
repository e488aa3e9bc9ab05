//! End-to-end runs of the `ffa` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use focus_addition::group::add;
use focus_addition::model::{ComplexValue, InvariantPolynomial, ModelParams, PointC2};
use focus_addition::neighborhood::normalize;

fn ffa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("cfg.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn parse_point(s: &str) -> PointC2 {
    let v: Vec<f64> = s
        .trim()
        .split([';', ','])
        .map(|t| t.parse().unwrap())
        .collect();
    PointC2::new(ComplexValue::new(v[0], v[1]), ComplexValue::new(v[2], v[3]))
}

#[test]
fn add_prints_the_product_branch() {
    let o = ffa(&["add", "--x", "0.9,0;0.1,0", "--y", "0.9,0;0.1,0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("0.81,0;0.11111"), "{text}");
    assert!(!text.contains("-0"));
}

#[test]
fn verify_writes_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"S": {"coeffs": []}, "epsilon": 0.1, "delta": 0.3, "samples": 20, "seed": 42,
            "tolerances": {"fd_step": 1e-6, "form_tol": 1e-4, "alg_tol": 1e-11, "rank_tol": 1e-8}}"#,
    );
    let report = dir.path().join("report.json");
    let o = ffa(&[
        "verify",
        "--config",
        &cfg,
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    let suite = v["suite"].as_array().unwrap();
    assert_eq!(suite.len(), 15);
    for entry in suite {
        let obj = entry.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            [
                "check",
                "max_error",
                "pass",
                "samples",
                "threshold",
                "worst_input"
            ]
        );
        assert_eq!(entry["pass"], true, "{entry}");
    }
}

#[test]
fn verify_single_check_and_unknown_check() {
    let o = ffa(&["verify", "--check", "double_point"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"][0]["check"], "double_point");
    assert_eq!(ffa(&["verify", "--check", "nope"]).status.code(), Some(2));
}

#[test]
fn usage_and_config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ffa(&["add", "--x", "1", "--y", "2"]).status.code(), Some(2));
    assert_eq!(ffa(&["frobnicate"]).status.code(), Some(2));
    let bad = write_config(dir.path(), r#"{"epsilon": 0.1, "colour": "red"}"#);
    assert_eq!(ffa(&["--config", &bad, "sample"]).status.code(), Some(2));
    let wide = write_config(dir.path(), r#"{"epsilon": 0.9}"#);
    assert_eq!(ffa(&["--config", &wide, "sample"]).status.code(), Some(2));
    // different fibers
    let o = ffa(&["add", "--x", "0.9,0;0.1,0", "--y", "0.5,0;0.1,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sample_then_add_round_trips_bit_exactly() {
    let o = ffa(&["sample", "--count", "8", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("fiber_re,fiber_im,p_re,p_im,q_re,q_im"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    let params = ModelParams::new(0.1, 0.3, InvariantPolynomial::zero()).unwrap();
    for pair in rows.chunks(2) {
        assert_eq!(pair[0][..2], pair[1][..2], "pair shares a fiber");
        let arg = |r: &Vec<&str>| format!("{},{};{},{}", r[2], r[3], r[4], r[5]);
        let (xa, ya) = (arg(&pair[0]), arg(&pair[1]));
        let out = ffa(&["add", "--x", &xa, "--y", &ya]);
        assert_eq!(out.status.code(), Some(0));
        let got = parse_point(&stdout(&out));
        let x = normalize(&parse_point(&xa), &params).unwrap();
        let y = normalize(&parse_point(&ya), &params).unwrap();
        let want = add(&x, &y, &params).unwrap();
        let (g, w) = (got.to_real(), want.point().to_real());
        for k in 0..4 {
            // the printer maps -0 to 0, otherwise bits agree
            assert!(g[k].to_bits() == w[k].to_bits() || (g[k] == 0.0 && w[k] == 0.0));
        }
    }
}

#[test]
fn sampling_is_seeded() {
    let a = stdout(&ffa(&["sample", "--count", "4", "--seed", "9"]));
    let b = stdout(&ffa(&["sample", "--count", "4", "--seed", "9"]));
    let c = stdout(&ffa(&["sample", "--count", "4", "--seed", "10"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn figure_emits_level_and_boundary_curves() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig.csv");
    let svg = dir.path().join("fig.svg");
    let o = ffa(&[
        "figure",
        "--kind",
        "pq-projection",
        "--fibers",
        "0.06,0.15",
        "--out",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("curve_id,abs_p,abs_q\n"));
    for id in ["level_0.06", "level_0.15", "sigma1", "sigma2"] {
        assert!(
            text.lines().any(|l| l.starts_with(&format!("{id},"))),
            "{id}"
        );
    }
    for line in text.lines().filter(|l| l.starts_with("level_0.06,")) {
        let v: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|t| t.parse().unwrap())
            .collect();
        assert!((v[0] * v[1] - 0.06).abs() < 1e-12);
    }
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    for kind in ["h1-flow", "charts"] {
        assert_eq!(ffa(&["figure", "--kind", kind]).status.code(), Some(0));
    }
}

#[test]
fn locate_the_double_point() {
    let o = ffa(&[
        "locate", "--x", "0,0;0,0", "--y", "0,0;0,0", "--z", "0,0;0,0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "E1 0,0;0,0;0,0\nE2 0,0;0,0;0,0\n");
    let off = ffa(&[
        "locate",
        "--x",
        "0.9,0;0.1,0",
        "--y",
        "0.9,0;0.1,0",
        "--z",
        "0.5,0;0.1,0",
    ]);
    assert_eq!(off.status.code(), Some(2));
}

#[test]
fn inverse_adds_to_identity() {
    let o = ffa(&["inverse", "--x", "0.9,0;0.1,0"]);
    assert_eq!(o.status.code(), Some(0));
    let inv = stdout(&o);
    let sum = ffa(&["add", "--x", "0.9,0;0.1,0", "--y", inv.trim()]);
    let p = parse_point(&stdout(&sum));
    // identity on fiber b is (1, -b) for S = 0, up to the seam
    let b = -0.09;
    let direct = (p.p.re - 1.0).abs().max((p.q.re + b).abs());
    let flipped = (p.p.re + b).abs().max((p.q.re - 1.0).abs());
    assert!(direct.min(flipped) < 1e-12, "{p:?}");
}

#[test]
fn recover_s_matches_configured_partials() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"S": {"coeffs": [[1, 0, 0.3], [0, 1, 0.2], [1, 1, 0.1]]}}"#,
    );
    let o = ffa(&["--config", &cfg, "recover-s", "--grid", "4"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(stdout(&o).lines().count(), 1 + 16);
}
