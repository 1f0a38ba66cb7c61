use std::process::{Command, Output};

use serde_json::Value;

fn casimir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn records(out: &Output) -> Vec<csv::StringRecord> {
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    reader.records().map(|r| r.unwrap()).collect()
}

fn headers(out: &Output) -> Vec<String> {
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    reader.headers().unwrap().iter().map(String::from).collect()
}

fn num(field: &str) -> f64 {
    field.parse().unwrap()
}

const PERFECT: [&str; 4] = ["--m1", "perfect", "--m2", "perfect"];

#[test]
fn perfect_mirror_force_value() {
    let out = casimir(&[&["force"], &PERFECT[..], &["--L", "1"]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(headers(&out), ["L", "force", "force_err", "method", "nodes", "units"]);
    let rows = records(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][1], "-1.3089969390e-01");
    assert_eq!(&rows[0][5], "reduced");
}

#[test]
fn transparent_mirror_gives_zero() {
    let out = casimir(&["force", "--m1", "delta:g=0", "--m2", "perfect", "--L", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(&records(&out)[0][1], "0.0000000000e+00");
    let out = casimir(&["energy", "--m1", "delta:g=0", "--m2", "delta:g=3", "--L", "2"]);
    assert_eq!(&records(&out)[0][1], "0.0000000000e+00");
}

#[test]
fn series_method_agrees_with_quadrature() {
    let args = ["force", "--m1", "delta:g=1", "--m2", "delta:g=1", "--L", "1"];
    let quad = num(&records(&casimir(&args))[0][1]);
    let series = casimir(&[&args[..], &["--method", "series"]].concat());
    let row = &records(&series)[0];
    assert_eq!(&row[3], "series");
    assert!(((num(&row[1]) - quad) / quad).abs() < 1e-9);
}

#[test]
fn si_output_scales_by_hbar_c() {
    let reduced = casimir(&[&["force"], &PERFECT[..], &["--L", "1"]].concat());
    let si = casimir(&[&["force"], &PERFECT[..], &["--L", "1", "--si", "--L-unit", "1e-6"]].concat());
    assert_eq!(si.status.code(), Some(0));
    let f = num(&records(&reduced)[0][1]);
    let row = &records(&si)[0];
    assert_eq!(&row[5], "N");
    let hbar_c = 1.054571817e-34 * 299_792_458.0;
    let expected = f * hbar_c / 1e-12;
    assert!(((num(&row[1]) - expected) / expected).abs() < 1e-9);
}

#[test]
fn si_needs_length_unit() {
    let out = casimir(&[&["force"], &PERFECT[..], &["--L", "1", "--si"]].concat());
    assert_eq!(out.status.code(), Some(1));
    let out = casimir(&[&["force"], &PERFECT[..], &["--L", "1", "--si", "--L-unit", "-1"]].concat());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_matches_csv() {
    let args = ["energy", "--m1", "delta:g=2", "--m2", "barrier:v0=3,a=0.2", "--L", "1.5"];
    let csv_out = casimir(&args);
    let json_out = casimir(&[&args[..], &["--format", "json"]].concat());
    assert_eq!(json_out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let row = &records(&csv_out)[0];
    assert_eq!(v[0]["energy"].as_f64().unwrap(), num(&row[1]));
    assert_eq!(v[0]["energy_err"].as_f64().unwrap(), num(&row[2]));
    assert_eq!(v[0]["method"], "quad");
}

#[test]
fn exit_codes() {
    assert_eq!(casimir(&["--help"]).status.code(), Some(0));
    assert_eq!(casimir(&["--version"]).status.code(), Some(0));
    assert_eq!(casimir(&[]).status.code(), Some(1));
    assert_eq!(casimir(&["force", "--m1", "delta:g=", "--m2", "perfect", "--L", "1"]).status.code(), Some(1));
    assert_eq!(casimir(&["force", "--m1", "delta:g=-1", "--m2", "perfect", "--L", "1"]).status.code(), Some(1));
    assert_eq!(casimir(&[&["force"], &PERFECT[..], &["--L", "0"]].concat()).status.code(), Some(1));
    assert_eq!(casimir(&[&["force"], &PERFECT[..], &["--L", "abc"]].concat()).status.code(), Some(1));
    let noncausal = ["force", "--m1", "const:rho=-0.5", "--m2", "perfect", "--L", "1"];
    let out = casimir(&noncausal);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(casimir(&[&noncausal[..], &["--allow-noncausal"]].concat()).status.code(), Some(0));
}

#[test]
fn sweep_header_and_rows() {
    let out = casimir(&[&["sweep"], &PERFECT[..], &["--start", "1", "--stop", "2", "--count", "2"]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("L,force,energy,force_err,energy_err\n"));
    let rows = records(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][0], "1.0000000000e+00");
    assert_eq!(&rows[1][0], "2.0000000000e+00");
}

#[test]
fn sweep_follows_inverse_square_law() {
    let args = [&["sweep"], &PERFECT[..], &["--start", "0.5", "--stop", "4", "--count", "4", "--jobs", "3"]].concat();
    let rows = records(&casimir(&args));
    for w in rows.windows(2) {
        let ratio = num(&w[1][1]) / num(&w[0][1]);
        assert!((ratio - 0.25).abs() < 1e-9, "{ratio}");
        let ratio = num(&w[1][2]) / num(&w[0][2]);
        assert!((ratio - 0.5).abs() < 1e-9, "{ratio}");
    }
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let base = [&["sweep"], &PERFECT[..], &["--m2", "delta:g=2", "--start", "0.2", "--stop", "5", "--count", "9"]].concat();
    let one = casimir(&[&base[..], &["--jobs", "1"]].concat());
    let many = casimir(&[&base[..], &["--jobs", "4"]].concat());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, casimir(&[&base[..], &["--jobs", "1"]].concat()).stdout);
}

#[test]
fn sweep_rejects_single_point() {
    let out = casimir(&[&["sweep"], &PERFECT[..], &["--start", "1", "--stop", "2", "--count", "1"]].concat());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_reports_failing_point() {
    // Barriers of width 1 overlap below L = 1.
    let bar = "barrier:v0=1,a=1";
    let out = casimir(&["sweep", "--m1", bar, "--m2", bar, "--start", "0.5", "--stop", "4", "--count", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "L,force,energy,force_err,energy_err\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("L = 0.5"));
}

#[test]
fn modes_with_equal_lengths_gives_zero() {
    let out = casimir(&[&["modes"], &PERFECT[..], &["--La", "1", "--Lb", "1", "--box", "500,1000"]].concat());
    assert_eq!(out.status.code(), Some(0));
    let rows = records(&out);
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert_eq!(num(&row[1]), 0.0);
        assert_eq!(num(&row[2]), 0.0);
        assert_eq!(num(&row[3]), 0.0);
    }
}

#[test]
fn modes_converge_for_perfect_mirrors() {
    let out = casimir(&[&["modes"], &PERFECT[..], &["--box", "500,2000"]].concat());
    assert_eq!(out.status.code(), Some(0));
    let rows = records(&out);
    let (a, b) = (num(&rows[0][3]), num(&rows[1][3]));
    assert!(b < a && b < 1e-6, "{a} {b}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("decreasing"));
}

#[test]
fn modes_too_small_box_is_rejected() {
    let out = casimir(&[&["modes"], &PERFECT[..], &["--box", "20"]].concat());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_reports_residuals() {
    let out = casimir(&["validate", "const:rho=-0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(headers(&out), ["model", "causal", "points", "unitarity", "det_identity", "round_trip", "pass"]);
    let row = &records(&out)[0];
    assert_eq!(&row[1], "false");
    assert_eq!(&row[2], "200");
    assert!(num(&row[3]) < 1e-10);
    assert_eq!(&row[6], "true");
    assert!(String::from_utf8_lossy(&out.stderr).contains("not causal"));

    let out = casimir(&["validate", "perfect", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["causal"], true);
    assert_eq!(v[0]["round_trip"], Value::Null);
}

#[test]
fn output_is_deterministic() {
    let args = ["energy", "--m1", "lc:z0=4,l=2", "--m2", "delta:g=1", "--L", "0.7", "--format", "json"];
    assert_eq!(casimir(&args).stdout, casimir(&args).stdout);
}

#[test]
fn numerical_failures_exit_2() {
    let out = casimir(&["force", "--m1", "delta:g=1", "--m2", "delta:g=1", "--L", "1", "--budget", "2", "--tol", "1e-14"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerance"));
    let bar = "barrier:v0=1,a=40";
    let out = casimir(&["modes", "--m1", bar, "--m2", bar, "--La", "41", "--Lb", "42", "--box", "2100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_delta_residuals_small() {
    let out = casimir(&["validate", "delta:g=2"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &records(&out)[0];
    for i in 3..6 {
        assert!(num(&row[i]) < 1e-12, "column {i}: {}", &row[i]);
    }
}

#[test]
fn sweeps_collapse_onto_master_curve() {
    // γ = gL is the same at matching rows of the two sweeps.
    let a = casimir(&["sweep", "--m1", "delta:g=2", "--m2", "delta:g=2", "--start", "0.5", "--stop", "2", "--count", "3"]);
    let b = casimir(&["sweep", "--m1", "delta:g=1", "--m2", "delta:g=1", "--start", "1", "--stop", "4", "--count", "3"]);
    for (ra, rb) in records(&a).iter().zip(records(&b).iter()) {
        let fa = num(&ra[1]) * num(&ra[0]).powi(2);
        let fb = num(&rb[1]) * num(&rb[0]).powi(2);
        assert!(((fa - fb) / fb).abs() < 1e-9, "{fa} vs {fb}");
    }
}

#[test]
fn modes_converge_for_delta_mirrors() {
    let out = casimir(&["modes", "--m1", "delta:g=1", "--m2", "delta:g=1", "--box", "500,1000,2000"]);
    assert_eq!(out.status.code(), Some(0));
    let devs: Vec<f64> = records(&out).iter().map(|r| num(&r[3])).collect();
    assert!(devs.windows(2).all(|w| w[1] < w[0]), "{devs:?}");
}
