use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn holonomy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holonomy")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn synth_t_third_vertex_is_the_smallest_root() {
    let v = json(&holonomy(&["synth", "--gate", "T", "--j", "3/2"]));
    let verts = v["results"]["vertices"].as_array().unwrap();
    assert_eq!(verts.len(), 4);
    assert!((f(&verts[2][1]) - 0.26030436).abs() < 1e-6);
    assert!(f(&v["results"]["recomposition_fidelity"]) > 1.0 - 1e-12);
    assert_eq!(v["command"], "synth");
}

#[test]
fn printed_table_reproduces_tabulated_vertices() {
    let t = json(&holonomy(&["synth", "--gate", "t", "--printed-table"]));
    let third = f(&t["results"]["vertices"][2][1]);
    assert!((third - 1.4384016082329931).abs() < 1e-9);
    let h = json(&holonomy(&["synth", "--gate", "H", "--printed-table", "--alternate-h"]));
    assert_eq!(h["results"]["vertices"].as_array().unwrap().len(), 7);
}

#[test]
fn synth_h_has_seven_vertices() {
    let v = json(&holonomy(&["synth", "--gate", "H"]));
    let verts = v["results"]["vertices"].as_array().unwrap();
    assert_eq!(verts.len(), 7);
    assert!((f(&verts[5][1]) - 2f64.sqrt().atan()).abs() < 1e-9);
}

#[test]
fn overlap_with_zero_xi_is_diagonal() {
    let v = json(&holonomy(&["overlap", "--a", "0,0", "--b", "pi/3,pi/5", "--xi", "0"]));
    let m = &v["results"]["matrix"];
    for (r, c) in [(0, 1), (1, 0)] {
        assert_eq!(f(&m[r][c][0]), 0.0);
        assert_eq!(f(&m[r][c][1]), 0.0);
    }
    assert!(f(&m[0][0][0]).abs() > 0.1);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["simulate", "--shots", "2000", "--seed", "11", "--strategy", "restart"];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.path");
    fs::write(&path, "0 0\npi/2 pi\npi/2 pi/4\n0 0\n").unwrap();
    let p = path.to_str().unwrap();
    let mut full: Vec<&str> = args.to_vec();
    full.push(p);
    let a = holonomy(&full);
    let b = Command::new(env!("CARGO_BIN_EXE_holonomy")).args(&full).env("THREADS", "1").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let done = v["results"]["successes"].as_u64().unwrap() + v["results"]["exhausted_restarts"].as_u64().unwrap();
    assert_eq!(done, 2000);
}

#[test]
fn simulate_reports_malformed_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.path");
    fs::write(&path, "# cycle\n0 0\npi/2 oops\n0 0\n").unwrap();
    let out = holonomy(&["simulate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":3:"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(holonomy(&["synth"]).status.code(), Some(2));
    assert_eq!(holonomy(&["synth", "--gate", "T", "--j", "1"]).status.code(), Some(2));
    assert_eq!(holonomy(&["synth", "--gate", "rz"]).status.code(), Some(2));
    assert_eq!(holonomy(&["simulate", "/nonexistent/path/file"]).status.code(), Some(2));
    assert_eq!(holonomy(&["--help"]).status.code(), Some(0));
    // The x base cycle closes through the south pole, an antipodal leg.
    assert_eq!(holonomy(&["zeno", "--axis", "x", "--phi", "pi", "--steps", "4"]).status.code(), Some(4));
}

#[test]
fn zeno_writes_csv_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("zeno.csv");
    let v = json(&holonomy(&["zeno", "--steps", "4,16", "--out", out.to_str().unwrap()]));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,relative_phase,survival_probability,max_offdiag");
    assert_eq!(lines.len(), 3);
    let rows = v["results"]["rows"].as_array().unwrap();
    let phase: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(phase, f(&rows[1]["relative_phase"]));
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let args = ["overlap", "--a", "0.3,0.2", "--b", "1.1,-2"];
    let v = json(&holonomy(&args));
    let mut csv_args = vec!["--format", "csv"];
    csv_args.extend_from_slice(&args);
    let out = holonomy(&csv_args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let kappa = text.lines().find_map(|l| l.strip_prefix("results.kappa,")).unwrap();
    assert_eq!(kappa.parse::<f64>().unwrap(), f(&v["results"]["kappa"]));
}

#[test]
fn qec_subcommands() {
    let b = json(&holonomy(&["qec", "bitflip-demo", "--random", "5", "--seed", "3"]));
    assert!(f(&b["results"]["min_fidelity"]) > 1.0 - 1e-12);
    let lab = json(&holonomy(&["qec", "bitflip-demo", "--direction", "pi/2,0", "--lab-frame"]));
    assert!(f(&lab["results"]["min_fidelity"]) < 1.0 - 1e-6);
    let s = json(&holonomy(&["qec", "shor-verify", "--samples", "20", "--direct", "2"]));
    assert!(f(&s["results"]["max_condition_violation"]) < 1e-10);
    assert!(f(&s["results"]["max_direct_deviation"]) < 1e-10);
}
