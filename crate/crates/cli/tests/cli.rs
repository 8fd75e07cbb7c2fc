use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use egf_cli::format::{write_ensemble, write_state};
use egf_core::qlinalg::{binary_entropy, random_pure_state};
use egf_core::tripartite::{egf_definition1, PairEfMode};
use egf_core::{Ensemble, PureState};
use tempfile::TempDir;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn egf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egf")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value(out: &Output, key: &str) -> f64 {
    let text = stdout(out);
    let line = text
        .split_whitespace()
        .find_map(|t| t.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text:?}"));
    line.parse().unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn cat(n: usize, sign: f64) -> PureState {
    let mut amps = vec![0.0; 1 << n];
    amps[0] = FRAC_1_SQRT_2;
    amps[(1 << n) - 1] = sign * FRAC_1_SQRT_2;
    PureState::from_real(&amps).unwrap()
}

#[test]
fn pure_prints_unit_value_for_cat_state() {
    let dir = TempDir::new().unwrap();
    let ghz = file(&dir, "ghz.txt", &write_state(&cat(3, 1.0)));
    let out = egf(&["pure", s(&ghz), "--method", "theorem1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "egf=1.0000000000000000\n");
    assert!(out.stderr.is_empty());
}

#[test]
fn pure_prints_exact_zero_for_products() {
    let dir = TempDir::new().unwrap();
    let prod = file(&dir, "p.txt", &write_state(&PureState::basis(3, 0).unwrap()));
    for method in ["theorem1", "definition1", "nparty"] {
        assert_eq!(stdout(&egf(&["pure", s(&prod), "--method", method])), "egf=0\n", "{method}");
    }
}

#[test]
fn four_qubit_cat_through_recursion() {
    let dir = TempDir::new().unwrap();
    let ghz4 = file(&dir, "ghz4.txt", &write_state(&cat(4, 1.0)));
    let out = egf(&["pure", s(&ghz4), "--method", "nparty"]);
    assert!(out.status.success());
    assert!((value(&out, "egf") - 1.0).abs() < 1e-6);
    let out = egf(&["pure", s(&ghz4), "--method", "nparty", "--roof", "convex-roof"]);
    assert!((value(&out, "egf") - 1.0).abs() < 1e-6);
}

#[test]
fn methods_agree_on_random_states() {
    let dir = TempDir::new().unwrap();
    for seed in 0..10 {
        let path = file(&dir, &format!("r{seed}.txt"), &write_state(&random_pure_state(3, seed)));
        let t = value(&egf(&["pure", s(&path), "--method", "theorem1"]), "egf");
        let d = value(&egf(&["pure", s(&path), "--method", "definition1"]), "egf");
        let n = value(&egf(&["pure", s(&path)]), "egf");
        assert!((t - d).abs() < 1e-9 && (t - n).abs() < 1e-9, "{t} {d} {n}");
        let w = value(&egf(&["pure", s(&path), "--method", "definition1", "--pair-ef", "wootters"]), "egf");
        assert!(w <= t + 1e-9);
    }
}

#[test]
fn report_lists_every_intermediate() {
    let dir = TempDir::new().unwrap();
    let path = file(&dir, "r.txt", &write_state(&random_pure_state(3, 5)));
    let out = stdout(&egf(&["pure", s(&path), "--method", "theorem1", "--report"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 28);
    assert!(lines[0].starts_with("egf="));
    assert!(lines.iter().all(|l| l.split_once('=').is_some_and(|(_, v)| v.parse::<f64>().is_ok())));
    assert!(lines.iter().any(|l| l.starts_with("lambda_bc=")));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad.txt", "n 1\n1 0\nnot a number\n");
    assert_eq!(egf(&["pure", s(&bad)]).status.code(), Some(1));
    let missing = dir.path().join("missing.txt");
    assert_eq!(egf(&["pure", s(&missing)]).status.code(), Some(1));
    let unnormalized = file(&dir, "u.txt", "n 1\n1 0\n1 0\n");
    assert_eq!(egf(&["pure", s(&unnormalized)]).status.code(), Some(2));
    let two = file(&dir, "two.txt", &write_state(&cat(2, 1.0)));
    assert_eq!(egf(&["pure", s(&two), "--method", "theorem1"]).status.code(), Some(3));
    assert_eq!(egf(&["pure", s(&two), "--report"]).status.code(), Some(3));
    assert_eq!(egf(&["known", "--name", "nope"]).status.code(), Some(1));
    assert_eq!(egf(&["frobnicate"]).status.code(), Some(1));
    let out = egf(&["sweep", "--family", "eq20", "--points", "2", "--out", s(&dir.path().join("no/such/dir.csv"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn help_goes_to_stdout_with_success() {
    let out = egf(&["--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("sweep"));
}

#[test]
fn mixed_classical_mixture_has_zero_bound() {
    let dir = TempDir::new().unwrap();
    let ens = Ensemble::new(vec![
        (0.5, PureState::basis(3, 0).unwrap()),
        (0.5, PureState::basis(3, 7).unwrap()),
    ])
    .unwrap();
    let path = file(&dir, "diag.txt", &write_ensemble(&ens));
    let out = egf(&["mixed", s(&path)]);
    assert!(out.status.success());
    assert!(value(&out, "egf_upper_bound") <= 1e-6);
    assert!(stdout(&out).contains("converged="));
    assert!(stdout(&out).contains("restarts="));
}

#[test]
fn mixed_cat_pair_matches_diagonal_form() {
    let dir = TempDir::new().unwrap();
    let cats = Ensemble::new(vec![(0.5, cat(3, 1.0)), (0.5, cat(3, -1.0))]).unwrap();
    let diag = Ensemble::new(vec![
        (0.5, PureState::basis(3, 0).unwrap()),
        (0.5, PureState::basis(3, 7).unwrap()),
    ])
    .unwrap();
    let a = value(&egf(&["mixed", s(&file(&dir, "c.txt", &write_ensemble(&cats)))]), "egf_upper_bound");
    let b = value(&egf(&["mixed", s(&file(&dir, "d.txt", &write_ensemble(&diag)))]), "egf_upper_bound");
    assert!(a <= 1e-6 && b <= 1e-6, "{a} {b}");
}

#[test]
fn mixed_single_component_equals_pure() {
    let dir = TempDir::new().unwrap();
    let psi = random_pure_state(3, 11);
    let ens = file(&dir, "e.txt", &write_ensemble(&Ensemble::pure(psi.clone())));
    let st = file(&dir, "s.txt", &write_state(&psi));
    let m = value(&egf(&["mixed", s(&ens)]), "egf_upper_bound");
    let p = value(&egf(&["pure", s(&st)]), "egf");
    assert!((m - p).abs() < 1e-12);
}

#[test]
fn mixed_is_deterministic_and_strict_flags_budget() {
    let dir = TempDir::new().unwrap();
    let ens = Ensemble::new(vec![(0.5, random_pure_state(3, 1)), (0.5, random_pure_state(3, 2))]).unwrap();
    let path = file(&dir, "e.txt", &write_ensemble(&ens));
    let args = ["mixed", s(&path), "--restarts", "3", "--max-evals", "200", "--seed", "4"];
    assert_eq!(stdout(&egf(&args)), stdout(&egf(&args)));
    let tight = ["mixed", s(&path), "--restarts", "1", "--max-evals", "5"];
    let lax = egf(&tight);
    assert!(lax.status.success());
    assert!(stdout(&lax).contains("converged=false"));
    let mut strict = tight.to_vec();
    strict.push("--strict");
    let out = egf(&strict);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).starts_with("egf_upper_bound="));
    let mut quiet = tight.to_vec();
    quiet.push("--quiet");
    assert!(egf(&quiet).stderr.is_empty());
}

#[test]
fn sweep_writes_csv() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("ghz.csv");
    let out = egf(&["sweep", "--family", "ghz-like", "--points", "11", "--out", s(&out_path)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert!(!csv.contains('\r'));
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 12);
    for row in &rows[1..] {
        let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cols[1] - binary_entropy(cols[0]).unwrap()).abs() < 1e-9);
    }
    let mid: Vec<f64> = rows[6].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(mid[0], 0.5);
    assert!((mid[1] - 1.0).abs() < 1e-12);
}

#[test]
fn sweep_two_points_and_eq20_endpoint() {
    let out = egf(&["sweep", "--family", "eq20", "--points", "2"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    let last: Vec<f64> = rows[2].split(',').map(|c| c.parse().unwrap()).collect();
    let x = std::f64::consts::SQRT_2;
    let amps = [x / 3.0, 0.0, 1.0 / 3.0, 0.0, 0.0, 1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), 1.0 / 3f64.sqrt()];
    let oracle = egf_definition1(&PureState::from_real(&amps).unwrap(), PairEfMode::BranchDecomposition).unwrap();
    assert_eq!(last[0], x);
    assert!((last[1] - oracle).abs() < 1e-9);
    assert_eq!(egf(&["sweep", "--family", "eq20", "--points", "1"]).status.code(), Some(1));
}

#[test]
fn known_catalog() {
    let list = stdout(&egf(&["known", "--list"]));
    let ids: Vec<&str> = list.lines().collect();
    assert_eq!(ids.len(), 28);
    for id in ids {
        let out = stdout(&egf(&["known", "--name", id]));
        assert!(out.contains("pass=true"), "{id}: {out}");
        assert_eq!(out.lines().filter(|l| l.starts_with("amp_")).count(), 8);
    }
    let custom = stdout(&egf(&["known", "--name", "eb-ab-psi+", "--chi", "0.6", "0", "0", "-0.8"]));
    assert!(custom.contains("pass=true"));
    let strict = stdout(&egf(&["known", "--name", "eb-ab-psi+", "--tolerance", "0"]));
    assert!(strict.contains("pass="));
}
