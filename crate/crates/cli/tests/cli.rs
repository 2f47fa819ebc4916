use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn radnls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radnls")).args(args).env("RUST_LOG", "error").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.cfg");
    fs::write(&p, text).unwrap();
    p
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn column(path: &Path, name: &str) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let i = r.headers().unwrap().iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    r.records().map(|rec| rec.unwrap()[i].to_string()).collect()
}

fn csv_bodies(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn empty_config_applies_defaults() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "");
    let out = tmp.path().join("out");
    let o = radnls(&["verify-weights", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let c = &summary(&out)["config"];
    assert_eq!(c["dimension"], "3");
    assert_eq!(c["epsilon"].as_str().unwrap().parse::<f64>().unwrap(), 0.01);
    assert_eq!(c["grid.radius"], "20");
    assert_eq!(c["grid.nodes"], "512");
    assert_eq!(c["solver.dt"].as_str().unwrap().parse::<f64>().unwrap(), 1e-3);
}

#[test]
fn conservative_epsilon_is_n_to_the_minus_ten() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "dimension = 4\nepsilon = conservative\n");
    let o = radnls(&["verify-weights", "--config", cfg.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert!(matches!(code(&o), 0 | 1), "{}", stderr(&o));
    let eps: f64 = summary(tmp.path())["config"]["epsilon"].as_str().unwrap().parse().unwrap();
    assert_eq!(eps, 4f64.powi(-10));
}

#[test]
fn dimension_two_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "# low dimension\ndimension = 2\n");
    let o = radnls(&["simulate", "--config", cfg.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let e = stderr(&o);
    assert!(e.contains("line 2") && e.contains("n >= 3"), "{e}");
}

#[test]
fn unknown_keys_are_errors_with_line_numbers() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "grid.radius = 10\n\nsolver.tend = 1\n");
    let o = radnls(&["simulate", "--config", cfg.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let e = stderr(&o);
    assert!(e.contains("line 3") && e.contains("unknown key `solver.tend`"), "{e}");
    let o = radnls(&["simulate", "--set", "solver.dt=-1", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--set solver.dt=-1"), "{}", stderr(&o));
}

#[test]
fn malformed_invocations_exit_with_usage() {
    for args in [&["frobnicate"][..], &[][..], &["simulate", "--no-such-flag"][..]] {
        let o = radnls(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(stderr(&o).contains("Usage"), "{args:?}: {}", stderr(&o));
    }
    assert_eq!(code(&radnls(&["--help"])), 0);
}

#[test]
fn missing_checkpoint_is_an_error() {
    let tmp = TempDir::new().unwrap();
    let o = radnls(&["diagnose", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!tmp.path().join("summary.json").exists());
}

#[test]
fn default_weights_pass_with_positive_floors() {
    let tmp = TempDir::new().unwrap();
    let o = radnls(&["verify-weights", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let frontier = tmp.path().join("frontier.csv");
    for name in ["neg_bilap_a_min", "hessian_min", "delta_a_min"] {
        for v in column(&frontier, name) {
            assert!(v.parse::<f64>().unwrap() > 0.0, "{name} = {v}");
        }
    }
    assert_eq!(summary(tmp.path())["status"], "PASS");
}

#[test]
fn large_epsilon_fails_the_bilaplacian_bound() {
    let tmp = TempDir::new().unwrap();
    let o = radnls(&["verify-weights", "--epsilon", "0.9", "--dimension", "3", "--out", tmp.path().to_str().unwrap()]);
    let s = summary(tmp.path());
    let row = s["checks"].as_array().unwrap().iter().find(|c| c["name"] == "n3_eps0.9.neg_bilap_a").unwrap().clone();
    assert_eq!(code(&o), 1, "expected a FAIL row, got {row}");
    assert_eq!(row["status"], "FAIL");
}

#[test]
fn diagnose_reproduces_the_simulated_masses() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("sim"), tmp.path().join("diag"));
    let o = radnls(&["simulate", "--out", a.to_str().unwrap(), "--set", "solver.t_end=0.1", "--set", "solver.record_stride=10"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let ckpt = a.join("trajectory.ckpt");
    let o = radnls(&["diagnose", "--checkpoint", ckpt.to_str().unwrap(), "--out", b.to_str().unwrap(), "--set", "verify.n_list=0.5,2,8"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m1: Vec<f64> = column(&a.join("norms.csv"), "mass").iter().map(|v| v.parse().unwrap()).collect();
    let m2: Vec<f64> = column(&b.join("norms.csv"), "mass").iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(m1.len(), 11);
    assert_eq!(m1.len(), m2.len());
    for (x, y) in m1.iter().zip(&m2) {
        assert!((x - y).abs() <= 1e-12 * x.abs(), "{x} vs {y}");
    }
    let mass = |d: &Path| summary(d)["checks"].as_array().unwrap().iter().find(|c| c["name"] == "mass_initial").unwrap()["value"].as_f64().unwrap();
    assert!((mass(&a) - mass(&b)).abs() <= 1e-12 * mass(&a));
    assert_eq!(column(&b.join("q_functional.csv"), "Q").len(), 3);
}

#[test]
fn seeded_runs_give_identical_csv_across_runs_and_workers() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "seed = 11\n\
         verify.appendix_suites = bilinear, sobolev, uncertainty\n\
         verify.family_count = 2\n\
         verify.appendix_radius = 48\n\
         verify.appendix_nodes = 2048\n\
         verify.uncertainty_n_list = 2^-2..2^4\n",
    );
    let mut bodies = Vec::new();
    for (run, workers) in [("a", "1"), ("b", "1"), ("c", "3")] {
        let dir = tmp.path().join(run);
        let o = radnls(&["verify-appendix", "--config", cfg.to_str().unwrap(), "--workers", workers, "--out", dir.to_str().unwrap()]);
        // The small box may fail the invariance bound; only the bytes matter here.
        assert!(matches!(code(&o), 0 | 1), "{}", stderr(&o));
        bodies.push(csv_bodies(&dir));
    }
    assert!(bodies[0].len() >= 5);
    assert_eq!(bodies[0], bodies[1]);
    assert_eq!(bodies[0], bodies[2]);
}

#[test]
fn sweep_tags_every_group() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "sweep.dimensions = 3, 4, 5\nsweep.epsilons = 0.01, 0.05\nsolver.t_end = 0.02\n");
    let mut bodies = Vec::new();
    for workers in ["1", "2"] {
        let dir = tmp.path().join(format!("w{workers}"));
        let o = radnls(&["sweep", "--config", cfg.to_str().unwrap(), "--workers", workers, "--out", dir.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        bodies.push(csv_bodies(&dir));
    }
    assert_eq!(bodies[0], bodies[1]);
    let dir = tmp.path().join("w1");
    let tags: Vec<(String, String)> = column(&dir.join("sweep.csv"), "n").into_iter().zip(column(&dir.join("sweep.csv"), "eps")).collect();
    assert_eq!(tags.len(), 6);
    let mut groups: Vec<(String, String)> =
        column(&dir.join("sweep_morawetz.csv"), "n").into_iter().zip(column(&dir.join("sweep_morawetz.csv"), "eps")).collect();
    groups.dedup();
    assert_eq!(groups, tags);
    let names: Vec<String> = column(&dir.join("checks.csv"), "name");
    for (n, e) in [(3, "0.01"), (4, "0.05"), (5, "0.01")] {
        assert!(names.iter().any(|x| x.starts_with(&format!("n{n}_eps{e}."))), "missing group n={n} eps={e}");
    }
}

#[test]
fn empty_report_has_a_valid_summary() {
    let tmp = TempDir::new().unwrap();
    let o = radnls(&["verify-appendix", "--set", "verify.appendix_suites=", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = summary(tmp.path());
    assert_eq!(s["schema_version"], 1);
    assert_eq!(s["status"], "PASS");
    assert_eq!(s["checks"].as_array().unwrap().len(), 0);
    assert_eq!(s["tables"].as_array().unwrap().len(), 0);
    assert_eq!(s["counts"]["fail"], 0);
    assert!(s["timings"]["total"].as_f64().unwrap() >= 0.0);
    assert_eq!(fs::read_to_string(tmp.path().join("checks.csv")).unwrap(), "name,status,value,relation,bound,detail\n");
}

#[test]
fn formats_can_be_restricted() {
    let tmp = TempDir::new().unwrap();
    let o = radnls(&["verify-weights", "--set", "output.formats=json", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(tmp.path().join("summary.json").exists());
    assert!(csv_bodies(tmp.path()).is_empty());
}
