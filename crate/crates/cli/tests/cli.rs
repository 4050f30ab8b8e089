use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fracmp_cli::RunConfig;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracmp"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .env("FRACMP_THREADS", "1")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn fixtures_parse_and_round_trip() {
    for name in ["classical.toml", "fractional.toml", "p3.toml", "manufactured.toml"] {
        let config = RunConfig::load(&fixture(name)).unwrap();
        let again = RunConfig::parse(&config.to_flat_string().unwrap()).unwrap();
        assert_eq!(config.to_flat_string().unwrap(), again.to_flat_string().unwrap(), "{name}");
        config.problem().unwrap();
    }
}

#[test]
fn solve_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["solve"], &fixture("fractional.toml"), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let solution = fs::read_to_string(dir.path().join("solution.csv")).unwrap();
    let mut lines = solution.lines();
    assert_eq!(lines.next(), Some("t,u,Dalpha_u"));
    assert_eq!(lines.count(), 257);
    assert!(!solution.contains('\r'));
    let profile = fs::read_to_string(dir.path().join("path_profile.csv")).unwrap();
    assert_eq!(profile.lines().count(), 18);
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("status = converged"));
}

#[test]
fn solve_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = run(&["solve", "--seed", "3"], &fixture("p3.toml"), dir.path());
        assert_eq!(out.status.code(), Some(0));
    }
    for file in ["solution.csv", "path_profile.csv"] {
        assert_eq!(
            fs::read(a.path().join(file)).unwrap(),
            fs::read(b.path().join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn order_below_window_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "mode = \"verify\"\ngrid_n = 64\nparams.alpha = 0.4\nparams.p = 2.0\n",
    );
    let out = run(&["verify"], &config, dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "mode = \"verify\"\ngrid_n = 64\nparams.alpha = 0.8\nparams.p = 2.0\nsolver.tolerance = 1.0\n",
    );
    let out = run(&["verify"], &config, dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_reports_violated_hypotheses_in_forcing_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify"], &fixture("manufactured.toml"), dir.path());
    assert_eq!(out.status.code(), Some(2));
    let table = String::from_utf8_lossy(&out.stdout);
    let f3 = table.lines().find(|l| l.contains("f3")).expect("f3 row");
    assert!(f3.contains("FAIL"), "{f3}");
}

#[test]
fn converge_writes_study() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["converge"], &fixture("manufactured.toml"), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let study = fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert_eq!(study.lines().next(), Some("n,quantity,value"));
    assert!(study.lines().count() > 4);
}
