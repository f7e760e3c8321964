use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn augucb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_augucb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(args: &[&str]) -> Value {
    let out = augucb(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn run_into(dir: &Path, extra: &[&str]) -> Output {
    let out_dir = dir.to_str().unwrap();
    let mut args = vec!["run", "--out", out_dir];
    args.extend_from_slice(extra);
    let out = augucb(&args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

const SMALL_RUN: &[&str] = &[
    "--experiment",
    "4",
    "--budget",
    "2000",
    "--iterations",
    "50",
    "--seed",
    "42",
];

fn sorted_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn run_writes_one_csv_per_algorithm_plus_manifest() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path(), SMALL_RUN);
    let files = sorted_files(dir.path());
    assert_eq!(files.len(), 7, "{files:?}");
    assert!(files.contains(&"manifest.json".to_string()));
    for algo in ["apt", "augucb", "ucbe", "ucbev", "csar", "ua"] {
        let name = format!("expt4_{algo}.csv");
        let text = fs::read_to_string(dir.path().join(&name)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,error_pct"));
        assert_eq!(lines.count(), 2000, "{name}");
    }
}

#[test]
fn subsample_keeps_every_kth_step_and_the_last() {
    let dir = tempfile::tempdir().unwrap();
    run_into(
        dir.path(),
        &[
            "--experiment",
            "4",
            "--budget",
            "1010",
            "--iterations",
            "4",
            "--subsample",
            "20",
            "--algorithms",
            "augucb",
        ],
    );
    let text = fs::read_to_string(dir.path().join("expt4_augucb.csv")).unwrap();
    let steps: Vec<u64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    let mut want: Vec<u64> = (1..=50).map(|i| 20 * i).collect();
    want.push(1010);
    assert_eq!(steps, want);
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_into(a.path(), SMALL_RUN);
    run_into(b.path(), &[SMALL_RUN, &["--parallelism", "3"]].concat());
    for name in sorted_files(a.path()) {
        if name.ends_with(".csv") {
            assert_eq!(
                fs::read(a.path().join(&name)).unwrap(),
                fs::read(b.path().join(&name)).unwrap(),
                "{name}"
            );
        }
    }
}

#[test]
fn manifest_replays_every_csv() {
    let first = tempfile::tempdir().unwrap();
    run_into(
        first.path(),
        &[
            "--experiment",
            "6",
            "--budget",
            "1500",
            "--iterations",
            "6",
            "--seed",
            "9",
            "--subsample",
            "7",
            "--rho",
            "0.25",
        ],
    );
    let m: Value =
        serde_json::from_str(&fs::read_to_string(first.path().join("manifest.json")).unwrap())
            .unwrap();
    let labels: Vec<String> = m["roster"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["label"].as_str().unwrap().to_string())
        .collect();
    let field = |k: &str| m[k].to_string().trim_matches('"').to_string();
    let second = tempfile::tempdir().unwrap();
    let (experiment, budget, iterations, seed, subsample, format, rho, b) = (
        field("experiment"),
        field("budget"),
        field("iterations"),
        field("base_seed"),
        field("subsample"),
        field("format"),
        field("rho"),
        field("b"),
    );
    let algorithms = labels.join(",");
    run_into(
        second.path(),
        &[
            "--experiment",
            &experiment,
            "--budget",
            &budget,
            "--iterations",
            &iterations,
            "--seed",
            &seed,
            "--subsample",
            &subsample,
            "--format",
            &format,
            "--rho",
            &rho,
            "--b",
            &b,
            "--algorithms",
            &algorithms,
        ],
    );
    assert_eq!(labels.len(), 4);
    for label in &labels {
        let name = format!("expt6_{label}.csv");
        assert_eq!(
            fs::read(first.path().join(&name)).unwrap(),
            fs::read(second.path().join(&name)).unwrap(),
            "{name}"
        );
    }
    assert_eq!(m["outputs"].as_array().unwrap().len(), 5);
    assert!(m["duration_secs"].as_f64().unwrap() >= 0.0);
}

#[test]
fn csv_is_locale_independent() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_augucb"))
        .env("LC_ALL", "de_DE.UTF-8")
        .env("LANG", "de_DE.UTF-8")
        .args([
            "run",
            "--experiment",
            "1",
            "--budget",
            "1200",
            "--iterations",
            "3",
            "--algorithms",
            "ua",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let bytes = fs::read(dir.path().join("expt1_ua.csv")).unwrap();
    assert!(!bytes.contains(&b'\r'));
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.ends_with('\n'));
    for line in text.lines().skip(1) {
        let (t, pct) = line.split_once(',').unwrap();
        assert!(t.bytes().all(|c| c.is_ascii_digit()), "{line}");
        let v: f64 = pct.parse().unwrap();
        assert!((0.0..=100.0).contains(&v), "{line}");
    }
}

#[test]
fn plain_format_is_headerless_and_space_separated() {
    let dir = tempfile::tempdir().unwrap();
    run_into(
        dir.path(),
        &[
            "--experiment",
            "2",
            "--budget",
            "1100",
            "--iterations",
            "2",
            "--format",
            "plain",
            "--algorithms",
            "apt",
        ],
    );
    let text = fs::read_to_string(dir.path().join("expt2_apt.txt")).unwrap();
    assert_eq!(text.lines().count(), 1100);
    assert!(text.lines().next().unwrap().starts_with("1 "));
}

#[test]
fn complexity_reports_scenario_values() {
    let v = json_stdout(&["complexity", "--experiment", "4"]);
    assert!((v["h1"].as_f64().unwrap() - 13000.0).abs() < 1e-6);
    assert!(v["note"].as_str().unwrap().contains("midpoint"));

    let v = json_stdout(&["complexity", "--experiment", "1"]);
    assert!((v["gaps"][0].as_f64().unwrap() - 0.3).abs() < 1e-12);
    assert_eq!(v["gaps"].as_array().unwrap().len(), 100);
}

fn bound_values(budget: u64) -> Value {
    json_stdout(&[
        "bounds",
        "--experiment",
        "3",
        "--budget",
        &budget.to_string(),
    ])["theoretical_bounds"]
        .clone()
}

#[test]
fn bounds_shrink_with_a_larger_budget() {
    // Each bound turns non-vacuous at a very different budget.
    for (key, budget) in [
        ("augucb_loss", 15_000_000_000),
        ("ucbev", 1_000_000_000),
        ("apt", 10_000_000),
        ("csar", 100_000_000),
    ] {
        let (small, large) = (bound_values(budget), bound_values(10 * budget));
        assert_eq!(small[key]["vacuous"], Value::Bool(false), "{key}");
        let (a, b) = (
            small[key]["value"].as_f64().unwrap(),
            large[key]["value"].as_f64().unwrap(),
        );
        assert!(b < a, "{key}: {a} -> {b}");
    }
}

#[test]
fn bounds_default_b_is_the_domain_boundary() {
    let v = json_stdout(&["bounds", "--experiment", "1", "--budget", "10000"]);
    let want = (std::f64::consts::E / 10_000.0).sqrt();
    assert!((v["b"].as_f64().unwrap() - want).abs() < 1e-15);
    assert!(
        (v["theoretical_bounds"]["augucb_regret"]["b"]
            .as_f64()
            .unwrap()
            - want)
            .abs()
            < 1e-15
    );
}

#[test]
fn vacuous_bounds_are_flagged() {
    let out = augucb(&["bounds", "--experiment", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"vacuous\": true"), "{text}");
}

#[test]
fn user_errors_exit_with_one() {
    let bad_b = augucb(&[
        "bounds",
        "--experiment",
        "1",
        "--budget",
        "10000",
        "--b",
        "0.001",
    ]);
    assert_eq!(bad_b.status.code(), Some(1));
    assert!(!bad_b.stderr.is_empty());

    assert_eq!(
        augucb(&["complexity", "--experiment", "7"]).status.code(),
        Some(1)
    );
    assert_eq!(
        augucb(&["bounds", "--experiment", "0"]).status.code(),
        Some(1)
    );

    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let unknown_algo = augucb(&[
        "run",
        "--experiment",
        "1",
        "--budget",
        "500",
        "--iterations",
        "1",
        "--algorithms",
        "nope",
        "--out",
        out_dir,
    ]);
    assert_eq!(unknown_algo.status.code(), Some(1));

    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let unwritable = augucb(&[
        "run",
        "--experiment",
        "1",
        "--budget",
        "500",
        "--iterations",
        "1",
        "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(unwritable.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(augucb(&["--help"]).status.code(), Some(0));
}
