use std::path::Path;
use std::process::{Command, Output};

fn socrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_socrec"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn small_spec(dir: &Path) -> std::path::PathBuf {
    let spec = dir.join("spec.json");
    std::fs::write(
        &spec,
        r#"{"n_users": 40, "n_communities": 2, "n_days": 3, "docs_per_day": 8, "vocab_size": 200, "topic_count": 4, "p_in": 0.2}"#,
    )
    .unwrap();
    spec
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&socrec(&["--help"])), 0);
    assert_eq!(code(&socrec(&["run", "--help"])), 0);
    assert_eq!(code(&socrec(&["frobnicate"])), 1);
    assert_eq!(code(&socrec(&["run"])), 1);
}

#[test]
fn generate_run_metrics_pagerank() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    let out = tmp.path().join("out");
    let spec = small_spec(tmp.path());
    let o = socrec(&["generate", "--config", p(&spec), "--out", p(&data), "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let cfg = tmp.path().join("run.json");
    std::fs::write(&cfg, r#"{"dim_hidden": 4, "beam_width": 2, "depth": 3}"#).unwrap();
    let o = socrec(&["run", "--config", p(&cfg), "--data", p(&data), "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let printed = String::from_utf8(o.stdout).unwrap();
    assert!(printed.starts_with("day,auc,f1,gini,cc,n_samples\n"));
    assert!(out.join("manifest.json").exists());
    assert!(out.join("predictions.csv").exists());

    // recomputing from the prediction log reproduces the run's metrics
    let o = socrec(&["metrics", "--data", p(&data), p(&out.join("predictions.csv"))]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), std::fs::read_to_string(out.join("metrics.csv")).unwrap());

    let o = socrec(&["pagerank", "--data", p(&data)]);
    assert_eq!(code(&o), 0);
    let total: f64 = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-6);

    let o = socrec(&["explore", "--data", p(&data), "--user", "u00", "--day", "0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().contains("path 0"));
}

#[test]
fn config_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.json");
    std::fs::write(&cfg, r#"{"beam_widht": 3}"#).unwrap();
    let o = socrec(&["run", "--config", p(&cfg), "--data", p(tmp.path()), "--out", p(&tmp.path().join("o"))]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("beam_widht"));
    let o = socrec(&["run", "--data", p(tmp.path()), "--out", p(&tmp.path().join("o")), "--mode", "psychic"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn data_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    socrec(&["generate", "--config", p(&small_spec(tmp.path())), "--out", p(&data)]);
    std::fs::write(data.join("graph.tsv"), "u00\tu00\n").unwrap();
    let o = socrec(&["pagerank", "--data", p(&data)]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    let o = socrec(&["pagerank", "--data", p(&tmp.path().join("missing"))]);
    assert_eq!(code(&o), 2);
}
