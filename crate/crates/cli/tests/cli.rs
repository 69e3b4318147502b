//! End-to-end checks of the binary: exit codes, artifact layout and seeded
//! idempotence, all against a small synthetic config.

use std::path::Path;
use std::process::{Command, Output};

const CONFIG: &str = r#"
seed = 7
folds = 5

[data.synth]
duration_s = 1.28
sample_rate = 4000.0
windows_per_class = 10

[[data.synth.classes]]
label = 1
kind = "healthy"
impulse_rate = 50.0
resonance = 1000.0
decay = 400.0
snr_db = 10.0

[[data.synth.classes]]
label = 2
kind = "inner_race"
impulse_rate = 90.0
resonance = 1500.0
decay = 600.0
snr_db = 6.0

[[data.synth.classes]]
label = 3
kind = "outer_race"
impulse_rate = 60.0
resonance = 800.0
decay = 350.0
snr_db = 6.0
speed_profile = "decreasing"
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vibradiag"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn write_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, CONFIG).unwrap();
    path
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name))
        .unwrap_or_else(|e| panic!("{name} missing: {e}"))
}

#[test]
fn help_and_fetch_instructions_succeed() {
    let help = run_ok(&["--help"]);
    assert!(String::from_utf8_lossy(&help.stdout).contains("sweep-threshold"));

    let fetch = run_ok(&["--fetch-instructions"]);
    let text = String::from_utf8_lossy(&fetch.stdout);
    assert!(text.contains("10.17632/v43hmbwxpm.1"), "citation present");
    for dir in ["healthy", "inner", "outer"] {
        assert!(text.contains(dir), "layout names {dir}");
    }
}

#[test]
fn bad_usage_and_bad_config_exit_1() {
    let unknown = bin().args(["--definitely-not-a-flag"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(1));

    let missing_sub = bin().output().unwrap();
    assert_eq!(missing_sub.status.code(), Some(1));

    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "folds = 1\n[data.synth]\n").unwrap();
    let out = bin()
        .args(["evaluate", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "config errors exit 1");
    assert!(!out.stderr.is_empty(), "plain-language message expected");
}

#[test]
fn missing_config_file_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["evaluate", "--config", "/nonexistent/config.toml", "--out"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "i/o errors exit 2");
}

#[test]
fn synth_writes_signals_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path());
    run_ok(&[
        "synth",
        "--config",
        config.to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    let manifest = read(tmp.path(), "manifest.csv");
    assert_eq!(manifest.lines().count(), 4, "header + one row per class");
    assert!(manifest.starts_with("path,label,sample_rate\n"));
    for label in 1..=3 {
        let body = read(tmp.path(), &format!("class_{label}.csv"));
        assert_eq!(body.lines().count(), 5120, "10 windows x 512 samples");
    }
}

#[test]
fn extract_emits_feature_matrix_reusable_as_files_source() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path());
    run_ok(&[
        "synth",
        "--config",
        config.to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    // Extract from the synthesized signal files rather than the generator.
    let mut files_cfg = String::from("seed = 7\nfolds = 5\n[window]\nlen = 512\n");
    files_cfg.push_str("[data.files]\nsample_rate = 4000.0\n");
    for label in 1..=3 {
        files_cfg.push_str(&format!(
            "[[data.files.entries]]\npath = \"{}\"\nlabel = {label}\n",
            tmp.path().join(format!("class_{label}.csv")).display()
        ));
    }
    let files_config = tmp.path().join("files.toml");
    std::fs::write(&files_config, files_cfg).unwrap();
    run_ok(&[
        "extract",
        "--config",
        files_config.to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    let features = read(tmp.path(), "features.csv");
    let mut lines = features.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 113, "112 features plus the label column");
    assert_eq!(header[0], "time.F1");
    assert_eq!(header[112], "label");
    assert_eq!(lines.count(), 30, "10 windows per class");
}

#[test]
fn experiment_subcommands_write_expected_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path());
    let cfg = config.to_str().unwrap();
    let out = tmp.path().to_str().unwrap();

    run_ok(&["select", "--config", cfg, "--out", out]);
    let weights = read(tmp.path(), "weights.csv");
    assert_eq!(weights.lines().count(), 113, "header + one row per feature");
    assert!(weights.starts_with("feature,d_w,d_b,rob,weight,selected\n"));
    assert!(!read(tmp.path(), "selected.txt").is_empty());

    run_ok(&["train", "--config", cfg, "--out", out]);
    assert!(read(tmp.path(), "model.txt").starts_with("format,wknn-model-v1\n"));

    run_ok(&["evaluate", "--config", cfg, "--out", out, "--verbose"]);
    let report = read(tmp.path(), "report.txt");
    for section in ["# run", "# folds", "# confusion", "# auc", "# config"] {
        assert!(report.contains(section), "report section {section}");
    }
    assert_eq!(read(tmp.path(), "folds.csv").lines().count(), 6);

    run_ok(&["sweep-threshold", "--config", cfg, "--out", out]);
    let sweep = read(tmp.path(), "sweep.csv");
    assert_eq!(sweep.lines().count(), 52, "header + 51 grid rows");

    run_ok(&["robustness", "--config", cfg, "--out", out, "--trials", "2"]);
    let rob = read(tmp.path(), "robustness.csv");
    assert_eq!(rob.lines().count(), 41, "header + 4 methods x 10 ratios");

    run_ok(&["compare", "--config", cfg, "--out", out]);
    let cmp = read(tmp.path(), "comparison.csv");
    assert_eq!(cmp.lines().count(), 6, "header + five methods");
}

#[test]
fn reruns_with_same_seed_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path());
    let cfg = config.to_str().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        run_ok(&[
            "evaluate",
            "--config",
            cfg,
            "--out",
            dir.to_str().unwrap(),
            "--seed",
            "99",
        ]);
        run_ok(&[
            "sweep-threshold",
            "--config",
            cfg,
            "--out",
            dir.to_str().unwrap(),
            "--seed",
            "99",
        ]);
    }
    for name in ["report.txt", "sweep.csv"] {
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
            "{name} must not depend on anything but config and seed"
        );
    }
}

#[test]
fn synth_rejects_file_sources() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("files.toml");
    std::fs::write(
        &cfg,
        "[window]\nlen = 512\n[data.files]\nsample_rate = 4000.0\n\
         [[data.files.entries]]\npath = \"x.csv\"\nlabel = 1\n",
    )
    .unwrap();
    let out = bin()
        .args(["synth", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
