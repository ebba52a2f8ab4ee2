//! End-to-end checks of the installed binary: transcripts, sweep outputs,
//! presets, config files, and the seed environment variable.

use std::process::Command;

fn designworld() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_designworld"));
    cmd.env_remove("DESIGNWORLD_SEED");
    cmd
}

#[test]
fn run_prints_a_transcript_and_exits_zero() {
    let out = designworld()
        .args([
            "run",
            "--seed",
            "7",
            "--strategy-a",
            "all-implicit",
            "--strategy-b",
            "all-implicit",
            "--radius",
            "16",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("| open |"), "no opening act:\n{stdout}");
    assert!(stdout.contains("| propose |"));
    assert!(stdout.contains("| close |"));
    assert!(stdout.contains("performance="));
}

#[test]
fn run_transcripts_are_stable_across_invocations() {
    let run = || {
        let out = designworld()
            .args(["run", "--seed", "3", "--radius", "4", "--strategy-a", "ew"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn sweep_writes_the_four_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = designworld()
        .args([
            "sweep", "--runs", "2", "--radii", "1,16", "--seed", "5", "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    for file in ["runs.csv", "summary.csv", "difference.svg", "verdict.txt"] {
        assert!(dir.path().join(file).exists(), "{file} missing");
    }
    let runs = std::fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert_eq!(
        runs.lines().count(),
        1 + 2 * 2 * 2,
        "header plus runs x radii x 2"
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict:"));
}

#[test]
fn replicate_presets_run_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = designworld()
        .args(["replicate", "figure5", "--runs", "3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let verdict = std::fs::read_to_string(dir.path().join("verdict.txt")).unwrap();
    assert!(verdict.contains("commcost 10"));
    assert!(verdict.contains("task: standard"));
}

#[test]
fn replicate_rejects_unknown_presets() {
    let out = designworld()
        .args(["replicate", "figure9"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn unknown_subcommand_exits_nonzero_with_usage() {
    let out = designworld().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.to_lowercase().contains("usage"),
        "no usage text:\n{stderr}"
    );
}

#[test]
fn seed_env_variable_sets_the_master_seed() {
    let run_with_env = |seed: &str, dir: &std::path::Path| {
        let out = designworld()
            .env("DESIGNWORLD_SEED", seed)
            .args(["sweep", "--runs", "2", "--radii", "1,16", "--out"])
            .arg(dir)
            .output()
            .unwrap();
        assert!(out.status.success());
        std::fs::read_to_string(dir.join("runs.csv")).unwrap()
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let d3 = tempfile::tempdir().unwrap();
    let a = run_with_env("11", d1.path());
    let b = run_with_env("11", d2.path());
    let c = run_with_env("12", d3.path());
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn config_file_drives_the_sweep_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("exp.conf");
    std::fs::write(
        &conf,
        "# tiny sweep\nruns = 2\nradii = 1, 16\nmaster_seed = 9\ncommcost = 10\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = designworld()
        .args(["sweep", "--config"])
        .arg(&conf)
        .args(["--commcost", "3", "--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let runs = std::fs::read_to_string(out_dir.join("runs.csv")).unwrap();
    let row = runs.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(
        fields[5], "3",
        "flag should override the config file commcost"
    );
}
