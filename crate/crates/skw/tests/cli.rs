//! Behavior of the `skw` binary: exit codes, output files, and the
//! checkpoint-resume contract, exercised through real processes in
//! temporary directories.

use std::path::Path;
use std::process::{Command, Output};

use skw::io::{read_snapshot, DIAGNOSTICS_HEADER, INTERVAL_HEADER};

fn skw(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skw"))
        .args(args)
        .current_dir(dir)
        .env("SKW_OUTPUT_ROOT", dir)
        .output()
        .expect("spawn skw")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

fn small_config(dir: &Path, extra: &str) -> String {
    let out = dir.join("out");
    write_config(
        dir,
        "run.cfg",
        &format!(
            "n = 64\nlength = 40\ndt = 1e-3\nt_end = 0.05\ncadence = 10\n\
             ic_u = gaussian(0.8, 0, 0.5)\nic_v = gaussian(0.5, 0, 0)\n\
             output_dir = {}\n{extra}",
            out.display()
        ),
    )
}

#[test]
fn help_prints_usage_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = skw(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("Usage: skw"), "{stdout}");
}

#[test]
fn unknown_subcommand_prints_usage_and_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = skw(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Usage"), "{stderr}");
    let bare = skw(&[], dir.path());
    assert_eq!(bare.status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = skw(&["verify", "--extra-loud"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_exits_one_and_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = skw(&["simulate", "--config", "missing.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("missing.cfg"), "{stderr}");
}

#[test]
fn bad_norms_case_exits_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = skw(&["norms", "--case", "quintic", "--samples", "2"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("quintic"), "{stderr}");
}

#[test]
fn config_errors_exit_one_with_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "bad.cfg", "alpha = 1\ndelta = 0\n");
    let out = skw(&["simulate", "--config", &path], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn simulate_writes_diagnostics_and_a_final_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out = skw(&["simulate", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let diag = std::fs::read_to_string(dir.path().join("out/diagnostics.csv")).unwrap();
    let lines: Vec<&str> = diag.lines().collect();
    assert_eq!(lines[0], DIAGNOSTICS_HEADER);
    // Initial state, one row per 10 of the 50 steps (the last coincides
    // with the final state), and the final state.
    assert_eq!(lines.len() - 1, 6);

    let (state, _) = read_snapshot(dir.path().join("out/final.snap")).unwrap();
    assert_eq!(state.grid().n(), 64);
    assert!((state.t - 0.05).abs() < 1e-12);
}

#[test]
fn checkpoint_resume_matches_the_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();

    let full_out = dir.path().join("full");
    let full_cfg = write_config(
        dir.path(),
        "full.cfg",
        &format!(
            "n = 64\nlength = 40\ndt = 1e-3\nt_end = 0.05\ncadence = 0\n\
             ic_u = gaussian(0.8, 0, 0.5)\nic_v = gaussian(0.5, 0, 0)\noutput_dir = {}\n",
            full_out.display()
        ),
    );
    assert_eq!(skw(&["simulate", "--config", &full_cfg], dir.path()).status.code(), Some(0));

    let head_out = dir.path().join("head");
    let head_cfg = write_config(
        dir.path(),
        "head.cfg",
        &format!(
            "n = 64\nlength = 40\ndt = 1e-3\nt_end = 0.02\ncadence = 0\n\
             ic_u = gaussian(0.8, 0, 0.5)\nic_v = gaussian(0.5, 0, 0)\noutput_dir = {}\n",
            head_out.display()
        ),
    );
    assert_eq!(skw(&["simulate", "--config", &head_cfg], dir.path()).status.code(), Some(0));

    let tail_out = dir.path().join("tail");
    let tail_cfg = write_config(
        dir.path(),
        "tail.cfg",
        &format!(
            "n = 64\nlength = 40\ndt = 1e-3\nt_end = 0.05\ncadence = 0\n\
             ic_u = gaussian(0.8, 0, 0.5)\nic_v = gaussian(0.5, 0, 0)\noutput_dir = {}\n",
            tail_out.display()
        ),
    );
    let checkpoint = head_out.join("final.snap");
    let out = skw(
        &["simulate", "--config", &tail_cfg, "--resume", &checkpoint.display().to_string()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let (full, _) = read_snapshot(full_out.join("final.snap")).unwrap();
    let (resumed, _) = read_snapshot(tail_out.join("final.snap")).unwrap();
    let mut worst = 0.0f64;
    for (a, b) in full.u.samples().iter().zip(resumed.u.samples()) {
        worst = worst.max((a - b).norm());
    }
    for (a, b) in full.v.samples().iter().zip(resumed.v.samples()) {
        worst = worst.max((a - b).abs());
    }
    assert!(worst <= 1e-12, "resume deviates by {worst}");
}

#[test]
fn cht_writes_one_row_per_interval() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out = skw(&["cht", "--config", &cfg, "--T", "0.01", "--intervals", "20"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.path().join("out/intervals.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], INTERVAL_HEADER);
    assert_eq!(lines.len() - 1, 20);
}

#[test]
fn kawahara_reports_its_drift() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out = skw(&["kawahara", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("drift"), "{stdout}");
    let (state, _) = read_snapshot(dir.path().join("out/final.snap")).unwrap();
    assert!(state.u.samples().iter().all(|c| c.norm() == 0.0));
}

#[test]
fn scale_check_prints_both_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out = skw(&["scale-check", "--config", &cfg, "--lambda", "0.5"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("lambda = 1"), "{stdout}");
    assert!(stdout.contains("lambda = 0.5"), "{stdout}");
}

#[test]
fn norms_runs_a_single_case_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("ratios.csv");
    let out = skw(
        &[
            "norms",
            "--case",
            "uv",
            "--samples",
            "5",
            "--out",
            &csv_path.display().to_string(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("uv"), "{stdout}");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn deterministic_given_config_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for (name, out) in [("a.cfg", &out_a), ("b.cfg", &out_b)] {
        let cfg = write_config(
            dir.path(),
            name,
            &format!(
                "n = 64\nlength = 40\ndt = 1e-3\nt_end = 0.02\ncadence = 0\nseed = 7\n\
                 ic_u = random_bandlimited(0.4, 6)\nic_v = random_bandlimited(0.3, 6)\n\
                 output_dir = {}\n",
                out.display()
            ),
        );
        assert_eq!(skw(&["simulate", "--config", &cfg], dir.path()).status.code(), Some(0));
    }
    let bytes_a = std::fs::read(out_a.join("final.snap")).unwrap();
    let bytes_b = std::fs::read(out_b.join("final.snap")).unwrap();
    assert_eq!(bytes_a, bytes_b);
}
