use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_icnash");

fn icnash(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("ICNASH_SEED")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const ALL_ONES: &str = r#"{"g": [[[1, 1], [1, 1]], [[1, 1], [1, 1]]]}"#;

#[test]
fn solve_prints_both_games() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ones.json", ALL_ONES);
    let out = icnash(&["solve", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pa"]["type"], "E");
    assert_eq!(v["pa"]["kind"], "continuum");
    assert_eq!(v["cs"]["equilibria"], serde_json::json!([[1, 0], [0, 1]]));
}

#[test]
fn solve_single_game() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "three.json",
        r#"{"g": [[[1, 1], [2, 2]], [[2, 2], [1, 1]]]}"#,
    );
    let out = icnash(&["solve", "--input", &input, "--game", "pa"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["type"], "D");
    assert_eq!(v["equilibria"].as_array().unwrap().len(), 3);

    let out = icnash(&["solve", "--input", &input, "--game", "cs"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.get("payoff").is_some());
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.json", r#"{"g": [[1, 2]]"#);
    assert_eq!(icnash(&["solve", "--input", &input]).status.code(), Some(2));
    let input = write(
        dir.path(),
        "neg.json",
        r#"{"g": [[[1, -1], [1, 1]], [[1, 1], [1, 1]]]}"#,
    );
    assert_eq!(icnash(&["solve", "--input", &input]).status.code(), Some(2));
}

#[test]
fn zero_direct_gain_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "zero.json",
        r#"{"g": [[[0, 1], [1, 1]], [[1, 1], [1, 1]]]}"#,
    );
    let out = icnash(&["solve", "--input", &input]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_input_is_an_io_error() {
    assert_eq!(
        icnash(&["solve", "--input", "/nonexistent/instance.json"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn bad_flags_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let out = out.to_str().unwrap();
    assert_eq!(
        icnash(&["sweep-ne-count", "--trials", "0", "--out", out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        icnash(&["sweep-ne-count", "--snr-db", "5:0:10", "--out", out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        icnash(&["sweep-ne-count", "--snr-db", "10:5:0", "--out", out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(icnash(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(icnash(&["--help"]).status.code(), Some(0));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let code = icnash(&[
        "sweep-ne-count",
        "--trials",
        "5",
        "--out",
        "/nonexistent/dir/x.csv",
    ])
    .status
    .code();
    assert_eq!(code, Some(4));
}

#[test]
fn ne_count_sweep_writes_one_row_per_snr() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ne.csv");
    let p = path.to_str().unwrap();
    let out = icnash(&[
        "sweep-ne-count",
        "--snr-db",
        "-10:5:30",
        "--trials",
        "200",
        "--seed",
        "3",
        "--out",
        p,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), p);
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "snr_db,pa_a,pa_b,pa_d,pa_other,cs_one,cs_two,trials"
    );
    assert_eq!(lines.len(), 10);
    assert!(lines[1].starts_with("-10,"));
    assert!(lines[9].starts_with("30,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",200")));
}

#[test]
fn sweeps_are_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["sweep-ne-count", "sweep-sum-utility"] {
        let mut outputs = Vec::new();
        for (i, threads) in ["1", "2", "3"].into_iter().enumerate() {
            let path = dir.path().join(format!("{cmd}-{i}.csv"));
            let p = path.to_str().unwrap();
            let status = icnash(&[
                cmd,
                "--snr-db",
                "0:10:20",
                "--trials",
                "300",
                "--seed",
                "11",
                "--threads",
                threads,
                "--out",
                p,
            ])
            .status;
            assert!(status.success());
            outputs.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(outputs[0], outputs[1]);
        assert_eq!(outputs[0], outputs[2]);
    }
}

#[test]
fn seed_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let status = Command::new(BIN)
        .args([
            "sweep-sum-utility",
            "--snr-db",
            "10",
            "--trials",
            "100",
            "--out",
            a.to_str().unwrap(),
        ])
        .env("ICNASH_SEED", "42")
        .status()
        .unwrap();
    assert!(status.success());
    let status = icnash(&[
        "sweep-sum-utility",
        "--snr-db",
        "10",
        "--trials",
        "100",
        "--seed",
        "42",
        "--out",
        b.to_str().unwrap(),
    ])
    .status;
    assert!(status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn oracle_check_passes_on_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ones.json", ALL_ONES);
    let out = icnash(&["oracle-check", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let out = icnash(&["oracle-check", "--snr-db", "0", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checked"], 3);
}
