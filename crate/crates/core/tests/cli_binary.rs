//! The installed binary: exit codes and the pipeline verdict line.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cayley-transpose"))
}

#[test]
fn pipeline_prints_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["pipeline", "--builtin", "z7-124", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "tau=3 theta=3 psi_W=3 optimal=true\n"
    );
    for file in [
        "words.json",
        "factorization.json",
        "schedule.csv",
        "trace.csv",
        "report.json",
    ] {
        assert!(dir.path().join(file).exists(), "missing {file}");
    }
}

#[test]
fn bad_input_exits_one() {
    let out = bin()
        .args(["bounds", "--builtin", "nope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn exhausted_search_exits_two() {
    let out = bin()
        .args([
            "pipeline",
            "--builtin",
            "petersen",
            "--search",
            "--budget",
            "0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
