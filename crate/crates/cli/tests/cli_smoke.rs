//! End-to-end binary tests: exit codes, format flags, and the
//! save-log / replay round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cohen-gabber"))
}

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/corpus")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn flagship_certifies_with_exit_zero() {
    let out = run(&[corpus("01_flagship_p2.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status: certified"));
    assert!(text.contains("twist delta=1"));
    assert!(text.contains("s = t + X"));
}

#[test]
fn pth_power_exits_two() {
    let out = run(&[corpus("10_pth_power_p2.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("p-th power"));
}

#[test]
fn exhaustion_exits_three() {
    let out = run(&[corpus("13_d0_nonreduced_p2.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("precision exhausted"));
}

#[test]
fn missing_file_exits_one() {
    let out = run(&["/nonexistent/input.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let dir = std::env::temp_dir().join("cg-cli-syntax");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.txt");
    std::fs::write(&path, "p=2 field=Fp vars=X,Y\nfactor=X + W\n").unwrap();
    let out = run(&[path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("line 2"), "{text}");
    assert!(text.contains("unknown variable `W`"), "{text}");
}

#[test]
fn non_prime_p_exits_two() {
    let dir = std::env::temp_dir().join("cg-cli-nonprime");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p4.txt");
    std::fs::write(&path, "p=4 field=Fp vars=X,Y\nfactor=X+Y\n").unwrap();
    let out = run(&[path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn structured_output_is_byte_stable() {
    let input = corpus("08_mixed_p2.txt");
    let first = run(&[input.to_str().unwrap(), "--format", "structured"]);
    let second = run(&[input.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn save_log_then_replay_reproduces_certificates() {
    let dir = std::env::temp_dir().join("cg-cli-replay");
    std::fs::create_dir_all(&dir).unwrap();
    let log_path = dir.join("flagship.log");
    let input = corpus("01_flagship_p2.txt");
    let first = run(&[
        input.to_str().unwrap(),
        "--format",
        "structured",
        "--save-log",
        log_path.to_str().unwrap(),
    ]);
    assert_eq!(first.status.code(), Some(0));
    let saved = std::fs::read_to_string(&log_path).unwrap();
    assert!(saved.contains("precision=24"));
    assert!(saved.contains("twist delta=1"));

    let replayed = run(&[
        input.to_str().unwrap(),
        "--format",
        "structured",
        "--replay",
        log_path.to_str().unwrap(),
    ]);
    assert_eq!(replayed.status.code(), Some(0));
    let first_text = String::from_utf8(first.stdout).unwrap();
    let replay_text = String::from_utf8(replayed.stdout).unwrap();
    let certs = |s: &str| {
        s.split("certificates:\n")
            .nth(1)
            .unwrap()
            .split("diagnostics:")
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(certs(&first_text), certs(&replay_text));
}

#[test]
fn replay_of_a_mismatched_log_fails_cleanly() {
    let dir = std::env::temp_dir().join("cg-cli-badlog");
    std::fs::create_dir_all(&dir).unwrap();
    let log_path = dir.join("bad.log");
    std::fs::write(&log_path, "shear var=Q power=2\n").unwrap();
    let out = run(&[
        corpus("01_flagship_p2.txt").to_str().unwrap(),
        "--replay",
        log_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
