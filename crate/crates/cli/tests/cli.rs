use std::path::PathBuf;
use std::process::{Command, Output};

fn evomodel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evomodel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scenarios_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/scenarios")
}

#[test]
fn state_file_persists_between_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("engine.pet");
    let state = state.to_str().unwrap();

    let first = evomodel(&["--state", state, "query", "101"]);
    assert_eq!(first.status.code(), Some(0));
    assert!(stdout(&first).starts_with("101:  YES accepted"));

    let second = evomodel(&["--state", state, "query", "10"]);
    assert_eq!(second.status.code(), Some(0));
    assert!(stdout(&second).starts_with("10:  NO halted-rejected"));

    let saved = std::fs::read_to_string(state).unwrap();
    assert!(saved.starts_with("PET1 v1\nstates: q0 q1 q2 q3\n"));

    let snap = evomodel(&["--state", state, "snapshot"]);
    assert_eq!(stdout(&snap), saved);
}

#[test]
fn without_state_each_invocation_is_fresh() {
    evomodel(&["query", "101"]);
    let o = evomodel(&["query", "10"]);
    assert!(stdout(&o).contains("YES accepted"));
}

#[test]
fn bad_input_exits_with_two() {
    let o = evomodel(&["run", "1x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid symbol"));
}

#[test]
fn corrupt_state_file_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("bad.pet");
    std::fs::write(&state, "PET1 v1\nstates: q0\n").unwrap();
    let o = evomodel(&["--state", state.to_str().unwrap(), "query", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scenario_matches_golden_transcript() {
    let scn = scenarios_dir().join("worked_example.scn");
    let o = evomodel(&["scenario", scn.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(scenarios_dir().join("worked_example.expected")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn failed_expectation_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("wrong.scn");
    std::fs::write(&scn, "query 101\nexpect reject\n").unwrap();
    let o = evomodel(&["scenario", scn.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn model_v_runs_an_imported_machine() {
    let proc = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/machines/binary_increment.proc");
    let o = evomodel(&["--model", "v", "--proc", proc.to_str().unwrap(), "run", "011"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("100"));
}
