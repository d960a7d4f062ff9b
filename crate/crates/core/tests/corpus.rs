//! Corpus machines under model V, checked against the reference simulator.

mod support;

use evomodel::framework::{compute_function, run, Verdict};
use evomodel::model_v::{import_tm, ModelV};
use evomodel::procfile::parse_procedure_file;
use support::reference_tm::{Outcome, ReferenceTm};
use support::machine_text;

#[test]
fn oracle_binary_increment_frozen() {
    let oracle = ReferenceTm::from_text(&machine_text("binary_increment.proc"));
    let r = oracle.run("011", 1000);
    assert_eq!(r.outcome, Outcome::Accept);
    assert_eq!(r.steps, 10);
    assert_eq!(r.tape, "100");
    assert_eq!(oracle.run("11", 1000).tape, "100");
    assert_eq!(oracle.run("", 1000).tape, "1");
}

#[test]
fn oracle_palindrome_frozen() {
    let oracle = ReferenceTm::from_text(&machine_text("palindrome.proc"));
    for (x, want) in [("", true), ("0", true), ("0110", true), ("10101", true), ("01", false), ("1101", false)] {
        let accepted = oracle.run(x, 10_000).outcome == Outcome::Accept;
        assert_eq!(accepted, want, "{x}");
    }
}

#[test]
fn binary_increment_under_model_v() {
    let table = parse_procedure_file(&machine_text("binary_increment.proc")).unwrap();
    let procedure = import_tm(table.instructions().to_vec()).unwrap();
    let r = run(&mut ModelV, &procedure, "011", 1000).unwrap();
    assert_eq!(r.verdict, Verdict::Accepted);
    assert_eq!(r.cost.teng_ticks, 10);
    assert_eq!(
        compute_function(&mut ModelV, &procedure, "011", 1000).unwrap().as_deref(),
        Some("100")
    );
    assert_eq!(
        compute_function(&mut ModelV, &procedure, "10111", 1000).unwrap().as_deref(),
        Some("11000")
    );
}

#[test]
fn theorem_m_file_matches_builtin() {
    let parsed = parse_procedure_file(&machine_text("theorem_m.proc")).unwrap();
    assert_eq!(parsed, evomodel::experiments::theorem_procedure());
}
