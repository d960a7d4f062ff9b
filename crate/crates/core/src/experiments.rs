//! Finite constructions around the right-scanner procedure M under model E:
//! saturation, the brute-force sibling search and its observer effect,
//! per-run trace sets, and the query-order demonstration.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::error::Error;
use crate::framework::{run, Direction, Instruction, Procedure, RunResult};
use crate::model_e::EngineE;
use crate::model_v::TapeConfiguration;
use crate::pet::MachineStats;
use crate::symbol::{strings_of_length, Symbol};

pub const DEFAULT_BUDGET: u64 = 10_000;

/// Longest input the exhaustive searches will enumerate.
pub const MAX_SEARCH_LEN: usize = 20;

/// `{[(q0,△)→(h,△,R)], [(h,0)→(h,0,R)], [(h,1)→(h,1,R)]}`
pub fn theorem_procedure() -> Procedure {
    Procedure::new(vec![
        Instruction::new("q0", Symbol::Blank, "h", Symbol::Blank, Direction::R),
        Instruction::new("h", Symbol::Zero, "h", Symbol::Zero, Direction::R),
        Instruction::new("h", Symbol::One, "h", Symbol::One, Direction::R),
    ])
    .expect("the right scanner is deterministic")
}

fn guard(len: usize) -> Result<(), Error> {
    if len > MAX_SEARCH_LEN {
        return Err(Error::DeskScaleGuard {
            len,
            max: MAX_SEARCH_LEN,
        });
    }
    Ok(())
}

/// Membership of `x` in L(M) under the engine, by a full run of M.
pub fn member(engine: &mut EngineE, x: &str) -> Result<bool, Error> {
    Ok(run(engine, &theorem_procedure(), x, DEFAULT_BUDGET)?.accepted())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeRecord {
    pub input: String,
    /// Answer on a copy of the engine taken before any feeding.
    pub before: bool,
    pub after: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationReport {
    pub n: usize,
    /// Trie depth was at most `n` before feeding.
    pub precondition_held: bool,
    pub fed: usize,
    pub fed_accepted: usize,
    pub probes: Vec<ProbeRecord>,
}

impl SaturationReport {
    pub fn all_probes_rejected(&self) -> bool {
        self.probes.iter().all(|p| !p.after)
    }
}

impl fmt::Display for SaturationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "saturate n={} precondition={} fed={} fed_accepted={}",
            self.n, self.precondition_held, self.fed, self.fed_accepted
        )?;
        for p in &self.probes {
            writeln!(
                f,
                "  probe {} before={} after={}",
                p.input,
                yes_no(p.before),
                yes_no(p.after)
            )?;
        }
        Ok(())
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

/// Runs M on every string of length `n + 1`, then on every string of
/// length `n`.
pub fn saturate(engine: &mut EngineE, n: usize) -> Result<SaturationReport, Error> {
    guard(n + 1)?;
    let precondition_held = engine.pt1().stats().trie_depth <= n;
    let control = engine.clone();
    let mut before = Vec::new();
    for input in strings_of_length(n) {
        let mut fork = control.clone();
        before.push(member(&mut fork, &input)?);
    }

    let mut fed = 0;
    let mut fed_accepted = 0;
    for input in strings_of_length(n + 1) {
        fed += 1;
        fed_accepted += usize::from(member(engine, &input)?);
    }

    let mut probes = Vec::new();
    for (input, before) in strings_of_length(n).zip(before) {
        let after = member(engine, &input)?;
        probes.push(ProbeRecord {
            input,
            before,
            after,
        });
    }
    Ok(SaturationReport {
        n,
        precondition_held,
        fed,
        fed_accepted,
        probes,
    })
}

/// Growth of PT₁ between two points in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Mutation {
    pub states_added: usize,
    pub transitions_added: usize,
    pub accepting_added: usize,
}

impl Mutation {
    fn between(engine_before: &EngineE, engine_after: &EngineE) -> Mutation {
        let (a, b): (MachineStats, MachineStats) =
            (engine_before.pt1().stats(), engine_after.pt1().stats());
        Mutation {
            states_added: b.state_count - a.state_count,
            transitions_added: engine_after.pt1().transition_count()
                - engine_before.pt1().transition_count(),
            accepting_added: b.accepting_count - a.accepting_count,
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == Mutation::default()
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "+{} states +{} transitions +{} accepting",
            self.states_added, self.transitions_added, self.accepting_added
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiblingSearch {
    pub answer: bool,
    pub queries_used: usize,
    pub witness: Option<String>,
    pub mutation: Mutation,
}

/// Decides `x ∈ L'` (some `y` with `|y| = |x|` is in L(M)) by running M on
/// the candidates in lexicographic order, stopping at the first acceptance.
/// Every candidate run goes through the engine, so the search itself evolves
/// the language it is examining.
pub fn brute_force_exists_sibling(engine: &mut EngineE, x: &str) -> Result<SiblingSearch, Error> {
    crate::symbol::parse_bits(x)?;
    guard(x.len())?;
    let before = engine.clone();
    let mut queries_used = 0;
    let mut witness = None;
    for candidate in strings_of_length(x.len()) {
        queries_used += 1;
        if member(engine, &candidate)? {
            witness = Some(candidate);
            break;
        }
    }
    Ok(SiblingSearch {
        answer: witness.is_some(),
        queries_used,
        witness,
        mutation: Mutation::between(&before, engine),
    })
}

/// Per-run bookkeeping: S(y), H(y), E(y), D(y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub input_len: usize,
    /// Configurations on which the accepting engine ran PT₁.
    pub s_set: Vec<TapeConfiguration>,
    /// Strings fed to PT₁.
    pub h_set: BTreeSet<String>,
    /// `h_set` restricted to length `|y|`.
    pub e_set: BTreeSet<String>,
    /// `h_set` restricted to length `|y| + 2`.
    pub d_set: BTreeSet<String>,
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |set: &BTreeSet<String>| {
            set.iter()
                .map(|s| if s.is_empty() { "ε".to_string() } else { s.clone() })
                .collect::<Vec<_>>()
                .join(",")
        };
        let s: Vec<String> = self.s_set.iter().map(|c| c.to_string()).collect();
        write!(
            f,
            "S={{{}}} H={{{}}} E={{{}}} D={{{}}}",
            s.join(","),
            list(&self.h_set),
            list(&self.e_set),
            list(&self.d_set)
        )
    }
}

pub fn run_traced(
    engine: &mut EngineE,
    procedure: &Procedure,
    y: &str,
    budget: u64,
) -> Result<(RunResult<TapeConfiguration>, TraceRecord), Error> {
    let mark = engine.invocations().len();
    let result = run(engine, procedure, y, budget)?;
    let slice = &engine.invocations()[mark..];
    let mut s_set: Vec<TapeConfiguration> = Vec::new();
    for inv in slice {
        if !s_set.contains(&inv.config) {
            s_set.push(inv.config.clone());
        }
    }
    let h_set: BTreeSet<String> = slice.iter().map(|inv| inv.input.clone()).collect();
    let n = y.len();
    let sliced = |len: usize| h_set.iter().filter(|x| x.len() == len).cloned().collect();
    let record = TraceRecord {
        input_len: n,
        s_set,
        e_set: sliced(n),
        d_set: sliced(n + 2),
        h_set,
    };
    Ok((result, record))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderDemo {
    pub engine_a: Vec<(String, bool)>,
    pub engine_b: Vec<(String, bool)>,
    pub snapshot_a_after_101: String,
    pub snapshot_b_after_101: String,
    pub transcript: String,
}

/// Asks M about `101` then `10` on one fresh engine, and in the opposite
/// order on another.
pub fn order_demo() -> Result<OrderDemo, Error> {
    let ask = |engine: &mut EngineE, order: [&str; 2]| -> Result<Vec<(String, bool)>, Error> {
        order
            .iter()
            .map(|x| Ok((x.to_string(), member(engine, x)?)))
            .collect()
    };
    let mut a = EngineE::new();
    let engine_a = ask(&mut a, ["101", "10"])?;
    let mut a_after_101 = EngineE::new();
    member(&mut a_after_101, "101")?;
    let mut b = EngineE::new();
    let engine_b = ask(&mut b, ["10", "101"])?;

    let snapshot_a_after_101 = a_after_101.snapshot();
    let snapshot_b_after_101 = b.snapshot();

    let mut t = String::new();
    writeln!(t, "order demo: procedure M under model E, two fresh engines").unwrap();
    writeln!(t, "{:<6}{:<18}{}", "step", "engine A", "engine B").unwrap();
    for (i, (ra, rb)) in engine_a.iter().zip(&engine_b).enumerate() {
        let cell = |(x, acc): &(String, bool)| format!("{x} -> {}", yes_no(*acc));
        writeln!(t, "{:<6}{:<18}{}", i + 1, cell(ra), cell(rb)).unwrap();
    }
    let ten_a = engine_a.iter().find(|(x, _)| x == "10").map(|r| r.1);
    let ten_b = engine_b.iter().find(|(x, _)| x == "10").map(|r| r.1);
    writeln!(
        t,
        "10: engine A {} engine B {} ({})",
        yes_no(ten_a == Some(true)),
        yes_no(ten_b == Some(true)),
        if ten_a == ten_b { "agree" } else { "diverge" }
    )
    .unwrap();
    writeln!(t, "engine A after 101:").unwrap();
    for line in snapshot_a_after_101.lines() {
        writeln!(t, "  {line}").unwrap();
    }
    writeln!(t, "engine B after 10, 101:").unwrap();
    for line in snapshot_b_after_101.lines() {
        writeln!(t, "  {line}").unwrap();
    }
    writeln!(
        t,
        "structures equal: {}",
        if snapshot_a_after_101 == snapshot_b_after_101 { "yes" } else { "no" }
    )
    .unwrap();

    Ok(OrderDemo {
        engine_a,
        engine_b,
        snapshot_a_after_101,
        snapshot_b_after_101,
        transcript: t,
    })
}

/// `|H(y)| < 2^|y|`
pub fn below_exponential(record: &TraceRecord) -> bool {
    (record.h_set.len() as u128) < 1u128 << record.input_len.min(127)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::Verdict;
    use crate::model_v::{check_determination, ModelV};

    #[test]
    fn theorem_procedure_shape() {
        let m = theorem_procedure();
        assert_eq!(m.len(), 3);
        assert!(check_determination(m.instructions()).is_ok());
    }

    #[test]
    fn model_v_accepts_everything_up_to_length_8() {
        let m = theorem_procedure();
        for len in 0..=8 {
            for x in strings_of_length(len) {
                let r = run(&mut ModelV, &m, &x, 100).unwrap();
                assert_eq!(r.verdict, Verdict::Accepted, "{x}");
                assert_eq!(r.final_string, x);
            }
        }
    }

    #[test]
    fn saturation_n1_by_hand() {
        let mut e = EngineE::new();
        let report = saturate(&mut e, 1).unwrap();
        assert!(report.precondition_held);
        assert_eq!((report.fed, report.fed_accepted), (4, 4));
        assert_eq!(
            report.probes,
            vec![
                ProbeRecord { input: "0".into(), before: true, after: false },
                ProbeRecord { input: "1".into(), before: true, after: false },
            ]
        );
    }

    #[test]
    fn unsaturated_probe_is_accepted() {
        let mut e = EngineE::new();
        assert!(member(&mut e, "0").unwrap());
    }

    #[test]
    fn saturation_n3_rejects_all_probes() {
        let mut e = EngineE::new();
        let report = saturate(&mut e, 3).unwrap();
        assert_eq!(report.fed, 16);
        assert_eq!(report.probes.len(), 8);
        assert!(report.all_probes_rejected());
    }

    #[test]
    fn sibling_search_fresh_and_saturated() {
        let mut e = EngineE::new();
        let s = brute_force_exists_sibling(&mut e, "101").unwrap();
        assert_eq!((s.answer, s.queries_used), (true, 1));
        assert_eq!(s.witness.as_deref(), Some("000"));
        assert!(!s.mutation.is_empty());

        let mut e = EngineE::new();
        saturate(&mut e, 3).unwrap();
        let s = brute_force_exists_sibling(&mut e, "101").unwrap();
        assert_eq!((s.answer, s.queries_used), (false, 8));
        assert_eq!(s.mutation.accepting_added, 0);
        assert!(s.mutation.is_empty());
    }

    #[test]
    fn sibling_search_guard() {
        let mut e = EngineE::new();
        let long = "0".repeat(MAX_SEARCH_LEN + 1);
        assert!(matches!(
            brute_force_exists_sibling(&mut e, &long),
            Err(Error::DeskScaleGuard { .. })
        ));
    }

    #[test]
    fn trace_of_single_run() {
        let mut e = EngineE::new();
        let (r, t) = run_traced(&mut e, &theorem_procedure(), "101", 100).unwrap();
        assert!(r.accepted());
        assert_eq!(t.h_set, BTreeSet::from(["101".to_string()]));
        assert_eq!(t.s_set, vec![TapeConfiguration::from_parts("h", "_101", '_', "")]);
        assert_eq!(t.e_set, t.h_set);
        assert!(t.d_set.is_empty());
        assert!(t.h_set.len() as u64 <= r.cost.path_length);
    }

    #[test]
    fn trace_without_halting_state_is_empty() {
        let never_h = Procedure::new(vec![
            Instruction::new("q0", Symbol::Blank, "p", Symbol::Blank, Direction::R),
            Instruction::new("p", Symbol::Zero, "p", Symbol::Zero, Direction::R),
            Instruction::new("p", Symbol::One, "p", Symbol::One, Direction::R),
        ])
        .unwrap();
        let mut e = EngineE::new();
        let (r, t) = run_traced(&mut e, &never_h, "0110", 100).unwrap();
        assert_eq!(r.verdict, Verdict::HaltedRejected);
        assert!(t.s_set.is_empty() && t.h_set.is_empty());
        assert!(t.e_set.is_empty() && t.d_set.is_empty());
        assert_eq!(e.pt1().stats().state_count, 1);
    }

    #[test]
    fn trace_collects_every_halting_pattern_on_the_path() {
        // Every time the scan reaches the right end in h, append "00" and
        // walk back into h. Never halts; each lap feeds PT1 a longer string.
        let appender = Procedure::new(vec![
            Instruction::new("q0", Symbol::Blank, "h", Symbol::Blank, Direction::R),
            Instruction::new("h", Symbol::Zero, "h", Symbol::Zero, Direction::R),
            Instruction::new("h", Symbol::One, "h", Symbol::One, Direction::R),
            Instruction::new("h", Symbol::Blank, "a", Symbol::Zero, Direction::R),
            Instruction::new("a", Symbol::Blank, "b", Symbol::Zero, Direction::R),
            Instruction::new("b", Symbol::Blank, "z", Symbol::Blank, Direction::L),
            Instruction::new("z", Symbol::Zero, "h", Symbol::Zero, Direction::R),
        ])
        .unwrap();
        let mut e = EngineE::new();
        let (r, t) = run_traced(&mut e, &appender, "1", 12).unwrap();
        assert_eq!(r.verdict, Verdict::BudgetExceeded);
        let set = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(t.h_set, set(&["1", "100", "10000"]));
        assert_eq!(t.e_set, set(&["1"]));
        assert_eq!(t.d_set, set(&["100"]));
        assert_eq!(
            t.s_set,
            vec![
                TapeConfiguration::from_parts("h", "_1", '_', ""),
                TapeConfiguration::from_parts("h", "_100", '_', ""),
                TapeConfiguration::from_parts("h", "_10000", '_', ""),
            ]
        );
        assert!(t.h_set.len() as u64 <= r.cost.path_length);
        assert!(!below_exponential(&t));
    }

    #[test]
    fn order_demo_outcomes() {
        let demo = order_demo().unwrap();
        assert_eq!(
            demo.engine_a,
            vec![("101".to_string(), true), ("10".to_string(), false)]
        );
        assert_eq!(
            demo.engine_b,
            vec![("10".to_string(), true), ("101".to_string(), true)]
        );
        assert_ne!(demo.snapshot_a_after_101, demo.snapshot_b_after_101);
        assert!(demo.snapshot_b_after_101.contains("accept: q2 q3"));
        assert_eq!(order_demo().unwrap(), demo);
    }
}
