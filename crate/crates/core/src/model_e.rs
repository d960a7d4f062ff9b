//! The evolving model E: the standard transition engine paired with an
//! accepting engine that hands halting configurations of the form
//! `(h, x▲△▲)` to an embedded PT₁ and answers with its verdict.
//!
//! Snapshot text format, one item per LF-terminated line:
//!
//! ```text
//! PET1 v1
//! states: q0 q1 q2 q3
//! start: q0
//! accept: q3
//! trans: q0 1 q1
//! trans: q1 0 q2
//! trans: q2 1 q3
//! maxaccept: 3
//! counter: 4
//! ```
//!
//! States and accepting states are listed in creation order; transitions are
//! sorted by the creation index of their source, then by symbol.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::Error;
use crate::framework::{AengReport, EngineAnswer, Instruction, Model};
use crate::model_v::{self, TapeConfiguration};
use crate::pet::{evolve_query, Answer, DfaState, PartialDfa, QueryLedger, QueryOutcome};
use crate::symbol::Symbol;

pub const SNAPSHOT_HEADER: &str = "PET1 v1";

/// One accepting-engine call that reached PT₁.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub config: TapeConfiguration,
    pub input: String,
    pub outcome: QueryOutcome,
}

/// The mutable world of model E.
#[derive(Debug, Clone, Default)]
pub struct EngineE {
    pt1: PartialDfa,
    ledger: QueryLedger,
    invocations: Vec<Invocation>,
}

impl EngineE {
    pub fn new() -> EngineE {
        EngineE::default()
    }

    pub fn with_machine(pt1: PartialDfa) -> EngineE {
        EngineE {
            pt1,
            ..EngineE::default()
        }
    }

    pub fn pt1(&self) -> &PartialDfa {
        &self.pt1
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn invocations(&self) -> &[Invocation] {
        &self.invocations
    }

    pub fn snapshot(&self) -> String {
        snapshot_encode(self)
    }
}

/// The accepting engine of model E. Evolves the embedded PT₁ as a side effect.
pub fn aeng_e(engine: &mut EngineE, config: &TapeConfiguration) -> AengReport {
    let no = AengReport {
        answer: EngineAnswer::No,
        ticks: 0,
    };
    if config.is_halt_at_left_edge() {
        return AengReport {
            answer: EngineAnswer::Yes,
            ticks: 0,
        };
    }
    if !config.is_halt_at_right_edge() {
        return no;
    }
    let text: String = config.left().iter().map(|s| s.as_char()).collect();
    let input = text.trim_matches('_');
    if input.contains('_') {
        return no;
    }
    let outcome = evolve_query(&mut engine.pt1, input).expect("input is binary after stripping");
    let report = AengReport {
        answer: match outcome.answer {
            Answer::Accepted => EngineAnswer::Yes,
            Answer::Rejected => EngineAnswer::No,
        },
        ticks: outcome.ticks,
    };
    engine.ledger.record(input, outcome.answer);
    engine.invocations.push(Invocation {
        config: config.clone(),
        input: input.to_string(),
        outcome,
    });
    report
}

impl Model for EngineE {
    type Config = TapeConfiguration;

    fn start_config(&self, input: &str) -> Result<TapeConfiguration, Error> {
        model_v::start_config(input)
    }

    fn teng(&self, config: &TapeConfiguration, inst: &Instruction) -> Option<TapeConfiguration> {
        model_v::teng_v(config, inst)
    }

    fn aeng(&mut self, config: &TapeConfiguration) -> AengReport {
        aeng_e(self, config)
    }

    fn extract_string(&self, config: &TapeConfiguration) -> String {
        model_v::extract_string(config)
    }
}

pub fn snapshot_encode(engine: &EngineE) -> String {
    encode_machine(&engine.pt1)
}

pub fn encode_machine(m: &PartialDfa) -> String {
    let mut out = String::new();
    out.push_str(SNAPSHOT_HEADER);
    out.push('\n');
    out.push_str("states:");
    for name in m.state_names() {
        write!(out, " {name}").unwrap();
    }
    writeln!(out, "\nstart: {}", m.start_name()).unwrap();
    out.push_str("accept:");
    for name in m.accepting_names() {
        write!(out, " {name}").unwrap();
    }
    out.push('\n');
    for (src, bit, dst) in m.transitions() {
        writeln!(out, "trans: {src} {bit} {dst}").unwrap();
    }
    writeln!(out, "maxaccept: {}", m.max_accepted_len).unwrap();
    writeln!(out, "counter: {}", m.counter).unwrap();
    out
}

/// Restores an engine from snapshot text. The ledger and invocation log start
/// empty.
pub fn snapshot_decode(text: &str) -> Result<EngineE, Error> {
    decode_machine(text).map(EngineE::with_machine)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_field(&mut self, key: &str) -> Result<(usize, &'a str), Error> {
        match self.inner.next() {
            Some((i, line)) => {
                let lineno = i + 1;
                let rest = line
                    .strip_prefix(key)
                    .and_then(|r| r.strip_prefix(':'))
                    .ok_or_else(|| Error::parse(lineno, format!("expected `{key}:`")))?;
                let rest = match rest {
                    "" => "",
                    r => r
                        .strip_prefix(' ')
                        .filter(|r| !r.is_empty())
                        .ok_or_else(|| Error::parse(lineno, "expected a single space after `:`"))?,
                };
                Ok((lineno, rest))
            }
            None => Err(Error::parse(0, format!("missing `{key}:` line"))),
        }
    }
}

fn tokens(lineno: usize, rest: &str) -> Result<Vec<&str>, Error> {
    if rest.is_empty() {
        return Ok(Vec::new());
    }
    let toks: Vec<&str> = rest.split(' ').collect();
    if toks.iter().any(|t| t.is_empty()) {
        return Err(Error::parse(lineno, "items must be separated by single spaces"));
    }
    Ok(toks)
}

fn number(lineno: usize, rest: &str) -> Result<u64, Error> {
    rest.parse()
        .map_err(|_| Error::parse(lineno, format!("expected a number, found {rest:?}")))
}

pub fn decode_machine(text: &str) -> Result<PartialDfa, Error> {
    if let Some(pos) = text.find(|c: char| !c.is_ascii() || c == '\r') {
        let line = text[..pos].matches('\n').count() + 1;
        return Err(Error::parse(line, "snapshot must be 7-bit text with LF line endings"));
    }
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    match lines.inner.next() {
        Some((_, SNAPSHOT_HEADER)) => {}
        _ => return Err(Error::parse(1, format!("expected header `{SNAPSHOT_HEADER}`"))),
    }

    let (ln, rest) = lines.next_field("states")?;
    let names = tokens(ln, rest)?;
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if index.insert(name, i).is_some() {
            return Err(Error::SnapshotConsistency(format!("duplicate state {name}")));
        }
    }
    let lookup = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::SnapshotConsistency(format!("unknown state {name}")))
    };
    let mut states: Vec<DfaState> = names
        .iter()
        .map(|n| DfaState {
            name: n.to_string(),
            accepting: false,
            next: [None, None],
            depth: 0,
        })
        .collect();

    let (ln, rest) = lines.next_field("start")?;
    let start = match tokens(ln, rest)?.as_slice() {
        [one] => lookup(one)?,
        _ => return Err(Error::parse(ln, "expected exactly one start state")),
    };

    let (ln, rest) = lines.next_field("accept")?;
    for name in tokens(ln, rest)? {
        let i = lookup(name)?;
        if states[i].accepting {
            return Err(Error::SnapshotConsistency(format!("{name} listed twice as accepting")));
        }
        states[i].accepting = true;
    }

    let mut max_accepted = None;
    for (i, line) in lines.inner.by_ref() {
        let ln = i + 1;
        if let Some(rest) = line.strip_prefix("trans: ") {
            let parts = tokens(ln, rest)?;
            let [src, sym, dst] = parts.as_slice() else {
                return Err(Error::parse(ln, "expected `trans: <src> <0|1> <dst>`"));
            };
            let bit = match Symbol::from_char(sym.chars().next().unwrap_or(' ')).and_then(Symbol::bit) {
                Some(b) if sym.len() == 1 => b,
                _ => return Err(Error::parse(ln, format!("bad transition symbol {sym:?}"))),
            };
            let (s, d) = (lookup(src)?, lookup(dst)?);
            if states[s].next[bit.index()].is_some() {
                return Err(Error::SnapshotConsistency(format!(
                    "two transitions from ({src},{bit})"
                )));
            }
            states[s].next[bit.index()] = Some(d);
        } else if let Some(rest) = line.strip_prefix("maxaccept: ") {
            max_accepted = Some(number(ln, rest)? as usize);
            break;
        } else {
            return Err(Error::parse(ln, "expected `trans:` or `maxaccept:`"));
        }
    }
    let max_accepted_len =
        max_accepted.ok_or_else(|| Error::parse(0, "missing `maxaccept:` line"))?;
    let (ln, rest) = lines.next_field("counter")?;
    let counter = number(ln, rest)?;
    if let Some((i, _)) = lines.inner.next() {
        return Err(Error::parse(i + 1, "unexpected content after `counter:`"));
    }
    if counter == 0 {
        return Err(Error::SnapshotConsistency("counter must be at least 1".into()));
    }
    for s in &states {
        if let Some(k) = s.name.strip_prefix('q').and_then(|d| d.parse::<u64>().ok()) {
            if k >= counter && s.name == format!("q{k}") {
                return Err(Error::SnapshotConsistency(format!(
                    "state {} collides with a future fresh name (counter {counter})",
                    s.name
                )));
            }
        }
    }

    // depths by traversal; a revisit means the graph is not a tree
    let mut seen = vec![false; states.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut trie_depth = 0;
    while let Some(at) = stack.pop() {
        for t in states[at].next.into_iter().flatten() {
            if seen[t] {
                return Err(Error::SnapshotConsistency(format!(
                    "state {} is reached twice; transitions must form a trie",
                    states[t].name
                )));
            }
            seen[t] = true;
            states[t].depth = states[at].depth + 1;
            trie_depth = trie_depth.max(states[t].depth);
            stack.push(t);
        }
    }
    let accepting_count = states.iter().filter(|s| s.accepting).count();
    let machine = PartialDfa {
        states,
        start,
        max_accepted_len,
        counter,
        trie_depth,
        accepting_count,
    };
    machine.validate().map_err(Error::SnapshotConsistency)?;
    Ok(machine)
}
