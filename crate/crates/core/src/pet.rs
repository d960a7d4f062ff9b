//! Persistently evolutionary machines.
//!
//! [`PartialDfa`] is PT₁: a partial DFA over {0,1} that grows while it is
//! queried. A query runs the automaton on the input and then, depending on
//! where the run ends, either answers from the existing structure or adds
//! states, transitions or accepting marks so that the answer it gives is the
//! answer it will give forever after:
//!
//! * case 1: the whole input is read and the run ends in an accepting state.
//!   Accept, no change.
//! * case 2a: the whole input is read, the run ends in a non-accepting state
//!   `p`, and `p` has a transition into an accepting state. Reject, no change.
//! * case 2b: as 2a but no such transition exists. `p` becomes accepting and
//!   the input is accepted.
//! * case 3: the run falls off the automaton with input left over. A fresh
//!   chain of states spelling the unread suffix is appended, its last state
//!   becomes accepting, and the input is accepted.
//!
//! Only additions ever happen, so the transition graph is always a trie
//! rooted at the start state.
//!
//! The module also carries the evolution clock, the ledger used to audit
//! persistence, and the order-dependent number assignment [`GState`].

use std::collections::HashMap;
use std::fmt;

use crate::error::Error;
use crate::symbol::{parse_bits, Bit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Accepted,
    Rejected,
}

impl Answer {
    pub fn is_accepted(self) -> bool {
        self == Answer::Accepted
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Accepted => "accepted",
            Answer::Rejected => "rejected",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    Case1,
    Case2a,
    Case2b,
    Case3,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Case1 => "case1",
            Case::Case2a => "case2a",
            Case::Case2b => "case2b",
            Case::Case3 => "case3",
        })
    }
}

/// Result of one query, with everything the query added to the machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryOutcome {
    pub answer: Answer,
    pub case: Case,
    pub transitions_used: u64,
    pub added_states: Vec<String>,
    pub added_transitions: Vec<(String, Bit, String)>,
    pub added_accepting: Vec<String>,
    /// Evolution clock: transitions used plus one per added element.
    pub ticks: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct DfaState {
    pub(crate) name: String,
    pub(crate) accepting: bool,
    pub(crate) next: [Option<usize>; 2],
    pub(crate) depth: usize,
}

/// The evolving automaton PT₁. States are kept in creation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialDfa {
    pub(crate) states: Vec<DfaState>,
    pub(crate) start: usize,
    pub(crate) max_accepted_len: usize,
    pub(crate) counter: u64,
    pub(crate) trie_depth: usize,
    pub(crate) accepting_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineStats {
    /// Longest string accepted so far (m₁); 0 on a fresh machine.
    pub max_accepted_len: usize,
    pub trie_depth: usize,
    pub state_count: usize,
    pub accepting_count: usize,
}

impl fmt::Display for MachineStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m1={} depth={} states={} accepting={}",
            self.max_accepted_len, self.trie_depth, self.state_count, self.accepting_count
        )
    }
}

impl Default for PartialDfa {
    fn default() -> Self {
        PartialDfa::new()
    }
}

impl PartialDfa {
    /// Q = {q0}, F = ∅, δ = ∅.
    pub fn new() -> PartialDfa {
        PartialDfa {
            states: vec![DfaState {
                name: "q0".to_string(),
                accepting: false,
                next: [None, None],
                depth: 0,
            }],
            start: 0,
            max_accepted_len: 0,
            counter: 1,
            trie_depth: 0,
            accepting_count: 0,
        }
    }

    pub fn query(&mut self, x: &str) -> Result<QueryOutcome, Error> {
        evolve_query(self, x)
    }

    pub fn stats(&self) -> MachineStats {
        machine_stats(self)
    }

    pub fn state_names(&self) -> impl Iterator<Item = &str> {
        self.states.iter().map(|s| s.name.as_str())
    }

    pub fn start_name(&self) -> &str {
        &self.states[self.start].name
    }

    /// Accepting states in creation order.
    pub fn accepting_names(&self) -> impl Iterator<Item = &str> {
        self.states
            .iter()
            .filter(|s| s.accepting)
            .map(|s| s.name.as_str())
    }

    /// Transitions ordered by source creation index, then symbol.
    pub fn transitions(&self) -> impl Iterator<Item = (&str, Bit, &str)> {
        self.states.iter().flat_map(move |s| {
            Bit::ALL.into_iter().filter_map(move |b| {
                s.next[b.index()].map(|t| (s.name.as_str(), b, self.states[t].name.as_str()))
            })
        })
    }

    pub fn transition_count(&self) -> usize {
        self.states
            .iter()
            .map(|s| s.next.iter().flatten().count())
            .sum()
    }

    pub fn creation_counter(&self) -> u64 {
        self.counter
    }

    /// Reads `x` from the start state without touching the machine. Returns
    /// the state reached and the number of symbols consumed.
    fn walk(&self, bits: &[Bit]) -> (usize, usize) {
        let mut at = self.start;
        for (read, b) in bits.iter().enumerate() {
            match self.states[at].next[b.index()] {
                Some(next) => at = next,
                None => return (at, read),
            }
        }
        (at, bits.len())
    }

    /// The answer a query on `x` would give, without evolving.
    pub fn peek(&self, x: &str) -> Result<Answer, Error> {
        let bits = parse_bits(x)?;
        let (at, read) = self.walk(&bits);
        if read < bits.len() {
            return Ok(Answer::Accepted);
        }
        let state = &self.states[at];
        if state.accepting || !self.steps_into_accepting(at) {
            Ok(Answer::Accepted)
        } else {
            Ok(Answer::Rejected)
        }
    }

    fn steps_into_accepting(&self, at: usize) -> bool {
        self.states[at]
            .next
            .iter()
            .flatten()
            .any(|&t| self.states[t].accepting)
    }

    fn fresh_state(&mut self, depth: usize) -> usize {
        let name = format!("q{}", self.counter);
        self.counter += 1;
        self.states.push(DfaState {
            name,
            accepting: false,
            next: [None, None],
            depth,
        });
        self.trie_depth = self.trie_depth.max(depth);
        self.states.len() - 1
    }

    fn mark_accepting(&mut self, at: usize) {
        debug_assert!(!self.states[at].accepting);
        self.states[at].accepting = true;
        self.accepting_count += 1;
    }

    /// Checks the structural invariants: NFA₁ condition (by representation),
    /// trie shape rooted at the start state, and the cached depth/count data.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.states.len();
        if self.start >= n {
            return Err("start state out of range".into());
        }
        let mut incoming = vec![0usize; n];
        for s in &self.states {
            for &t in s.next.iter().flatten() {
                if t >= n {
                    return Err(format!("transition from {} to unknown state", s.name));
                }
                incoming[t] += 1;
            }
        }
        for (i, count) in incoming.iter().enumerate() {
            let want = usize::from(i != self.start);
            if *count != want {
                return Err(format!(
                    "state {} has {} incoming transitions, expected {}",
                    self.states[i].name, count, want
                ));
            }
        }
        let mut depth = vec![usize::MAX; n];
        depth[self.start] = 0;
        let mut stack = vec![self.start];
        while let Some(at) = stack.pop() {
            for &t in self.states[at].next.iter().flatten() {
                depth[t] = depth[at] + 1;
                stack.push(t);
            }
        }
        for (i, d) in depth.iter().enumerate() {
            if *d == usize::MAX {
                return Err(format!("state {} is unreachable from start", self.states[i].name));
            }
            if *d != self.states[i].depth {
                return Err(format!("state {} has stale depth", self.states[i].name));
            }
        }
        if self.trie_depth != depth.iter().copied().max().unwrap_or(0) {
            return Err("stale trie depth".into());
        }
        if self.accepting_count != self.states.iter().filter(|s| s.accepting).count() {
            return Err("stale accepting count".into());
        }
        Ok(())
    }
}

/// Runs PT₁ on `x`, evolving it as the case analysis requires.
pub fn evolve_query(machine: &mut PartialDfa, x: &str) -> Result<QueryOutcome, Error> {
    let bits = parse_bits(x)?;
    let (at, read) = machine.walk(&bits);
    let mut outcome = QueryOutcome {
        answer: Answer::Accepted,
        case: Case::Case1,
        transitions_used: read as u64,
        added_states: Vec::new(),
        added_transitions: Vec::new(),
        added_accepting: Vec::new(),
        ticks: 0,
    };

    if read == bits.len() {
        if machine.states[at].accepting {
            outcome.case = Case::Case1;
        } else if machine.steps_into_accepting(at) {
            outcome.case = Case::Case2a;
            outcome.answer = Answer::Rejected;
        } else {
            outcome.case = Case::Case2b;
            machine.mark_accepting(at);
            outcome.added_accepting.push(machine.states[at].name.clone());
        }
    } else {
        outcome.case = Case::Case3;
        let mut tail = at;
        for (offset, &b) in bits[read..].iter().enumerate() {
            let fresh = machine.fresh_state(read + offset + 1);
            machine.states[tail].next[b.index()] = Some(fresh);
            outcome
                .added_states
                .push(machine.states[fresh].name.clone());
            outcome.added_transitions.push((
                machine.states[tail].name.clone(),
                b,
                machine.states[fresh].name.clone(),
            ));
            tail = fresh;
        }
        machine.mark_accepting(tail);
        outcome.added_accepting.push(machine.states[tail].name.clone());
    }

    if outcome.answer.is_accepted() {
        machine.max_accepted_len = machine.max_accepted_len.max(bits.len());
    }
    outcome.ticks = outcome.transitions_used
        + (outcome.added_states.len()
            + outcome.added_transitions.len()
            + outcome.added_accepting.len()) as u64;
    Ok(outcome)
}

pub fn machine_stats(machine: &PartialDfa) -> MachineStats {
    MachineStats {
        max_accepted_len: machine.max_accepted_len,
        trie_depth: machine.trie_depth,
        state_count: machine.states.len(),
        accepting_count: machine.accepting_count,
    }
}

/// The contract shared by persistently evolutionary machines: an initial
/// machine, and a query that may evolve it but must never change an answer
/// already given.
pub trait Evolving: Clone + PartialEq {
    fn initial() -> Self;
    fn ask(&mut self, input: &str) -> Result<Answer, Error>;
}

impl Evolving for PartialDfa {
    fn initial() -> Self {
        PartialDfa::new()
    }

    fn ask(&mut self, input: &str) -> Result<Answer, Error> {
        Ok(evolve_query(self, input)?.answer)
    }
}

/// Append-only record of queries and the answers given.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLedger {
    entries: Vec<(String, Answer)>,
}

impl QueryLedger {
    pub fn new() -> QueryLedger {
        QueryLedger::default()
    }

    pub fn record(&mut self, input: impl Into<String>, answer: Answer) {
        self.entries.push((input.into(), answer));
    }

    pub fn entries(&self) -> &[(String, Answer)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(String, Answer)> for QueryLedger {
    fn from_iter<I: IntoIterator<Item = (String, Answer)>>(iter: I) -> Self {
        QueryLedger {
            entries: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReplayPhase {
    /// Replaying the history on a fresh machine.
    History,
    /// Re-asking each entry after the full history.
    Repeat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayViolation {
    /// Entry numbers are 1-based.
    Answer {
        phase: ReplayPhase,
        entry: usize,
        input: String,
        recorded: Answer,
        observed: Answer,
    },
    /// Re-asking a settled entry changed the machine.
    Mutated { entry: usize, input: String },
    InvalidInput { entry: usize, input: String },
    /// Two fresh replays of the same history ended in different machines.
    Divergent,
}

impl fmt::Display for ReplayViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayViolation::Answer {
                phase,
                entry,
                input,
                recorded,
                observed,
            } => write!(
                f,
                "entry {entry} ({input:?}): recorded {recorded}, {phase:?} gave {observed}"
            ),
            ReplayViolation::Mutated { entry, input } => {
                write!(f, "entry {entry} ({input:?}): repeating it changed the machine")
            }
            ReplayViolation::InvalidInput { entry, input } => {
                write!(f, "entry {entry}: {input:?} is not a binary string")
            }
            ReplayViolation::Divergent => write!(f, "fresh replays ended in different machines"),
        }
    }
}

fn replay_into<M: Evolving>(
    machine: &mut M,
    ledger: &QueryLedger,
    phase: ReplayPhase,
) -> Result<(), ReplayViolation> {
    for (i, (input, recorded)) in ledger.entries().iter().enumerate() {
        let entry = i + 1;
        let observed = machine.ask(input).map_err(|_| ReplayViolation::InvalidInput {
            entry,
            input: input.clone(),
        })?;
        if observed != *recorded {
            return Err(ReplayViolation::Answer {
                phase,
                entry,
                input: input.clone(),
                recorded: *recorded,
                observed,
            });
        }
    }
    Ok(())
}

/// Re-asks every ledger entry, in order, against a clone of a live machine.
/// Every answer must match and no repeat may change the machine.
pub fn replay_check_live<M: Evolving>(
    live: &M,
    ledger: &QueryLedger,
) -> Result<(), ReplayViolation> {
    let mut probe = live.clone();
    for (i, (input, recorded)) in ledger.entries().iter().enumerate() {
        let entry = i + 1;
        let before = probe.clone();
        let observed = probe.ask(input).map_err(|_| ReplayViolation::InvalidInput {
            entry,
            input: input.clone(),
        })?;
        if observed != *recorded {
            return Err(ReplayViolation::Answer {
                phase: ReplayPhase::Repeat,
                entry,
                input: input.clone(),
                recorded: *recorded,
                observed,
            });
        }
        if probe != before {
            return Err(ReplayViolation::Mutated {
                entry,
                input: input.clone(),
            });
        }
    }
    Ok(())
}

/// Audits the persistence obligation for a ledger recorded on one machine.
///
/// The history is replayed on a fresh machine (every answer must match), then
/// every entry is re-asked against the resulting live machine, and finally a
/// second fresh replay must end in an identical machine.
pub fn replay_check<M: Evolving>(
    fresh: impl Fn() -> M,
    ledger: &QueryLedger,
) -> Result<(), ReplayViolation> {
    let mut live = fresh();
    replay_into(&mut live, ledger, ReplayPhase::History)?;
    replay_check_live(&live, ledger)?;
    let mut twin = fresh();
    replay_into(&mut twin, ledger, ReplayPhase::History)?;
    if twin != live {
        return Err(ReplayViolation::Divergent);
    }
    Ok(())
}

/// The order-dependent number assignment: a number gets the next free value
/// the first time it is asked about, and keeps it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GState {
    w: Vec<(u64, u64)>,
    index: HashMap<u64, u64>,
}

impl GState {
    pub fn new() -> GState {
        GState::default()
    }

    pub fn query(&mut self, n: u64) -> u64 {
        g_query(self, n)
    }

    /// The pairs assigned so far, in insertion order.
    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.w
    }
}

pub fn g_query(state: &mut GState, n: u64) -> u64 {
    if let Some(&z) = state.index.get(&n) {
        return z;
    }
    let z = state.w.len() as u64 + 1;
    state.w.push((n, z));
    state.index.insert(n, z);
    z
}
