//! Reference single-tape TM simulator used as a test oracle.
//!
//! Written against the textual corpus format only; it shares no code with the
//! library. The tape is a flat vector with an explicit head index; cell 0 is
//! the blank the input is placed after. Moving left from cell 0 or finding no
//! transition halts the machine. Acceptance: halted in `h` on a blank that is
//! the first or the last materialised cell.

use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Reject,
    OutOfFuel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefRun {
    pub outcome: Outcome,
    pub steps: u64,
    pub tape: String,
}

pub struct ReferenceTm {
    delta: HashMap<(String, char), (String, char, i8)>,
}

impl ReferenceTm {
    pub fn from_text(text: &str) -> ReferenceTm {
        let mut delta = HashMap::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let cleaned: String = line
                .chars()
                .map(|c| if "(),->".contains(c) { ' ' } else { c })
                .collect();
            let parts: Vec<&str> = cleaned.split_whitespace().collect();
            assert_eq!(parts.len(), 5, "bad corpus line: {line}");
            let sym = |s: &str| s.chars().next().unwrap();
            let dir = if parts[4] == "L" { -1 } else { 1 };
            let prev = delta.insert(
                (parts[0].to_string(), sym(parts[1])),
                (parts[2].to_string(), sym(parts[3]), dir),
            );
            assert!(prev.is_none(), "nondeterministic corpus machine");
        }
        ReferenceTm { delta }
    }

    pub fn run(&self, input: &str, fuel: u64) -> RefRun {
        let mut tape: Vec<char> = std::iter::once('_').chain(input.chars()).collect();
        let mut head = 0usize;
        let mut state = "q0".to_string();
        let mut steps = 0u64;
        loop {
            let key = (state.clone(), tape[head]);
            let next = match self.delta.get(&key) {
                Some(&(ref p, w, d)) if !(d < 0 && head == 0) => Some((p.clone(), w, d)),
                _ => None,
            };
            match next {
                None => {
                    let accept = state == "h"
                        && tape[head] == '_'
                        && (head == 0 || head == tape.len() - 1);
                    let outcome = if accept { Outcome::Accept } else { Outcome::Reject };
                    return RefRun { outcome, steps, tape: strip(&tape) };
                }
                Some(_) if steps == fuel => {
                    return RefRun { outcome: Outcome::OutOfFuel, steps, tape: strip(&tape) };
                }
                Some((p, w, d)) => {
                    tape[head] = w;
                    if d > 0 {
                        head += 1;
                        if head == tape.len() {
                            tape.push('_');
                        }
                    } else {
                        head -= 1;
                    }
                    state = p;
                    steps += 1;
                }
            }
        }
    }
}

fn strip(tape: &[char]) -> String {
    let s: String = tape.iter().collect();
    s.trim_matches('_').to_string()
}

/// All binary strings of length `0..=max_len`, shortest first, lexicographic within a length.
pub fn all_strings(max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for len in 1..=max_len {
        for bits in 0..(1u32 << len) {
            out.push(
                (0..len)
                    .rev()
                    .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
                    .collect(),
            );
        }
    }
    out
}
