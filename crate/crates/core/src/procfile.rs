//! Text format for procedures, one instruction per line:
//!
//! ```text
//! # comment
//! (q0,_) -> (h,_,R)
//! (h,0) -> (h,0,R)
//! ```
//!
//! `_` stands for the blank symbol.

use std::fmt::Write as _;
use std::sync::OnceLock;

use regex::Regex;

use crate::error::Error;
use crate::framework::{Direction, Instruction, Procedure};
use crate::symbol::Symbol;

fn line_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(
            r"^\(\s*(\w+)\s*,\s*([01_])\s*\)\s*->\s*\(\s*(\w+)\s*,\s*([01_])\s*,\s*([LR])\s*\)$",
        )
        .unwrap()
    })
}

pub fn parse_procedure_file(text: &str) -> Result<Procedure, Error> {
    let mut instructions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let caps = line_pattern().captures(line).ok_or_else(|| {
            Error::parse(
                i + 1,
                format!("expected `(<state>,<sym>) -> (<state>,<sym>,<L|R>)`, found {line:?}"),
            )
        })?;
        let sym = |k: usize| Symbol::from_char(caps[k].chars().next().unwrap()).unwrap();
        let direction = if &caps[5] == "L" { Direction::L } else { Direction::R };
        instructions.push(Instruction::new(&caps[1], sym(2), &caps[3], sym(4), direction));
    }
    Procedure::new(instructions)
}

/// Canonical rendering; [`parse_procedure_file`] reads it back unchanged.
pub fn render_procedure(procedure: &Procedure) -> String {
    let mut out = String::new();
    for inst in procedure.instructions() {
        writeln!(out, "{inst}").unwrap();
    }
    out
}
