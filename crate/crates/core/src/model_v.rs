//! The standard Turing-machine model: tape configurations, the transition
//! engine, the accepting engine, tape-string extraction, and the importer that
//! embeds a TM transition table as a procedure.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::framework::{
    AengReport, DeterminationViolation, Direction, EngineAnswer, Instruction, Model, Procedure,
    StateName,
};
use crate::symbol::{parse_bits, Symbol};

/// `(state, left ▲head▲ right)`. The tape is finite; cells to the right are
/// materialised as blanks when the head moves onto them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TapeConfiguration {
    state: StateName,
    left: Vec<Symbol>,
    head: Symbol,
    // nearest cell last
    right_rev: Vec<Symbol>,
}

impl TapeConfiguration {
    pub fn new(state: StateName, left: Vec<Symbol>, head: Symbol, right: Vec<Symbol>) -> Self {
        let mut right_rev = right;
        right_rev.reverse();
        TapeConfiguration {
            state,
            left,
            head,
            right_rev,
        }
    }

    /// Convenience constructor from text, e.g. `from_parts("h", "_10", '1', "")`.
    ///
    /// Panics on characters outside `0`, `1`, `_`.
    pub fn from_parts(state: &str, left: &str, head: char, right: &str) -> Self {
        let sym = |c: char| Symbol::from_char(c).unwrap_or_else(|| panic!("bad tape symbol {c:?}"));
        TapeConfiguration::new(
            StateName::new(state),
            left.chars().map(sym).collect(),
            sym(head),
            right.chars().map(sym).collect(),
        )
    }

    pub fn state(&self) -> &StateName {
        &self.state
    }

    pub fn head(&self) -> Symbol {
        self.head
    }

    pub fn left(&self) -> &[Symbol] {
        &self.left
    }

    pub fn right(&self) -> Vec<Symbol> {
        self.right_rev.iter().rev().copied().collect()
    }

    pub fn right_is_empty(&self) -> bool {
        self.right_rev.is_empty()
    }

    /// `(h, ▲△▲x)`
    pub fn is_halt_at_left_edge(&self) -> bool {
        self.state.is_halt() && self.head == Symbol::Blank && self.left.is_empty()
    }

    /// `(h, x▲△▲)`
    pub fn is_halt_at_right_edge(&self) -> bool {
        self.state.is_halt() && self.head == Symbol::Blank && self.right_rev.is_empty()
    }
}

impl fmt::Display for TapeConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ", self.state)?;
        for s in &self.left {
            write!(f, "{s}")?;
        }
        write!(f, "[{}]", self.head)?;
        for s in self.right_rev.iter().rev() {
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for TapeConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// C₀ₓ = (q₀, ▲△▲x)
pub fn start_config(input: &str) -> Result<TapeConfiguration, Error> {
    let bits = parse_bits(input)?;
    Ok(TapeConfiguration::new(
        StateName::start(),
        Vec::new(),
        Symbol::Blank,
        bits.into_iter().map(Symbol::from).collect(),
    ))
}

/// The transition engine. `None` is ⊥: the instruction does not match the
/// configuration, or it would move left off the tape.
pub fn teng_v(config: &TapeConfiguration, inst: &Instruction) -> Option<TapeConfiguration> {
    if config.state != inst.source || config.head != inst.read {
        return None;
    }
    let mut next = config.clone();
    next.state = inst.target.clone();
    match inst.direction {
        Direction::R => {
            next.left.push(inst.write);
            next.head = next.right_rev.pop().unwrap_or(Symbol::Blank);
        }
        Direction::L => {
            next.head = next.left.pop()?;
            next.right_rev.push(inst.write);
        }
    }
    Some(next)
}

/// YES on `(h, ▲△▲x)` or `(h, x▲△▲)`, NO otherwise. The left-edge pattern is
/// tested first.
pub fn aeng_v(config: &TapeConfiguration) -> EngineAnswer {
    if config.is_halt_at_left_edge() || config.is_halt_at_right_edge() {
        EngineAnswer::Yes
    } else {
        EngineAnswer::No
    }
}

/// y_C: the tape contents with blanks stripped from both ends. Interior
/// blanks are kept and rendered as `_`.
pub fn extract_string(config: &TapeConfiguration) -> String {
    let cells = config
        .left
        .iter()
        .chain(std::iter::once(&config.head))
        .chain(config.right_rev.iter().rev());
    let text: String = cells.map(|s| s.as_char()).collect();
    text.trim_matches('_').to_string()
}

/// Checks that no two instructions share a `(state, symbol)` key.
pub fn check_determination(instructions: &[Instruction]) -> Result<(), DeterminationViolation> {
    let mut seen: BTreeMap<(StateName, Symbol), &Instruction> = BTreeMap::new();
    let mut collisions = Vec::new();
    for inst in instructions {
        let key = (inst.source.clone(), inst.read);
        match seen.get(&key) {
            Some(prev) if *prev == inst => {}
            Some(_) => {
                if !collisions.contains(&key) {
                    collisions.push(key);
                }
            }
            None => {
                seen.insert(key, inst);
            }
        }
    }
    if collisions.is_empty() {
        Ok(())
    } else {
        Err(DeterminationViolation { collisions })
    }
}

/// Embeds a deterministic single-tape TM (start `q0`, halt `h`) as a
/// procedure. The transition table is taken verbatim.
pub fn import_tm(table: impl IntoIterator<Item = Instruction>) -> Result<Procedure, Error> {
    Procedure::new(table.into_iter().collect())
}

/// The standard model. Both engines are pure.
#[derive(Debug, Clone, Copy, Default)]
pub struct ModelV;

impl Model for ModelV {
    type Config = TapeConfiguration;

    fn start_config(&self, input: &str) -> Result<TapeConfiguration, Error> {
        start_config(input)
    }

    fn teng(&self, config: &TapeConfiguration, inst: &Instruction) -> Option<TapeConfiguration> {
        teng_v(config, inst)
    }

    fn aeng(&mut self, config: &TapeConfiguration) -> AengReport {
        AengReport {
            answer: aeng_v(config),
            ticks: 0,
        }
    }

    fn extract_string(&self, config: &TapeConfiguration) -> String {
        extract_string(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::theorem_procedure;
    use crate::framework::{compute_function, run, select_instruction, Verdict};
    use proptest::prelude::*;

    fn inst(s: &str, r: char, t: &str, w: char, d: Direction) -> Instruction {
        Instruction::new(
            s,
            Symbol::from_char(r).unwrap(),
            t,
            Symbol::from_char(w).unwrap(),
            d,
        )
    }

    #[test]
    fn start_configuration() {
        assert_eq!(
            start_config("101").unwrap(),
            TapeConfiguration::from_parts("q0", "", '_', "101")
        );
        assert_eq!(
            start_config("").unwrap(),
            TapeConfiguration::from_parts("q0", "", '_', "")
        );
        assert!(matches!(start_config("2"), Err(Error::InvalidSymbol { .. })));
    }

    #[test]
    fn teng_moves_and_extends() {
        let scan = inst("h", '1', "h", '1', Direction::R);
        let c = TapeConfiguration::from_parts("h", "_", '1', "01");
        assert_eq!(
            teng_v(&c, &scan),
            Some(TapeConfiguration::from_parts("h", "_1", '0', "1"))
        );
        let c = TapeConfiguration::from_parts("h", "_10", '1', "");
        assert_eq!(
            teng_v(&c, &scan),
            Some(TapeConfiguration::from_parts("h", "_101", '_', ""))
        );
        let c = TapeConfiguration::from_parts("q0", "", '_', "101");
        assert_eq!(teng_v(&c, &scan), None);
    }

    #[test]
    fn teng_left_edge_is_undefined() {
        let back = inst("q", '_', "p", '_', Direction::L);
        let c = TapeConfiguration::from_parts("q", "", '_', "01");
        assert_eq!(teng_v(&c, &back), None);
        let c = TapeConfiguration::from_parts("q", "1", '_', "0");
        assert_eq!(
            teng_v(&c, &back),
            Some(TapeConfiguration::from_parts("p", "", '1', "_0"))
        );
    }

    #[test]
    fn accepting_engine_patterns() {
        let yes = EngineAnswer::Yes;
        let no = EngineAnswer::No;
        assert_eq!(aeng_v(&TapeConfiguration::from_parts("h", "", '_', "101")), yes);
        assert_eq!(aeng_v(&TapeConfiguration::from_parts("h", "_101", '_', "")), yes);
        assert_eq!(aeng_v(&TapeConfiguration::from_parts("h", "", '_', "")), yes);
        assert_eq!(aeng_v(&TapeConfiguration::from_parts("q0", "", '_', "1")), no);
        assert_eq!(aeng_v(&TapeConfiguration::from_parts("h", "_1", '_', "1")), no);
        assert_eq!(aeng_v(&TapeConfiguration::from_parts("h", "_10", '1', "")), no);
    }

    #[test]
    fn string_extraction_strips_only_the_ends() {
        assert_eq!(
            extract_string(&TapeConfiguration::from_parts("q0", "", '_', "101")),
            "101"
        );
        assert_eq!(
            extract_string(&TapeConfiguration::from_parts("h", "_101", '_', "")),
            "101"
        );
        assert_eq!(
            extract_string(&TapeConfiguration::from_parts("h", "_1_", '1', "")),
            "1_1"
        );
    }

    #[test]
    fn determination_check() {
        assert!(check_determination(theorem_procedure().instructions()).is_ok());
        assert!(check_determination(&[]).is_ok());
        let clash = [
            inst("h", '1', "h", '1', Direction::R),
            inst("h", '1', "h", '0', Direction::L),
        ];
        let err = check_determination(&clash).unwrap_err();
        assert_eq!(err.collisions, vec![(StateName::halt(), Symbol::One)]);
        assert!(matches!(import_tm(clash), Err(Error::Determination(_))));
    }

    #[test]
    fn import_is_identity() {
        let m = theorem_procedure();
        let imported = import_tm(m.instructions().to_vec()).unwrap();
        assert_eq!(imported, m);
    }

    #[test]
    fn selection_on_theorem_procedure() {
        let m = theorem_procedure();
        let start = start_config("101").unwrap();
        assert_eq!(
            select_instruction(&ModelV, &m, &start).unwrap(),
            Some(&inst("q0", '_', "h", '_', Direction::R))
        );
        let end = TapeConfiguration::from_parts("h", "_101", '_', "");
        assert_eq!(select_instruction(&ModelV, &m, &end).unwrap(), None);
        assert_eq!(
            select_instruction(&ModelV, &Procedure::default(), &start).unwrap(),
            None
        );
    }

    #[test]
    fn selection_reports_runtime_ambiguity() {
        let m = Procedure::new_unchecked(vec![
            inst("h", '1', "h", '1', Direction::R),
            inst("h", '1', "h", '0', Direction::L),
        ]);
        let c = TapeConfiguration::from_parts("h", "_", '1', "");
        assert!(matches!(
            select_instruction(&ModelV, &m, &c),
            Err(Error::Determination(_))
        ));
    }

    #[test]
    fn run_theorem_procedure() {
        let m = theorem_procedure();
        let r = run(&mut ModelV, &m, "101", 100).unwrap();
        assert_eq!(r.verdict, Verdict::Accepted);
        assert_eq!(r.cost.path_length, 5);
        assert_eq!(r.cost.teng_ticks, 4);
        assert_eq!(r.cost.aeng_ticks, 0);
        assert_eq!(r.final_string, "101");
        let expected = [
            TapeConfiguration::from_parts("q0", "", '_', "101"),
            TapeConfiguration::from_parts("h", "_", '1', "01"),
            TapeConfiguration::from_parts("h", "_1", '0', "1"),
            TapeConfiguration::from_parts("h", "_10", '1', ""),
            TapeConfiguration::from_parts("h", "_101", '_', ""),
        ];
        assert_eq!(r.path, expected);

        let r = run(&mut ModelV, &m, "10101", 3).unwrap();
        assert_eq!(r.verdict, Verdict::BudgetExceeded);
        assert_eq!(r.cost.teng_ticks, 3);
        assert!(matches!(run(&mut ModelV, &m, "1", 0), Err(Error::ZeroBudget)));
    }

    #[test]
    fn computed_function() {
        let m = theorem_procedure();
        assert_eq!(
            compute_function(&mut ModelV, &m, "101", 100).unwrap().as_deref(),
            Some("101")
        );
        assert_eq!(compute_function(&mut ModelV, &m, "10", 2).unwrap(), None);
    }

    #[test]
    fn halting_outside_h_is_rejected() {
        let m = Procedure::new(vec![inst("q0", '_', "q1", '_', Direction::R)]).unwrap();
        let r = run(&mut ModelV, &m, "1", 10).unwrap();
        assert_eq!(r.verdict, Verdict::HaltedRejected);
        assert_eq!(compute_function(&mut ModelV, &m, "1", 10).unwrap(), None);
    }

    fn binary() -> impl Strategy<Value = String> {
        "[01]{0,12}"
    }

    proptest! {
        #[test]
        fn extract_after_start_is_identity(x in binary()) {
            prop_assert_eq!(extract_string(&start_config(&x).unwrap()), x);
        }

        #[test]
        fn runs_are_valid_and_replayable(x in binary(), budget in 1u64..20) {
            let m = theorem_procedure();
            let r = run(&mut ModelV, &m, &x, budget).unwrap();
            prop_assert_eq!(&r, &run(&mut ModelV, &m, &x, budget).unwrap());
            prop_assert_eq!(&r.path[0], &start_config(&x).unwrap());
            prop_assert_eq!(r.cost.path_length, r.cost.teng_ticks + 1);
            prop_assert_eq!(r.cost.aeng_ticks, 0);
            for (i, inst) in r.applied.iter().enumerate() {
                let prev = &r.path[i];
                prop_assert_eq!(select_instruction(&ModelV, &m, prev).unwrap(), Some(inst));
                prop_assert_eq!(teng_v(prev, inst), Some(r.path[i + 1].clone()));
            }
            if r.accepted() {
                prop_assert_eq!(select_instruction(&ModelV, &m, r.last()).unwrap(), None);
            }
        }

        #[test]
        fn defined_transitions_match_their_key(
            x in binary(),
            state in prop::sample::select(vec!["q0", "h", "p"]),
            read in prop::sample::select(vec!['0', '1', '_']),
            dir in prop::sample::select(vec![Direction::L, Direction::R]),
        ) {
            let i = inst(state, read, "p", '1', dir);
            let c = start_config(&x).unwrap();
            if teng_v(&c, &i).is_some() {
                prop_assert_eq!(c.state(), &i.source);
                prop_assert_eq!(c.head(), i.read);
            }
        }
    }
}
