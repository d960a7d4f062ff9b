//! Generic executable semantics: instruction selection, computation paths,
//! acceptance, computed functions and cost accounting.
//!
//! A [`Model`] supplies the start configuration, the transition engine
//! (`teng`) and the accepting engine (`aeng`). Everything here is written
//! once against that trait and serves both the standard Turing-machine model
//! and the evolving model.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::symbol::Symbol;

/// A machine state name. `q0` is the start state, `h` the halting state.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateName(Arc<str>);

impl StateName {
    pub fn new(name: &str) -> StateName {
        StateName(Arc::from(name))
    }

    pub fn start() -> StateName {
        StateName::new("q0")
    }

    pub fn halt() -> StateName {
        StateName::new("h")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_halt(&self) -> bool {
        &*self.0 == "h"
    }
}

impl fmt::Display for StateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for StateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    L,
    R,
}

/// `[(source, read) -> (target, write, direction)]`
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instruction {
    pub source: StateName,
    pub read: Symbol,
    pub target: StateName,
    pub write: Symbol,
    pub direction: Direction,
}

impl Instruction {
    pub fn new(
        source: &str,
        read: Symbol,
        target: &str,
        write: Symbol,
        direction: Direction,
    ) -> Instruction {
        Instruction {
            source: StateName::new(source),
            read,
            target: StateName::new(target),
            write,
            direction,
        }
    }

    pub fn key(&self) -> (&StateName, Symbol) {
        (&self.source, self.read)
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{}) -> ({},{},{:?})",
            self.source, self.read, self.target, self.write, self.direction
        )
    }
}

/// Colliding `(state, symbol)` keys found by the determination check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminationViolation {
    pub collisions: Vec<(StateName, Symbol)>,
}

impl fmt::Display for DeterminationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys: Vec<String> = self
            .collisions
            .iter()
            .map(|(q, a)| format!("({q},{a})"))
            .collect();
        write!(f, "colliding keys {}", keys.join(" "))
    }
}

/// A finite instruction set satisfying the determination condition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Procedure {
    instructions: Vec<Instruction>,
}

impl Procedure {
    pub fn new(instructions: Vec<Instruction>) -> Result<Procedure, Error> {
        crate::model_v::check_determination(&instructions).map_err(Error::Determination)?;
        Ok(Procedure::new_unchecked(instructions))
    }

    /// Builds a procedure without the syntactic determination check. Any
    /// resulting ambiguity surfaces at run time from [`select_instruction`].
    pub fn new_unchecked(instructions: Vec<Instruction>) -> Procedure {
        let mut seen = Vec::with_capacity(instructions.len());
        for inst in instructions {
            if !seen.contains(&inst) {
                seen.push(inst);
            }
        }
        Procedure { instructions: seen }
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineAnswer {
    Yes,
    No,
}

impl fmt::Display for EngineAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineAnswer::Yes => "YES",
            EngineAnswer::No => "NO",
        })
    }
}

/// What one accepting-engine invocation answered and the internal work it cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AengReport {
    pub answer: EngineAnswer,
    pub ticks: u64,
}

/// A computation model: configurations plus the two engines.
pub trait Model {
    type Config: Clone + fmt::Debug + PartialEq;

    fn start_config(&self, input: &str) -> Result<Self::Config, Error>;

    /// `None` stands for the undefined value ⊥.
    fn teng(&self, config: &Self::Config, inst: &Instruction) -> Option<Self::Config>;

    /// May mutate the model; such effects persist across runs.
    fn aeng(&mut self, config: &Self::Config) -> AengReport;

    fn extract_string(&self, config: &Self::Config) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    HaltedRejected,
    BudgetExceeded,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accepted => "accepted",
            Verdict::HaltedRejected => "halted-rejected",
            Verdict::BudgetExceeded => "budget-exceeded",
        })
    }
}

/// Two-level cost meter of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CostMeter {
    /// Number of configurations in the path.
    pub path_length: u64,
    pub teng_ticks: u64,
    /// Internal work of the accepting engine summed over the run.
    pub aeng_ticks: u64,
}

impl fmt::Display for CostMeter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "path={} teng={} aeng={}",
            self.path_length, self.teng_ticks, self.aeng_ticks
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<C> {
    pub verdict: Verdict,
    pub path: Vec<C>,
    pub applied: Vec<Instruction>,
    pub cost: CostMeter,
    pub final_string: String,
}

impl<C> RunResult<C> {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    pub fn last(&self) -> &C {
        self.path.last().expect("a run path is never empty")
    }
}

/// Υ(M, C): the unique instruction whose transition is defined on `config`.
pub fn select_instruction<'p, M: Model>(
    model: &M,
    procedure: &'p Procedure,
    config: &M::Config,
) -> Result<Option<&'p Instruction>, Error> {
    let mut applicable = procedure
        .instructions()
        .iter()
        .filter(|inst| model.teng(config, inst).is_some());
    let first = applicable.next();
    let rest: Vec<&Instruction> = applicable.collect();
    match first {
        Some(first) if !rest.is_empty() => {
            let mut keys = BTreeMap::new();
            for inst in std::iter::once(first).chain(rest) {
                keys.insert((inst.source.clone(), inst.read), ());
            }
            Err(Error::Determination(DeterminationViolation {
                collisions: keys.into_keys().collect(),
            }))
        }
        first => Ok(first),
    }
}

/// Builds the computation path of `procedure` on `input`.
///
/// The accepting engine is invoked on every configuration as it is generated,
/// and whatever it does to the model persists. The verdict looks only at the
/// final configuration. `budget` caps the number of transition-engine steps.
pub fn run<M: Model>(
    model: &mut M,
    procedure: &Procedure,
    input: &str,
    budget: u64,
) -> Result<RunResult<M::Config>, Error> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    let mut current = model.start_config(input)?;
    let mut path = Vec::new();
    let mut applied = Vec::new();
    let mut cost = CostMeter::default();

    let verdict = loop {
        let report = model.aeng(&current);
        cost.aeng_ticks += report.ticks;
        match select_instruction(model, procedure, &current)? {
            None => {
                break match report.answer {
                    EngineAnswer::Yes => Verdict::Accepted,
                    EngineAnswer::No => Verdict::HaltedRejected,
                };
            }
            Some(_) if cost.teng_ticks == budget => break Verdict::BudgetExceeded,
            Some(inst) => {
                let next = model
                    .teng(&current, inst)
                    .expect("selected instruction is defined on the configuration");
                path.push(std::mem::replace(&mut current, next));
                applied.push(inst.clone());
                cost.teng_ticks += 1;
            }
        }
    };

    let final_string = model.extract_string(&current);
    path.push(current);
    cost.path_length = path.len() as u64;
    Ok(RunResult {
        verdict,
        path,
        applied,
        cost,
        final_string,
    })
}

/// The value computed by `procedure` on `input`, if the run is successful.
pub fn compute_function<M: Model>(
    model: &mut M,
    procedure: &Procedure,
    input: &str,
    budget: u64,
) -> Result<Option<String>, Error> {
    let result = run(model, procedure, input, budget)?;
    Ok(result.accepted().then_some(result.final_string))
}
