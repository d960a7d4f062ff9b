//! Flat command scripts and the session that executes them.
//!
//! ```text
//! model e
//! proc M.proc
//! query 101
//! expect accept
//! query 10
//! expect reject
//! ```
//!
//! Commands: `model v|e`, `proc <file>`, `query [<string>]`, `run [<string>]`,
//! `expect accept|reject`, `saturate <n>`, `brute <string>`,
//! `snapshot save|load <name>`, `stats`, `trace on|off`. `#` starts a comment.
//! An omitted string argument means the empty string. `expect` checks the
//! answer of the command right before it.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use crate::error::Error;
use crate::experiments::{
    brute_force_exists_sibling, run_traced, saturate, theorem_procedure, DEFAULT_BUDGET,
};
use crate::framework::{run, Procedure, RunResult};
use crate::model_e::{snapshot_decode, EngineE};
use crate::model_v::{ModelV, TapeConfiguration};
use crate::procfile::parse_procedure_file;
use crate::symbol::parse_bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    V,
    E,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::V => "v",
            ModelKind::E => "e",
        })
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "v" | "V" => Ok(ModelKind::V),
            "e" | "E" => Ok(ModelKind::E),
            other => Err(format!("unknown model {other:?} (expected v or e)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Model(ModelKind),
    Proc(PathBuf),
    Query(String),
    Run(String),
    Expect(Expectation),
    Saturate(usize),
    Brute(String),
    SnapshotSave(String),
    SnapshotLoad(String),
    Stats,
    Trace(bool),
}

impl Command {
    fn yields_answer(&self) -> bool {
        matches!(self, Command::Query(_) | Command::Run(_) | Command::Brute(_))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arg = |s: &str| if s.is_empty() { String::new() } else { format!(" {s}") };
        match self {
            Command::Model(m) => write!(f, "model {m}"),
            Command::Proc(p) => write!(f, "proc {}", p.display()),
            Command::Query(x) => write!(f, "query{}", arg(x)),
            Command::Run(x) => write!(f, "run{}", arg(x)),
            Command::Expect(Expectation::Accept) => write!(f, "expect accept"),
            Command::Expect(Expectation::Reject) => write!(f, "expect reject"),
            Command::Saturate(n) => write!(f, "saturate {n}"),
            Command::Brute(x) => write!(f, "brute{}", arg(x)),
            Command::SnapshotSave(n) => write!(f, "snapshot save {n}"),
            Command::SnapshotLoad(n) => write!(f, "snapshot load {n}"),
            Command::Stats => write!(f, "stats"),
            Command::Trace(on) => write!(f, "trace {}", if *on { "on" } else { "off" }),
        }
    }
}

/// Parses one line. `Ok(None)` for blank and comment lines.
pub fn parse_command(line: &str) -> Result<Option<Command>, String> {
    let line = line.split('#').next().unwrap_or("");
    let words: Vec<&str> = line.split_whitespace().collect();
    let Some((&head, args)) = words.split_first() else {
        return Ok(None);
    };
    let binary = |args: &[&str]| -> Result<String, String> {
        match args {
            [] => Ok(String::new()),
            [x] => parse_bits(x).map(|_| x.to_string()).map_err(|e| e.to_string()),
            _ => Err(format!("`{head}` takes one binary string")),
        }
    };
    let one = |args: &[&str]| -> Result<String, String> {
        match args {
            [x] => Ok(x.to_string()),
            _ => Err(format!("`{head}` takes exactly one argument")),
        }
    };
    let command = match head {
        "model" => Command::Model(one(args)?.parse()?),
        "proc" => Command::Proc(PathBuf::from(one(args)?)),
        "query" => Command::Query(binary(args)?),
        "run" => Command::Run(binary(args)?),
        "brute" => Command::Brute(binary(args)?),
        "expect" => match one(args)?.as_str() {
            "accept" => Command::Expect(Expectation::Accept),
            "reject" => Command::Expect(Expectation::Reject),
            other => return Err(format!("expect takes accept or reject, not {other:?}")),
        },
        "saturate" => {
            let n = one(args)?;
            Command::Saturate(n.parse().map_err(|_| format!("bad probe length {n:?}"))?)
        }
        "snapshot" => match args {
            ["save", name] => Command::SnapshotSave(name.to_string()),
            ["load", name] => Command::SnapshotLoad(name.to_string()),
            _ => return Err("expected `snapshot save <name>` or `snapshot load <name>`".into()),
        },
        "stats" if args.is_empty() => Command::Stats,
        "trace" => match args {
            ["on"] => Command::Trace(true),
            ["off"] => Command::Trace(false),
            _ => return Err("expected `trace on` or `trace off`".into()),
        },
        other => return Err(format!("unknown command {other:?}")),
    };
    Ok(Some(command))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub line: usize,
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    /// Model in force before the first command.
    pub model: ModelKind,
    pub steps: Vec<Step>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, Error> {
    let mut steps: Vec<Step> = Vec::new();
    let mut saved: Vec<String> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let Some(command) = parse_command(raw).map_err(|m| Error::parse(line, m))? else {
            continue;
        };
        match &command {
            Command::Expect(_) if !steps.last().is_some_and(|s| s.command.yields_answer()) => {
                return Err(Error::parse(
                    line,
                    "expect must directly follow query, run or brute",
                ));
            }
            Command::SnapshotSave(name) => saved.push(name.clone()),
            Command::SnapshotLoad(name) if !saved.contains(name) => {
                return Err(Error::parse(line, format!("snapshot {name:?} was never saved")));
            }
            _ => {}
        }
        steps.push(Step { line, command });
    }
    let model = steps
        .iter()
        .find_map(|s| match s.command {
            Command::Model(m) => Some(m),
            _ => None,
        })
        .unwrap_or(ModelKind::E);
    Ok(Scenario { model, steps })
}

/// One live engine plus the state a script or REPL builds up around it.
#[derive(Debug, Clone)]
pub struct Session {
    model: ModelKind,
    engine: EngineE,
    procedure: Procedure,
    budget: u64,
    base_dir: PathBuf,
    trace: bool,
    last_answer: Option<bool>,
    snapshots: HashMap<String, String>,
    expectations: usize,
    failures: usize,
}

impl Session {
    pub fn new(model: ModelKind, base_dir: impl Into<PathBuf>) -> Session {
        Session {
            model,
            engine: EngineE::new(),
            procedure: theorem_procedure(),
            budget: DEFAULT_BUDGET,
            base_dir: base_dir.into(),
            trace: false,
            last_answer: None,
            snapshots: HashMap::new(),
            expectations: 0,
            failures: 0,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Session {
        self.budget = budget;
        self
    }

    pub fn with_engine(mut self, engine: EngineE) -> Session {
        self.engine = engine;
        self
    }

    pub fn with_procedure(mut self, procedure: Procedure) -> Session {
        self.procedure = procedure;
        self
    }

    pub fn engine(&self) -> &EngineE {
        &self.engine
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn expectations(&self) -> usize {
        self.expectations
    }

    fn require_e(&self, what: &str) -> Result<(), Error> {
        match self.model {
            ModelKind::E => Ok(()),
            ModelKind::V => Err(Error::Usage(format!("`{what}` needs model e"))),
        }
    }

    fn stats_text(&self) -> String {
        match self.model {
            ModelKind::E => self.engine.pt1().stats().to_string(),
            ModelKind::V => "model v (stateless)".to_string(),
        }
    }

    fn do_run(
        &mut self,
        input: &str,
        out: &mut String,
    ) -> Result<RunResult<TapeConfiguration>, Error> {
        match self.model {
            ModelKind::V => run(&mut ModelV, &self.procedure, input, self.budget),
            ModelKind::E => {
                let (result, record) =
                    run_traced(&mut self.engine, &self.procedure, input, self.budget)?;
                if self.trace {
                    writeln!(out, "  trace {record}").unwrap();
                }
                Ok(result)
            }
        }
    }

    /// Executes one command and returns its transcript lines. An unmet
    /// `expect` is reported in the text and counted, not returned as an error.
    pub fn execute(&mut self, command: &Command) -> Result<String, Error> {
        let mut out = String::new();
        let mut answer = None;
        match command {
            Command::Model(m) => {
                self.model = *m;
                self.engine = EngineE::new();
                writeln!(out, "  model {m}, fresh engine").unwrap();
            }
            Command::Proc(path) => {
                let full = self.base_dir.join(path);
                let text = std::fs::read_to_string(&full).map_err(|source| Error::Io {
                    path: full.display().to_string(),
                    source,
                })?;
                self.procedure = parse_procedure_file(&text)?;
                writeln!(out, "  procedure: {} instructions", self.procedure.len()).unwrap();
            }
            Command::Query(x) | Command::Run(x) => {
                let mut trace = String::new();
                let result = self.do_run(x, &mut trace)?;
                if matches!(command, Command::Run(_)) {
                    for (i, c) in result.path.iter().enumerate() {
                        writeln!(out, "  {i:>4} {c}").unwrap();
                    }
                }
                let yes = result.accepted();
                writeln!(
                    out,
                    "  {} {} {} | {}",
                    if yes { "YES" } else { "NO" },
                    result.verdict,
                    result.cost,
                    self.stats_text()
                )
                .unwrap();
                out.push_str(&trace);
                answer = Some(yes);
            }
            Command::Expect(want) => {
                self.expectations += 1;
                let want_yes = *want == Expectation::Accept;
                match self.last_answer {
                    Some(got) if got == want_yes => writeln!(out, "  ok").unwrap(),
                    Some(got) => {
                        self.failures += 1;
                        writeln!(
                            out,
                            "  FAILED: expected {}, got {}",
                            if want_yes { "accept" } else { "reject" },
                            if got { "accept" } else { "reject" }
                        )
                        .unwrap();
                    }
                    None => {
                        return Err(Error::Usage("expect has no preceding answer".into()));
                    }
                }
            }
            Command::Saturate(n) => {
                self.require_e("saturate")?;
                let report = saturate(&mut self.engine, *n)?;
                for line in report.to_string().lines() {
                    writeln!(out, "  {line}").unwrap();
                }
                writeln!(out, "  {}", self.stats_text()).unwrap();
            }
            Command::Brute(x) => {
                self.require_e("brute")?;
                let s = brute_force_exists_sibling(&mut self.engine, x)?;
                writeln!(
                    out,
                    "  {} witness={} queries={} mutation={} | {}",
                    if s.answer { "YES" } else { "NO" },
                    s.witness.as_deref().unwrap_or("-"),
                    s.queries_used,
                    s.mutation,
                    self.stats_text()
                )
                .unwrap();
                answer = Some(s.answer);
            }
            Command::SnapshotSave(name) => {
                self.require_e("snapshot")?;
                self.snapshots.insert(name.clone(), self.engine.snapshot());
                writeln!(out, "  saved {name}").unwrap();
            }
            Command::SnapshotLoad(name) => {
                self.require_e("snapshot")?;
                let text = self
                    .snapshots
                    .get(name)
                    .ok_or_else(|| Error::Usage(format!("no snapshot named {name:?}")))?;
                self.engine = snapshot_decode(text)?;
                writeln!(out, "  restored {name} | {}", self.stats_text()).unwrap();
            }
            Command::Stats => writeln!(out, "  {}", self.stats_text()).unwrap(),
            Command::Trace(on) => {
                self.trace = *on;
                writeln!(out, "  trace {}", if *on { "on" } else { "off" }).unwrap();
            }
        }
        if !matches!(command, Command::Expect(_)) {
            self.last_answer = answer;
        }
        Ok(out)
    }
}

#[derive(Debug)]
pub struct ScenarioOutcome {
    pub transcript: String,
    pub expectations: usize,
    pub failures: usize,
    /// Set when execution stopped early on an I/O, parse or usage error.
    pub aborted: Option<Error>,
}

impl ScenarioOutcome {
    /// 0 when every expectation held, 1 on an unmet expectation, 2 on abort.
    pub fn exit_code(&self) -> i32 {
        if self.aborted.is_some() {
            2
        } else if self.failures > 0 {
            1
        } else {
            0
        }
    }
}

/// Runs every step against one session. `proc` paths resolve against
/// `base_dir`.
pub fn execute_scenario(scenario: &Scenario, base_dir: &Path) -> ScenarioOutcome {
    execute_in(Session::new(scenario.model, base_dir), scenario)
}

pub fn execute_in(mut session: Session, scenario: &Scenario) -> ScenarioOutcome {
    let mut transcript = String::new();
    let mut aborted = None;
    for step in &scenario.steps {
        writeln!(transcript, "> {}", step.command).unwrap();
        match session.execute(&step.command) {
            Ok(text) => transcript.push_str(&text),
            Err(e) => {
                writeln!(transcript, "  error (line {}): {e}", step.line).unwrap();
                aborted = Some(e);
                break;
            }
        }
    }
    if aborted.is_none() {
        writeln!(
            transcript,
            "summary: {} expectations, {} failed",
            session.expectations(),
            session.failures()
        )
        .unwrap();
    }
    ScenarioOutcome {
        transcript,
        expectations: session.expectations(),
        failures: session.failures(),
        aborted,
    }
}
