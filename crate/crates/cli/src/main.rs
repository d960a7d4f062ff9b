use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use evomodel::model_e::{snapshot_decode, EngineE};
use evomodel::procfile::parse_procedure_file;
use evomodel::scenario::{execute_in, parse_command, parse_scenario, Command, ModelKind, Session};
use evomodel::Error;

/// Run procedures under the standard Turing-machine model (v) or the
/// evolving model (e).
#[derive(Debug, Parser)]
#[command(name = "evomodel", version)]
struct Cli {
    /// Computation model.
    #[arg(long, global = true, default_value = "e")]
    model: ModelKind,

    /// Procedure file; defaults to the right scanner M.
    #[arg(long = "proc", global = true, value_name = "FILE")]
    procedure: Option<PathBuf>,

    /// Maximum number of transition steps per run.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget: u64,

    /// Snapshot file holding the evolving engine. Loaded if present and
    /// written back after the command.
    #[arg(long, global = true, value_name = "FILE")]
    state: Option<PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run the procedure on one input and print the whole path.
    Run { input: String },
    /// Ask for the verdict on each input, in order.
    Query {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Run on one input and report the PT1 bookkeeping sets S, H, E, D.
    Trace { input: String },
    /// Execute a scenario script.
    Scenario { file: PathBuf },
    /// Interactive loop over the scenario command language.
    Repl,
    /// Print the canonical snapshot of the engine.
    Snapshot,
}

fn load_engine(state: Option<&Path>) -> Result<EngineE, Error> {
    match state {
        Some(path) if path.exists() => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            snapshot_decode(&text)
        }
        _ => Ok(EngineE::new()),
    }
}

fn save_engine(state: Option<&Path>, session: &Session) -> Result<(), Error> {
    if let (Some(path), ModelKind::E) = (state, session.model()) {
        std::fs::write(path, session.engine().snapshot()).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

fn session(cli: &Cli, model: ModelKind, base_dir: &Path) -> Result<Session, Error> {
    let mut s = Session::new(model, base_dir)
        .with_budget(cli.budget)
        .with_engine(load_engine(cli.state.as_deref())?);
    if let Some(path) = &cli.procedure {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        s = s.with_procedure(parse_procedure_file(&text)?);
    }
    Ok(s)
}

fn invalid_input(x: &str) -> Option<Error> {
    evomodel::symbol::parse_bits(x).err()
}

fn execute(cli: &Cli) -> Result<ExitCode, Error> {
    let cwd = PathBuf::from(".");
    match &cli.command {
        Cmd::Run { input } | Cmd::Trace { input } => {
            if let Some(e) = invalid_input(input) {
                return Err(e);
            }
            let mut s = session(cli, cli.model, &cwd)?;
            if matches!(cli.command, Cmd::Trace { .. }) {
                if cli.model != ModelKind::E {
                    return Err(Error::Usage("trace needs --model e".into()));
                }
                s.execute(&Command::Trace(true))?;
                print!("{}", s.execute(&Command::Query(input.clone()))?);
            } else {
                print!("{}", s.execute(&Command::Run(input.clone()))?);
            }
            save_engine(cli.state.as_deref(), &s)?;
        }
        Cmd::Query { inputs } => {
            if let Some(e) = inputs.iter().find_map(|x| invalid_input(x)) {
                return Err(e);
            }
            let mut s = session(cli, cli.model, &cwd)?;
            for x in inputs {
                print!("{x}:{}", s.execute(&Command::Query(x.clone()))?);
            }
            save_engine(cli.state.as_deref(), &s)?;
        }
        Cmd::Scenario { file } => {
            let text = std::fs::read_to_string(file).map_err(|source| Error::Io {
                path: file.display().to_string(),
                source,
            })?;
            let scenario = parse_scenario(&text)?;
            let base = file.parent().map(Path::to_path_buf).unwrap_or(cwd);
            let s = session(cli, scenario.model, &base)?;
            let outcome = execute_in(s, &scenario);
            print!("{}", outcome.transcript);
            if let Some(e) = &outcome.aborted {
                eprintln!("error: {e}");
            }
            return Ok(ExitCode::from(outcome.exit_code() as u8));
        }
        Cmd::Repl => {
            let mut s = session(cli, cli.model, &cwd)?;
            repl(&mut s)?;
            save_engine(cli.state.as_deref(), &s)?;
            return Ok(if s.failures() > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            });
        }
        Cmd::Snapshot => {
            print!("{}", load_engine(cli.state.as_deref())?.snapshot());
        }
    }
    Ok(ExitCode::SUCCESS)
}

const REPL_HELP: &str = "\
commands: model v|e, proc <file>, query [<bits>], run [<bits>], expect accept|reject,
          saturate <n>, brute <bits>, snapshot save|load <name>, stats, trace on|off,
          show (print the engine snapshot), help, quit";

fn repl(session: &mut Session) -> Result<(), Error> {
    let stdin = io::stdin();
    let mut stdout = io::stdout();
    let mut last_answered = false;
    loop {
        print!("evomodel> ");
        stdout.flush().ok();
        let mut line = String::new();
        let read = stdin.lock().read_line(&mut line).map_err(|source| Error::Io {
            path: "<stdin>".into(),
            source,
        })?;
        if read == 0 {
            println!();
            return Ok(());
        }
        match line.trim() {
            "quit" | "exit" => return Ok(()),
            "help" => {
                println!("{REPL_HELP}");
                continue;
            }
            "show" => {
                print!("{}", session.engine().snapshot());
                continue;
            }
            _ => {}
        }
        match parse_command(&line) {
            Ok(None) => {}
            Ok(Some(Command::Expect(_))) if !last_answered => {
                println!("  error: expect must directly follow query, run or brute");
            }
            Ok(Some(cmd)) => {
                match session.execute(&cmd) {
                    Ok(text) => print!("{text}"),
                    Err(e) => println!("  error: {e}"),
                }
                last_answered = matches!(
                    cmd,
                    Command::Query(_) | Command::Run(_) | Command::Brute(_)
                );
            }
            Err(msg) => println!("  error: {msg}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
