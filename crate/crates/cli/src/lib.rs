//! The `panto` command line: edit-script replay, type checking, step
//! traces and session servers.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use panto_diffs::compose;
use panto_edits::{run_script, EditError};
use panto_lang::{infer, parse, Ctx};
use panto_propagate::{normalize, SchedulerConfig, StepTrace};
use panto_session::Session;

pub mod ws;

#[derive(Debug, Parser)]
#[command(name = "panto", version, about = "Typed structure editing with diff propagation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply an edit script to a program and print the result.
    Run {
        program: PathBuf,
        script: PathBuf,
        /// Print every propagation step as a JSON line before the result.
        #[arg(long)]
        trace: bool,
        /// `leftmost` (the default) or `seed=N`.
        #[arg(long, value_parser = parse_scheduler, default_value = "leftmost")]
        scheduler: Scheduler,
        /// Write the result here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Type-check a program and print its type.
    Check { program: PathBuf },
    /// Serve one session over JSON lines on standard input and output.
    ServeStdio,
    /// Serve sessions over websockets at `/ws`, one session per connection.
    ServeWs {
        #[arg(long, default_value_t = 7878)]
        port: u16,
    },
}

/// The scheduler selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheduler {
    Leftmost,
    Seeded(u64),
}

fn parse_scheduler(s: &str) -> Result<Scheduler, String> {
    if s == "leftmost" {
        return Ok(Scheduler::Leftmost);
    }
    s.strip_prefix("seed=")
        .and_then(|n| n.parse().ok())
        .map(Scheduler::Seeded)
        .ok_or_else(|| format!("expected `leftmost` or `seed=N`, found `{s}`"))
}

impl Scheduler {
    /// The engine configuration, with the step cap from `PANTO_STEP_CAP`.
    pub fn config(self) -> SchedulerConfig {
        let base = SchedulerConfig::from_env();
        match self {
            Scheduler::Leftmost => base,
            Scheduler::Seeded(n) => SchedulerConfig { step_cap: base.step_cap, ..SchedulerConfig::seeded(n) },
        }
    }
}

/// A failed command: its exit code and the message for standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

/// Exit code for a rejected edit.
pub const REJECTED: i32 = 1;
/// Exit code for unreadable, unparsable or ill-typed inputs.
pub const BAD_INPUT: i32 = 2;

fn input(message: String) -> Failure {
    Failure { code: BAD_INPUT, message }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn trace_lines(out: &mut String, trace: &StepTrace) {
    for e in &trace.entries {
        out.push_str(&serde_json::to_string(e).expect("trace entries serialize"));
        out.push('\n');
    }
}

/// The output of `run`. A program that still contains boundaries is
/// normalized before the script runs.
pub fn run(program: &str, script: &str, trace: bool, cfg: &SchedulerConfig) -> Result<String, Failure> {
    let mut program = parse(program).map_err(|e| input(format!("program: {e}")))?;
    infer(&Ctx::empty(), &program).map_err(|e| input(format!("program: {e}")))?;
    let mut out = String::new();
    let mut change = None;
    if program.has_boundary() {
        let n = normalize(&program, cfg).map_err(|e| Failure { code: REJECTED, message: e.to_string() })?;
        if trace {
            trace_lines(&mut out, &n.trace);
        }
        program = n.program;
        change = n.final_type_change;
    }
    let applied = run_script(&program, script, cfg).map_err(|e| match e {
        EditError::Syntax(e) => input(format!("edit script: {e}")),
        e => Failure { code: REJECTED, message: format!("edit rejected: {e}") },
    })?;
    if trace {
        trace_lines(&mut out, &applied.trace);
    }
    let change = match (change, applied.final_type_change) {
        (Some(a), Some(b)) => Some(compose(&a, &b).expect("consecutive type changes compose")),
        (a, b) => b.or(a),
    };
    writeln!(out, "{}", applied.program).unwrap();
    if let Some(d) = change {
        writeln!(out, "finalTypeChange {d}").unwrap();
    }
    Ok(out)
}

/// The output of `check`: the program's type.
pub fn check(program: &str) -> Result<String, Failure> {
    let program = parse(program).map_err(|e| input(format!("program: {e}")))?;
    let ty = infer(&Ctx::empty(), &program).map_err(|e| input(format!("program: {e}")))?;
    Ok(format!("{ty}\n"))
}

/// Serves one session: one response line per request line.
pub fn serve_stdio(input: impl BufRead, mut output: impl Write, cfg: SchedulerConfig) -> std::io::Result<()> {
    let mut session = Session::new(cfg);
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        writeln!(output, "{}", session.handle_line(&line))?;
        output.flush()?;
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Run { program, script, trace, scheduler, output } => read(&program)
            .and_then(|p| Ok((p, read(&script)?)))
            .and_then(|(p, s)| run(&p, &s, trace, &scheduler.config()))
            .and_then(|text| emit(output.as_deref(), &text)),
        Command::Check { program } => read(&program).and_then(|p| check(&p)).and_then(|t| emit(None, &t)),
        Command::ServeStdio => {
            let stdin = std::io::stdin();
            serve_stdio(stdin.lock(), std::io::stdout().lock(), SchedulerConfig::from_env())
                .map_err(|e| Failure { code: BAD_INPUT, message: e.to_string() })
        }
        Command::ServeWs { port } => ws::serve_blocking(port, SchedulerConfig::from_env())
            .map_err(|e| Failure { code: BAD_INPUT, message: format!("{e:#}") }),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("panto: {}", f.message);
            f.code
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| input(e.to_string()))
        }
    }
}
