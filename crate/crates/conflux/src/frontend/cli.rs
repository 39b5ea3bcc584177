//! The `prove` command.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use crate::framework::{preset, run_with, verdict, RunConfig, Strategy};
use crate::frontend::parse::{parse, Format};
use crate::frontend::render::{render_proof, ProofFormat};
use crate::processors::{Problem, ProblemKind, ProcessorId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Cr,
    Wcr,
    Scr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Auto,
    Cops,
    Tpdb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProofMode {
    Text,
    Structured,
    None,
}

/// Proves or disproves confluence of a generalized term rewriting system.
#[derive(Debug, Parser)]
#[command(name = "prove", version)]
struct Args {
    /// Problem file; standard input if absent or `-`.
    input: Option<PathBuf>,
    /// Property to decide.
    #[arg(long, value_enum, default_value = "cr")]
    property: Property,
    /// Overall time limit in seconds.
    #[arg(long, default_value_t = 120.0)]
    timeout: f64,
    /// Oracle budget override `key=value`; keys are depth, term-size,
    /// successors, steps, oracle-timeout, termination-timeout, recursion.
    #[arg(long = "budget", value_name = "KEY=VALUE")]
    budgets: Vec<String>,
    /// Input syntax.
    #[arg(long, value_enum, default_value = "auto")]
    format: InputFormat,
    /// Proof output after the answer line.
    #[arg(long, value_enum, default_value = "text")]
    proof: ProofMode,
    /// Strategy preset: auto, trs, ctrs or gtrs.
    #[arg(long, default_value = "auto")]
    strategy: String,
    /// Processor that must not be used, e.g. `P_Simp`; repeatable.
    #[arg(long = "disable", value_name = "PROCESSOR")]
    disabled: Vec<String>,
}

fn seconds(v: &str) -> Result<Duration, String> {
    let s: f64 = v.parse().map_err(|_| format!("not a number of seconds: {v}"))?;
    Duration::try_from_secs_f64(s).map_err(|_| format!("not a duration: {v}"))
}

fn apply_budget(cfg: &mut RunConfig, entry: &str) -> Result<(), String> {
    let (key, value) = entry.split_once('=').ok_or_else(|| format!("expected key=value, got {entry}"))?;
    let count = || value.parse::<usize>().map_err(|_| format!("not a count: {value}"));
    match key {
        "depth" => {
            let n = count()?;
            cfg.budgets.oracle.max_depth = n;
            cfg.budgets.termination.max_depth = n;
        }
        "term-size" => {
            let n = count()?;
            cfg.budgets.oracle.max_term_size = n;
            cfg.budgets.termination.max_term_size = n;
        }
        "successors" => cfg.budgets.oracle.max_successors = count()?,
        "steps" => cfg.budgets.oracle.max_steps = count()?,
        "oracle-timeout" => cfg.budgets.oracle.timeout = seconds(value)?,
        "termination-timeout" => cfg.budgets.termination.timeout = seconds(value)?,
        "recursion" => cfg.max_recursion = count()?,
        _ => return Err(format!("unknown budget key {key}")),
    }
    Ok(())
}

fn configure(args: &Args) -> Result<(RunConfig, Strategy), String> {
    let mut cfg = RunConfig::with_deadline(seconds(&args.timeout.to_string())?);
    for b in &args.budgets {
        apply_budget(&mut cfg, b)?;
    }
    for name in &args.disabled {
        let id = ProcessorId::from_name(name).ok_or_else(|| format!("unknown processor {name}"))?;
        cfg.disabled.insert(id);
    }
    let strategy = preset(&args.strategy).ok_or_else(|| format!("unknown strategy {}", args.strategy))?;
    Ok((cfg, strategy))
}

/// Runs the command with the given arguments (without the program name) and
/// streams. Returns the process exit code: 0 for any answer, 1 for input
/// errors, 2 for usage errors.
pub fn run_cli<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("prove")).chain(args.into_iter().map(Into::into));
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let (cfg, strategy) = match configure(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let mut text = String::new();
    let read = match args.input.as_deref() {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map(|t| text = t).map_err(|e| format!("{}: {e}", p.display()))
        }
        _ => stdin.read_to_string(&mut text).map(|_| ()).map_err(|e| format!("stdin: {e}")),
    };
    if let Err(e) = read {
        let _ = writeln!(stderr, "error: {e}");
        return 1;
    }
    let hint = match args.format {
        InputFormat::Auto => None,
        InputFormat::Cops => Some(Format::Cops),
        InputFormat::Tpdb => Some(Format::Tpdb),
    };
    let system = match parse(&text, hint) {
        Ok(g) => g,
        Err(e) => {
            let name = args.input.as_ref().map_or("<stdin>".to_string(), |p| p.display().to_string());
            let _ = writeln!(stderr, "{name}:{e}");
            return 1;
        }
    };
    let kind = match args.property {
        Property::Cr => ProblemKind::Cr,
        Property::Wcr => ProblemKind::Wcr,
        Property::Scr => ProblemKind::Scr,
    };
    let v = verdict(run_with(&Problem::confluence(kind, system), &strategy, &cfg));
    let out = match args.proof {
        ProofMode::None => format!("{}\n", v.answer),
        ProofMode::Text => render_proof(&v, ProofFormat::Text),
        ProofMode::Structured => render_proof(&v, ProofFormat::Structured),
    };
    if stdout.write_all(out.as_bytes()).is_err() {
        return 1;
    }
    0
}

/// Entry point for the binary.
pub fn cli_main() -> i32 {
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli(std::env::args_os().skip(1), &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
