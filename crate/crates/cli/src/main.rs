use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use alba_core::checker::{verify_correspondence, Report};
use alba_core::engine::{run_alba_with, AlbaOptions, AlbaResult};
use alba_core::fo::{print_fo, FOFormula, FoFormat};
use alba_core::frames::{dump_frame, enumerate_full_frames, AccBudget};
use alba_core::sgtree::classify;
use alba_core::syntax::{parse_formula, parse_inequality, Formula, Inequality};
use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};

/// Correspondence engine for modal inequalities under possibility semantics.
#[derive(Parser, Debug)]
#[command(name = "alba", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify an inequality as Sahlqvist, inductive or neither.
    Classify(Classify),
    /// Run the rewrite algorithm and print the pure output.
    Run(Run),
    /// Print only the first-order correspondent.
    Translate(Translate),
    /// Compare modal and first-order validity on enumerated frames.
    Verify(Verify),
    /// Dump the enumerated full possibility frames.
    Frames(Frames),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Inequality such as "box p <= p".
    input: Option<String>,
    /// Read the inequality from a file instead.
    #[arg(long, value_name = "PATH", conflicts_with = "input")]
    file: Option<PathBuf>,
    /// Accept a top-level implication a -> b and read it as a <= b.
    #[arg(long)]
    as_inequality: bool,
}

#[derive(Args, Debug)]
struct FrameArgs {
    /// Accessibility relations kept per size when the space is sampled.
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    acc_budget: u64,
    /// Seed for sampled relations; ALBA_SEED takes precedence.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct EngineArgs {
    /// Rule applications allowed per system for non-inductive inputs.
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    rule_budget: u64,
    /// Also report the simplified pure quasi-inequalities.
    #[arg(long)]
    simplify: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Unicode,
    Tptp,
    Json,
}

#[derive(Args, Debug)]
struct Classify {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = Format::Unicode)]
    format: Format,
}

#[derive(Args, Debug)]
struct Run {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    frames: FrameArgs,
    /// Print every rule application.
    #[arg(long)]
    trace: bool,
    /// Verify the result on all frames up to this size.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u8).range(1..=4))]
    check: Option<u8>,
    #[arg(long, value_enum, default_value_t = Format::Unicode)]
    format: Format,
}

#[derive(Args, Debug)]
struct Translate {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, value_enum, default_value_t = Format::Unicode)]
    format: Format,
}

#[derive(Args, Debug)]
struct Verify {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    frames: FrameArgs,
    /// Largest frame size.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=4))]
    size: u8,
    /// First-order formula as JSON, used instead of the computed correspondent.
    #[arg(long, value_name = "PATH")]
    fo: Option<PathBuf>,
    /// Print one line per frame.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args, Debug)]
struct Frames {
    #[command(flatten)]
    frames: FrameArgs,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=4))]
    size: u8,
}

/// Failure modes mapped to exit codes.
enum Fail {
    /// Bad input, I/O problems or a verification disagreement.
    Error(String),
    /// The rewrite algorithm did not purify the input.
    Alba(String),
}

const EXIT_ALBA_FAILURE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::FAILURE,
            };
        }
    };
    let result = match cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Run(a) => cmd_run(a),
        Command::Translate(a) => cmd_translate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Frames(a) => cmd_frames(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Fail::Alba(out)) => {
            print!("{out}");
            ExitCode::from(EXIT_ALBA_FAILURE)
        }
        Err(Fail::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn read_input(args: &InputArgs) -> Result<Inequality, Fail> {
    let text = match (&args.input, &args.file) {
        (Some(t), None) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Fail::Error(format!("cannot read {}: {e}", path.display())))?,
        _ => return Err(Fail::Error("expected an inequality or --file".into())),
    };
    let text = text.trim();
    let ineq = if args.as_inequality {
        match parse_formula(text).map_err(|e| Fail::Error(e.to_string()))? {
            Formula::Implies(a, b) => Inequality::new(*a, *b),
            other => return Err(Fail::Error(format!("{other} is not an implication"))),
        }
    } else {
        parse_inequality(text).map_err(|e| Fail::Error(e.to_string()))?
    };
    if !ineq.is_basic() {
        return Err(Fail::Error("nominals and black connectives are not allowed in the input".into()));
    }
    Ok(ineq)
}

fn seed(args: &FrameArgs) -> Result<u64, Fail> {
    match std::env::var("ALBA_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Fail::Error(format!("ALBA_SEED is not an unsigned integer: {s}"))),
        Err(_) => Ok(args.seed),
    }
}

fn budget(args: &FrameArgs) -> AccBudget {
    AccBudget::Samples(args.acc_budget as usize)
}

fn options(args: &EngineArgs) -> AlbaOptions {
    AlbaOptions {
        rule_budget: args.rule_budget as usize,
        simplify: args.simplify,
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Fail> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Fail::Error(e.to_string()))
}

fn fo_text(fo: &FOFormula, format: Format) -> Result<String, Fail> {
    match format {
        Format::Unicode => print_fo(fo, FoFormat::Unicode).map_err(|e| Fail::Error(e.to_string())),
        Format::Tptp => print_fo(fo, FoFormat::Tptp).map_err(|e| Fail::Error(e.to_string())),
        Format::Json => serde_json::to_string(fo).map_err(|e| Fail::Error(e.to_string())),
    }
}

fn cmd_classify(a: Classify) -> Result<String, Fail> {
    let ineq = read_input(&a.input)?;
    let c = classify(&ineq).map_err(|e| Fail::Error(e.to_string()))?;
    match a.format {
        Format::Json => json(&c),
        _ => Ok(format!("input: {}\n{c}", ineq.unicode())),
    }
}

fn run_engine(ineq: &Inequality, args: &EngineArgs) -> Result<AlbaResult, Fail> {
    run_alba_with(ineq, &options(args)).map_err(|e| Fail::Error(e.to_string()))
}

fn render_result(ineq: &Inequality, r: &AlbaResult, trace: bool, format: Format) -> Result<String, Fail> {
    let mut out = String::new();
    let _ = writeln!(out, "input: {}", ineq.unicode());
    if trace {
        out.push_str("trace:\n");
        for (k, step) in r.trace().steps.iter().enumerate() {
            let _ = writeln!(out, "  {k:>3} {step}");
        }
    }
    match r {
        AlbaResult::Success {
            systems,
            quasi,
            fo,
            simplified,
            ..
        } => {
            out.push_str("result: success\n");
            for (k, s) in systems.iter().enumerate() {
                let _ = writeln!(out, "system {k}: {}", s.unicode());
            }
            for (k, q) in quasi.iter().enumerate() {
                let _ = writeln!(out, "quasi {k}: {}", q.unicode());
            }
            if let Some(s) = simplified {
                for (k, q) in s.quasi.iter().enumerate() {
                    let _ = writeln!(out, "simplified {k}: {}", q.unicode());
                }
            }
            let _ = writeln!(out, "fo: {}", fo_text(fo, format)?);
        }
        AlbaResult::Failure { residual, reason, .. } => {
            out.push_str("result: failure\n");
            let _ = writeln!(out, "reason: {reason}");
            for (k, s) in residual.iter().enumerate() {
                let _ = writeln!(out, "residual {k}: {}", s.unicode());
            }
        }
    }
    Ok(out)
}

fn check_report(ineq: &Inequality, r: &AlbaResult, size: u8, frames: &FrameArgs) -> Result<Report, Fail> {
    let AlbaResult::Success { quasi, fo, .. } = r else {
        unreachable!("only successful runs are checked")
    };
    let frames = enumerate_full_frames(size as usize, budget(frames), seed(frames)?);
    verify_correspondence(ineq, fo, Some(quasi), frames).map_err(|e| Fail::Error(e.to_string()))
}

fn cmd_run(a: Run) -> Result<String, Fail> {
    let ineq = read_input(&a.input)?;
    let r = run_engine(&ineq, &a.engine)?;
    let mut out = match a.format {
        Format::Json => json(&r)?,
        f => render_result(&ineq, &r, a.trace, f)?,
    };
    if !r.is_success() {
        return Err(Fail::Alba(out));
    }
    if let Some(n) = a.check {
        let report = check_report(&ineq, &r, n, &a.frames)?;
        let _ = writeln!(out, "check: {}", report.summary());
        if let Some(dump) = &report.first_disagreement {
            out.push_str(dump);
            print!("{out}");
            return Err(Fail::Error(report.summary()));
        }
    }
    Ok(out)
}

fn cmd_translate(a: Translate) -> Result<String, Fail> {
    let ineq = read_input(&a.input)?;
    let r = run_engine(&ineq, &a.engine)?;
    match &r {
        AlbaResult::Success { fo, simplified, .. } => {
            let fo = simplified.as_ref().map_or(fo, |s| &s.fo);
            Ok(fo_text(fo, a.format)? + "\n")
        }
        AlbaResult::Failure { reason, .. } => Err(Fail::Alba(format!("result: failure\nreason: {reason}\n"))),
    }
}

fn cmd_verify(a: Verify) -> Result<String, Fail> {
    let ineq = read_input(&a.input)?;
    let (fo, pure) = match &a.fo {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Fail::Error(format!("cannot read {}: {e}", path.display())))?;
            let fo: FOFormula = serde_json::from_str(&text)
                .map_err(|e| Fail::Error(format!("{} is not a first-order formula: {e}", path.display())))?;
            (fo, None)
        }
        None => match run_engine(&ineq, &a.engine)? {
            AlbaResult::Success { fo, quasi, .. } => (fo, Some(quasi)),
            AlbaResult::Failure { reason, .. } => {
                return Err(Fail::Alba(format!("result: failure\nreason: {reason}\n")))
            }
        },
    };
    let frames = enumerate_full_frames(a.size as usize, budget(&a.frames), seed(&a.frames)?);
    let report = verify_correspondence(&ineq, &fo, pure.as_deref(), frames).map_err(|e| Fail::Error(e.to_string()))?;
    let mut out = String::new();
    if a.verbose {
        let word = |b: bool| if b { "valid" } else { "invalid" };
        for v in &report.verdicts {
            let _ = write!(out, "frame {}: modal {} fo {}", v.frame_index, word(v.modal_valid), word(v.fo_valid));
            if let Some(p) = v.pure_valid {
                let _ = write!(out, " pure {}", word(p));
            }
            let _ = writeln!(out, " {}", if v.agrees() { "agree" } else { "DISAGREE" });
        }
    }
    let valid = report.verdicts.iter().filter(|v| v.modal_valid).count();
    let _ = writeln!(out, "modal valid on {valid}/{} frames", report.verdicts.len());
    let _ = writeln!(out, "{}", report.summary());
    if let Some(dump) = &report.first_disagreement {
        out.push_str(dump);
        print!("{out}");
        return Err(Fail::Error(report.summary()));
    }
    Ok(out)
}

fn cmd_frames(a: Frames) -> Result<String, Fail> {
    let mut out = String::new();
    let mut count = 0;
    for (k, frame) in enumerate_full_frames(a.size as usize, budget(&a.frames), seed(&a.frames)?).enumerate() {
        out.push_str(&dump_frame(k, &frame));
        count += 1;
    }
    let _ = writeln!(out, "total {count}");
    Ok(out)
}
