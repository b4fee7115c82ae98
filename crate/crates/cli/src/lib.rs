//! The `aik` command line.
//!
//! Exit codes: 0 success, 1 `eq` found the inputs distinguished, 2 `fuzz`
//! found an invariant violation, 3 I/O or parse error.

pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use affine_index::canonical::canonical_form;
use affine_index::codec::parse_file_contents;
use affine_index::cut::{binary_cut_system, random_cut_system};
use affine_index::moves::{apply_move, random_equivalent_with, MoveLog, MoveSet};
use affine_index::twisted::double_cover;
use affine_index::{serialize, LinkCode};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISTINGUISHED: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "aik", version, about = "Affine index invariants of virtual and twisted links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the invariant report of a code.
    Inv {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Also report the binary cut system.
        #[arg(long)]
        cut: bool,
    },
    /// Build a cut system and report rho, the numbering and the cut invariants.
    Cut {
        file: PathBuf,
        #[command(flatten)]
        which: CutChoice,
    },
    /// Print the double covering code.
    Cover { file: PathBuf },
    /// Random move sequences that must preserve every invariant.
    Fuzz {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Defaults to `AIK_SEED`, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Replay a move log instead of generating trials.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Compare the invariants of two codes.
    Eq { first: PathBuf, second: PathBuf },
    /// Validate a code and print its canonical form.
    Parse { file: PathBuf },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CutChoice {
    #[arg(long)]
    binary: bool,
    #[arg(long, value_name = "SEED")]
    random: Option<u64>,
}

fn read_code(path: &Path) -> Result<LinkCode> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_file_contents(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn default_seed() -> u64 {
    std::env::var("AIK_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0)
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Inv { file, json, cut } => {
            let code = read_code(&file)?;
            let system = if cut && !code.has_cuts() { Some(binary_cut_system(&code.without_bars())?) } else { None };
            let r = report::invariant_report(&code, system.as_ref())?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
            } else {
                write!(out, "{}", report::render_text(&r))?;
            }
            Ok(EXIT_OK)
        }
        Command::Cut { file, which } => {
            let code = read_code(&file)?.without_cuts();
            let system = match which.random {
                Some(seed) => random_cut_system(&code, seed)?,
                None => binary_cut_system(&code)?,
            };
            let r = report::cut_report(&system)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
            Ok(EXIT_OK)
        }
        Command::Cover { file } => {
            let code = read_code(&file)?;
            writeln!(out, "{}", serialize(&double_cover(&code.without_cuts())?))?;
            Ok(EXIT_OK)
        }
        Command::Fuzz { file, steps, trials, seed, replay } => {
            let code = read_code(&file)?.without_cuts();
            match replay {
                Some(log) => {
                    let text = std::fs::read_to_string(&log).with_context(|| format!("cannot read {}", log.display()))?;
                    let log: MoveLog = text.parse().with_context(|| format!("cannot parse {}", log.display()))?;
                    replay_log(&code, &log, out)
                }
                None => fuzz(&code, steps, trials, seed.unwrap_or_else(default_seed), out),
            }
        }
        Command::Eq { first, second } => {
            let (a, b) = (read_code(&first)?, read_code(&second)?);
            let twisted = a.has_bars() || b.has_bars();
            let (fa, fb) = (report::fingerprint(&a, twisted)?, report::fingerprint(&b, twisted)?);
            let differing: Vec<&String> = fa.keys().filter(|k| fa.get(*k) != fb.get(*k)).collect();
            if differing.is_empty() {
                writeln!(out, "not distinguished")?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "distinguished")?;
                for k in differing {
                    writeln!(out, "  {k}: {} vs {}", fa[k], fb.get(k).map_or("-", String::as_str))?;
                }
                Ok(EXIT_DISTINGUISHED)
            }
        }
        Command::Parse { file } => {
            let code = read_code(&file)?;
            writeln!(out, "{}", canonical_form(&code)?)?;
            Ok(EXIT_OK)
        }
    }
}

/// First move of `log` after which an invariant differs from its value on `code`.
struct Violation {
    step: usize,
    invariant: String,
}

/// Applies `log` move by move, comparing against the starting invariants.
fn check_log(code: &LinkCode, log: &MoveLog) -> Result<Option<Violation>> {
    let twisted = code.has_bars() || log.moves().iter().any(|m| m.kind().is_twisted());
    let start = report::fingerprint(code, twisted)?;
    let mut current = code.clone();
    for (step, m) in log.moves().iter().enumerate() {
        current = apply_move(&current, m).with_context(|| format!("move {} ({m})", step + 1))?;
        let now = report::fingerprint(&current, twisted)?;
        if let Some(k) = start.keys().find(|k| start.get(*k) != now.get(*k)) {
            return Ok(Some(Violation { step, invariant: k.clone() }));
        }
    }
    Ok(None)
}

fn print_violation(code: &LinkCode, log: &MoveLog, v: &Violation, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "violation: {} changed at move {}", v.invariant, v.step + 1)?;
    writeln!(out, "# code: {}", serialize(code))?;
    write!(out, "{}", log.truncated(v.step + 1))?;
    Ok(())
}

fn replay_log(code: &LinkCode, log: &MoveLog, out: &mut dyn Write) -> Result<i32> {
    match check_log(code, log)? {
        Some(v) => {
            print_violation(code, log, &v, out)?;
            Ok(EXIT_VIOLATION)
        }
        None => {
            writeln!(out, "replayed {} moves: all invariants preserved", log.len())?;
            Ok(EXIT_OK)
        }
    }
}

fn fuzz(code: &LinkCode, steps: usize, trials: usize, seed: u64, out: &mut dyn Write) -> Result<i32> {
    let set = MoveSet::for_code(code);
    let results: Vec<Result<(MoveLog, Option<Violation>)>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let (_, log) = random_equivalent_with(code, steps, seed.wrapping_add(k as u64), set);
            let v = check_log(code, &log)?;
            Ok((log, v))
        })
        .collect();
    for (k, r) in results.into_iter().enumerate() {
        let (log, v) = r?;
        let trial_seed = seed.wrapping_add(k as u64);
        match v {
            None => writeln!(out, "trial {k} seed {trial_seed}: ok")?,
            Some(v) => {
                writeln!(out, "trial {k} seed {trial_seed}: FAILED")?;
                print_violation(code, &log, &v, out)?;
                return Ok(EXIT_VIOLATION);
            }
        }
    }
    writeln!(out, "{trials} trials x {steps} moves: all invariants preserved")?;
    Ok(EXIT_OK)
}
