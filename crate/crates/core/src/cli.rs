//! The `indpro` command line.
//!
//! Exit status is 0 when the requested property holds, 1 when it does not (or a
//! harness run saw failures), and 2 for usage errors and unreadable input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::beilinson::{dualize, embed_ind_window, embed_pro_window, is_admissible, is_kato, uroof_equiv};
use crate::error::Error;
use crate::field::PrimeField;
use crate::harness::{self, middle_3x3_check, HarnessConfig, HarnessKind};
use crate::io::{Document, ParseError};
use crate::linalg::is_ses;
use crate::tate::{laurent_window, shift_lattice};
use crate::window::{roof_equiv, strictify_ind, strictify_pro};

pub const SEED_ENV: &str = "INDPRO_SEED";
pub const DEFAULT_DUMP_DIR: &str = "indpro-failures";

#[derive(Debug, Parser)]
#[command(
    name = "indpro",
    version,
    about = "Exact checks for ind-, pro- and ind-pro systems of vector spaces over GF(p)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide a property of a document.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Decide whether two roofs of the same kind are equivalent.
    RoofEq { first: PathBuf, second: PathBuf },
    /// Replace an ind- or pro-window by an isomorphic strict one.
    Strictify {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dualize a window; ind and pro windows are exchanged.
    Dualize {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed a strict ind- or pro-window as an ind-pro window.
    EmbedInd {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print worked examples.
    Demo {
        #[command(subcommand)]
        which: DemoCmd,
    },
    /// Run a randomized check.
    Harness {
        kind: HarnessKind,
        #[command(flatten)]
        opts: HarnessOpts,
    },
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    /// Every triple sequence of a window is short exact.
    Admissible { file: PathBuf },
    /// Admissible, with cartesian and cocartesian elementary squares.
    Kato { file: PathBuf },
    /// A short exact sequence: a triple, a window sequence or a 3x3 grid.
    Ses { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum DemoCmd {
    /// The lattice quotients of k((t)) and a lattice shift.
    Laurent {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        hi: i64,
    },
}

#[derive(Debug, Args)]
struct HarnessOpts {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Overridden by the INDPRO_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 6)]
    max_dim: usize,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    lo: i64,
    #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
    hi: i64,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Where failing instances are written (default: ./indpro-failures).
    #[arg(long)]
    dump_dir: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Input(String),
}

type Outcome = std::result::Result<bool, Failure>;

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path) -> std::result::Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Document::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(doc: &Document, out_path: Option<&Path>, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match out_path {
        Some(p) => std::fs::write(p, doc.to_json()).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => write!(out, "{}", doc.to_json()).map_err(input),
    }
}

fn wrong_kind(doc: &Document, wanted: &str) -> Failure {
    Failure::Input(format!("expected {wanted}, found a {} document", doc.kind()))
}

fn check(what: &CheckCmd, out: &mut dyn Write) -> Outcome {
    let line = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(input);
    match what {
        CheckCmd::Admissible { file } => match read(file)? {
            Document::PiWindow(x) => {
                let a = is_admissible(&x);
                match a.first_failure {
                    Some((i, j, k)) => line(out, format!("admissible: false (first failure at i={i} j={j} k={k})"))?,
                    None => line(out, "admissible: true".into())?,
                }
                Ok(a.ok)
            }
            other => Err(wrong_kind(&other, "a pi_window")),
        },
        CheckCmd::Kato { file } => match read(file)? {
            Document::PiWindow(x) => {
                let k = is_kato(&x);
                line(out, format!("kato: {k}"))?;
                Ok(k)
            }
            other => Err(wrong_kind(&other, "a pi_window")),
        },
        CheckCmd::Ses { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
            let ok = match Document::from_json(&text) {
                Ok(Document::Ses(t)) => is_ses(&t).map_err(input)?,
                Ok(Document::PiSes(_)) => true,
                Ok(Document::Grid(g)) => middle_3x3_check(&g).map_err(input)?,
                // A window sequence that is not exact in some cell is a negative answer, not bad input.
                Err(ParseError::Invalid(Error::Malformed { invariant: "cell sequence is short exact", location })) => {
                    line(out, format!("ses: false (not short exact at {location})"))?;
                    return Ok(false);
                }
                Ok(other) => return Err(wrong_kind(&other, "a ses")),
                Err(e) => return Err(Failure::Input(format!("{}: {e}", file.display()))),
            };
            line(out, format!("ses: {ok}"))?;
            Ok(ok)
        }
    }
}

fn roof_eq(a: &Path, b: &Path, out: &mut dyn Write) -> Outcome {
    let eq = match (read(a)?, read(b)?) {
        (Document::Roof(r1), Document::Roof(r2)) => roof_equiv(&r1, &r2),
        (Document::ProRoof(r1), Document::ProRoof(r2)) => r1.equiv(&r2),
        (Document::URoof(r1), Document::URoof(r2)) => uroof_equiv(&r1, &r2),
        (d1, d2) => return Err(Failure::Input(format!("cannot compare a {} with a {}", d1.kind(), d2.kind()))),
    }
    .map_err(input)?;
    writeln!(out, "equivalent: {eq}").map_err(input)?;
    Ok(eq)
}

fn strictify(file: &Path, out_path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let (summary, doc) = match read(file)? {
        Document::IndWindow(x) => {
            let s = strictify_ind(&x).map_err(input)?;
            (format!("strict dims: {:?}", s.strict.dims()), Document::IndWindow(s.strict))
        }
        Document::ProWindow(y) => {
            let s = strictify_pro(&y).map_err(input)?;
            (format!("strict dims: {:?}\nsteps: {:?}", s.strict.dims(), s.steps), Document::ProWindow(s.strict))
        }
        other => return Err(wrong_kind(&other, "an ind_window or pro_window")),
    };
    match out_path {
        Some(_) => {
            writeln!(out, "{summary}").map_err(input)?;
            emit(&doc, out_path, out)?;
        }
        None => emit(&doc, None, out)?,
    }
    Ok(true)
}

fn dualize_cmd(file: &Path, out_path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let doc = match read(file)? {
        Document::PiWindow(x) => Document::PiWindow(dualize(&x)),
        Document::IndWindow(x) => Document::ProWindow(x.dual()),
        Document::ProWindow(y) => Document::IndWindow(y.dual()),
        other => return Err(wrong_kind(&other, "a window")),
    };
    emit(&doc, out_path, out)?;
    Ok(true)
}

fn embed(file: &Path, out_path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let w = match read(file)? {
        Document::IndWindow(x) => embed_ind_window(&x),
        Document::ProWindow(y) => embed_pro_window(&y),
        other => return Err(wrong_kind(&other, "an ind_window or pro_window")),
    }
    .map_err(input)?;
    emit(&Document::PiWindow(w), out_path, out)?;
    Ok(true)
}

fn demo_laurent(p: u64, lo: i64, hi: i64, out: &mut dyn Write) -> Outcome {
    let f = PrimeField::new(p).map_err(|e| Failure::Usage(e.to_string()))?;
    let x = laurent_window(f, lo, hi).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut text = format!("Laurent window on [{lo}, {hi}] over GF({p})\n");
    for i in lo..=hi {
        let row: Vec<String> = (i..=hi).map(|j| x.dim(i, j).to_string()).collect();
        text.push_str(&format!("  i={i:>3}: {}\n", row.join(" ")));
    }
    let kato = is_kato(&x);
    text.push_str(&format!("admissible: {}\nkato: {kato}\n", is_admissible(&x).ok));
    let shift = shift_lattice(&x, 1).map_err(input)?;
    let t = shift.target();
    text.push_str(&format!(
        "shift by t^-1: [{}, {}] -> [{}, {}], X({lo}, {hi}) = {} -> {}\n",
        lo,
        hi,
        t.lo(),
        t.hi(),
        x.dim(lo, hi),
        t.dim(lo + 1, hi + 1)
    ));
    write!(out, "{text}").map_err(input)?;
    Ok(kato)
}

fn harness_cmd(
    kind: HarnessKind,
    opts: &HarnessOpts,
    seed_env: Option<String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let seed = match seed_env {
        Some(s) => {
            s.trim().parse().map_err(|_| Failure::Usage(format!("{SEED_ENV}={s:?} is not an unsigned integer")))?
        }
        None => opts.seed,
    };
    let config =
        HarnessConfig { trials: opts.trials, seed, p: opts.p, max_dim: opts.max_dim, lo: opts.lo, hi: opts.hi };
    let report = harness::run(kind, &config).map_err(|e| Failure::Usage(e.to_string()))?;
    if opts.json {
        writeln!(out, "{}", report.to_json()).map_err(input)?;
    } else {
        write!(out, "{}", report.to_text()).map_err(input)?;
    }
    if !report.passed() {
        let dir = opts.dump_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_DUMP_DIR));
        for path in report.write_dumps(&dir).map_err(input)? {
            writeln!(err, "dumped {}", path.display()).map_err(input)?;
        }
    }
    Ok(report.passed())
}

/// Runs the command line with `args` (including the program name) and returns the exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Check { what } => check(what, out),
        Command::RoofEq { first, second } => roof_eq(first, second, out),
        Command::Strictify { file, out: o } => strictify(file, o.as_deref(), out),
        Command::Dualize { file, out: o } => dualize_cmd(file, o.as_deref(), out),
        Command::EmbedInd { file, out: o } => embed(file, o.as_deref(), out),
        Command::Demo { which: DemoCmd::Laurent { p, lo, hi } } => demo_laurent(*p, *lo, *hi, out),
        Command::Harness { kind, opts } => harness_cmd(*kind, opts, std::env::var(SEED_ENV).ok(), out, err),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}\n\nRun `indpro --help` for usage.");
            2
        }
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}
