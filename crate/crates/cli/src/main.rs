use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use whitehead_core::bounds::{self, Mode};
use whitehead_core::morphism::is_basis;
use whitehead_core::search::{degree_with_hint, degree_zero_set, DegreeStatus, SearchOptions};
use whitehead_core::textio::{
    format_catalogue_line, format_diagram_compact, implied_rank, parse_diagram, parse_endomorphism, parse_word,
};
use whitehead_core::{Endomorphism, Error, NestedDiagram, Word};

const GRAMMAR: &str = "\
grammar:
  word  := \"1\" | letter+        letters a-z, inverses A-Z, whitespace ignored
  endo  := letter \"->\" word (\";\" letter \"->\" word)*    e.g. \"a->ab; b->b\"
  diagram := JSON file with rank, spheres, portal_nesting, containment
exit codes: 0 ok, 1 usage or parse error, 2 bound violation finding, 3 inconclusive";

#[derive(Parser)]
#[command(
    name = "whitehead",
    version,
    about = "Free-group automorphisms and sphere-basis diagrams"
)]
#[command(after_help = GRAMMAR)]
struct Cli {
    /// Rank of the free group; inferred from the input when omitted.
    #[arg(long, global = true)]
    rank: Option<usize>,
    /// Largest token count searched.
    #[arg(long, global = true, default_value_t = 4)]
    budget: usize,
    /// Worker threads for searches and sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Lift the rank and token guards on searches.
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Freely reduce each word (stdin lines when no arguments).
    Reduce { words: Vec<String> },
    /// Reduced product of the words, left to right.
    Mul { words: Vec<String> },
    /// Inverse of each word.
    Inv { words: Vec<String> },
    /// Image of each word under an endomorphism.
    Apply { endo: String, words: Vec<String> },
    /// Composite f∘g (g acts first).
    Compose { f: String, g: String },
    /// Inverse automorphism.
    Invert { f: String },
    /// Whether the words form a basis, with a Nielsen certificate in machine format.
    IsBasis { words: Vec<String> },
    /// Automorphism read off a diagram file (stdin when omitted or "-").
    Trace { file: Option<String> },
    /// Check a diagram file and list its violations.
    Validate { file: Option<String> },
    /// Least token count of a diagram tracing to an automorphism.
    Degree {
        f: String,
        /// Diagram tracing to f, used as an upper bound beyond the budget.
        #[arg(long)]
        hint: Option<String>,
    },
    /// Catalogue of token-free diagrams and their traces.
    #[command(name = "deg0-enum")]
    Deg0Enum,
    /// Exhaustive sweep of composition degree bounds at rank 2.
    VerifyBounds {
        #[arg(long, default_value = "muller")]
        mode: Mode,
        /// Only list pairs that do not simply hold.
        #[arg(long)]
        findings_only: bool,
    },
    /// Graphviz rendering of a diagram file.
    RenderDot { file: Option<String> },
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(1, e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(1, e.to_string())
    }
}

type Out<'a> = &'a mut dyn Write;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}\n{GRAMMAR}");
            return ExitCode::from(1);
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            code
        }
    };
    if out.flush().is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}

fn read_input(file: Option<&str>) -> Result<String, Failure> {
    match file {
        None | Some("-") => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
        Some(path) => fs::read_to_string(path).map_err(|e| Failure(1, format!("{path}: {e}"))),
    }
}

/// Arguments, or the non-blank lines of stdin when there are none.
fn items(args: &[String]) -> Result<Vec<String>, Failure> {
    if !args.is_empty() {
        return Ok(args.to_vec());
    }
    Ok(read_input(None)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

fn word(text: &str, rank: Option<usize>) -> Result<Word, Failure> {
    let w = parse_word(text).map_err(|e| Failure(1, format!("{text:?}: {e}")))?;
    if let Some(r) = rank {
        if let Some(l) = w.letters().iter().find(|l| l.index() >= r) {
            return Err(Error::GeneratorOutOfRange {
                letter: l.to_char(),
                rank: r,
            }
            .into());
        }
    }
    Ok(w)
}

fn endo(text: &str, rank: Option<usize>) -> Result<Endomorphism, Failure> {
    let r = match rank {
        Some(r) => r,
        None => implied_rank(text).map_err(|e| Failure(1, format!("{text:?}: {e}")))?,
    };
    parse_endomorphism(text, r).map_err(|e| Failure(1, format!("{text:?}: {e}")))
}

fn diagram(file: Option<&str>) -> Result<NestedDiagram, Failure> {
    Ok(parse_diagram(&read_input(file)?)?)
}

fn emit(out: Out, format: Format, text: &str, machine: Value) -> Result<(), Failure> {
    match format {
        Format::Text => writeln!(out, "{text}")?,
        Format::Machine => writeln!(out, "{machine}")?,
    }
    Ok(())
}

fn diagram_value(d: &NestedDiagram) -> Value {
    serde_json::from_str(&format_diagram_compact(d)).expect("diagram JSON")
}

fn run(cli: &Cli, out: Out) -> Result<i32, Failure> {
    let fmt = cli.format;
    let opts = SearchOptions {
        jobs: cli.jobs,
        allow_large: cli.allow_large,
    };
    match &cli.command {
        Command::Reduce { words } => {
            for t in items(words)? {
                let w = word(&t, cli.rank)?.reduce();
                emit(out, fmt, &w.to_string(), json!(w.to_string()))?;
            }
        }
        Command::Mul { words } => {
            let mut acc = Word::empty();
            for t in items(words)? {
                acc = acc.concat(&word(&t, cli.rank)?);
            }
            emit(out, fmt, &acc.to_string(), json!(acc.to_string()))?;
        }
        Command::Inv { words } => {
            for t in items(words)? {
                let w = word(&t, cli.rank)?.reduce().invert();
                emit(out, fmt, &w.to_string(), json!(w.to_string()))?;
            }
        }
        Command::Apply { endo: e, words } => {
            let f = endo(e, cli.rank)?;
            for t in items(words)? {
                let w = f.apply(&word(&t, Some(f.rank()))?)?;
                emit(out, fmt, &w.to_string(), json!(w.to_string()))?;
            }
        }
        Command::Compose { f, g } => {
            let rank = match cli.rank {
                Some(r) => r,
                None => endo(f, None)?.rank().max(endo(g, None)?.rank()),
            };
            let h = endo(f, Some(rank))?.compose(&endo(g, Some(rank))?)?;
            emit(out, fmt, &h.to_string(), json!(h.to_string()))?;
        }
        Command::Invert { f } => {
            let g = endo(f, cli.rank)?.invert()?;
            emit(out, fmt, &g.to_string(), json!(g.to_string()))?;
        }
        Command::IsBasis { words } => {
            let texts = items(words)?;
            let rank = cli.rank.unwrap_or(texts.len());
            let ws = texts
                .iter()
                .map(|t| word(t, Some(rank)))
                .collect::<Result<Vec<_>, _>>()?;
            let cert = is_basis(rank, &ws)?;
            let machine = json!({ "basis": cert.is_some(), "certificate": cert });
            emit(out, fmt, if cert.is_some() { "true" } else { "false" }, machine)?;
        }
        Command::Trace { file } => {
            let f = diagram(file.as_deref())?.trace()?;
            emit(out, fmt, &f.to_string(), json!(f.to_string()))?;
        }
        Command::Validate { file } => {
            let text = read_input(file.as_deref())?;
            match parse_diagram(&text) {
                Ok(_) => emit(out, fmt, "ok", json!({ "valid": true, "violations": [] }))?,
                Err(Error::InvalidDiagram(vs)) => {
                    let lines: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                    emit(out, fmt, &lines.join("\n"), json!({ "valid": false, "violations": vs }))?;
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Degree { f, hint } => {
            let f = endo(f, cli.rank)?;
            let hint = match hint {
                Some(path) => Some(diagram(Some(path))?),
                None => None,
            };
            let d = degree_with_hint(&f, cli.budget, hint.as_ref(), opts)?;
            let status = match d.status {
                DegreeStatus::Certified => "certified",
                DegreeStatus::UpperBoundOnly => "upper-bound-only",
                DegreeStatus::Unknown => "unknown",
            };
            let text = match d.value {
                Some(v) => format!("{v} ({status} within the diagram model, budget {})", d.budget),
                None => format!("unknown (no diagram within budget {})", d.budget),
            };
            let machine = json!({
                "automorphism": f.to_string(),
                "value": d.value,
                "status": status,
                "budget": d.budget,
                "model_relative": true,
                "witness": d.witness.as_ref().map(diagram_value),
            });
            emit(out, fmt, &text, machine)?;
            if d.status != DegreeStatus::Certified {
                return Ok(3);
            }
        }
        Command::Deg0Enum => {
            let rank = cli.rank.ok_or_else(|| Failure(1, "deg0-enum needs --rank".into()))?;
            for (f, d) in degree_zero_set(rank, opts)? {
                match fmt {
                    Format::Text => writeln!(out, "{}", format_catalogue_line(&f, &d))?,
                    Format::Machine => writeln!(
                        out,
                        "{}",
                        json!({ "trace": f.to_string(), "diagram": diagram_value(&d) })
                    )?,
                }
            }
        }
        Command::VerifyBounds { mode, findings_only } => {
            let rank = cli.rank.unwrap_or(2);
            let report = bounds::verify_bounds(rank, cli.budget, *mode, opts)?;
            match fmt {
                Format::Text => report.write_text(out, *findings_only)?,
                Format::Machine => report.write_json(out, *findings_only)?,
            }
            return Ok(report.exit_code());
        }
        Command::RenderDot { file } => {
            let d = diagram(file.as_deref())?;
            write!(out, "{}", d.to_dot())?;
        }
    }
    Ok(0)
}
