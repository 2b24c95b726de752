use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bunch_cli::session::{repl, run_script, Session, ValidateOpts};
use bunch_core::fixpoint::GrammarSystem;
use clap::{Args, Parser, Subcommand};

/// Bunch theory workbench: evaluation, prospective values, weakest
/// preconditions, model validation and grammar fixpoints.
#[derive(Parser)]
#[command(name = "bt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Context shared by the evaluating subcommands.
#[derive(Args)]
struct Setup {
    /// Bind a variable before evaluating, as NAME=EXPR (repeatable).
    #[arg(long = "let", value_name = "NAME=EXPR")]
    lets: Vec<String>,
    /// Declare a given set, as NAME=a,b,c (repeatable).
    #[arg(long, value_name = "NAME=ATOMS")]
    given: Vec<String>,
    /// Integer range used when quantifiers or comprehensions enumerate INT.
    #[arg(long, value_name = "LO..HI")]
    ints: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression.
    Eval {
        expr: String,
        #[command(flatten)]
        setup: Setup,
    },
    /// Prospective value `S <> E` of a program read from a file.
    Pv {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        setup: Setup,
    },
    /// Expected value of `E` after a probabilistic program.
    Expect {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        setup: Setup,
    },
    /// Check `z : (S <> E)` against `<S>(z : E)` over a finite state space.
    CheckBasicLaw {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        expr: String,
        /// One variable per line: `x in 0..3` or `x in EXPR`.
        #[arg(long)]
        space: PathBuf,
        #[command(flatten)]
        setup: Setup,
    },
    /// Validate the axioms in the finite denotational model.
    Validate {
        #[arg(long, default_value_t = 2)]
        carrier: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Also run the improper-bunch battery.
        #[arg(long)]
        improper: bool,
        /// Print one JSON record per line.
        #[arg(long)]
        records: bool,
        /// Also check the host lemmas and model properties.
        #[arg(long)]
        lemmas: bool,
        /// Replace choice with a seeded random stub (negative control).
        #[arg(long, value_name = "SEED")]
        stub_choice: Option<u64>,
    },
    /// Kleene approximants or bounded membership for a grammar file.
    Grammar {
        #[arg(long)]
        file: PathBuf,
        /// Print approximants 1..=N.
        #[arg(long, value_name = "N", conflicts_with = "member")]
        chain: Option<usize>,
        /// Word to test for membership.
        #[arg(long, requires_all = ["nt", "depth"])]
        member: Option<String>,
        /// Nonterminal.
        #[arg(long)]
        nt: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Run a script; exits non-zero if any directive failed.
    Run { script: PathBuf },
    /// Interactive session.
    Repl,
}

/// Writes a line to stdout; a closed pipe (`bt ... | head`) is not an error.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() != io::ErrorKind::BrokenPipe {
            panic!("writing to stdout: {e}");
        }
    }
}

fn session(setup: &Setup) -> Result<Session> {
    let mut s = Session::default();
    for g in &setup.given {
        let (name, atoms) = g.split_once('=').context("--given expects NAME=a,b,...")?;
        s.declare_given(name, atoms)?;
    }
    if let Some(r) = &setup.ints {
        s.set_int_range(r)?;
    }
    for l in &setup.lets {
        let (name, e) = l.split_once('=').context("--let expects NAME=EXPR")?;
        s.bind(name, e)?;
    }
    Ok(s)
}

fn read_program(s: &Session, path: &Path) -> Result<bunch_core::Cmd> {
    let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let body: Vec<&str> = src
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect();
    s.parse_cmd(&body.join("\n"))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Eval { expr, setup } => {
            emit(&session(&setup)?.eval(&expr)?.to_string());
        }
        Command::Pv { program, expr, setup } => {
            let s = session(&setup)?;
            let c = read_program(&s, &program)?;
            emit(&s.pv(&c, &s.parse_expr(&expr)?)?);
        }
        Command::Expect { program, expr, setup } => {
            let s = session(&setup)?;
            let c = read_program(&s, &program)?;
            emit(&s.expect(&c, &s.parse_expr(&expr)?)?);
        }
        Command::CheckBasicLaw {
            program,
            expr,
            space,
            setup,
        } => {
            let mut s = session(&setup)?;
            s.load_space_file(&space)?;
            let c = read_program(&s, &program)?;
            let reply = s.basic_law(&c, &s.parse_expr(&expr)?)?;
            emit(&reply.text);
            return Ok(!reply.failed);
        }
        Command::Validate {
            carrier,
            depth,
            improper,
            records,
            lemmas,
            stub_choice,
        } => {
            let opts = ValidateOpts {
                carrier,
                depth,
                improper,
                records,
                lemmas,
                stub_choice,
            };
            let reply = Session::default().validate(&opts);
            emit(&reply.text);
            return Ok(!reply.failed);
        }
        Command::Grammar {
            file,
            chain,
            member,
            nt,
            depth,
        } => {
            let src = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let g = GrammarSystem::parse(&src)?;
            match (chain, member) {
                (Some(n), None) => emit(&Session::chain(&g, n, nt.as_deref())?),
                (None, Some(w)) => {
                    let (nt, depth) = (nt.unwrap_or_default(), depth.unwrap_or_default());
                    emit(&Session::member(&g, &w, &nt, depth)?);
                }
                _ => bail!("give exactly one of --chain or --member"),
            }
        }
        Command::Run { script } => {
            let src = std::fs::read_to_string(&script)
                .with_context(|| format!("reading {}", script.display()))?;
            let base = script.parent().unwrap_or(Path::new(".")).to_path_buf();
            let mut s = Session::new(base);
            let name = script.display().to_string();
            let summary = run_script(&src, &name, &mut s, &mut io::stdout(), &mut io::stderr())?;
            if summary.failures > 0 {
                eprintln!("{} of {} directives failed", summary.failures, summary.directives);
            }
            return Ok(summary.failures == 0);
        }
        Command::Repl => {
            repl(&mut BufReader::new(io::stdin()), &mut io::stdout())?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
