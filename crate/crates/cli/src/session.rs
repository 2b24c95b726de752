//! Interpreter state shared by scripts, the REPL and the subcommands.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use bunch_core::fixpoint::GrammarSystem;
use bunch_core::syntax::{parse_cmd, parse_expr, parse_pred, ParseCtx};
use bunch_core::types::GivenSet;
use bunch_core::wp::StateSpace;
use bunch_core::{Cmd, EnumBounds, Env, Evaluator, Expr, Value};
use bunch_model::{lemma_suite, validate_axioms_with, ChoiceMode, Universe};

/// Options of `validate` shared by the subcommand and the directive.
#[derive(Debug, Clone, Copy)]
pub struct ValidateOpts {
    pub carrier: usize,
    pub depth: usize,
    pub improper: bool,
    pub records: bool,
    pub lemmas: bool,
    pub stub_choice: Option<u64>,
}

impl Default for ValidateOpts {
    fn default() -> Self {
        ValidateOpts {
            carrier: 2,
            depth: 2,
            improper: false,
            records: false,
            lemmas: false,
            stub_choice: None,
        }
    }
}

impl ValidateOpts {
    /// Flags as written after the `validate` directive.
    pub fn parse_flags(words: &[&str]) -> Result<Self> {
        let mut o = ValidateOpts::default();
        let mut it = words.iter();
        while let Some(w) = it.next() {
            let mut num = |flag: &str| -> Result<u64> {
                it.next()
                    .ok_or_else(|| anyhow!("{flag} needs a value"))?
                    .parse()
                    .with_context(|| format!("bad value for {flag}"))
            };
            match *w {
                "--carrier" => o.carrier = num("--carrier")? as usize,
                "--depth" => o.depth = num("--depth")? as usize,
                "--improper" => o.improper = true,
                "--records" => o.records = true,
                "--lemmas" => o.lemmas = true,
                "--stub-choice" => o.stub_choice = Some(num("--stub-choice")?),
                other => bail!("unknown validate flag `{other}`"),
            }
        }
        Ok(o)
    }
}

/// A directive's printed output, and whether it counts as a failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub text: String,
    pub failed: bool,
}

impl Reply {
    fn ok(text: impl Into<String>) -> Self {
        Reply {
            text: text.into(),
            failed: false,
        }
    }
}

pub struct Session {
    ctx: ParseCtx,
    env: Env,
    bounds: EnumBounds,
    space: Vec<(String, Vec<Value>)>,
    grammars: BTreeMap<String, GrammarSystem>,
    base_dir: PathBuf,
    last: Option<String>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(".")
    }
}

fn parse_range(src: &str) -> Option<(i64, i64)> {
    let (lo, hi) = src.trim().split_once("..")?;
    Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?))
}

impl Session {
    pub fn new(base_dir: impl Into<PathBuf>) -> Self {
        Session {
            ctx: ParseCtx::default(),
            env: Env::new(),
            bounds: EnumBounds::from_env(),
            space: Vec::new(),
            grammars: BTreeMap::new(),
            base_dir: base_dir.into(),
            last: None,
        }
    }

    fn evaluator(&self) -> Evaluator {
        Evaluator::new(self.bounds.clone())
    }

    pub fn declare_given(&mut self, name: &str, atoms: &str) -> Result<()> {
        let carrier = atoms
            .trim()
            .trim_start_matches('{')
            .trim_end_matches('}')
            .split(',')
            .map(|a| a.trim().to_string())
            .filter(|a| !a.is_empty())
            .collect();
        self.ctx.declare_given(GivenSet::new(name.trim(), carrier)?);
        Ok(())
    }

    pub fn set_int_range(&mut self, src: &str) -> Result<()> {
        let (lo, hi) = parse_range(src).ok_or_else(|| anyhow!("expected `LO..HI`"))?;
        self.bounds = self.bounds.clone().with_int_range(lo, hi);
        Ok(())
    }

    pub fn bind(&mut self, name: &str, src: &str) -> Result<()> {
        let value = self.eval(src)?;
        self.env.insert(name.trim(), value);
        Ok(())
    }

    /// `x in LO..HI` or `x in EXPR`: one variable of the state space.
    pub fn add_space_var(&mut self, src: &str) -> Result<()> {
        let (name, dom) = src
            .split_once(" in ")
            .ok_or_else(|| anyhow!("expected `NAME in LO..HI` or `NAME in EXPR`"))?;
        let values: Vec<Value> = match parse_range(dom) {
            Some((lo, hi)) => (lo..=hi).map(Value::Int).collect(),
            None => {
                let b = self.eval(dom)?;
                if !b.is_proper() {
                    bail!("domain of `{}` is improper", name.trim());
                }
                b.elems().iter().cloned().collect()
            }
        };
        let name = name.trim().to_string();
        self.space.retain(|(n, _)| *n != name);
        self.space.push((name, values));
        Ok(())
    }

    pub fn load_space_file(&mut self, path: &Path) -> Result<()> {
        let src = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        for line in src.lines().map(strip_comment).filter(|l| !l.is_empty()) {
            self.add_space_var(line)?;
        }
        Ok(())
    }

    pub fn define_program(&mut self, name: &str, src: &str) -> Result<()> {
        let c = parse_cmd(src, &self.ctx)?;
        self.ctx.programs.insert(name.trim().to_string(), c);
        Ok(())
    }

    pub fn parse_cmd(&self, src: &str) -> Result<Cmd> {
        Ok(parse_cmd(src, &self.ctx)?)
    }

    pub fn parse_expr(&self, src: &str) -> Result<Expr> {
        Ok(parse_expr(src, &self.ctx)?)
    }

    pub fn eval(&self, src: &str) -> Result<bunch_core::Bunch> {
        let e = self.parse_expr(src)?;
        Ok(self.evaluator().eval(&e, &self.env)?)
    }

    pub fn holds(&self, src: &str) -> Result<bool> {
        let p = parse_pred(src, &self.ctx)?;
        Ok(self.evaluator().holds(&p, &self.env)?)
    }

    /// Splits `S <> E` into its program and expression.
    fn pv_parts(&self, src: &str) -> Result<(Cmd, Expr)> {
        match self.parse_expr(src)? {
            Expr::Pv(s, e) => Ok((*s, *e)),
            _ => bail!("expected `S <> E`"),
        }
    }

    pub fn pv(&self, s: &Cmd, e: &Expr) -> Result<String> {
        Ok(self.evaluator().pv(s, e, &self.env)?.to_string())
    }

    pub fn expect(&self, s: &Cmd, e: &Expr) -> Result<String> {
        Ok(self.evaluator().pv_expect(s, e, &self.env)?.to_string())
    }

    pub fn basic_law(&self, s: &Cmd, e: &Expr) -> Result<Reply> {
        if self.space.is_empty() {
            bail!("no state space declared");
        }
        let space = StateSpace::new(self.space.clone())?;
        let violations = self.evaluator().basic_law_check(s, e, &space)?;
        if violations.is_empty() {
            return Ok(Reply::ok(format!(
                "basic law holds on all {} states",
                space.len()
            )));
        }
        let mut text = format!("basic law fails ({} violations)", violations.len());
        for v in violations.iter().take(10) {
            write!(text, "\n  {v}").unwrap();
        }
        Ok(Reply {
            text,
            failed: true,
        })
    }

    pub fn validate(&self, o: &ValidateOpts) -> Reply {
        let universe = Universe {
            carrier: o.carrier,
            depth: o.depth,
            improper: o.improper,
            max_envs: self.bounds.max.max(1 << 10),
        };
        let mode = match o.stub_choice {
            Some(seed) => ChoiceMode::Stub { seed },
            None => ChoiceMode::Canonical,
        };
        let mut report = validate_axioms_with(&universe, mode);
        if o.lemmas {
            report.lines.extend(lemma_suite(&universe).lines);
        }
        let text = if o.records {
            report.to_records()
        } else {
            report.to_string().trim_end().to_string()
        };
        Reply {
            text,
            failed: !report.no_failures(),
        }
    }

    pub fn load_grammar(&mut self, name: &str, src: &str) -> Result<()> {
        let g = GrammarSystem::parse(src)?;
        self.grammars.insert(name.trim().to_string(), g);
        Ok(())
    }

    fn grammar(&self, name: &str) -> Result<&GrammarSystem> {
        self.grammars
            .get(name)
            .ok_or_else(|| anyhow!("no grammar named `{name}`"))
    }

    /// Approximants `N(1..=n)` of each nonterminal, or only of `nt`.
    pub fn chain(g: &GrammarSystem, n: usize, nt: Option<&str>) -> Result<String> {
        let chains = g.mutual_chain(n);
        let only = nt.map(|x| g.index_of(x)).transpose()?;
        let mut out = Vec::new();
        for (i, (name, seq)) in g.names().iter().zip(&chains).enumerate() {
            if only.is_some_and(|o| o != i) {
                continue;
            }
            for (k, b) in seq.iter().enumerate().skip(1) {
                out.push(format!("{name}({k}) = {b}"));
            }
        }
        Ok(out.join("\n"))
    }

    pub fn member(g: &GrammarSystem, word: &str, nt: &str, depth: usize) -> Result<String> {
        Ok(g.member_bounded(word, nt, depth, true)?.to_string())
    }

    /// Executes one directive line. Declarations return an empty reply.
    pub fn exec(&mut self, line: &str) -> Result<Reply> {
        let line = strip_comment(line);
        let (head, rest) = line
            .split_once(char::is_whitespace)
            .map(|(h, r)| (h, r.trim()))
            .unwrap_or((line, ""));
        let words: Vec<&str> = rest.split_whitespace().collect();
        let reply = match head {
            "" => return Ok(Reply::ok("")),
            "given" => {
                let (name, atoms) = rest
                    .split_once('=')
                    .ok_or_else(|| anyhow!("expected `given NAME = a, b, ...`"))?;
                self.declare_given(name, atoms)?;
                Reply::ok("")
            }
            "ints" => {
                self.set_int_range(rest)?;
                Reply::ok("")
            }
            "let" => {
                let (name, src) = rest
                    .split_once('=')
                    .ok_or_else(|| anyhow!("expected `let NAME = EXPR`"))?;
                self.bind(name, src)?;
                Reply::ok("")
            }
            "space" => {
                self.add_space_var(rest)?;
                Reply::ok("")
            }
            "program" => {
                let (name, src) = rest
                    .split_once('=')
                    .ok_or_else(|| anyhow!("expected `program NAME = CMD`"))?;
                self.define_program(name, src)?;
                Reply::ok("")
            }
            "grammar" => {
                if let Some((name, path)) = rest.split_once(" from ") {
                    let path = self.base_dir.join(path.trim());
                    let src = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    self.load_grammar(name, &src)?;
                } else if let Some((name, rules)) = rest.split_once(':') {
                    self.load_grammar(name, &rules.replace(';', "\n"))?;
                } else {
                    bail!("expected `grammar NAME from PATH` or `grammar NAME: RULE; ...`");
                }
                Reply::ok("")
            }
            "eval" => Reply::ok(self.eval(rest)?.to_string()),
            "holds" => Reply::ok(self.holds(rest)?.to_string()),
            "pv" => {
                let (s, e) = self.pv_parts(rest)?;
                Reply::ok(self.pv(&s, &e)?)
            }
            "expect" => {
                let (s, e) = self.pv_parts(rest)?;
                Reply::ok(self.expect(&s, &e)?)
            }
            "wp-check" => {
                let (s, e) = self.pv_parts(rest)?;
                self.basic_law(&s, &e)?
            }
            "validate" => self.validate(&ValidateOpts::parse_flags(&words)?),
            "chain" => {
                let (name, n) = match words[..] {
                    [name, n, ..] => (name, n.parse().context("bad chain length")?),
                    _ => bail!("expected `chain GRAMMAR N [NONTERMINAL]`"),
                };
                Reply::ok(Self::chain(self.grammar(name)?, n, words.get(2).copied())?)
            }
            "member" => match words[..] {
                [name, word, nt, depth] => {
                    let depth = depth.parse().context("bad depth")?;
                    Reply::ok(Self::member(self.grammar(name)?, word, nt, depth)?)
                }
                _ => bail!("expected `member GRAMMAR WORD NONTERMINAL DEPTH`"),
            },
            "want" => {
                let got = self.last.as_deref().unwrap_or("");
                if got.trim() == rest {
                    return Ok(Reply::ok(""));
                }
                return Ok(Reply {
                    text: format!("wanted `{rest}`, got `{}`", got.trim()),
                    failed: true,
                });
            }
            other => bail!("unknown directive `{other}`"),
        };
        self.last = Some(reply.text.clone());
        Ok(reply)
    }
}

fn strip_comment(line: &str) -> &str {
    let line = line.trim();
    if line.starts_with('#') {
        ""
    } else {
        line
    }
}

/// Result of running a script: how many directives failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub directives: usize,
    pub failures: usize,
}

/// Runs every line of `src`, writing outputs to `out` and failures to
/// `err` as `NAME:LINE: message`.
pub fn run_script(
    src: &str,
    name: &str,
    session: &mut Session,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<Summary> {
    let mut summary = Summary {
        directives: 0,
        failures: 0,
    };
    for (i, line) in src.lines().enumerate() {
        if strip_comment(line).is_empty() {
            continue;
        }
        summary.directives += 1;
        match session.exec(line) {
            Ok(reply) => {
                if !reply.text.is_empty() && !reply.failed {
                    writeln!(out, "{}", reply.text)?;
                }
                if reply.failed {
                    summary.failures += 1;
                    if line.trim_start().starts_with("validate") {
                        writeln!(out, "{}", reply.text)?;
                        writeln!(err, "{name}:{}: validation failed", i + 1)?;
                    } else {
                        writeln!(err, "{name}:{}: {}", i + 1, reply.text)?;
                    }
                }
            }
            Err(e) => {
                summary.failures += 1;
                writeln!(err, "{name}:{}: error: {e:#}", i + 1)?;
            }
        }
    }
    Ok(summary)
}

/// Reads directives from `input` until end of file. A line that is not a
/// directive is evaluated as an expression.
pub fn repl(input: &mut dyn BufRead, out: &mut dyn Write) -> std::io::Result<()> {
    let mut session = Session::default();
    let mut line = String::new();
    loop {
        write!(out, "bt> ")?;
        out.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Ok(());
        }
        let text = line.trim();
        if matches!(text, "quit" | "exit") {
            return Ok(());
        }
        let first = text.split_whitespace().next().unwrap_or("");
        let directive = if is_directive(first) {
            text.to_string()
        } else {
            format!("eval {text}")
        };
        match session.exec(&directive) {
            Ok(r) if !r.text.is_empty() => writeln!(out, "{}", r.text)?,
            Ok(_) => {}
            Err(e) => writeln!(out, "error: {e:#}")?,
        }
    }
}

pub fn is_directive(word: &str) -> bool {
    matches!(
        word,
        "given"
            | "ints"
            | "let"
            | "space"
            | "program"
            | "grammar"
            | "eval"
            | "holds"
            | "pv"
            | "expect"
            | "wp-check"
            | "validate"
            | "chain"
            | "member"
            | "want"
    )
}
