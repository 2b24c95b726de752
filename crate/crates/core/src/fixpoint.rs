//! Bunch transformers, their Kleene chains from null, and mutually
//! recursive grammar systems over STRING bunches.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::bunch::Bunch;
use crate::error::{Error, Result};
use crate::types::TypeTag;
use crate::value::Value;

/// A combinator expression over STRING bunches. `Ref(i)` is the `i`-th
/// argument of a transformer, or the `i`-th nonterminal of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GExpr {
    Terminal(BTreeSet<String>),
    Ref(usize),
    Union(Vec<GExpr>),
    Cat(Vec<GExpr>),
}

impl GExpr {
    pub fn term(s: &str) -> GExpr {
        GExpr::Terminal(BTreeSet::from([s.to_string()]))
    }

    pub fn terms<'a>(ss: impl IntoIterator<Item = &'a str>) -> GExpr {
        GExpr::Terminal(ss.into_iter().map(str::to_string).collect())
    }

    pub fn eval(&self, args: &[BTreeSet<String>]) -> BTreeSet<String> {
        match self {
            GExpr::Terminal(t) => t.clone(),
            GExpr::Ref(i) => args[*i].clone(),
            GExpr::Union(xs) => xs.iter().flat_map(|x| x.eval(args)).collect(),
            GExpr::Cat(xs) => {
                let mut acc = BTreeSet::from([String::new()]);
                for x in xs {
                    let rhs = x.eval(args);
                    acc = acc
                        .iter()
                        .flat_map(|a| rhs.iter().map(move |b| format!("{a}{b}")))
                        .collect();
                    if acc.is_empty() {
                        break;
                    }
                }
                acc
            }
        }
    }

    fn refs(&self, out: &mut BTreeSet<usize>) {
        match self {
            GExpr::Terminal(_) => {}
            GExpr::Ref(i) => {
                out.insert(*i);
            }
            GExpr::Union(xs) | GExpr::Cat(xs) => xs.iter().for_each(|x| x.refs(out)),
        }
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(usize) -> String, top: bool) -> fmt::Result {
        match self {
            GExpr::Terminal(t) => {
                if t.is_empty() {
                    return write!(f, "null");
                }
                let parts: Vec<String> = t.iter().map(|s| format!("{s:?}")).collect();
                if parts.len() > 1 && !top {
                    write!(f, "({})", parts.join(", "))
                } else {
                    write!(f, "{}", parts.join(", "))
                }
            }
            GExpr::Ref(i) => write!(f, "{}", names(*i)),
            GExpr::Union(xs) => {
                if !top {
                    write!(f, "(")?;
                }
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    x.fmt_with(f, names, false)?;
                }
                if !top {
                    write!(f, ")")?;
                }
                Ok(())
            }
            GExpr::Cat(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " . ")?;
                    }
                    x.fmt_with(f, names, false)?;
                }
                Ok(())
            }
        }
    }
}

pub type NativeFn = Arc<dyn Fn(&[Bunch]) -> Result<Bunch> + Send + Sync>;

#[derive(Clone)]
pub enum TransformerKind {
    Combinator(GExpr),
    Native(NativeFn),
}

/// A map from `arity` bunches of type `ty` to one bunch of the same type.
#[derive(Clone)]
pub struct Transformer {
    pub name: String,
    pub arity: usize,
    pub ty: TypeTag,
    pub kind: TransformerKind,
}

impl fmt::Debug for Transformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Transformer")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("ty", &self.ty)
            .finish_non_exhaustive()
    }
}

fn strings_of(b: &Bunch) -> Result<BTreeSet<String>> {
    if b.type_tag() != &TypeTag::Str {
        return Err(Error::mismatch(TypeTag::Str, b.type_tag()));
    }
    if b.is_improper() {
        return Err(Error::Unsupported("grammar combinators take proper bunches".into()));
    }
    Ok(b
        .elems()
        .iter()
        .filter_map(|v| match v {
            Value::Str(s) => Some(s.clone()),
            _ => None,
        })
        .collect())
}

fn bunch_of(ss: BTreeSet<String>) -> Bunch {
    Bunch::Proper {
        ty: TypeTag::Str,
        elems: ss.into_iter().map(Value::Str).collect(),
    }
}

/// A STRING bunch from literal strings.
pub fn strings<'a>(ss: impl IntoIterator<Item = &'a str>) -> Bunch {
    bunch_of(ss.into_iter().map(str::to_string).collect())
}

impl Transformer {
    pub fn combinator(name: impl Into<String>, arity: usize, body: GExpr) -> Self {
        Transformer {
            name: name.into(),
            arity,
            ty: TypeTag::Str,
            kind: TransformerKind::Combinator(body),
        }
    }

    pub fn native(
        name: impl Into<String>,
        arity: usize,
        ty: TypeTag,
        f: impl Fn(&[Bunch]) -> Result<Bunch> + Send + Sync + 'static,
    ) -> Self {
        Transformer {
            name: name.into(),
            arity,
            ty,
            kind: TransformerKind::Native(Arc::new(f)),
        }
    }

    pub fn apply(&self, args: &[Bunch]) -> Result<Bunch> {
        if args.len() != self.arity {
            return Err(Error::Type(format!(
                "{} takes {} arguments, got {}",
                self.name,
                self.arity,
                args.len()
            )));
        }
        match &self.kind {
            TransformerKind::Combinator(g) => {
                let sets = args.iter().map(strings_of).collect::<Result<Vec<_>>>()?;
                Ok(bunch_of(g.eval(&sets)))
            }
            TransformerKind::Native(f) => f(args),
        }
    }

    fn apply1(&self, x: &Bunch) -> Result<Bunch> {
        self.apply(std::slice::from_ref(x))
    }

    fn null(&self) -> Bunch {
        Bunch::null(self.ty.clone())
    }
}

/// Inputs `C`, `D` (in argument `arg`) with `f.(C,D) ≠ f.C , f.D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributivityWitness {
    pub arg: usize,
    pub c: Bunch,
    pub d: Bunch,
    pub whole: Bunch,
    pub pieces: Bunch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructiveReport {
    /// `f.null`, with every argument null.
    pub at_null: Bunch,
    pub witness: Option<DistributivityWitness>,
    pub pairs_checked: usize,
}

impl ConstructiveReport {
    pub fn non_strict(&self) -> bool {
        !self.at_null.is_null()
    }

    pub fn distributive(&self) -> bool {
        self.witness.is_none()
    }

    pub fn is_constructive(&self) -> bool {
        self.non_strict() && self.distributive()
    }
}

/// Elements used to build small test bunches for `ty`.
fn sample_elements(ty: &TypeTag) -> Vec<Value> {
    match ty {
        TypeTag::Str => ["a", "b", "1", "", "ab", "a1", "ba"].map(Value::str).to_vec(),
        TypeTag::Int => (0..7).map(Value::Int).collect(),
        TypeTag::Char => ['a', 'b', '0', 'z'].map(Value::Char).to_vec(),
        TypeTag::Bool => vec![Value::Bool(false), Value::Bool(true)],
        _ => vec![],
    }
}

fn subsets(ty: &TypeTag, elems: &[Value]) -> Vec<Bunch> {
    (0u32..1 << elems.len())
        .map(|mask| Bunch::Proper {
            ty: ty.clone(),
            elems: elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| v.clone())
                .collect(),
        })
        .collect()
}

/// Check `f.null ≠ null` and `f.(C,D) = f.C , f.D` in each argument: all
/// pairs of subsets of the first four sample elements, then `budget`
/// random pairs drawn from the full sample set.
pub fn check_constructive(f: &Transformer, budget: usize) -> Result<ConstructiveReport> {
    let nulls = vec![f.null(); f.arity];
    let at_null = f.apply(&nulls)?;
    let elems = sample_elements(&f.ty);
    let small = subsets(&f.ty, &elems[..elems.len().min(4)]);
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let random = |rng: &mut StdRng| Bunch::Proper {
        ty: f.ty.clone(),
        elems: elems.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect(),
    };
    // Values of the other arguments while one varies.
    let fixed: Vec<Bunch> = vec![f.null(), small.last().cloned().unwrap_or_else(|| f.null())];

    let mut pairs_checked = 0;
    for arg in 0..f.arity {
        let mut pairs: Vec<(Bunch, Bunch)> = Vec::new();
        for c in &small {
            for d in &small {
                pairs.push((c.clone(), d.clone()));
            }
        }
        for _ in 0..budget {
            pairs.push((random(&mut rng), random(&mut rng)));
        }
        let contexts: Vec<Vec<Bunch>> = if f.arity == 1 {
            vec![vec![]]
        } else {
            fixed.iter().map(|b| vec![b.clone(); f.arity]).collect()
        };
        for ctx in &contexts {
            for (c, d) in &pairs {
                let with = |x: &Bunch| -> Vec<Bunch> {
                    if f.arity == 1 {
                        vec![x.clone()]
                    } else {
                        let mut a = ctx.clone();
                        a[arg] = x.clone();
                        a
                    }
                };
                let whole = f.apply(&with(&c.union(d)?))?;
                let pieces = f.apply(&with(c))?.union(&f.apply(&with(d))?)?;
                pairs_checked += 1;
                if whole != pieces {
                    return Ok(ConstructiveReport {
                        at_null,
                        witness: Some(DistributivityWitness {
                            arg,
                            c: c.clone(),
                            d: d.clone(),
                            whole,
                            pieces,
                        }),
                        pairs_checked,
                    });
                }
            }
        }
    }
    Ok(ConstructiveReport {
        at_null,
        witness: None,
        pairs_checked,
    })
}

/// `[f.null, f².null, …, fⁿ.null]` for a unary transformer.
pub fn chain(f: &Transformer, n: usize) -> Result<Vec<Bunch>> {
    let mut out = Vec::with_capacity(n);
    let mut x = f.null();
    for _ in 0..n {
        x = f.apply1(&x)?;
        out.push(x.clone());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfpStatus {
    /// `fⁿ⁺¹.null = fⁿ.null` was reached after `iterations` applications.
    Exact { iterations: usize },
    /// Stopped at `fᵈᵉᵖᵗʰ.null` without stabilising.
    Approximant { depth: usize },
}

impl fmt::Display for LfpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LfpStatus::Exact { iterations } => write!(f, "EXACT after {iterations}"),
            LfpStatus::Approximant { depth } => write!(f, "APPROXIMANT at depth {depth}"),
        }
    }
}

pub fn lfp_bounded(f: &Transformer, max_iter: usize) -> Result<(Bunch, LfpStatus)> {
    let mut x = f.null();
    for i in 0..max_iter {
        let next = f.apply1(&x)?;
        if next == x {
            return Ok((x, LfpStatus::Exact { iterations: i }));
        }
        x = next;
    }
    // One more application tells whether the last approximant is already fixed.
    if f.apply1(&x)? == x {
        return Ok((x, LfpStatus::Exact { iterations: max_iter }));
    }
    Ok((x, LfpStatus::Approximant { depth: max_iter }))
}

/// Nonterminals `N₁..N_k`, each defined by a combinator over all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarSystem {
    names: Vec<String>,
    rules: Vec<GExpr>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes { depth: usize },
    NoUpTo { depth: usize },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes { depth } => write!(f, "YES at depth {depth}"),
            Verdict::NoUpTo { depth } => write!(f, "NO up to depth {depth}"),
        }
    }
}

impl GrammarSystem {
    pub fn new(rules: Vec<(String, GExpr)>) -> Result<Self> {
        let (names, rules): (Vec<_>, Vec<_>) = rules.into_iter().unzip();
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::Type(format!("nonterminal `{n}` defined twice")));
            }
        }
        for r in &rules {
            let mut refs = BTreeSet::new();
            r.refs(&mut refs);
            if let Some(bad) = refs.iter().find(|i| **i >= names.len()) {
                return Err(Error::Type(format!("reference to undefined nonterminal #{bad}")));
            }
        }
        Ok(GrammarSystem { names, rules })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, nt: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == nt)
            .ok_or_else(|| Error::Unbound(nt.to_string()))
    }

    /// The single-nonterminal transformer `f.X = rhs[X/N]`, for rules that
    /// refer to no nonterminal but their own.
    pub fn transformer(&self, nt: &str) -> Result<Transformer> {
        let i = self.index_of(nt)?;
        let mut refs = BTreeSet::new();
        self.rules[i].refs(&mut refs);
        if refs.iter().any(|r| *r != i) {
            return Err(Error::Unsupported(format!(
                "`{nt}` refers to other nonterminals; use the whole system"
            )));
        }
        fn renumber(g: &GExpr, from: usize) -> GExpr {
            match g {
                GExpr::Terminal(t) => GExpr::Terminal(t.clone()),
                GExpr::Ref(r) => GExpr::Ref(if *r == from { 0 } else { *r }),
                GExpr::Union(xs) => GExpr::Union(xs.iter().map(|x| renumber(x, from)).collect()),
                GExpr::Cat(xs) => GExpr::Cat(xs.iter().map(|x| renumber(x, from)).collect()),
            }
        }
        Ok(Transformer::combinator(nt, 1, renumber(&self.rules[i], i)))
    }

    fn step(&self, cur: &[BTreeSet<String>], max_len: Option<usize>) -> Vec<BTreeSet<String>> {
        self.rules
            .iter()
            .map(|r| {
                let mut s = r.eval(cur);
                if let Some(m) = max_len {
                    s.retain(|w| w.chars().count() <= m);
                }
                s
            })
            .collect()
    }

    /// `S_N(0..=n)` for each nonterminal `N`, iterated simultaneously from null.
    pub fn mutual_chain(&self, n: usize) -> Vec<Vec<Bunch>> {
        let mut cur = vec![BTreeSet::new(); self.names.len()];
        let mut out: Vec<Vec<Bunch>> = (0..self.names.len()).map(|_| vec![bunch_of(BTreeSet::new())]).collect();
        for _ in 0..n {
            cur = self.step(&cur, None);
            for (seq, s) in out.iter_mut().zip(&cur) {
                seq.push(bunch_of(s.clone()));
            }
        }
        out
    }

    /// Whether `w` appears in the approximant of `nt` within `depth` steps.
    /// With `prune`, strings longer than `w` are dropped after each step;
    /// that is sound because catenation never shortens a string.
    pub fn member_bounded(&self, w: &str, nt: &str, depth: usize, prune: bool) -> Result<Verdict> {
        let i = self.index_of(nt)?;
        let max_len = prune.then(|| w.chars().count());
        let mut cur = vec![BTreeSet::new(); self.names.len()];
        for d in 1..=depth {
            let next = self.step(&cur, max_len);
            if next[i].contains(w) {
                return Ok(Verdict::Yes { depth: d });
            }
            if next == cur {
                break;
            }
            cur = next;
        }
        Ok(Verdict::NoUpTo { depth })
    }

    /// Parse the grammar file format: one `N = rhs` per line, `,` for
    /// union, `.` for catenation, double-quoted terminals, `"a".."z"` for a
    /// character range, `null`, parentheses and `#` comments. Nonterminals
    /// that reach no recursive cycle are expanded into terminal bunches.
    pub fn parse(src: &str) -> Result<Self> {
        let mut defs: Vec<(String, Raw)> = Vec::new();
        for (lineno, line) in src.lines().enumerate() {
            let line = strip_comment(line).trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Type(format!("grammar line {}: {msg}", lineno + 1));
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| err("expected `N = rhs`".into()))?;
            let name = lhs.trim();
            if !is_ident(name) {
                return Err(err(format!("bad nonterminal name `{name}`")));
            }
            if defs.iter().any(|(n, _)| n == name) {
                return Err(err(format!("`{name}` defined twice")));
            }
            let toks = tokenize(rhs).map_err(&err)?;
            let mut p = RawParser { toks, pos: 0 };
            let raw = p.union().map_err(&err)?;
            if p.pos != p.toks.len() {
                return Err(err(format!("unexpected `{}`", p.toks[p.pos])));
            }
            defs.push((name.to_string(), raw));
        }
        resolve(defs)
    }
}

impl fmt::Display for GrammarSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |i: usize| self.names[i].clone();
        for (n, r) in self.names.iter().zip(&self.rules) {
            write!(f, "{n} = ")?;
            r.fmt_with(f, &names, true)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The identifier grammar `ID = α , ID . β` over the default alphabets.
pub fn identifier_grammar() -> GrammarSystem {
    GrammarSystem::new(vec![(
        "ID".into(),
        GExpr::Union(vec![alpha(), GExpr::Cat(vec![GExpr::Ref(0), beta()])]),
    )])
    .expect("well-formed")
}

/// `a..z`
pub fn alpha() -> GExpr {
    GExpr::Terminal(('a'..='z').map(String::from).collect())
}

/// `a..z , 0..9`
pub fn beta() -> GExpr {
    GExpr::Terminal(('a'..='z').chain('0'..='9').map(String::from).collect())
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_')
        && cs.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Str(String),
    Name(String),
    Comma,
    Dot,
    Range,
    Open,
    Close,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Name(n) => write!(f, "{n}"),
            Tok::Comma => write!(f, ","),
            Tok::Dot => write!(f, "."),
            Tok::Range => write!(f, ".."),
            Tok::Open => write!(f, "("),
            Tok::Close => write!(f, ")"),
        }
    }
}

fn tokenize(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut cs = s.chars().peekable();
    while let Some(c) = cs.next() {
        match c {
            c if c.is_whitespace() => {}
            ',' => out.push(Tok::Comma),
            '(' => out.push(Tok::Open),
            ')' => out.push(Tok::Close),
            '.' => {
                if cs.peek() == Some(&'.') {
                    cs.next();
                    out.push(Tok::Range);
                } else {
                    out.push(Tok::Dot);
                }
            }
            '"' => {
                let mut lit = String::new();
                loop {
                    match cs.next() {
                        Some('"') => break,
                        Some('\\') => match cs.next() {
                            Some(e) => lit.push(e),
                            None => return Err("unterminated string".into()),
                        },
                        Some(ch) => lit.push(ch),
                        None => return Err("unterminated string".into()),
                    }
                }
                out.push(Tok::Str(lit));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = String::from(c);
                while let Some(&n) = cs.peek() {
                    if n.is_alphanumeric() || n == '_' || n == '\'' {
                        name.push(n);
                        cs.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Name(name));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

/// A parsed right-hand side before names are resolved.
#[derive(Debug, Clone)]
enum Raw {
    Terms(BTreeSet<String>),
    Name(String),
    Union(Vec<Raw>),
    Cat(Vec<Raw>),
}

struct RawParser {
    toks: Vec<Tok>,
    pos: usize,
}

impl RawParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn union(&mut self) -> std::result::Result<Raw, String> {
        let mut xs = vec![self.cat()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            xs.push(self.cat()?);
        }
        Ok(if xs.len() == 1 { xs.pop().unwrap() } else { Raw::Union(xs) })
    }

    fn cat(&mut self) -> std::result::Result<Raw, String> {
        let mut xs = vec![self.atom()?];
        while self.peek() == Some(&Tok::Dot) {
            self.pos += 1;
            xs.push(self.atom()?);
        }
        Ok(if xs.len() == 1 { xs.pop().unwrap() } else { Raw::Cat(xs) })
    }

    fn atom(&mut self) -> std::result::Result<Raw, String> {
        let tok = self.toks.get(self.pos).cloned().ok_or("unexpected end of line")?;
        self.pos += 1;
        match tok {
            Tok::Str(a) => {
                if self.peek() != Some(&Tok::Range) {
                    return Ok(Raw::Terms(BTreeSet::from([a])));
                }
                self.pos += 1;
                let Some(Tok::Str(b)) = self.toks.get(self.pos).cloned() else {
                    return Err("expected a string after `..`".into());
                };
                self.pos += 1;
                let (lo, hi) = match (single_char(&a), single_char(&b)) {
                    (Some(lo), Some(hi)) if lo <= hi => (lo, hi),
                    _ => return Err(format!("bad range {a:?}..{b:?}")),
                };
                Ok(Raw::Terms((lo..=hi).map(String::from).collect()))
            }
            Tok::Name(n) if n == "null" => Ok(Raw::Terms(BTreeSet::new())),
            Tok::Name(n) => Ok(Raw::Name(n)),
            Tok::Open => {
                let r = self.union()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err("expected `)`".into());
                }
                self.pos += 1;
                Ok(r)
            }
            other => Err(format!("unexpected `{other}`")),
        }
    }
}

fn single_char(s: &str) -> Option<char> {
    let mut cs = s.chars();
    let c = cs.next()?;
    cs.next().is_none().then_some(c)
}

fn raw_names(r: &Raw, out: &mut BTreeSet<String>) {
    match r {
        Raw::Terms(_) => {}
        Raw::Name(n) => {
            out.insert(n.clone());
        }
        Raw::Union(xs) | Raw::Cat(xs) => xs.iter().for_each(|x| raw_names(x, out)),
    }
}

/// Lower definitions; constants are expanded into terminal bunches wherever
/// they are used.
fn resolve(defs: Vec<(String, Raw)>) -> Result<GrammarSystem> {
    let deps: BTreeMap<&str, BTreeSet<String>> = defs
        .iter()
        .map(|(n, r)| {
            let mut s = BTreeSet::new();
            raw_names(r, &mut s);
            (n.as_str(), s)
        })
        .collect();
    for (n, ds) in &deps {
        if let Some(bad) = ds.iter().find(|d| !deps.contains_key(d.as_str())) {
            return Err(Error::Unbound(format!("{bad} (in the rule for {n})")));
        }
    }
    // A name is recursive when it reaches a cycle.
    let reaches_cycle = |start: &str| -> bool {
        let mut colour: BTreeMap<&str, u8> = BTreeMap::new();
        fn dfs<'a>(n: &'a str, deps: &'a BTreeMap<&str, BTreeSet<String>>, colour: &mut BTreeMap<&'a str, u8>) -> bool {
            match colour.get(n) {
                Some(1) => return true,
                Some(_) => return false,
                None => {}
            }
            colour.insert(n, 1);
            for d in &deps[n] {
                if dfs(d.as_str(), deps, colour) {
                    return true;
                }
            }
            colour.insert(n, 2);
            false
        }
        dfs(start, &deps, &mut colour)
    };
    let recursive: Vec<&str> = defs
        .iter()
        .map(|(n, _)| n.as_str())
        .filter(|n| reaches_cycle(n))
        .collect();
    let raw: BTreeMap<&str, &Raw> = defs.iter().map(|(n, r)| (n.as_str(), r)).collect();
    let index: BTreeMap<&str, usize> = defs.iter().enumerate().map(|(i, (n, _))| (n.as_str(), i)).collect();

    fn lower(r: &Raw, raw: &BTreeMap<&str, &Raw>, index: &BTreeMap<&str, usize>, recursive: &[&str]) -> GExpr {
        match r {
            Raw::Terms(t) => GExpr::Terminal(t.clone()),
            Raw::Name(n) if recursive.contains(&n.as_str()) => GExpr::Ref(index[n.as_str()]),
            // Constants reach no cycle, so expanding them terminates.
            Raw::Name(n) => GExpr::Terminal(lower(raw[n.as_str()], raw, index, recursive).eval(&[])),
            Raw::Union(xs) => GExpr::Union(xs.iter().map(|x| lower(x, raw, index, recursive)).collect()),
            Raw::Cat(xs) => GExpr::Cat(xs.iter().map(|x| lower(x, raw, index, recursive)).collect()),
        }
    }
    let rules = defs
        .iter()
        .map(|(n, r)| {
            let g = lower(r, &raw, &index, &recursive);
            if recursive.contains(&n.as_str()) {
                (n.clone(), g)
            } else {
                (n.clone(), GExpr::Terminal(g.eval(&[])))
            }
        })
        .collect();
    GrammarSystem::new(rules)
}
