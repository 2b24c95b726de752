//! Abstract syntax for bunch expressions, classical predicates and commands,
//! with a canonical ASCII rendering that the parser reads back unchanged.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;

use crate::syntax::prec;
use crate::types::TypeTag;
use crate::value::{fmt_rat, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

/// Operators on set elements, lifted over bunches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetOp {
    Union,
    Inter,
}

/// Boolean-bunch builtins, written `eqb(A, B)` etc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolOp {
    Eq,
    Lt,
    Mem,
    And,
}

impl BoolOp {
    pub fn name(self) -> &'static str {
        match self {
            BoolOp::Eq => "eqb",
            BoolOp::Lt => "ltb",
            BoolOp::Mem => "memb",
            BoolOp::And => "andb",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "eqb" => BoolOp::Eq,
            "ltb" => BoolOp::Lt,
            "memb" => BoolOp::Mem,
            "andb" => BoolOp::And,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Lit(Value),
    Var(String),
    Null(Option<TypeTag>),
    Bottom(Option<TypeTag>),
    Union(Box<Expr>, Box<Expr>),
    Inter(Box<Expr>, Box<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Maplet(Box<Expr>, Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    SetOp(SetOp, Box<Expr>, Box<Expr>),
    Pack(Box<Expr>),
    Unpack(Box<Expr>),
    Card(Box<Expr>),
    Pow(Box<Expr>),
    Guard(Box<Pred>, Box<Expr>),
    Precond(Box<Pred>, Box<Expr>),
    If(Box<Pred>, Box<Expr>, Box<Expr>),
    Comprehension(String, Box<Expr>),
    Lambda(String, Box<Expr>),
    BigLambda(String, Box<Expr>),
    Apply(Box<Expr>, Box<Expr>),
    Wholistic(Box<Expr>, Box<Expr>),
    BoolOp(BoolOp, Box<Expr>, Box<Expr>),
    /// `S ◇ E`; the result set `{S ◇ E}` is `Pack` of this.
    Pv(Box<Cmd>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    /// sub-bunch `:`
    Sub,
    In,
    NotIn,
    SubsetEq,
    Subset,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pred {
    True,
    False,
    Rel(Rel, Expr, Expr),
    Not(Box<Pred>),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
    Implies(Box<Pred>, Box<Pred>),
    Iff(Box<Pred>, Box<Pred>),
    Forall(String, Box<Pred>),
    Exists(String, Box<Pred>),
    /// A BOOL-valued expression used as a predicate: holds iff it equals `T`.
    Holds(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cmd {
    Skip,
    Assign(Vec<String>, Vec<Expr>),
    Pre(Pred, Box<Cmd>),
    Guard(Pred, Box<Cmd>),
    Choice(Box<Cmd>, Box<Cmd>),
    Seq(Box<Cmd>, Box<Cmd>),
    Pref(Box<Cmd>, Box<Cmd>),
    Prob(BigRational, Box<Cmd>, Box<Cmd>),
    If(Pred, Box<Cmd>, Box<Cmd>),
}

// Constructors used heavily by tests and the corpus generator.

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Lit(Value::Int(n))
    }
    pub fn var(s: &str) -> Expr {
        Expr::Var(s.into())
    }
    pub fn union(a: Expr, b: Expr) -> Expr {
        Expr::Union(Box::new(a), Box::new(b))
    }
    pub fn maplet(a: Expr, b: Expr) -> Expr {
        Expr::Maplet(Box::new(a), Box::new(b))
    }
    pub fn arith(op: ArithOp, a: Expr, b: Expr) -> Expr {
        Expr::Arith(op, Box::new(a), Box::new(b))
    }
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::arith(ArithOp::Add, a, b)
    }
    pub fn guard(p: Pred, e: Expr) -> Expr {
        Expr::Guard(Box::new(p), Box::new(e))
    }
    pub fn precond(p: Pred, e: Expr) -> Expr {
        Expr::Precond(Box::new(p), Box::new(e))
    }
    pub fn pack(e: Expr) -> Expr {
        Expr::Pack(Box::new(e))
    }
    pub fn apply(f: Expr, a: Expr) -> Expr {
        Expr::Apply(Box::new(f), Box::new(a))
    }
    pub fn pv(s: Cmd, e: Expr) -> Expr {
        Expr::Pv(Box::new(s), Box::new(e))
    }
}

impl Pred {
    pub fn rel(r: Rel, a: Expr, b: Expr) -> Pred {
        Pred::Rel(r, a, b)
    }
    pub fn eq(a: Expr, b: Expr) -> Pred {
        Pred::Rel(Rel::Eq, a, b)
    }
    pub fn not(p: Pred) -> Pred {
        Pred::Not(Box::new(p))
    }
    pub fn and(a: Pred, b: Pred) -> Pred {
        Pred::And(Box::new(a), Box::new(b))
    }
}

impl Cmd {
    pub fn abort() -> Cmd {
        Cmd::Pre(Pred::False, Box::new(Cmd::Skip))
    }
    pub fn magic() -> Cmd {
        Cmd::Guard(Pred::False, Box::new(Cmd::Skip))
    }
    pub fn assign(x: &str, e: Expr) -> Cmd {
        Cmd::Assign(vec![x.into()], vec![e])
    }
    pub fn choice(s: Cmd, t: Cmd) -> Cmd {
        Cmd::Choice(Box::new(s), Box::new(t))
    }
    pub fn seq(s: Cmd, t: Cmd) -> Cmd {
        Cmd::Seq(Box::new(s), Box::new(t))
    }
    pub fn pref(s: Cmd, t: Cmd) -> Cmd {
        Cmd::Pref(Box::new(s), Box::new(t))
    }
    pub fn guarded(p: Pred, s: Cmd) -> Cmd {
        Cmd::Guard(p, Box::new(s))
    }
    pub fn pre(p: Pred, s: Cmd) -> Cmd {
        Cmd::Pre(p, Box::new(s))
    }
    pub fn prob(p: BigRational, s: Cmd, t: Cmd) -> Cmd {
        Cmd::Prob(p, Box::new(s), Box::new(t))
    }
    pub fn if_(g: Pred, s: Cmd, t: Cmd) -> Cmd {
        Cmd::If(g, Box::new(s), Box::new(t))
    }

    /// Variables assigned anywhere in the command.
    pub fn write_set(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_writes(&mut out);
        out
    }

    fn collect_writes(&self, out: &mut BTreeSet<String>) {
        match self {
            Cmd::Skip => {}
            Cmd::Assign(xs, _) => out.extend(xs.iter().cloned()),
            Cmd::Pre(_, s) | Cmd::Guard(_, s) => s.collect_writes(out),
            Cmd::Choice(s, t) | Cmd::Seq(s, t) | Cmd::Pref(s, t) | Cmd::Prob(_, s, t) | Cmd::If(_, s, t) => {
                s.collect_writes(out);
                t.collect_writes(out);
            }
        }
    }

    pub fn contains_pref(&self) -> bool {
        self.any(&|c| matches!(c, Cmd::Pref(..)))
    }

    pub fn contains_prob(&self) -> bool {
        self.any(&|c| matches!(c, Cmd::Prob(..)))
    }

    fn any(&self, f: &dyn Fn(&Cmd) -> bool) -> bool {
        f(self)
            || match self {
                Cmd::Skip | Cmd::Assign(..) => false,
                Cmd::Pre(_, s) | Cmd::Guard(_, s) => s.any(f),
                Cmd::Choice(s, t) | Cmd::Seq(s, t) | Cmd::Pref(s, t) | Cmd::Prob(_, s, t) | Cmd::If(_, s, t) => {
                    s.any(f) || t.any(f)
                }
            }
    }
}

// ---------------------------------------------------------------------------
// Rendering

/// Rendered text plus the binding power of its outermost operator.
struct R(String, u8);

fn wrap(r: R, need: u8) -> String {
    if r.1 < need {
        format!("({})", r.0)
    } else {
        r.0
    }
}

fn atom(s: String) -> R {
    R(s, prec::ATOM)
}

fn infix(l: R, op: &str, r: R, bp: u8, right_assoc: bool) -> R {
    let (ln, rn) = if right_assoc { (bp + 1, bp) } else { (bp, bp + 1) };
    R(format!("{} {op} {}", wrap(l, ln), wrap(r, rn)), bp)
}

fn prefix(op: &str, r: R) -> R {
    let sep = if op.chars().all(|c| c.is_ascii_alphabetic()) { " " } else { "" };
    R(format!("{op}{sep}{}", wrap(r, prec::PREFIX)), prec::PREFIX)
}

fn binder(kw: &str, x: &str, body: R, body_need: u8) -> R {
    R(format!("{kw} {x} :: {}", wrap(body, body_need)), prec::BULLET)
}

pub(crate) fn rat_string(r: &BigRational) -> String {
    struct Rat<'a>(&'a BigRational);
    impl fmt::Display for Rat<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt_rat(self.0, f)
        }
    }
    Rat(r).to_string()
}

fn type_suffix(t: &Option<TypeTag>) -> String {
    t.as_ref().map(|t| format!(":{t}")).unwrap_or_default()
}

fn render_lit(v: &Value) -> R {
    match v {
        Value::Int(n) if *n < 0 => R(v.to_string(), prec::PREFIX),
        Value::Pair(..) => R(v.to_string(), prec::MAPLET),
        _ => atom(v.to_string()),
    }
}

fn expr(e: &Expr) -> R {
    use Expr::*;
    match e {
        Lit(v) => render_lit(v),
        Var(x) => atom(x.clone()),
        Null(t) => atom(format!("null{}", type_suffix(t))),
        Bottom(t) => atom(format!("!!{}", type_suffix(t))),
        Union(a, b) => infix(expr(a), ",", expr(b), prec::COMMA, false),
        Inter(a, b) => infix(expr(a), "'", expr(b), prec::COMMA, false),
        Diff(a, b) => infix(expr(a), "\\", expr(b), prec::COMMA, false),
        Maplet(a, b) => infix(expr(a), "|->", expr(b), prec::MAPLET, false),
        Arith(op, a, b) => {
            let (sym, bp) = match op {
                ArithOp::Add => ("+", prec::ADD),
                ArithOp::Sub => ("-", prec::ADD),
                ArithOp::Mul => ("*", prec::MUL),
                ArithOp::Div => ("/", prec::MUL),
                ArithOp::Mod => ("mod", prec::MUL),
            };
            infix(expr(a), sym, expr(b), bp, false)
        }
        Neg(a) => {
            // `-3` reads back as a negative literal, so a negated literal keeps its brackets
            if matches!(**a, Lit(Value::Int(_))) {
                R(format!("-({})", expr(a).0), prec::PREFIX)
            } else {
                prefix("-", expr(a))
            }
        }
        SetOp(self::SetOp::Union, a, b) => infix(expr(a), "\\/", expr(b), prec::SET_UNION, false),
        SetOp(self::SetOp::Inter, a, b) => infix(expr(a), "/\\", expr(b), prec::SET_INTER, false),
        Pack(a) if matches!(**a, Null(None)) => atom("{}".into()),
        Pack(a) => atom(format!("{{{}}}", expr(a).0)),
        Unpack(a) => prefix("~", expr(a)),
        Card(a) => prefix("$", expr(a)),
        Pow(a) => prefix("pow", expr(a)),
        Guard(p, a) => infix(pred(p), "->>", expr(a), prec::GUARD, true),
        Precond(p, a) => infix(pred(p), "|>>", expr(a), prec::GUARD, true),
        If(p, a, b) => atom(format!(
            "if {} then {} else {} end",
            pred(p).0,
            expr(a).0,
            expr(b).0
        )),
        Comprehension(x, b) => binder("%", x, expr(b), prec::GUARD),
        Lambda(x, b) => binder("lambda", x, expr(b), prec::GUARD),
        BigLambda(x, b) => binder("Lambda", x, expr(b), prec::GUARD),
        Apply(f, a) => {
            let arg = expr(a);
            let arg = if arg.1 <= prec::COMMA { format!("({})", arg.0) } else { arg.0 };
            // Only names, applications and braces take an argument list directly.
            let head = match **f {
                Var(_) | Apply(..) | Pack(_) => wrap(expr(f), prec::APPLY),
                _ => format!("({})", expr(f).0),
            };
            R(format!("{head}({arg})"), prec::APPLY)
        }
        Wholistic(f, a) => R(
            format!("{}.{}", wrap(expr(f), prec::APPLY), wrap(expr(a), prec::APPLY + 1)),
            prec::APPLY,
        ),
        BoolOp(op, a, b) => R(
            format!(
                "{}({}, {})",
                op.name(),
                wrap(expr(a), prec::COMMA + 1),
                wrap(expr(b), prec::COMMA + 1)
            ),
            prec::APPLY,
        ),
        Pv(s, a) => infix(cmd(s), "<>", expr(a), prec::PV, true),
    }
}

fn rel_symbol(r: Rel) -> (&'static str, u8) {
    match r {
        Rel::Eq => ("=", prec::EQ),
        Rel::Ne => ("/=", prec::EQ),
        Rel::Lt => ("<", prec::CMP),
        Rel::Le => ("<=", prec::CMP),
        Rel::Gt => (">", prec::CMP),
        Rel::Ge => (">=", prec::CMP),
        Rel::Sub => (":", prec::MEM),
        Rel::In => ("in", prec::MEM),
        Rel::NotIn => ("notin", prec::MEM),
        Rel::SubsetEq => ("<:", prec::MEM),
        Rel::Subset => ("<<:", prec::MEM),
    }
}

fn pred(p: &Pred) -> R {
    use Pred::*;
    match p {
        True => atom("true".into()),
        False => atom("false".into()),
        Rel(r, a, b) => {
            let (sym, bp) = rel_symbol(*r);
            R(
                format!("{} {sym} {}", wrap(expr(a), bp + 1), wrap(expr(b), bp + 1)),
                bp,
            )
        }
        Not(a) => prefix("not", pred(a)),
        And(a, b) => infix(pred(a), "&", pred(b), prec::AND, false),
        Or(a, b) => infix(pred(a), "or", pred(b), prec::OR, false),
        Implies(a, b) => infix(pred(a), "=>", pred(b), prec::IMPLIES, true),
        Iff(a, b) => infix(pred(a), "<=>", pred(b), prec::IFF, false),
        Forall(x, b) => binder("forall", x, pred(b), prec::BULLET),
        Exists(x, b) => binder("exists", x, pred(b), prec::BULLET),
        Holds(e) => expr(e),
    }
}

fn cmd(c: &Cmd) -> R {
    use Cmd::*;
    match c {
        Skip => atom("skip".into()),
        Pre(Pred::False, s) if **s == Skip => atom("abort".into()),
        Guard(Pred::False, s) if **s == Skip => atom("magic".into()),
        Assign(xs, es) => {
            let rhs = if es.len() == 1 {
                wrap(expr(&es[0]), prec::ASSIGN + 1)
            } else {
                es.iter()
                    .map(|e| wrap(expr(e), prec::COMMA + 1))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            R(format!("{} := {rhs}", xs.join(", ")), prec::ASSIGN)
        }
        Pre(p, s) => infix(pred(p), "|", cmd(s), prec::PRE, true),
        Guard(p, s) => infix(pred(p), "==>", cmd(s), prec::GUARD_CMD, true),
        Choice(s, t) => infix(cmd(s), "[]", cmd(t), prec::CHOICE, false),
        Prob(p, s, t) => infix(cmd(s), &format!("<+>{}", rat_string(p)), cmd(t), prec::CHOICE, false),
        Seq(s, t) => infix(cmd(s), ";", cmd(t), prec::SEQ, false),
        Pref(s, t) => infix(cmd(s), ">>", cmd(t), prec::PREF, false),
        If(g, s, t) => atom(format!(
            "if {} then {} else {} end",
            pred(g).0,
            cmd(s).0,
            cmd(t).0
        )),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&expr(self).0)
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pred(self).0)
    }
}

impl fmt::Display for Cmd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&cmd(self).0)
    }
}
