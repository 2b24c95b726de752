//! Surface syntax: lexer, precedence parser producing an operator tree, and
//! conversion of that tree into sorted expressions, predicates and commands.
//!
//! Every operator is accepted in its unicode form and an ASCII spelling:
//!
//! | unicode | ascii | | unicode | ascii |
//! |---|---|---|---|---|
//! | `↣` | `->>` | | `⊓` | `[]` |
//! | `⫢` | `\|>>` | | `⟩⟩` | `>>` |
//! | `↦` | `\|->` | | `⟹` | `==>` |
//! | `◇` | `<>` | | `⊕p` | `<+>p` |
//! | `⊥` | `!!`, `improper` | | `∮` | `%` |
//! | `•` | `::` | | `¢` | `$` |
//! | `∧` | `&`, `and` | | `∨` | `or` |
//! | `¬` | `not` | | `⇒` | `=>` |
//! | `⇔` | `<=>` | | `≠` | `/=` |
//! | `∈` | `in` | | `∉` | `notin` |
//! | `⊆` | `<:` | | `⊂` | `<<:` |
//! | `∩` | `/\` | | `∪` | `\/` |
//! | `∖` | `\` | | `ℙ` | `pow` |
//! | `∀` | `forall` | | `∃` | `exists` |
//! | `λ` | `lambda` | | `Λ` | `Lambda` |
//! | `⊑` | `[=` | | `≤` `≥` | `<=` `>=` |

mod convert;
mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::ast::{Cmd, Expr, Pred};
use crate::types::{GivenSet, TypeTag};
use crate::value::Value;

pub use lexer::is_keyword;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl SyntaxError {
    pub fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        SyntaxError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// Binding powers; larger binds tighter.
pub mod prec {
    pub const ATOM: u8 = 100;
    pub const APPLY: u8 = 40;
    pub const PREFIX: u8 = 39;
    pub const MUL: u8 = 38;
    pub const ADD: u8 = 36;
    pub const SET_INTER: u8 = 34;
    pub const SET_UNION: u8 = 33;
    pub const OVERRIDE: u8 = 32;
    pub const MAPLET: u8 = 31;
    pub const COMMA: u8 = 30;
    pub const CMP: u8 = 28;
    pub const EQ: u8 = 27;
    pub const MEM: u8 = 26;
    pub const AND: u8 = 25;
    pub const OR: u8 = 24;
    pub const IMPLIES: u8 = 23;
    pub const IFF: u8 = 22;
    pub const BULLET: u8 = 20;
    pub const GUARD: u8 = 18;
    pub const ASSIGN: u8 = 16;
    pub const GUARD_CMD: u8 = 15;
    pub const CHOICE: u8 = 14;
    pub const ANGELIC: u8 = 13;
    pub const PREF: u8 = 12;
    pub const BIASED: u8 = 11;
    pub const SEQ: u8 = 10;
    pub const PRE: u8 = 9;
    pub const PV: u8 = 8;
    pub const REFINES: u8 = 7;
    pub const DEFS: u8 = 5;
}

/// Left binding power and right-associativity of an infix symbol.
pub(crate) fn infix_info(sym: &str) -> Option<(u8, bool)> {
    use prec::*;
    Some(match sym {
        "." => (APPLY, false),
        "*" | "/" | "mod" | "×" => (MUL, false),
        "+" | "-" => (ADD, false),
        "∩" => (SET_INTER, false),
        "∪" => (SET_UNION, false),
        "⊕" => (OVERRIDE, false),
        "↦" => (MAPLET, false),
        "," | "'" | "∖" => (COMMA, false),
        ">" | "<" | "≤" | "≥" => (CMP, false),
        "=" | "≠" => (EQ, false),
        ":" | "⊆" | "⊂" | "∈" | "∉" => (MEM, false),
        "∧" => (AND, false),
        "∨" => (OR, false),
        "⇒" => (IMPLIES, true),
        "⇔" => (IFF, false),
        "•" => (BULLET, true),
        "↣" | "⫢" => (GUARD, true),
        ":=" => (ASSIGN, false),
        "⟹" => (GUARD_CMD, true),
        "⊓" => (CHOICE, false),
        "⊔" => (ANGELIC, false),
        "⟩⟩" => (PREF, false),
        "⊞" => (BIASED, false),
        ";" => (SEQ, false),
        "|" => (PRE, true),
        "◇" | "∇" => (PV, true),
        "⊑" => (REFINES, false),
        "≜" | "⟚" | "≡" => (DEFS, false),
        "≡>" => (DEFS, true),
        _ => return None,
    })
}

pub(crate) const PREFIXES: &[&str] = &["-", "~", "ℙ", "¢", "¬", "∀", "∃", "∮", "λ", "Λ"];
pub(crate) const BINDERS: &[&str] = &["∀", "∃", "∮", "λ", "Λ"];

/// The operator tree produced before sorting into expressions, predicates and commands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    pub kind: Kind,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    Int(i64),
    Str(String),
    Char(char),
    Ident(String),
    /// `true false skip abort magic T F`
    Word(&'static str),
    Null(Option<TypeTag>),
    Bottom(Option<TypeTag>),
    Prefix(&'static str, Box<Tree>),
    Binary(&'static str, Box<Tree>, Box<Tree>),
    Prob(BigRational, Box<Tree>, Box<Tree>),
    Apply(Box<Tree>, Box<Tree>),
    Paren(Box<Tree>),
    Braces(Option<Box<Tree>>),
    If(Box<Tree>, Box<Tree>, Box<Tree>),
    /// A binder with its body attached; produced by conversion, never by the parser.
    Bound {
        binder: &'static str,
        vars: Vec<String>,
        domain: Option<(&'static str, Box<Tree>)>,
        body: Box<Tree>,
    },
}

impl Tree {
    /// S-expression with brackets dropped, for shape comparisons.
    pub fn sexp(&self) -> String {
        match &self.kind {
            Kind::Int(n) => n.to_string(),
            Kind::Str(s) => format!("{s:?}"),
            Kind::Char(c) => format!("`{c}`"),
            Kind::Ident(x) => x.clone(),
            Kind::Word(w) => w.to_string(),
            Kind::Null(None) => "null".into(),
            Kind::Null(Some(t)) => format!("null:{t}"),
            Kind::Bottom(None) => "⊥".into(),
            Kind::Bottom(Some(t)) => format!("⊥:{t}"),
            Kind::Prefix(op, x) => format!("({op} {})", x.sexp()),
            Kind::Binary(op, l, r) => format!("({op} {} {})", l.sexp(), r.sexp()),
            Kind::Prob(p, l, r) => format!(
                "(⊕{} {} {})",
                crate::ast::rat_string(p),
                l.sexp(),
                r.sexp()
            ),
            Kind::Apply(f, a) => format!("({} {})", f.sexp(), a.sexp()),
            Kind::Paren(x) => x.sexp(),
            Kind::Braces(None) => "{}".into(),
            Kind::Braces(Some(x)) => format!("({{}} {})", x.sexp()),
            Kind::If(g, a, b) => format!("(if {} {} {})", g.sexp(), a.sexp(), b.sexp()),
            Kind::Bound {
                binder,
                vars,
                domain,
                body,
            } => {
                let mut head = format!("({binder} {})", vars.join(" "));
                if let Some((op, d)) = domain {
                    head = format!("({op} {head} {})", d.sexp());
                }
                format!("(• {head} {})", body.sexp())
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sexp())
    }
}

/// Names known to the parser: given sets, their atoms, and named programs.
#[derive(Debug, Clone, Default)]
pub struct ParseCtx {
    pub given: BTreeMap<String, Arc<GivenSet>>,
    pub atoms: BTreeMap<String, Value>,
    pub programs: BTreeMap<String, Cmd>,
}

impl ParseCtx {
    pub fn declare_given(&mut self, set: Arc<GivenSet>) {
        for (index, a) in set.carrier.iter().enumerate() {
            self.atoms.insert(
                a.clone(),
                Value::Given {
                    set: set.clone(),
                    index,
                },
            );
        }
        self.given.insert(set.name.clone(), set);
    }
}

pub fn parse_tree(src: &str, ctx: &ParseCtx) -> Result<Tree, SyntaxError> {
    parser::Parser::new(src, ctx)?.parse_all()
}

pub fn parse_expr(src: &str, ctx: &ParseCtx) -> Result<Expr, SyntaxError> {
    convert::Converter { ctx }.expr(&parse_tree(src, ctx)?)
}

pub fn parse_pred(src: &str, ctx: &ParseCtx) -> Result<Pred, SyntaxError> {
    convert::Converter { ctx }.pred(&parse_tree(src, ctx)?)
}

pub fn parse_cmd(src: &str, ctx: &ParseCtx) -> Result<Cmd, SyntaxError> {
    convert::Converter { ctx }.cmd(&parse_tree(src, ctx)?)
}

pub fn parse_type(src: &str, ctx: &ParseCtx) -> Result<TypeTag, SyntaxError> {
    parser::Parser::new(src, ctx)?.parse_type_all()
}

#[cfg(test)]
mod tests;
