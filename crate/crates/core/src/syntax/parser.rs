use num_bigint::BigInt;
use num_rational::BigRational;

use super::lexer::{lex, Tok, Token};
use super::{infix_info, prec, Kind, ParseCtx, SyntaxError, Tree, BINDERS, PREFIXES};
use crate::types::TypeTag;

pub(crate) struct Parser<'c> {
    toks: Vec<Token>,
    pos: usize,
    ctx: &'c ParseCtx,
}

const TYPE_NAMES: &[&str] = &["INT", "CHAR", "STRING", "BOOL", "RAT", "SET", "PAIR"];

/// Binder whose scope a following `•` would close, found on the right spine.
fn pending_binder(t: &Tree) -> Option<&'static str> {
    match &t.kind {
        Kind::Prefix(op, x) => {
            if BINDERS.contains(op) {
                Some(op)
            } else {
                pending_binder(x)
            }
        }
        Kind::Binary("," | "∈" | ":", l, _) if pending_binder(l).is_some() => pending_binder(l),
        Kind::Binary(_, _, r) => pending_binder(r),
        _ => None,
    }
}

impl<'c> Parser<'c> {
    pub(crate) fn new(src: &str, ctx: &'c ParseCtx) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            ctx,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        let (l, c) = self.here();
        SyntaxError::new(l, c, msg)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, sym: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Sym(s) if *s == sym => {
                self.bump();
                Ok(())
            }
            other => Err(self.err(format!("expected `{sym}`, found {}", describe(other)))),
        }
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Tok::Sym(s) if *s == sym)
    }

    pub(crate) fn parse_all(&mut self) -> Result<Tree, SyntaxError> {
        let t = self.parse(0)?;
        if *self.peek() != Tok::Eof {
            return Err(self.err(format!("unexpected {}", describe(self.peek()))));
        }
        Ok(t)
    }

    pub(crate) fn parse_type_all(&mut self) -> Result<TypeTag, SyntaxError> {
        let t = self.parse_type()?;
        if *self.peek() != Tok::Eof {
            return Err(self.err(format!("unexpected {}", describe(self.peek()))));
        }
        Ok(t)
    }

    fn starts_type(&self, tok: &Tok) -> bool {
        match tok {
            Tok::Ident(n) => TYPE_NAMES.contains(&n.as_str()) || self.ctx.given.contains_key(n),
            _ => false,
        }
    }

    fn parse_type(&mut self) -> Result<TypeTag, SyntaxError> {
        let name = match self.peek() {
            Tok::Ident(n) => n.clone(),
            other => return Err(self.err(format!("expected a type, found {}", describe(other)))),
        };
        self.bump();
        Ok(match name.as_str() {
            "INT" => TypeTag::Int,
            "CHAR" => TypeTag::Char,
            "STRING" => TypeTag::Str,
            "BOOL" => TypeTag::Bool,
            "RAT" => TypeTag::Rat,
            "SET" => {
                self.expect("(")?;
                let t = self.parse_type()?;
                self.expect(")")?;
                TypeTag::set(t)
            }
            "PAIR" => {
                self.expect("(")?;
                let a = self.parse_type()?;
                self.expect(",")?;
                let b = self.parse_type()?;
                self.expect(")")?;
                TypeTag::pair(a, b)
            }
            n => match self.ctx.given.get(n) {
                Some(g) => TypeTag::Given(g.clone()),
                None => return Err(self.err(format!("unknown type `{n}`"))),
            },
        })
    }

    fn annotation(&mut self) -> Result<Option<TypeTag>, SyntaxError> {
        if self.is_sym(":") && self.starts_type(self.peek_at(1)) {
            self.bump();
            Ok(Some(self.parse_type()?))
        } else {
            Ok(None)
        }
    }

    fn nud(&mut self) -> Result<Tree, SyntaxError> {
        let Token { tok, line, col } = self.bump();
        let mk = |kind| Tree { kind, line, col };
        Ok(match tok {
            Tok::Int(n) => mk(Kind::Int(n)),
            Tok::Str(s) => mk(Kind::Str(s)),
            Tok::Char(c) => mk(Kind::Char(c)),
            Tok::Ident(x) => mk(Kind::Ident(x)),
            Tok::Sym("null") => mk(Kind::Null(self.annotation()?)),
            Tok::Sym("⊥") => mk(Kind::Bottom(self.annotation()?)),
            Tok::Sym(w @ ("true" | "false" | "skip" | "abort" | "magic" | "T" | "F")) => mk(Kind::Word(w)),
            Tok::Sym("(") => {
                let inner = self.parse(0)?;
                self.expect(")")?;
                mk(Kind::Paren(Box::new(inner)))
            }
            Tok::Sym("{") => {
                if self.is_sym("}") {
                    self.bump();
                    mk(Kind::Braces(None))
                } else {
                    let inner = self.parse(0)?;
                    self.expect("}")?;
                    mk(Kind::Braces(Some(Box::new(inner))))
                }
            }
            Tok::Sym("if") => {
                let g = self.parse(0)?;
                self.expect("then")?;
                let a = self.parse(0)?;
                self.expect("else")?;
                let b = self.parse(0)?;
                self.expect("end")?;
                mk(Kind::If(Box::new(g), Box::new(a), Box::new(b)))
            }
            Tok::Sym(op) if PREFIXES.contains(&op) => {
                let operand = self.parse(prec::PREFIX)?;
                mk(Kind::Prefix(op, Box::new(operand)))
            }
            other => {
                return Err(SyntaxError::new(line, col, format!("unexpected {}", describe(&other))));
            }
        })
    }

    fn probability(&mut self) -> Result<BigRational, SyntaxError> {
        let num = match self.bump().tok {
            Tok::Int(n) => n,
            other => return Err(self.err(format!("expected a probability, found {}", describe(&other)))),
        };
        let den = if self.is_sym("/") {
            self.bump();
            match self.bump().tok {
                Tok::Int(d) if d != 0 => d,
                other => return Err(self.err(format!("bad probability denominator {}", describe(&other)))),
            }
        } else {
            1
        };
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn parse(&mut self, min_bp: u8) -> Result<Tree, SyntaxError> {
        let mut left = self.nud()?;
        loop {
            let (line, col) = self.here();
            let tok = self.peek().clone();
            let applicable = matches!(
                left.kind,
                Kind::Ident(_) | Kind::Apply(..) | Kind::Paren(_) | Kind::Braces(_)
            );
            if tok == Tok::Sym("(") && applicable && prec::APPLY >= min_bp {
                self.bump();
                let arg = self.parse(0)?;
                self.expect(")")?;
                left = Tree {
                    kind: Kind::Apply(Box::new(left), Box::new(arg)),
                    line,
                    col,
                };
                continue;
            }
            let Tok::Sym(sym) = tok else { break };
            if sym == "⊕" && matches!(self.peek_at(1), Tok::Int(_)) {
                if prec::CHOICE < min_bp {
                    break;
                }
                self.bump();
                let p = self.probability()?;
                let right = self.parse(prec::CHOICE + 1)?;
                left = Tree {
                    kind: Kind::Prob(p, Box::new(left), Box::new(right)),
                    line,
                    col,
                };
                continue;
            }
            let Some((lbp, right_assoc)) = infix_info(sym) else { break };
            if lbp < min_bp {
                break;
            }
            self.bump();
            let rbp = if sym == "•" && matches!(pending_binder(&left), Some("∮" | "λ" | "Λ")) {
                prec::GUARD
            } else if right_assoc {
                lbp
            } else {
                lbp + 1
            };
            let right = self.parse(rbp)?;
            left = Tree {
                kind: Kind::Binary(sym, Box::new(left), Box::new(right)),
                line,
                col,
            };
        }
        Ok(left)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("`{n}`"),
        Tok::Str(s) => format!("{s:?}"),
        Tok::Char(c) => format!("`{c}`"),
        Tok::Ident(x) => format!("`{x}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}
