use num_rational::BigRational;

use super::{Kind, ParseCtx, SyntaxError, Tree, BINDERS};
use crate::ast::{ArithOp, BoolOp, Cmd, Expr, Pred, Rel, SetOp};
use crate::value::Value;

pub(crate) struct Converter<'c> {
    pub(crate) ctx: &'c ParseCtx,
}

type Res<T> = Result<T, SyntaxError>;

fn err<T>(t: &Tree, msg: impl Into<String>) -> Res<T> {
    Err(SyntaxError::new(t.line, t.col, msg))
}

fn rel_of(op: &str) -> Option<Rel> {
    Some(match op {
        "=" => Rel::Eq,
        "≠" => Rel::Ne,
        "<" => Rel::Lt,
        "≤" => Rel::Le,
        ">" => Rel::Gt,
        "≥" => Rel::Ge,
        ":" => Rel::Sub,
        "∈" => Rel::In,
        "∉" => Rel::NotIn,
        "⊆" => Rel::SubsetEq,
        "⊂" => Rel::Subset,
        _ => return None,
    })
}

fn b<T>(x: T) -> Box<T> {
    Box::new(x)
}

/// Split an unbracketed comma chain into its items.
fn comma_items(t: &Tree) -> Vec<&Tree> {
    match &t.kind {
        Kind::Binary(",", l, r) => {
            let mut v = comma_items(l);
            v.push(r);
            v
        }
        _ => vec![t],
    }
}

type BinderSpec = (&'static str, Vec<String>, Option<(&'static str, Box<Tree>)>);

/// `∀x`, `∀x, y`, `∀x ∈ S`, `∀x, y : S`, ...
fn binder_spec(t: &Tree) -> Res<Option<BinderSpec>> {
    match &t.kind {
        Kind::Prefix(op, x) if BINDERS.contains(op) => match &x.kind {
            Kind::Ident(v) => Ok(Some((op, vec![v.clone()], None))),
            _ => err(x, format!("`{op}` expects a variable")),
        },
        Kind::Binary(",", l, r) => match binder_spec(l)? {
            Some((op, mut vars, None)) => match &r.kind {
                Kind::Ident(v) => {
                    vars.push(v.clone());
                    Ok(Some((op, vars, None)))
                }
                _ => err(r, "expected a bound variable"),
            },
            _ => Ok(None),
        },
        Kind::Binary(rel @ ("∈" | ":"), l, s) => match binder_spec(l)? {
            Some((op, vars, None)) => Ok(Some((op, vars, Some((rel, s.clone()))))),
            _ => Ok(None),
        },
        _ => Ok(None),
    }
}

/// Attach `body` to the rightmost pending binder of `left`.
fn attach(left: &Tree, body: &Tree) -> Res<Tree> {
    if let Some((binder, vars, domain)) = binder_spec(left)? {
        return Ok(Tree {
            kind: Kind::Bound {
                binder,
                vars,
                domain,
                body: b(body.clone()),
            },
            line: left.line,
            col: left.col,
        });
    }
    let kind = match &left.kind {
        Kind::Prefix(op, x) => Kind::Prefix(op, b(attach(x, body)?)),
        Kind::Binary(op, l, r) => Kind::Binary(op, l.clone(), b(attach(r, body)?)),
        _ => return err(left, "`•` without a binder"),
    };
    Ok(Tree {
        kind,
        line: left.line,
        col: left.col,
    })
}

impl Converter<'_> {
    pub(crate) fn expr(&self, t: &Tree) -> Res<Expr> {
        Ok(match &t.kind {
            Kind::Int(n) => Expr::int(*n),
            Kind::Str(s) => Expr::Lit(Value::str(s.clone())),
            Kind::Char(c) => Expr::Lit(Value::Char(*c)),
            Kind::Ident(x) => match self.ctx.atoms.get(x) {
                Some(v) => Expr::Lit(v.clone()),
                None => Expr::Var(x.clone()),
            },
            Kind::Word("T" | "true") => Expr::Lit(Value::Bool(true)),
            Kind::Word("F" | "false") => Expr::Lit(Value::Bool(false)),
            Kind::Word(w) => return err(t, format!("command `{w}` where an expression is expected")),
            Kind::Null(ty) => Expr::Null(ty.clone()),
            Kind::Bottom(ty) => Expr::Bottom(ty.clone()),
            Kind::Prefix("-", x) => match x.kind {
                Kind::Int(n) => Expr::int(-n),
                _ => Expr::Neg(b(self.expr(x)?)),
            },
            Kind::Prefix("~", x) => Expr::Unpack(b(self.expr(x)?)),
            Kind::Prefix("¢", x) => Expr::Card(b(self.expr(x)?)),
            Kind::Prefix("ℙ", x) => Expr::Pow(b(self.expr(x)?)),
            Kind::Prefix(op, _) if BINDERS.contains(op) => return err(t, format!("`{op}` without `•` body")),
            Kind::Prefix(op, _) => return err(t, format!("predicate operator `{op}` where an expression is expected")),
            Kind::Binary("•", l, body) => return self.expr(&attach(l, body)?),
            Kind::Binary(op, l, r) => self.expr_binary(t, op, l, r)?,
            Kind::Prob(..) => return err(t, "command where an expression is expected"),
            Kind::Apply(f, arg) => self.application(f, arg)?,
            Kind::Paren(x) => self.expr(x)?,
            Kind::Braces(None) => Expr::pack(Expr::Null(None)),
            Kind::Braces(Some(x)) => Expr::pack(self.expr(x)?),
            Kind::If(g, x, y) => Expr::If(b(self.pred(g)?), b(self.expr(x)?), b(self.expr(y)?)),
            Kind::Bound {
                binder,
                vars,
                domain,
                body,
            } => {
                let mut acc = self.expr(body)?;
                for v in vars.iter().rev() {
                    if let Some((rel, d)) = domain {
                        let guard = Pred::rel(rel_of(rel).unwrap(), Expr::var(v), self.expr(d)?);
                        acc = Expr::guard(guard, acc);
                    }
                    acc = match *binder {
                        "∮" => Expr::Comprehension(v.clone(), b(acc)),
                        "λ" => Expr::Lambda(v.clone(), b(acc)),
                        "Λ" => Expr::BigLambda(v.clone(), b(acc)),
                        q => return err(t, format!("quantifier `{q}` where an expression is expected")),
                    };
                }
                acc
            }
        })
    }

    fn expr_binary(&self, t: &Tree, op: &str, l: &Tree, r: &Tree) -> Res<Expr> {
        let arith = |o| -> Res<Expr> { Ok(Expr::arith(o, self.expr(l)?, self.expr(r)?)) };
        let pair = || -> Res<(Box<Expr>, Box<Expr>)> { Ok((b(self.expr(l)?), b(self.expr(r)?))) };
        Ok(match op {
            "," => {
                let (a, c) = pair()?;
                Expr::Union(a, c)
            }
            "'" => {
                let (a, c) = pair()?;
                Expr::Inter(a, c)
            }
            "∖" => {
                let (a, c) = pair()?;
                Expr::Diff(a, c)
            }
            "↦" => {
                let (a, c) = pair()?;
                Expr::Maplet(a, c)
            }
            "∪" => {
                let (a, c) = pair()?;
                Expr::SetOp(SetOp::Union, a, c)
            }
            "∩" => {
                let (a, c) = pair()?;
                Expr::SetOp(SetOp::Inter, a, c)
            }
            "." => {
                let (a, c) = pair()?;
                Expr::Wholistic(a, c)
            }
            "+" => arith(ArithOp::Add)?,
            "-" => arith(ArithOp::Sub)?,
            "*" => arith(ArithOp::Mul)?,
            "/" => arith(ArithOp::Div)?,
            "mod" => arith(ArithOp::Mod)?,
            "↣" => Expr::guard(self.pred(l)?, self.expr(r)?),
            "⫢" => Expr::precond(self.pred(l)?, self.expr(r)?),
            "◇" => Expr::pv(self.cmd(l)?, self.expr(r)?),
            "⊕" | "×" | "∇" | "⊔" | "⊞" => return err(t, format!("operator `{op}` is not supported")),
            _ => return err(t, format!("`{op}` where an expression is expected")),
        })
    }

    fn application(&self, f: &Tree, arg: &Tree) -> Res<Expr> {
        if let Kind::Ident(name) = &f.kind {
            if let Some(op) = BoolOp::from_name(name) {
                let items = comma_items(arg);
                if items.len() != 2 {
                    return err(arg, format!("`{name}` takes two arguments"));
                }
                return Ok(Expr::BoolOp(op, b(self.expr(items[0])?), b(self.expr(items[1])?)));
            }
        }
        let items = comma_items(arg);
        let mut a = self.expr(items[0])?;
        for it in &items[1..] {
            a = Expr::maplet(a, self.expr(it)?);
        }
        Ok(Expr::apply(self.expr(f)?, a))
    }

    pub(crate) fn pred(&self, t: &Tree) -> Res<Pred> {
        Ok(match &t.kind {
            Kind::Word("true") => Pred::True,
            Kind::Word("false") => Pred::False,
            Kind::Prefix("¬", x) => Pred::not(self.pred(x)?),
            Kind::Paren(x) => self.pred(x)?,
            Kind::Binary("•", l, body) => return self.pred(&attach(l, body)?),
            Kind::Binary(op, l, r) if rel_of(op).is_some() => {
                Pred::rel(rel_of(op).unwrap(), self.expr(l)?, self.expr(r)?)
            }
            Kind::Binary("∧", l, r) => Pred::and(self.pred(l)?, self.pred(r)?),
            Kind::Binary("∨", l, r) => Pred::Or(b(self.pred(l)?), b(self.pred(r)?)),
            Kind::Binary("⇒", l, r) => Pred::Implies(b(self.pred(l)?), b(self.pred(r)?)),
            Kind::Binary("⇔", l, r) => Pred::Iff(b(self.pred(l)?), b(self.pred(r)?)),
            Kind::Bound {
                binder: q @ ("∀" | "∃"),
                vars,
                domain,
                body,
            } => {
                let mut acc = self.pred(body)?;
                for v in vars.iter().rev() {
                    let constraint = match domain {
                        Some((rel, d)) => Some(Pred::rel(rel_of(rel).unwrap(), Expr::var(v), self.expr(d)?)),
                        None => None,
                    };
                    acc = if *q == "∀" {
                        let inner = match constraint {
                            Some(c) => Pred::Implies(b(c), b(acc)),
                            None => acc,
                        };
                        Pred::Forall(v.clone(), b(inner))
                    } else {
                        let inner = match constraint {
                            Some(c) => Pred::and(c, acc),
                            None => acc,
                        };
                        Pred::Exists(v.clone(), b(inner))
                    };
                }
                acc
            }
            _ => Pred::Holds(self.expr(t)?),
        })
    }

    pub(crate) fn cmd(&self, t: &Tree) -> Res<Cmd> {
        Ok(match &t.kind {
            Kind::Word("skip") => Cmd::Skip,
            Kind::Word("abort") => Cmd::abort(),
            Kind::Word("magic") => Cmd::magic(),
            Kind::Paren(x) => self.cmd(x)?,
            Kind::Ident(name) => match self.ctx.programs.get(name) {
                Some(c) => c.clone(),
                None => return err(t, format!("unknown program `{name}`")),
            },
            Kind::Braces(Some(x)) if matches!(&x.kind, Kind::Ident(n) if self.ctx.programs.contains_key(n)) => {
                self.cmd(x)?
            }
            Kind::Binary(":=", lhs, rhs) => self.assignment(lhs, rhs)?,
            Kind::Binary("|", p, s) => Cmd::pre(self.pred(p)?, self.cmd(s)?),
            Kind::Binary("⟹", g, s) => Cmd::guarded(self.pred(g)?, self.cmd(s)?),
            Kind::Binary("⊓", s, u) => Cmd::choice(self.cmd(s)?, self.cmd(u)?),
            Kind::Binary(";", s, u) => Cmd::seq(self.cmd(s)?, self.cmd(u)?),
            Kind::Binary("⟩⟩", s, u) => Cmd::pref(self.cmd(s)?, self.cmd(u)?),
            Kind::Binary(op @ ("⊔" | "⊞"), ..) => return err(t, format!("operator `{op}` is not supported")),
            Kind::Prob(p, s, u) => {
                if *p <= BigRational::from_integer(0.into()) || *p >= BigRational::from_integer(1.into()) {
                    return err(t, "probability must lie strictly between 0 and 1");
                }
                Cmd::prob(p.clone(), self.cmd(s)?, self.cmd(u)?)
            }
            Kind::If(g, s, u) => Cmd::if_(self.pred(g)?, self.cmd(s)?, self.cmd(u)?),
            _ => return err(t, "expected a command"),
        })
    }

    fn assignment(&self, lhs: &Tree, rhs: &Tree) -> Res<Cmd> {
        let mut vars = Vec::new();
        for it in comma_items(lhs) {
            match &it.kind {
                Kind::Ident(x) => vars.push(x.clone()),
                _ => return err(it, "assignment target must be a variable"),
            }
        }
        let exprs = if vars.len() == 1 {
            vec![self.expr(rhs)?]
        } else {
            let items = comma_items(rhs);
            if items.len() != vars.len() {
                return err(
                    rhs,
                    format!("{} targets but {} expressions", vars.len(), items.len()),
                );
            }
            items.into_iter().map(|e| self.expr(e)).collect::<Res<_>>()?
        };
        Ok(Cmd::Assign(vars, exprs))
    }
}
