//! Evaluation of bunch expressions and classical predicates in an environment.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::ast::{ArithOp, BoolOp, Cmd, Expr, Pred, Rel, SetOp};
use crate::boolbunch;
use crate::bunch::{Bunch, Env};
use crate::error::{Error, Result};
use crate::relations;
use crate::types::{EnumBounds, TypeTag};
use crate::value::Value;

/// Types of the variables in scope.
pub type TyEnv = BTreeMap<String, TypeTag>;

pub fn tyenv_of(env: &Env) -> TyEnv {
    env.iter().map(|(k, v)| (k.clone(), v.type_tag().clone())).collect()
}

#[derive(Debug, Clone, Default)]
pub struct Evaluator {
    pub bounds: EnumBounds,
}

/// Any node of the abstract syntax.
#[derive(Clone, Copy)]
pub(crate) enum Node<'a> {
    E(&'a Expr),
    P(&'a Pred),
    C(&'a Cmd),
}

impl<'a> Node<'a> {
    pub(crate) fn children(self) -> Vec<Node<'a>> {
        use Node::*;
        match self {
            E(e) => match e {
                Expr::Lit(_) | Expr::Var(_) | Expr::Null(_) | Expr::Bottom(_) => vec![],
                Expr::Union(a, b)
                | Expr::Inter(a, b)
                | Expr::Diff(a, b)
                | Expr::Maplet(a, b)
                | Expr::Arith(_, a, b)
                | Expr::SetOp(_, a, b)
                | Expr::Apply(a, b)
                | Expr::Wholistic(a, b)
                | Expr::BoolOp(_, a, b) => vec![E(a), E(b)],
                Expr::Neg(a)
                | Expr::Pack(a)
                | Expr::Unpack(a)
                | Expr::Card(a)
                | Expr::Pow(a)
                | Expr::Comprehension(_, a)
                | Expr::Lambda(_, a)
                | Expr::BigLambda(_, a) => vec![E(a)],
                Expr::Guard(p, a) | Expr::Precond(p, a) => vec![P(p), E(a)],
                Expr::If(p, a, b) => vec![P(p), E(a), E(b)],
                Expr::Pv(s, a) => vec![C(s), E(a)],
            },
            P(p) => match p {
                Pred::True | Pred::False => vec![],
                Pred::Rel(_, a, b) => vec![E(a), E(b)],
                Pred::Not(a) | Pred::Forall(_, a) | Pred::Exists(_, a) => vec![P(a)],
                Pred::And(a, b) | Pred::Or(a, b) | Pred::Implies(a, b) | Pred::Iff(a, b) => {
                    vec![P(a), P(b)]
                }
                Pred::Holds(e) => vec![E(e)],
            },
            C(c) => match c {
                Cmd::Skip => vec![],
                Cmd::Assign(_, es) => es.iter().map(E).collect(),
                Cmd::Pre(p, s) | Cmd::Guard(p, s) => vec![P(p), C(s)],
                Cmd::Choice(s, t) | Cmd::Seq(s, t) | Cmd::Pref(s, t) | Cmd::Prob(_, s, t) => {
                    vec![C(s), C(t)]
                }
                Cmd::If(g, s, t) => vec![P(g), C(s), C(t)],
            },
        }
    }

    /// The variable this node binds, if it is a binder.
    fn binds(self) -> Option<&'a str> {
        match self {
            Node::E(Expr::Comprehension(x, _) | Expr::Lambda(x, _) | Expr::BigLambda(x, _)) => Some(x),
            Node::P(Pred::Forall(x, _) | Pred::Exists(x, _)) => Some(x),
            _ => None,
        }
    }
}

/// Whether `name` occurs anywhere in `e`, ignoring shadowing.
pub(crate) fn mentions(node: Node<'_>, name: &str) -> bool {
    if let Node::E(Expr::Var(v)) = node {
        return v == name;
    }
    if let Node::C(Cmd::Assign(xs, _)) = node {
        if xs.iter().any(|x| x == name) {
            return true;
        }
    }
    node.children().into_iter().any(|c| mentions(c, name))
}

enum Scope {
    Guarded,
    Universal,
    Existential,
}

fn conjuncts<'a>(p: &'a Pred, out: &mut Vec<&'a Pred>) {
    match p {
        Pred::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        other => out.push(other),
    }
}

/// Constraints `x : F`, `x ∈ S`, `x = F` that any useful value of `x` must satisfy.
fn domain_constraints<'a>(x: &str, scope: &Scope, node: Node<'a>, banned: &mut Vec<String>, out: &mut Vec<(Rel, &'a Expr)>) {
    let from_pred = |p: &'a Pred, banned: &Vec<String>, out: &mut Vec<(Rel, &'a Expr)>| {
        let mut cs = Vec::new();
        conjuncts(p, &mut cs);
        for c in cs {
            let (rel, other) = match c {
                Pred::Rel(r @ (Rel::Sub | Rel::In | Rel::Eq), Expr::Var(v), f) if v == x => (*r, f),
                Pred::Rel(Rel::Eq, f, Expr::Var(v)) if v == x => (Rel::Eq, f),
                _ => continue,
            };
            let node = Node::E(other);
            if !mentions(node, x) && !banned.iter().any(|b| mentions(node, b)) {
                out.push((rel, other));
            }
        }
    };
    match (scope, node) {
        (Scope::Guarded, Node::E(Expr::Guard(p, inner))) => {
            from_pred(p, banned, out);
            domain_constraints(x, scope, Node::E(inner), banned, out);
        }
        (Scope::Guarded, Node::E(Expr::Comprehension(y, inner) | Expr::Lambda(y, inner))) if y != x => {
            banned.push(y.clone());
            domain_constraints(x, scope, Node::E(inner), banned, out);
        }
        (Scope::Universal, Node::P(Pred::Implies(p, q))) => {
            from_pred(p, banned, out);
            domain_constraints(x, scope, Node::P(q), banned, out);
        }
        (Scope::Universal, Node::P(Pred::Forall(y, inner))) | (Scope::Existential, Node::P(Pred::Exists(y, inner)))
            if y != x =>
        {
            banned.push(y.clone());
            domain_constraints(x, scope, Node::P(inner), banned, out);
        }
        (Scope::Existential, Node::P(p)) => {
            let mut cs = Vec::new();
            conjuncts(p, &mut cs);
            for c in cs {
                match c {
                    Pred::Exists(..) => domain_constraints(x, scope, Node::P(c), banned, out),
                    other => from_pred(other, banned, out),
                }
            }
        }
        _ => {}
    }
}

fn int_op(op: ArithOp, a: i64, b: i64) -> Option<i64> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => (b != 0).then(|| a.checked_div_euclid(b)).flatten(),
        ArithOp::Mod => (b != 0).then(|| a.checked_rem_euclid(b)).flatten(),
    }
}

fn arith_value(op: ArithOp, x: &Value, y: &Value) -> Option<Value> {
    match (x, y) {
        (Value::Int(a), Value::Int(b)) => int_op(op, *a, *b).map(Value::Int),
        _ => {
            let (a, b) = (x.to_rat()?, y.to_rat()?);
            match op {
                ArithOp::Add => Some(Value::Rat(a + b)),
                ArithOp::Sub => Some(Value::Rat(a - b)),
                ArithOp::Mul => Some(Value::Rat(a * b)),
                ArithOp::Div => (!b.is_zero()).then(|| Value::Rat(a / b)),
                ArithOp::Mod => None,
            }
        }
    }
}

/// Bring an INT/RAT mix to RAT; other pairs must already agree.
fn unify(a: Bunch, b: Bunch) -> Result<(Bunch, Bunch)> {
    match (a.type_tag(), b.type_tag()) {
        (x, y) if x == y => Ok((a, b)),
        (TypeTag::Int, TypeTag::Rat) | (TypeTag::Rat, TypeTag::Int) => Ok((a.to_rat()?, b.to_rat()?)),
        (x, y) => Err(Error::mismatch(x, y)),
    }
}

fn numeric_result(a: &TypeTag, b: &TypeTag) -> Result<TypeTag> {
    match (a, b) {
        (TypeTag::Int, TypeTag::Int) => Ok(TypeTag::Int),
        (TypeTag::Int | TypeTag::Rat, TypeTag::Int | TypeTag::Rat) => Ok(TypeTag::Rat),
        (x, TypeTag::Int | TypeTag::Rat) => Err(Error::mismatch("INT or RAT", x)),
        (_, y) => Err(Error::mismatch("INT or RAT", y)),
    }
}

fn same(a: TypeTag, b: &TypeTag) -> Result<TypeTag> {
    if &a == b {
        Ok(a)
    } else {
        Err(Error::mismatch(a, b))
    }
}

/// Every value of the elementary relation `rel`, lifted over the elements of two bunches.
fn lifted_relation(a: &Bunch, b: &Bunch, rel: impl Fn(&Value, &Value) -> bool) -> bool {
    if a.is_improper() || b.is_improper() {
        return false;
    }
    a.elems().iter().all(|x| b.elems().iter().all(|y| rel(x, y)))
}

fn set_contents(v: &Value) -> &BTreeSet<Value> {
    v.as_set().expect("set-typed values are sets").elems()
}

impl Evaluator {
    pub fn new(bounds: EnumBounds) -> Self {
        Evaluator { bounds }
    }

    pub fn eval(&self, e: &Expr, env: &Env) -> Result<Bunch> {
        self.eval_hint(e, env, None)
    }

    fn eval_pair(&self, a: &Expr, b: &Expr, env: &Env, hint: Option<&TypeTag>) -> Result<(Bunch, Bunch)> {
        match self.eval_hint(a, env, hint) {
            Ok(x) => {
                let y = self.eval_hint(b, env, Some(x.type_tag()))?;
                Ok((x, y))
            }
            Err(Error::NeedsAnnotation(_)) => {
                let y = self.eval_hint(b, env, hint)?;
                let x = self.eval_hint(a, env, Some(y.type_tag()))?;
                Ok((x, y))
            }
            Err(e) => Err(e),
        }
    }

    /// Evaluate an element and its set operand, each hinting the other's type.
    fn eval_membership(&self, a: &Expr, s: &Expr, env: &Env) -> Result<(Bunch, Bunch)> {
        match self.eval(a, env) {
            Ok(x) => {
                let y = self.eval_hint(s, env, Some(&TypeTag::set(x.type_tag().clone())))?;
                Ok((x, y))
            }
            Err(Error::NeedsAnnotation(_)) => {
                let y = self.eval(s, env)?;
                let x = self.eval_hint(a, env, Some(y.type_tag().inner()?))?;
                Ok((x, y))
            }
            Err(e) => Err(e),
        }
    }

    fn result_type(&self, e: &Expr, env: &Env, hint: Option<&TypeTag>) -> Result<TypeTag> {
        match hint {
            Some(t) => Ok(t.clone()),
            None => self.infer(e, &tyenv_of(env), None),
        }
    }

    pub fn eval_hint(&self, e: &Expr, env: &Env, hint: Option<&TypeTag>) -> Result<Bunch> {
        let annotated = |t: &Option<TypeTag>, what: &str| -> Result<TypeTag> {
            t.clone()
                .or_else(|| hint.cloned())
                .ok_or_else(|| Error::NeedsAnnotation(what.into()))
        };
        match e {
            Expr::Lit(v) => Ok(Bunch::elem(v.clone())),
            Expr::Var(x) => env.get(x).cloned().ok_or_else(|| Error::Unbound(x.clone())),
            Expr::Null(t) => Ok(Bunch::null(annotated(t, "null")?)),
            Expr::Bottom(t) => Ok(Bunch::improper(annotated(t, "improper")?)),
            Expr::Union(a, b) => {
                let (x, y) = self.eval_pair(a, b, env, hint)?;
                x.union(&y)
            }
            Expr::Inter(a, b) => {
                let (x, y) = self.eval_pair(a, b, env, hint)?;
                x.intersect(&y)
            }
            Expr::Diff(a, b) => {
                let (x, y) = self.eval_pair(a, b, env, hint)?;
                x.diff(&y)
            }
            Expr::Maplet(a, b) => {
                let (ha, hb) = match hint {
                    Some(TypeTag::Pair(l, r)) => (Some(&**l), Some(&**r)),
                    _ => (None, None),
                };
                let x = self.eval_hint(a, env, ha)?;
                let y = self.eval_hint(b, env, hb)?;
                Ok(x.maplet(&y))
            }
            Expr::Arith(op, a, b) => {
                let (x, y) = self.eval_pair(a, b, env, hint)?;
                let ty = numeric_result(x.type_tag(), y.type_tag())?;
                if *op == ArithOp::Mod && ty != TypeTag::Int {
                    return Err(Error::mismatch(TypeTag::Int, ty));
                }
                Ok(Bunch::lift_binary(ty, &x, &y, |p, q| arith_value(*op, p, q)))
            }
            Expr::Neg(a) => {
                let x = self.eval_hint(a, env, hint)?;
                match x.type_tag() {
                    TypeTag::Int => Ok(Bunch::lift_unary(TypeTag::Int, &x, |v| {
                        v.as_int().and_then(i64::checked_neg).map(Value::Int)
                    })),
                    TypeTag::Rat => Ok(Bunch::lift_unary(TypeTag::Rat, &x, |v| {
                        v.to_rat().map(|r| Value::Rat(-r))
                    })),
                    other => Err(Error::mismatch("INT or RAT", other)),
                }
            }
            Expr::SetOp(op, a, b) => {
                let (x, y) = self.eval_pair(a, b, env, hint)?;
                if x.type_tag() != y.type_tag() {
                    return Err(Error::mismatch(x.type_tag(), y.type_tag()));
                }
                let inner = x.type_tag().inner()?.clone();
                Ok(Bunch::lift_binary(x.type_tag().clone(), &x, &y, |p, q| {
                    let (s, t) = (set_contents(p), set_contents(q));
                    let elems: Vec<Value> = match op {
                        SetOp::Union => s.union(t).cloned().collect(),
                        SetOp::Inter => s.intersection(t).cloned().collect(),
                    };
                    Some(Value::Set(Bunch::from_values_unchecked(inner.clone(), elems)))
                }))
            }
            Expr::Pack(a) => {
                let inner_hint = hint.and_then(|t| t.inner().ok());
                Ok(self.eval_hint(a, env, inner_hint)?.pack())
            }
            Expr::Unpack(a) => {
                let h = hint.map(|t| TypeTag::set(t.clone()));
                self.eval_hint(a, env, h.as_ref())?.unpack()
            }
            Expr::Card(a) => {
                let x = self.eval(a, env)?;
                let n = x.cardinality()?;
                Ok(Bunch::int(n as i64))
            }
            Expr::Pow(a) => {
                let h = hint.and_then(|t| t.inner().ok());
                let x = self.eval_hint(a, env, h)?;
                self.powerset(&x)
            }
            Expr::Guard(p, a) => {
                if self.holds(p, env)? {
                    self.eval_hint(a, env, hint)
                } else {
                    Ok(Bunch::null(self.result_type(a, env, hint)?))
                }
            }
            Expr::Precond(p, a) => {
                if self.holds(p, env)? {
                    self.eval_hint(a, env, hint)
                } else {
                    Ok(Bunch::improper(self.result_type(a, env, hint)?))
                }
            }
            Expr::If(p, a, b) => {
                if self.holds(p, env)? {
                    self.eval_hint(a, env, hint)
                } else {
                    self.eval_hint(b, env, hint)
                }
            }
            Expr::Comprehension(x, body) => {
                let domain = self.binder_domain(x, Scope::Guarded, Node::E(body), env)?;
                let mut acc: Option<Bunch> = None;
                for v in &domain {
                    let b = self.eval_hint(body, &env.bind(x, Bunch::elem(v.clone())), hint)?;
                    let next = match acc {
                        None => b,
                        Some(a) => a.union(&b)?,
                    };
                    let stop = next.is_improper();
                    acc = Some(next);
                    if stop {
                        break;
                    }
                }
                match acc {
                    Some(b) => Ok(b),
                    None => Ok(Bunch::null(self.result_type(e, env, hint)?)),
                }
            }
            Expr::Lambda(x, body) => {
                let domain = self.binder_domain(x, Scope::Guarded, Node::E(body), env)?;
                let ran_hint = match hint.map(relations::relation_types) {
                    Some(Ok((_, r))) => Some(r.clone()),
                    _ => None,
                };
                let mut results = Vec::with_capacity(domain.len());
                for v in &domain {
                    results.push(self.eval_hint(body, &env.bind(x, Bunch::elem(v.clone())), ran_hint.as_ref())?);
                }
                let (dom_ty, ran_ty) = match (results.first(), domain.first()) {
                    (Some(b), Some(v)) => (v.type_of(), b.type_tag().clone()),
                    _ => {
                        let t = self.result_type(e, env, hint)?;
                        let (d, r) = relations::relation_types(&t)?;
                        (d.clone(), r.clone())
                    }
                };
                let mut it = results.into_iter();
                relations::lambda_ext(&domain, &dom_ty, &ran_ty, |_| Ok(it.next().expect("one result per value")))
            }
            Expr::BigLambda(x, body) => {
                let dom_ty = match hint.map(relations::relation_types) {
                    Some(Ok((TypeTag::Set(d), _))) => (**d).clone(),
                    _ => self.binder_type(x, Node::E(body), &tyenv_of(env))?,
                };
                let mut tyenv = tyenv_of(env);
                tyenv.insert(x.clone(), dom_ty.clone());
                let ran_ty = self.infer(body, &tyenv, None)?;
                relations::big_lambda(&dom_ty, &ran_ty, &self.bounds, |d| {
                    self.eval_hint(body, &env.bind(x, d.clone()), Some(&ran_ty))
                })
            }
            Expr::Apply(f, a) => {
                let fv = match self.eval(f, env) {
                    Ok(v) => v,
                    Err(Error::NeedsAnnotation(_)) if hint.is_some() => {
                        let av = self.eval(a, env)?;
                        let t = TypeTag::set(TypeTag::pair(av.type_tag().clone(), hint.unwrap().clone()));
                        return relations::apply(&self.eval_hint(f, env, Some(&t))?, &av);
                    }
                    Err(e) => return Err(e),
                };
                let (dom, _) = relations::relation_types(fv.type_tag())?;
                let av = self.eval_hint(a, env, Some(dom))?;
                relations::apply(&fv, &av)
            }
            Expr::Wholistic(f, a) => {
                let fv = self.eval(f, env)?;
                let (dom, _) = relations::relation_types(fv.type_tag())?;
                let av = self.eval_hint(a, env, Some(dom.inner()?))?;
                relations::wholistic_apply(&fv, &av)
            }
            Expr::BoolOp(op, a, b) => match op {
                BoolOp::Eq => {
                    let (x, y) = self.eval_pair(a, b, env, None)?;
                    boolbunch::eq_b(&x, &y)
                }
                BoolOp::Lt => {
                    let (x, y) = self.eval_pair(a, b, env, None)?;
                    let (x, y) = unify(x, y)?;
                    boolbunch::lt_b(&x, &y)
                }
                BoolOp::Mem => {
                    let (x, y) = self.eval_membership(a, b, env)?;
                    boolbunch::mem_b(&x, &y)
                }
                BoolOp::And => {
                    let x = self.eval_hint(a, env, Some(&TypeTag::Bool))?;
                    let y = self.eval_hint(b, env, Some(&TypeTag::Bool))?;
                    boolbunch::and_b(&x, &y)
                }
            },
            Expr::Pv(s, a) => self.pv_hint(s, a, env, hint),
        }
    }

    fn powerset(&self, x: &Bunch) -> Result<Bunch> {
        let set_ty = x.type_tag().clone();
        let inner = set_ty.inner()?.clone();
        let ty = TypeTag::set(set_ty);
        if x.is_improper() {
            return Ok(Bunch::improper(ty));
        }
        let mut out = BTreeSet::new();
        for s in x.elems() {
            let elems: Vec<&Value> = set_contents(s).iter().collect();
            if elems.len() >= 32 || (1usize << elems.len()) > self.bounds.max {
                return Err(Error::Enumeration(format!("powerset of {} elements", elems.len())));
            }
            for mask in 0u32..(1u32 << elems.len()) {
                let chosen = elems
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| (*v).clone());
                out.insert(Value::Set(Bunch::from_values_unchecked(inner.clone(), chosen)));
            }
        }
        Ok(Bunch::from_values_unchecked(ty, out))
    }

    /// Values a bound variable must range over: a superset drawn from its
    /// constraints when possible, else its whole (bounded) type.
    fn binder_domain(&self, x: &str, scope: Scope, body: Node<'_>, env: &Env) -> Result<Vec<Value>> {
        let mut cs = Vec::new();
        domain_constraints(x, &scope, body, &mut Vec::new(), &mut cs);
        let mut domain: Option<BTreeSet<Value>> = None;
        for (rel, f) in cs {
            let Ok(b) = self.eval(f, &env.clone()) else { continue };
            if b.is_improper() {
                continue;
            }
            let vals: BTreeSet<Value> = match rel {
                Rel::In => {
                    let mut sets = b.elems().iter().map(set_contents);
                    let Some(first) = sets.next() else { continue };
                    sets.fold(first.clone(), |acc, s| acc.intersection(s).cloned().collect())
                }
                _ => b.elems().clone(),
            };
            domain = Some(match domain {
                None => vals,
                Some(d) => d.intersection(&vals).cloned().collect(),
            });
        }
        match domain {
            Some(d) => Ok(d.into_iter().collect()),
            None => {
                let ty = self.binder_type(x, body, &tyenv_of(env))?;
                ty.enumerate(&self.bounds)
            }
        }
    }

    /// The type of a bound variable, from its constraints or from how it is used.
    pub(crate) fn binder_type(&self, x: &str, body: Node<'_>, tyenv: &TyEnv) -> Result<TypeTag> {
        for scope in [Scope::Guarded, Scope::Universal, Scope::Existential] {
            let mut cs = Vec::new();
            domain_constraints(x, &scope, body, &mut Vec::new(), &mut cs);
            for (rel, f) in cs {
                if let Ok(t) = self.infer(f, tyenv, None) {
                    return match rel {
                        Rel::In => t.inner().cloned(),
                        _ => Ok(t),
                    };
                }
            }
        }
        self.usage_type(x, body, tyenv)
            .ok_or_else(|| Error::Type(format!("cannot infer the type of bound variable `{x}`")))
    }

    fn usage_type(&self, x: &str, node: Node<'_>, tyenv: &TyEnv) -> Option<TypeTag> {
        let is_x = |e: &Expr| matches!(e, Expr::Var(v) if v == x);
        let other = |e: &Expr| -> Option<TypeTag> {
            if mentions(Node::E(e), x) {
                None
            } else {
                self.infer(e, tyenv, None).ok()
            }
        };
        let found = match node {
            Node::P(Pred::Rel(r, a, b)) => match r {
                Rel::In | Rel::NotIn if is_x(a) => other(b).and_then(|t| t.inner().ok().cloned()),
                Rel::In | Rel::NotIn if is_x(b) => other(a).map(TypeTag::set),
                _ if is_x(a) => other(b),
                _ if is_x(b) => other(a),
                _ => None,
            },
            Node::E(
                Expr::Union(a, b)
                | Expr::Inter(a, b)
                | Expr::Diff(a, b)
                | Expr::Arith(_, a, b)
                | Expr::SetOp(_, a, b)
                | Expr::BoolOp(BoolOp::Eq | BoolOp::Lt, a, b),
            ) => {
                if is_x(a) {
                    other(b)
                } else if is_x(b) {
                    other(a)
                } else {
                    None
                }
            }
            Node::E(Expr::BoolOp(BoolOp::Mem, a, b)) if is_x(a) => other(b).and_then(|t| t.inner().ok().cloned()),
            Node::E(Expr::Apply(f, a)) if is_x(a) => {
                other(f).and_then(|t| relations::relation_types(&t).ok().map(|(d, _)| d.clone()))
            }
            Node::E(Expr::Wholistic(f, a)) if is_x(a) => other(f).and_then(|t| {
                relations::relation_types(&t)
                    .ok()
                    .and_then(|(d, _)| d.inner().ok().cloned())
            }),
            _ => None,
        };
        if found.is_some() {
            return found;
        }
        if node.binds() == Some(x) {
            return None;
        }
        let mut inner_env = tyenv.clone();
        if let Some(y) = node.binds() {
            // the inner variable's type may be needed to type the sibling of `x`
            if let Ok(t) = self.binder_type(y, node.children()[0], tyenv) {
                inner_env.insert(y.to_string(), t);
            }
        }
        node.children()
            .into_iter()
            .find_map(|c| self.usage_type(x, c, &inner_env))
    }

    /// Static type of `e`; `hint` resolves unannotated `null` and `⊥`.
    pub fn infer(&self, e: &Expr, tyenv: &TyEnv, hint: Option<&TypeTag>) -> Result<TypeTag> {
        let pair = |a: &Expr, b: &Expr, hint: Option<&TypeTag>| -> Result<(TypeTag, TypeTag)> {
            match self.infer(a, tyenv, hint) {
                Ok(ta) => {
                    let tb = self.infer(b, tyenv, Some(&ta))?;
                    Ok((ta, tb))
                }
                Err(Error::NeedsAnnotation(_)) => {
                    let tb = self.infer(b, tyenv, hint)?;
                    let ta = self.infer(a, tyenv, Some(&tb))?;
                    Ok((ta, tb))
                }
                Err(e) => Err(e),
            }
        };
        let annotated = |t: &Option<TypeTag>, what: &str| -> Result<TypeTag> {
            t.clone()
                .or_else(|| hint.cloned())
                .ok_or_else(|| Error::NeedsAnnotation(what.into()))
        };
        match e {
            Expr::Lit(v) => Ok(v.type_of()),
            Expr::Var(x) => tyenv.get(x).cloned().ok_or_else(|| Error::Unbound(x.clone())),
            Expr::Null(t) => annotated(t, "null"),
            Expr::Bottom(t) => annotated(t, "improper"),
            Expr::Union(a, b) | Expr::Inter(a, b) | Expr::Diff(a, b) => {
                let (ta, tb) = pair(a, b, hint)?;
                same(ta, &tb)
            }
            Expr::SetOp(_, a, b) => {
                let (ta, tb) = pair(a, b, hint)?;
                ta.inner()?;
                same(ta, &tb)
            }
            Expr::Maplet(a, b) => {
                let (ha, hb) = match hint {
                    Some(TypeTag::Pair(l, r)) => (Some(&**l), Some(&**r)),
                    _ => (None, None),
                };
                Ok(TypeTag::pair(self.infer(a, tyenv, ha)?, self.infer(b, tyenv, hb)?))
            }
            Expr::Arith(_, a, b) => {
                let (ta, tb) = pair(a, b, hint)?;
                numeric_result(&ta, &tb)
            }
            Expr::Neg(a) => {
                let t = self.infer(a, tyenv, hint)?;
                if t.is_numeric() {
                    Ok(t)
                } else {
                    Err(Error::mismatch("INT or RAT", t))
                }
            }
            Expr::Pack(a) => {
                let h = hint.and_then(|t| t.inner().ok());
                Ok(TypeTag::set(self.infer(a, tyenv, h)?))
            }
            Expr::Unpack(a) => {
                let h = hint.map(|t| TypeTag::set(t.clone()));
                self.infer(a, tyenv, h.as_ref())?.inner().cloned()
            }
            Expr::Card(_) => Ok(TypeTag::Int),
            Expr::Pow(a) => {
                let h = hint.and_then(|t| t.inner().ok());
                let t = self.infer(a, tyenv, h)?;
                t.inner()?;
                Ok(TypeTag::set(t))
            }
            Expr::Guard(_, a) | Expr::Precond(_, a) => self.infer(a, tyenv, hint),
            Expr::If(_, a, b) => {
                let (ta, tb) = pair(a, b, hint)?;
                same(ta, &tb)
            }
            Expr::Comprehension(x, body) => {
                let mut inner = tyenv.clone();
                inner.insert(x.clone(), self.binder_type(x, Node::E(body), tyenv)?);
                self.infer(body, &inner, hint)
            }
            Expr::Lambda(x, body) => {
                let (dh, rh) = match hint.map(relations::relation_types) {
                    Some(Ok((d, r))) => (Some(d.clone()), Some(r.clone())),
                    _ => (None, None),
                };
                let dom = match dh {
                    Some(d) => d,
                    None => self.binder_type(x, Node::E(body), tyenv)?,
                };
                let mut inner = tyenv.clone();
                inner.insert(x.clone(), dom.clone());
                let ran = self.infer(body, &inner, rh.as_ref())?;
                Ok(TypeTag::set(TypeTag::pair(dom, ran)))
            }
            Expr::BigLambda(x, body) => {
                let dom = match hint.map(relations::relation_types) {
                    Some(Ok((TypeTag::Set(d), _))) => (**d).clone(),
                    _ => self.binder_type(x, Node::E(body), tyenv)?,
                };
                let mut inner = tyenv.clone();
                inner.insert(x.clone(), dom.clone());
                let ran = self.infer(body, &inner, None)?;
                Ok(TypeTag::set(TypeTag::pair(TypeTag::set(dom), TypeTag::set(ran))))
            }
            Expr::Apply(f, a) => match self.infer(f, tyenv, None) {
                Ok(tf) => {
                    let (dom, ran) = relations::relation_types(&tf)?;
                    same(self.infer(a, tyenv, Some(dom))?, dom)?;
                    Ok(ran.clone())
                }
                Err(Error::NeedsAnnotation(what)) => match hint {
                    Some(r) => {
                        self.infer(a, tyenv, None)?;
                        Ok(r.clone())
                    }
                    None => Err(Error::NeedsAnnotation(what)),
                },
                Err(e) => Err(e),
            },
            Expr::Wholistic(f, _) => {
                let tf = self.infer(f, tyenv, None)?;
                let (_, ran) = relations::relation_types(&tf)?;
                ran.inner().cloned()
            }
            Expr::BoolOp(..) => Ok(TypeTag::Bool),
            Expr::Pv(s, a) => self.infer(a, &self.assigned_types(s, tyenv)?, hint),
        }
    }

    /// `tyenv` extended with the types of variables first assigned inside `s`.
    pub fn assigned_types(&self, s: &Cmd, tyenv: &TyEnv) -> Result<TyEnv> {
        let mut out = tyenv.clone();
        self.collect_assigned(s, &mut out)?;
        Ok(out)
    }

    fn collect_assigned(&self, s: &Cmd, out: &mut TyEnv) -> Result<()> {
        match s {
            Cmd::Skip => Ok(()),
            Cmd::Assign(xs, es) => {
                let mut fresh = Vec::new();
                for (x, e) in xs.iter().zip(es) {
                    let hint = out.get(x).cloned();
                    let t = self.infer(e, out, hint.as_ref())?;
                    if hint.is_none() {
                        fresh.push((x.clone(), t));
                    }
                }
                out.extend(fresh);
                Ok(())
            }
            Cmd::Pre(_, a) | Cmd::Guard(_, a) => self.collect_assigned(a, out),
            Cmd::Choice(a, b) | Cmd::Seq(a, b) | Cmd::Pref(a, b) | Cmd::Prob(_, a, b) | Cmd::If(_, a, b) => {
                self.collect_assigned(a, out)?;
                self.collect_assigned(b, out)
            }
        }
    }

    pub fn holds(&self, p: &Pred, env: &Env) -> Result<bool> {
        match p {
            Pred::True => Ok(true),
            Pred::False => Ok(false),
            Pred::Not(a) => Ok(!self.holds(a, env)?),
            Pred::And(a, b) => Ok(self.holds(a, env)? && self.holds(b, env)?),
            Pred::Or(a, b) => Ok(self.holds(a, env)? || self.holds(b, env)?),
            Pred::Implies(a, b) => Ok(!self.holds(a, env)? || self.holds(b, env)?),
            Pred::Iff(a, b) => Ok(self.holds(a, env)? == self.holds(b, env)?),
            Pred::Forall(x, body) => {
                for v in self.binder_domain(x, Scope::Universal, Node::P(body), env)? {
                    if !self.holds(body, &env.bind(x, Bunch::elem(v)))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Pred::Exists(x, body) => {
                for v in self.binder_domain(x, Scope::Existential, Node::P(body), env)? {
                    if self.holds(body, &env.bind(x, Bunch::elem(v)))? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Pred::Holds(e) => {
                let b = self.eval_hint(e, env, Some(&TypeTag::Bool))?;
                if b.type_tag() != &TypeTag::Bool {
                    return Err(Error::mismatch(TypeTag::Bool, b.type_tag()));
                }
                Ok(b.as_element() == Some(&Value::Bool(true)))
            }
            Pred::Rel(r, a, b) => self.relation(*r, a, b, env),
        }
    }

    fn relation(&self, r: Rel, a: &Expr, b: &Expr, env: &Env) -> Result<bool> {
        let ordered = |x: &Value, y: &Value| -> Result<std::cmp::Ordering> {
            match (x.to_rat(), y.to_rat()) {
                (Some(p), Some(q)) => Ok(p.cmp(&q)),
                _ => Err(Error::mismatch("INT or RAT", x.type_of())),
            }
        };
        match r {
            Rel::In | Rel::NotIn => {
                let (x, s) = self.eval_membership(a, b, env)?;
                if r == Rel::In {
                    x.member(&s)
                } else {
                    Ok(lifted_relation(&x, &s, |e, set| !set_contents(set).contains(e)))
                }
            }
            _ => {
                let (x, y) = self.eval_pair(a, b, env, None)?;
                let (x, y) = unify(x, y)?;
                Ok(match r {
                    Rel::Eq => x == y,
                    Rel::Sub => x.sub_bunch(&y)?,
                    Rel::Ne => lifted_relation(&x, &y, |p, q| p != q),
                    Rel::Lt | Rel::Le | Rel::Gt | Rel::Ge => {
                        if !x.type_tag().is_numeric() {
                            return Err(Error::mismatch("INT or RAT", x.type_tag()));
                        }
                        lifted_relation(&x, &y, |p, q| {
                            let o = ordered(p, q).expect("numeric");
                            match r {
                                Rel::Lt => o.is_lt(),
                                Rel::Le => o.is_le(),
                                Rel::Gt => o.is_gt(),
                                _ => o.is_ge(),
                            }
                        })
                    }
                    Rel::SubsetEq | Rel::Subset => {
                        x.type_tag().inner()?;
                        lifted_relation(&x, &y, |p, q| {
                            let (s, t) = (set_contents(p), set_contents(q));
                            s.is_subset(t) && (r == Rel::SubsetEq || s.len() < t.len())
                        })
                    }
                    Rel::In | Rel::NotIn => unreachable!(),
                })
            }
        }
    }
}
