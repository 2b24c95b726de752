//! Source language of the model: expressions and predicates of bunch
//! theory over one given set.

use std::fmt;

use crate::sem::{atom_name, Ty};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Atom(u8),
    Num(u64),
    Var(String),
    /// The improper bunch of the given type.
    Bottom(Ty),
    /// `{}` whose elements would have the given type.
    EmptySet(Ty),
    Pack(Box<Term>),
    Unpack(Box<Term>),
    Maplet(Box<Term>, Box<Term>),
    Pow(Box<Term>),
    Cross(Box<Term>, Box<Term>),
    Choice(Box<Term>),
    Card(Box<Term>),
    /// Bunch union `A,B`.
    Union(Box<Term>, Box<Term>),
    Compr {
        var: String,
        set: Box<Term>,
        body: Box<Pred>,
    },
    Guard(Box<Pred>, Box<Term>),
    /// `body[with/var]`, denoted by binding override.
    Subst {
        body: Box<Term>,
        var: String,
        with: Box<Term>,
    },
    Big,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pred {
    True,
    False,
    Eq(Term, Term),
    Mem(Term, Term),
    Element(Term),
    /// Bunch inclusion `E : F`.
    Incl(Term, Term),
    Not(Box<Pred>),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
    /// `∀var • var ∈ set ⇒ body`
    Forall {
        var: String,
        set: Term,
        body: Box<Pred>,
    },
    /// `∃var • var ∈ set ∧ body`
    Exists {
        var: String,
        set: Term,
        body: Box<Pred>,
    },
    Subst {
        body: Box<Pred>,
        var: String,
        with: Term,
    },
    Infinite(Term),
}

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

impl Term {
    pub fn pack(self) -> Term {
        Term::Pack(Box::new(self))
    }
    pub fn unpack(self) -> Term {
        Term::Unpack(Box::new(self))
    }
    pub fn maplet(self, r: Term) -> Term {
        Term::Maplet(Box::new(self), Box::new(r))
    }
    pub fn cross(self, r: Term) -> Term {
        Term::Cross(Box::new(self), Box::new(r))
    }
    pub fn pow(self) -> Term {
        Term::Pow(Box::new(self))
    }
    pub fn choice(self) -> Term {
        Term::Choice(Box::new(self))
    }
    pub fn card(self) -> Term {
        Term::Card(Box::new(self))
    }
    pub fn union(self, r: Term) -> Term {
        Term::Union(Box::new(self), Box::new(r))
    }
    pub fn guarded(g: Pred, e: Term) -> Term {
        Term::Guard(Box::new(g), Box::new(e))
    }
    pub fn compr(v: &str, set: Term, body: Pred) -> Term {
        Term::Compr {
            var: v.to_string(),
            set: Box::new(set),
            body: Box::new(body),
        }
    }
    pub fn with_subst(self, v: &str, with: Term) -> Term {
        Term::Subst {
            body: Box::new(self),
            var: v.to_string(),
            with: Box::new(with),
        }
    }

    pub fn eq(self, r: Term) -> Pred {
        Pred::Eq(self, r)
    }
    pub fn mem(self, set: Term) -> Pred {
        Pred::Mem(self, set)
    }
    pub fn incl(self, r: Term) -> Pred {
        Pred::Incl(self, r)
    }

    /// Syntactic substitution of `with` for free `v`.
    pub fn subst(&self, v: &str, with: &Term) -> Term {
        let go = |t: &Term| Box::new(t.subst(v, with));
        match self {
            Term::Var(x) if x == v => with.clone(),
            Term::Atom(_)
            | Term::Num(_)
            | Term::Var(_)
            | Term::Bottom(_)
            | Term::EmptySet(_)
            | Term::Big => self.clone(),
            Term::Pack(a) => Term::Pack(go(a)),
            Term::Unpack(a) => Term::Unpack(go(a)),
            Term::Pow(a) => Term::Pow(go(a)),
            Term::Choice(a) => Term::Choice(go(a)),
            Term::Card(a) => Term::Card(go(a)),
            Term::Maplet(a, b) => Term::Maplet(go(a), go(b)),
            Term::Cross(a, b) => Term::Cross(go(a), go(b)),
            Term::Union(a, b) => Term::Union(go(a), go(b)),
            Term::Guard(g, e) => Term::Guard(Box::new(g.subst(v, with)), go(e)),
            Term::Compr { var, set, body } => Term::Compr {
                var: var.clone(),
                set: go(set),
                body: if var == v {
                    body.clone()
                } else {
                    Box::new(body.subst(v, with))
                },
            },
            Term::Subst { body, var, with: w } => Term::Subst {
                body: if var == v { body.clone() } else { go(body) },
                var: var.clone(),
                with: go(w),
            },
        }
    }
}

impl Pred {
    pub fn not(self) -> Pred {
        Pred::Not(Box::new(self))
    }
    pub fn and(self, q: Pred) -> Pred {
        Pred::And(Box::new(self), Box::new(q))
    }
    pub fn or(self, q: Pred) -> Pred {
        Pred::Or(Box::new(self), Box::new(q))
    }
    pub fn forall(v: &str, set: Term, body: Pred) -> Pred {
        Pred::Forall {
            var: v.to_string(),
            set,
            body: Box::new(body),
        }
    }
    pub fn exists(v: &str, set: Term, body: Pred) -> Pred {
        Pred::Exists {
            var: v.to_string(),
            set,
            body: Box::new(body),
        }
    }
    pub fn with_subst(self, v: &str, with: Term) -> Pred {
        Pred::Subst {
            body: Box::new(self),
            var: v.to_string(),
            with,
        }
    }

    pub fn subst(&self, v: &str, with: &Term) -> Pred {
        let t = |e: &Term| e.subst(v, with);
        let p = |q: &Pred| Box::new(q.subst(v, with));
        match self {
            Pred::True | Pred::False => self.clone(),
            Pred::Eq(a, b) => Pred::Eq(t(a), t(b)),
            Pred::Mem(a, b) => Pred::Mem(t(a), t(b)),
            Pred::Incl(a, b) => Pred::Incl(t(a), t(b)),
            Pred::Element(a) => Pred::Element(t(a)),
            Pred::Infinite(a) => Pred::Infinite(t(a)),
            Pred::Not(q) => Pred::Not(p(q)),
            Pred::And(a, b) => Pred::And(p(a), p(b)),
            Pred::Or(a, b) => Pred::Or(p(a), p(b)),
            Pred::Forall { var, set, body } | Pred::Exists { var, set, body } => {
                let body = if var == v { body.clone() } else { p(body) };
                let (var, set) = (var.clone(), t(set));
                if matches!(self, Pred::Forall { .. }) {
                    Pred::Forall { var, set, body }
                } else {
                    Pred::Exists { var, set, body }
                }
            }
            Pred::Subst { body, var, with: w } => Pred::Subst {
                body: if var == v { body.clone() } else { p(body) },
                var: var.clone(),
                with: t(w),
            },
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(i) => write!(f, "{}", atom_name(*i)),
            Term::Num(n) => write!(f, "{n}"),
            Term::Var(x) => write!(f, "{x}"),
            Term::Bottom(t) => write!(f, "⊥_{t}"),
            Term::EmptySet(_) => write!(f, "{{}}"),
            Term::Pack(a) => write!(f, "{{{a}}}"),
            Term::Unpack(a) => write!(f, "~({a})"),
            Term::Maplet(a, b) => write!(f, "({a} ↦ {b})"),
            Term::Pow(a) => write!(f, "pow({a})"),
            Term::Cross(a, b) => write!(f, "({a} × {b})"),
            Term::Choice(a) => write!(f, "choice({a})"),
            Term::Card(a) => write!(f, "card({a})"),
            Term::Union(a, b) => write!(f, "({a}, {b})"),
            Term::Compr { var, set, body } => write!(f, "{{{var} | {var} ∈ {set} ∧ {body}}}"),
            Term::Guard(g, e) => write!(f, "({g} ↣ {e})"),
            Term::Subst { body, var, with } => write!(f, "({body})[{with}/{var}]"),
            Term::Big => write!(f, "BIG"),
        }
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::True => write!(f, "true"),
            Pred::False => write!(f, "false"),
            Pred::Eq(a, b) => write!(f, "{a} = {b}"),
            Pred::Mem(a, b) => write!(f, "{a} ∈ {b}"),
            Pred::Incl(a, b) => write!(f, "{a} : {b}"),
            Pred::Element(a) => write!(f, "element({a})"),
            Pred::Infinite(a) => write!(f, "infinite({a})"),
            Pred::Not(p) => write!(f, "¬({p})"),
            Pred::And(a, b) => write!(f, "({a} ∧ {b})"),
            Pred::Or(a, b) => write!(f, "({a} ∨ {b})"),
            Pred::Forall { var, set, body } => write!(f, "(∀{var} • {var} ∈ {set} ⇒ {body})"),
            Pred::Exists { var, set, body } => write!(f, "(∃{var} • {var} ∈ {set} ∧ {body})"),
            Pred::Subst { body, var, with } => write!(f, "({body})[{with}/{var}]"),
        }
    }
}
