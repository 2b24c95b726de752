//! Bunches and the primitive bunch operators.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::types::TypeTag;
use crate::value::Value;

static NO_ELEMS: BTreeSet<Value> = BTreeSet::new();

/// A homogeneous finite collection of values, or the improper bunch of a type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bunch {
    Proper { ty: TypeTag, elems: BTreeSet<Value> },
    Improper(TypeTag),
}

impl Bunch {
    pub fn null(ty: TypeTag) -> Self {
        Bunch::Proper {
            ty,
            elems: BTreeSet::new(),
        }
    }

    pub fn improper(ty: TypeTag) -> Self {
        Bunch::Improper(ty)
    }

    pub fn elem(v: Value) -> Self {
        let ty = v.type_of();
        Bunch::Proper {
            ty,
            elems: BTreeSet::from([v]),
        }
    }

    pub fn int(n: i64) -> Self {
        Bunch::elem(Value::Int(n))
    }

    pub fn ints(ns: impl IntoIterator<Item = i64>) -> Self {
        Bunch::from_values_unchecked(TypeTag::Int, ns.into_iter().map(Value::Int))
    }

    /// Build a proper bunch, checking that every value has type `ty`.
    pub fn from_values(ty: TypeTag, vals: impl IntoIterator<Item = Value>) -> Result<Self> {
        let mut elems = BTreeSet::new();
        for v in vals {
            let vt = v.type_of();
            if vt != ty {
                return Err(Error::mismatch(&ty, vt));
            }
            elems.insert(v);
        }
        Ok(Bunch::Proper { ty, elems })
    }

    pub(crate) fn from_values_unchecked(ty: TypeTag, vals: impl IntoIterator<Item = Value>) -> Self {
        Bunch::Proper {
            ty,
            elems: vals.into_iter().collect(),
        }
    }

    pub fn type_tag(&self) -> &TypeTag {
        match self {
            Bunch::Proper { ty, .. } | Bunch::Improper(ty) => ty,
        }
    }

    /// Elements of a proper bunch; empty for the improper bunch.
    pub fn elems(&self) -> &BTreeSet<Value> {
        match self {
            Bunch::Proper { elems, .. } => elems,
            Bunch::Improper(_) => &NO_ELEMS,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Bunch::Proper { elems, .. } if elems.is_empty())
    }

    pub fn is_improper(&self) -> bool {
        matches!(self, Bunch::Improper(_))
    }

    pub fn is_proper(&self) -> bool {
        !self.is_improper()
    }

    /// The single value of an elementary bunch.
    pub fn as_element(&self) -> Option<&Value> {
        match self {
            Bunch::Proper { elems, .. } if elems.len() == 1 => elems.iter().next(),
            _ => None,
        }
    }

    fn same_type(&self, other: &Bunch) -> Result<()> {
        if self.type_tag() == other.type_tag() {
            Ok(())
        } else {
            Err(Error::mismatch(self.type_tag(), other.type_tag()))
        }
    }

    /// `A , B`
    pub fn union(&self, other: &Bunch) -> Result<Bunch> {
        self.same_type(other)?;
        Ok(match (self, other) {
            (Bunch::Improper(t), _) | (_, Bunch::Improper(t)) => Bunch::Improper(t.clone()),
            (Bunch::Proper { ty, elems: a }, Bunch::Proper { elems: b, .. }) => Bunch::Proper {
                ty: ty.clone(),
                elems: a.union(b).cloned().collect(),
            },
        })
    }

    /// `A ' B`
    pub fn intersect(&self, other: &Bunch) -> Result<Bunch> {
        self.same_type(other)?;
        Ok(match (self, other) {
            (Bunch::Improper(t), _) | (_, Bunch::Improper(t)) => Bunch::Improper(t.clone()),
            (Bunch::Proper { ty, elems: a }, Bunch::Proper { elems: b, .. }) => Bunch::Proper {
                ty: ty.clone(),
                elems: a.intersection(b).cloned().collect(),
            },
        })
    }

    /// `A ∖ B`
    pub fn diff(&self, other: &Bunch) -> Result<Bunch> {
        self.same_type(other)?;
        Ok(match (self, other) {
            (Bunch::Improper(t), _) | (_, Bunch::Improper(t)) => Bunch::Improper(t.clone()),
            (Bunch::Proper { ty, elems: a }, Bunch::Proper { elems: b, .. }) => Bunch::Proper {
                ty: ty.clone(),
                elems: a.difference(b).cloned().collect(),
            },
        })
    }

    /// `A : B`
    pub fn sub_bunch(&self, other: &Bunch) -> Result<bool> {
        self.same_type(other)?;
        Ok(match (self, other) {
            (_, Bunch::Improper(_)) => true,
            (Bunch::Improper(_), _) => false,
            (Bunch::Proper { elems: a, .. }, Bunch::Proper { elems: b, .. }) => a.is_subset(b),
        })
    }

    /// `¢A`
    pub fn cardinality(&self) -> Result<usize> {
        match self {
            Bunch::Proper { elems, .. } => Ok(elems.len()),
            Bunch::Improper(_) => Err(Error::UndefinedCardinality),
        }
    }

    /// `{A}`
    pub fn pack(&self) -> Bunch {
        match self {
            Bunch::Improper(t) => Bunch::Improper(TypeTag::set(t.clone())),
            proper => Bunch::elem(Value::Set(proper.clone())),
        }
    }

    /// Lifted `~E`: the union of the contents of every set in `E`.
    pub fn unpack(&self) -> Result<Bunch> {
        let inner = self.type_tag().inner()?.clone();
        Ok(match self {
            Bunch::Improper(_) => Bunch::Improper(inner),
            Bunch::Proper { elems, .. } => {
                let mut out = BTreeSet::new();
                for v in elems {
                    if let Value::Set(b) = v {
                        out.extend(b.elems().iter().cloned());
                    }
                }
                Bunch::Proper {
                    ty: inner,
                    elems: out,
                }
            }
        })
    }

    /// `g ↣ E`, with `E` only evaluated when `g` holds.
    pub fn guard(g: bool, ty: &TypeTag, e: impl FnOnce() -> Result<Bunch>) -> Result<Bunch> {
        if g {
            e()
        } else {
            Ok(Bunch::null(ty.clone()))
        }
    }

    /// `p ⫢ E`
    pub fn precond(p: bool, e: Bunch) -> Bunch {
        if p {
            e
        } else {
            Bunch::Improper(e.type_tag().clone())
        }
    }

    /// Lifted `A ↦ B`.
    pub fn maplet(&self, other: &Bunch) -> Bunch {
        let ty = TypeTag::pair(self.type_tag().clone(), other.type_tag().clone());
        if self.is_improper() || other.is_improper() {
            return Bunch::Improper(ty);
        }
        let mut elems = BTreeSet::new();
        for a in self.elems() {
            for b in other.elems() {
                elems.insert(Value::pair(a.clone(), b.clone()));
            }
        }
        Bunch::Proper { ty, elems }
    }

    /// Pointwise image of a partial binary operator; `None` contributes nothing.
    pub fn lift_binary(
        ty: TypeTag,
        a: &Bunch,
        b: &Bunch,
        op: impl Fn(&Value, &Value) -> Option<Value>,
    ) -> Bunch {
        if a.is_improper() || b.is_improper() {
            return Bunch::Improper(ty);
        }
        let mut elems = BTreeSet::new();
        for x in a.elems() {
            for y in b.elems() {
                if let Some(v) = op(x, y) {
                    elems.insert(v);
                }
            }
        }
        Bunch::Proper { ty, elems }
    }

    pub fn lift_unary(ty: TypeTag, a: &Bunch, op: impl Fn(&Value) -> Option<Value>) -> Bunch {
        match a {
            Bunch::Improper(_) => Bunch::Improper(ty),
            Bunch::Proper { elems, .. } => Bunch::Proper {
                ty,
                elems: elems.iter().filter_map(op).collect(),
            },
        }
    }

    /// `∮x • E` over an explicit domain: the union of `body(e)` for each `e`.
    pub fn comprehension<'v>(
        ty: &TypeTag,
        domain: impl IntoIterator<Item = &'v Value>,
        mut body: impl FnMut(&Value) -> Result<Bunch>,
    ) -> Result<Bunch> {
        let mut acc = Bunch::null(ty.clone());
        for v in domain {
            let b = body(v)?;
            acc = acc.union(&b)?;
            if acc.is_improper() {
                break;
            }
        }
        Ok(acc)
    }

    /// Lifted `E ∈ S`: every element of `E` lies in every set of `S`.
    pub fn member(&self, set: &Bunch) -> Result<bool> {
        let inner = set.type_tag().inner()?;
        if inner != self.type_tag() {
            return Err(Error::mismatch(inner, self.type_tag()));
        }
        if self.is_null() {
            return Ok(true);
        }
        if self.is_improper() || set.is_improper() {
            return Ok(false);
        }
        Ok(set.elems().iter().all(|s| match s {
            Value::Set(b) => self.elems().is_subset(b.elems()),
            _ => false,
        }))
    }

    pub fn is_atomic(&self) -> bool {
        match self {
            Bunch::Improper(_) => true,
            Bunch::Proper { elems, .. } => elems.len() <= 1,
        }
    }

    /// Re-type an INT bunch as RAT; RAT bunches pass through.
    pub fn to_rat(&self) -> Result<Bunch> {
        match self.type_tag() {
            TypeTag::Rat => Ok(self.clone()),
            TypeTag::Int => Ok(Bunch::lift_unary(TypeTag::Rat, self, |v| {
                v.to_rat().map(Value::Rat)
            })),
            other => Err(Error::mismatch("INT or RAT", other)),
        }
    }
}

impl Ord for Bunch {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bunch::Proper { elems: a, .. }, Bunch::Proper { elems: b, .. }) => {
                a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
            }
            (Bunch::Proper { .. }, Bunch::Improper(_)) => Ordering::Less,
            (Bunch::Improper(_), Bunch::Proper { .. }) => Ordering::Greater,
            (Bunch::Improper(a), Bunch::Improper(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Bunch {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bunch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bunch::Improper(t) => write!(f, "improper:{t}"),
            Bunch::Proper { ty, elems } if elems.is_empty() => write!(f, "null:{ty}"),
            Bunch::Proper { elems, .. } => {
                for (i, v) in elems.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

/// Variable bindings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    binds: BTreeMap<String, Bunch>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Bunch> {
        self.binds.get(name)
    }

    pub fn insert(&mut self, name: impl Into<String>, b: Bunch) {
        self.binds.insert(name.into(), b);
    }

    /// `ρ ⊕ (name ↝ b)`
    pub fn bind(&self, name: &str, b: Bunch) -> Env {
        let mut out = self.clone();
        out.insert(name, b);
        out
    }

    /// `ρ ⊕ σ`
    pub fn override_with(&self, other: &Env) -> Env {
        let mut out = self.clone();
        for (k, v) in &other.binds {
            out.binds.insert(k.clone(), v.clone());
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Bunch)> {
        self.binds.iter()
    }
}

impl FromIterator<(String, Bunch)> for Env {
    fn from_iter<I: IntoIterator<Item = (String, Bunch)>>(iter: I) -> Self {
        Env {
            binds: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.binds.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}
