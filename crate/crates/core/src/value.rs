use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bunch::Bunch;
use crate::types::{GivenSet, TypeTag};

/// One elementary inhabitant of a type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Int(i64),
    Char(char),
    Str(String),
    Bool(bool),
    Rat(BigRational),
    Given { set: Arc<GivenSet>, index: usize },
    Pair(Box<Value>, Box<Value>),
    /// Contents are always a proper bunch.
    Set(Bunch),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn str(s: impl Into<String>) -> Value {
        Value::Str(s.into())
    }

    pub fn rat(n: i64, d: i64) -> Value {
        Value::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn type_of(&self) -> TypeTag {
        match self {
            Value::Int(_) => TypeTag::Int,
            Value::Char(_) => TypeTag::Char,
            Value::Str(_) => TypeTag::Str,
            Value::Bool(_) => TypeTag::Bool,
            Value::Rat(_) => TypeTag::Rat,
            Value::Given { set, .. } => TypeTag::Given(set.clone()),
            Value::Pair(a, b) => TypeTag::pair(a.type_of(), b.type_of()),
            Value::Set(b) => TypeTag::set(b.type_tag().clone()),
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&Bunch> {
        match self {
            Value::Set(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Promote an integer to a rational; rationals pass through.
    pub fn to_rat(&self) -> Option<BigRational> {
        match self {
            Value::Int(n) => Some(BigRational::from_integer(BigInt::from(*n))),
            Value::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Int(_) => 0,
            Value::Char(_) => 1,
            Value::Str(_) => 2,
            Value::Bool(_) => 3,
            Value::Rat(_) => 4,
            Value::Given { .. } => 5,
            Value::Pair(..) => 6,
            Value::Set(_) => 7,
        }
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a.cmp(b),
            (Value::Char(a), Value::Char(b)) => a.cmp(b),
            (Value::Str(a), Value::Str(b)) => a.cmp(b),
            (Value::Bool(a), Value::Bool(b)) => a.cmp(b),
            (Value::Rat(a), Value::Rat(b)) => a.cmp(b),
            (Value::Given { set: s, index: i }, Value::Given { set: t, index: j }) => {
                s.name.cmp(&t.name).then(i.cmp(j))
            }
            (Value::Pair(a1, b1), Value::Pair(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
            (Value::Set(a), Value::Set(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn fmt_rat(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() || r.numer().is_zero() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Char(c) => write!(f, "`{c}`"),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::Bool(true) => write!(f, "T"),
            Value::Bool(false) => write!(f, "F"),
            Value::Rat(r) => fmt_rat(r, f),
            Value::Given { set, index } => write!(f, "{}", set.carrier[*index]),
            Value::Pair(a, b) => {
                // maplet is left-associative, so only a nested right pair needs brackets
                write!(f, "{a} |-> ")?;
                if matches!(**b, Value::Pair(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Value::Set(b) => {
                write!(f, "{{")?;
                for (i, v) in b.elems().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}
