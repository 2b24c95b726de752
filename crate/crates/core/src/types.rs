//! The finite type universe and bounded enumeration of its inhabitants.

use std::fmt;
use std::sync::Arc;

use crate::bunch::Bunch;
use crate::error::{Error, Result};
use crate::value::Value;

/// A declared basic set: a name and an ordered, duplicate-free carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GivenSet {
    pub name: String,
    pub carrier: Vec<String>,
}

impl GivenSet {
    pub fn new(name: impl Into<String>, carrier: Vec<String>) -> Result<Arc<Self>> {
        let name = name.into();
        if carrier.is_empty() {
            return Err(Error::Type(format!("given set {name} has an empty carrier")));
        }
        for (i, a) in carrier.iter().enumerate() {
            if carrier[..i].contains(a) {
                return Err(Error::Type(format!("given set {name} repeats atom {a}")));
            }
        }
        Ok(Arc::new(GivenSet { name, carrier }))
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.carrier.iter().position(|a| a == atom)
    }

    pub fn atom(self: &Arc<Self>, atom: &str) -> Result<Value> {
        self.index_of(atom)
            .map(|index| Value::Given {
                set: self.clone(),
                index,
            })
            .ok_or_else(|| Error::Type(format!("{atom} is not a member of {}", self.name)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeTag {
    Given(Arc<GivenSet>),
    Int,
    Char,
    Str,
    Bool,
    /// Exact rationals; only produced by expectation evaluation.
    Rat,
    Pair(Box<TypeTag>, Box<TypeTag>),
    Set(Box<TypeTag>),
}

impl TypeTag {
    pub fn set(inner: TypeTag) -> Self {
        TypeTag::Set(Box::new(inner))
    }

    pub fn pair(l: TypeTag, r: TypeTag) -> Self {
        TypeTag::Pair(Box::new(l), Box::new(r))
    }

    /// The element type of a set type.
    pub fn inner(&self) -> Result<&TypeTag> {
        match self {
            TypeTag::Set(t) => Ok(t),
            other => Err(Error::mismatch("SET(_)", other)),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, TypeTag::Int | TypeTag::Rat)
    }

    /// Every inhabitant, in canonical order, within `bounds`.
    pub fn enumerate(&self, bounds: &EnumBounds) -> Result<Vec<Value>> {
        let out = match self {
            TypeTag::Given(g) => (0..g.carrier.len())
                .map(|index| Value::Given {
                    set: g.clone(),
                    index,
                })
                .collect(),
            TypeTag::Bool => vec![Value::Bool(false), Value::Bool(true)],
            TypeTag::Int => match bounds.int_range {
                Some((lo, hi)) => (lo..=hi).map(Value::Int).collect(),
                None => return Err(Error::Enumeration("INT without a declared range".into())),
            },
            TypeTag::Char => match &bounds.chars {
                Some(cs) => {
                    let mut cs = cs.clone();
                    cs.sort();
                    cs.dedup();
                    cs.into_iter().map(Value::Char).collect()
                }
                None => return Err(Error::Enumeration("CHAR without a declared alphabet".into())),
            },
            TypeTag::Str => return Err(Error::Enumeration("STRING".into())),
            TypeTag::Rat => return Err(Error::Enumeration("RAT".into())),
            TypeTag::Pair(l, r) => {
                let ls = l.enumerate(bounds)?;
                let rs = r.enumerate(bounds)?;
                bounds.check(self, ls.len().saturating_mul(rs.len()))?;
                let mut out = Vec::with_capacity(ls.len() * rs.len());
                for a in &ls {
                    for b in &rs {
                        out.push(Value::pair(a.clone(), b.clone()));
                    }
                }
                out
            }
            TypeTag::Set(inner) => {
                let elems = inner.enumerate(bounds)?;
                if elems.len() >= usize::BITS as usize - 1 {
                    return Err(Error::Enumeration(format!("{self}: powerset too large")));
                }
                bounds.check(self, 1usize << elems.len())?;
                let mut out = Vec::with_capacity(1 << elems.len());
                for mask in 0u64..(1u64 << elems.len()) {
                    let chosen = elems
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, v)| v.clone());
                    let b = Bunch::from_values_unchecked((**inner).clone(), chosen);
                    out.push(Value::Set(b));
                }
                out.sort();
                out
            }
        };
        bounds.check(self, out.len())?;
        Ok(out)
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTag::Given(g) => write!(f, "{}", g.name),
            TypeTag::Int => write!(f, "INT"),
            TypeTag::Char => write!(f, "CHAR"),
            TypeTag::Str => write!(f, "STRING"),
            TypeTag::Bool => write!(f, "BOOL"),
            TypeTag::Rat => write!(f, "RAT"),
            TypeTag::Pair(l, r) => write!(f, "PAIR({l},{r})"),
            TypeTag::Set(t) => write!(f, "SET({t})"),
        }
    }
}

/// Limits for turning a type into a finite list of values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumBounds {
    pub int_range: Option<(i64, i64)>,
    pub chars: Option<Vec<char>>,
    /// Largest enumeration allowed for any single type.
    pub max: usize,
}

pub const DEFAULT_MAX_ENUM: usize = 1 << 16;

impl Default for EnumBounds {
    fn default() -> Self {
        EnumBounds {
            int_range: None,
            chars: None,
            max: DEFAULT_MAX_ENUM,
        }
    }
}

impl EnumBounds {
    /// Defaults, with the cap taken from `BT_MAX_ENUM` when set.
    pub fn from_env() -> Self {
        let max = std::env::var("BT_MAX_ENUM")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_ENUM);
        EnumBounds {
            max,
            ..Default::default()
        }
    }

    pub fn with_int_range(mut self, lo: i64, hi: i64) -> Self {
        self.int_range = Some((lo, hi));
        self
    }

    fn check(&self, t: &TypeTag, n: usize) -> Result<()> {
        if n > self.max {
            Err(Error::Enumeration(format!(
                "{t}: {n} values exceed the cap of {}",
                self.max
            )))
        } else {
            Ok(())
        }
    }
}
