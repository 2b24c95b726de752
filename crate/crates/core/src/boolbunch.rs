//! Five-valued boolean bunches: reified comparisons and the `∧_b` table.

use std::fmt;

use crate::bunch::Bunch;
use crate::error::{Error, Result};
use crate::types::TypeTag;
use crate::value::Value;

/// The five BOOL bunches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoolBunch {
    Null,
    True,
    False,
    Both,
    Bottom,
}

pub const ALL: [BoolBunch; 5] = [
    BoolBunch::Null,
    BoolBunch::True,
    BoolBunch::False,
    BoolBunch::Both,
    BoolBunch::Bottom,
];

impl BoolBunch {
    pub fn classify(b: &Bunch) -> Result<Self> {
        if b.type_tag() != &TypeTag::Bool {
            return Err(Error::mismatch(TypeTag::Bool, b.type_tag()));
        }
        if b.is_improper() {
            return Ok(BoolBunch::Bottom);
        }
        let t = b.elems().contains(&Value::Bool(true));
        let f = b.elems().contains(&Value::Bool(false));
        Ok(match (t, f) {
            (false, false) => BoolBunch::Null,
            (true, false) => BoolBunch::True,
            (false, true) => BoolBunch::False,
            (true, true) => BoolBunch::Both,
        })
    }

    pub fn to_bunch(self) -> Bunch {
        let vals: &[bool] = match self {
            BoolBunch::Bottom => return Bunch::improper(TypeTag::Bool),
            BoolBunch::Null => &[],
            BoolBunch::True => &[true],
            BoolBunch::False => &[false],
            BoolBunch::Both => &[true, false],
        };
        Bunch::from_values_unchecked(TypeTag::Bool, vals.iter().map(|&b| Value::Bool(b)))
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BoolBunch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoolBunch::Null => "null:BOOL",
            BoolBunch::True => "T",
            BoolBunch::False => "F",
            BoolBunch::Both => "T,F",
            BoolBunch::Bottom => "improper:BOOL",
        })
    }
}

fn reify(a: &Bunch, b: &Bunch, test: impl Fn(&Value, &Value) -> bool) -> Bunch {
    Bunch::lift_binary(TypeTag::Bool, a, b, |x, y| Some(Value::Bool(test(x, y))))
}

fn same_type(a: &Bunch, b: &Bunch) -> Result<()> {
    if a.type_tag() == b.type_tag() {
        Ok(())
    } else {
        Err(Error::mismatch(a.type_tag(), b.type_tag()))
    }
}

/// `A =_b B`
pub fn eq_b(a: &Bunch, b: &Bunch) -> Result<Bunch> {
    same_type(a, b)?;
    Ok(reify(a, b, |x, y| x == y))
}

/// `A <_b B`
pub fn lt_b(a: &Bunch, b: &Bunch) -> Result<Bunch> {
    same_type(a, b)?;
    if !a.type_tag().is_numeric() {
        return Err(Error::mismatch("INT or RAT", a.type_tag()));
    }
    Ok(reify(a, b, |x, y| x.to_rat() < y.to_rat()))
}

/// `A ∈_b S`
pub fn mem_b(a: &Bunch, s: &Bunch) -> Result<Bunch> {
    let inner = s.type_tag().inner()?;
    if inner != a.type_tag() {
        return Err(Error::mismatch(inner, a.type_tag()));
    }
    Ok(reify(a, s, |x, set| {
        set.as_set().is_some_and(|b| b.elems().contains(x))
    }))
}

use BoolBunch::{Both as TF, Bottom as Bot, False as F, Null as N, True as T};

/// Rows and columns in the order null, T, F, (T,F), ⊥.
pub const AND_TABLE: [[BoolBunch; 5]; 5] = [
    [N, N, F, N, N],
    [N, T, F, TF, Bot],
    [F, F, F, F, F],
    [N, TF, F, TF, Bot],
    [N, Bot, F, Bot, Bot],
];

pub fn and_b(a: &Bunch, b: &Bunch) -> Result<Bunch> {
    let x = BoolBunch::classify(a)?;
    let y = BoolBunch::classify(b)?;
    Ok(AND_TABLE[x.index()][y.index()].to_bunch())
}

pub fn not_b(_a: &Bunch) -> Result<Bunch> {
    Err(Error::Unsupported("¬_b has no defining table".into()))
}

pub fn or_b(_a: &Bunch, _b: &Bunch) -> Result<Bunch> {
    Err(Error::Unsupported("∨_b has no defining table".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_symmetric() {
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(AND_TABLE[i][j], AND_TABLE[j][i], "cell {i},{j}");
            }
        }
    }

    #[test]
    fn bottom_guard_fires_before_comprehension() {
        let bot = Bunch::improper(TypeTag::Int);
        let null = Bunch::null(TypeTag::Int);
        assert_eq!(BoolBunch::classify(&eq_b(&bot, &null).unwrap()).unwrap(), Bot);
        assert_eq!(BoolBunch::classify(&eq_b(&null, &bot).unwrap()).unwrap(), Bot);
    }

    #[test]
    fn elementary_equality() {
        for a in -2..3 {
            for b in -2..3 {
                let r = BoolBunch::classify(&eq_b(&Bunch::int(a), &Bunch::int(b)).unwrap()).unwrap();
                assert_eq!(r, if a == b { T } else { F });
            }
        }
    }

    #[test]
    fn classify_round_trips() {
        for v in ALL {
            assert_eq!(BoolBunch::classify(&v.to_bunch()).unwrap(), v);
        }
    }
}
