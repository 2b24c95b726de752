//! Objects of the host set theory: atoms of one given carrier, the
//! distinguished κ atom, numbers (for `card`), pairs and finite sets.

use std::collections::BTreeSet;
use std::fmt;

/// A finite set in the host universe. Every denotation is one of these.
pub type SemSet = BTreeSet<SemVal>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemVal {
    Atom(u8),
    /// κ of the given carrier; only present in the improper extension.
    Kappa,
    Num(u64),
    Pair(Box<SemVal>, Box<SemVal>),
    Set(SemSet),
}

impl SemVal {
    pub fn pair(a: SemVal, b: SemVal) -> SemVal {
        SemVal::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_set(&self) -> Option<&SemSet> {
        match self {
            SemVal::Set(s) => Some(s),
            _ => None,
        }
    }
}

/// Source-language types: the given set `T`, its power sets and products,
/// and the numbers produced by `card`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ty {
    Given,
    Num,
    Pow(Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn pow(t: Ty) -> Ty {
        Ty::Pow(Box::new(t))
    }

    pub fn prod(a: Ty, b: Ty) -> Ty {
        Ty::Prod(Box::new(a), Box::new(b))
    }

    /// Number of type constructors on the longest path.
    pub fn depth(&self) -> usize {
        match self {
            Ty::Given | Ty::Num => 0,
            Ty::Pow(t) => 1 + t.depth(),
            Ty::Prod(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn elem(&self) -> Option<&Ty> {
        match self {
            Ty::Pow(t) => Some(t),
            _ => None,
        }
    }

    /// Every type over `T` of depth at most `d`, smallest first.
    pub fn up_to(d: usize) -> Vec<Ty> {
        let mut out = vec![Ty::Given];
        for _ in 0..d {
            let prev = out.clone();
            for a in &prev {
                let p = Ty::pow(a.clone());
                if !out.contains(&p) {
                    out.push(p);
                }
                for b in &prev {
                    let q = Ty::prod(a.clone(), b.clone());
                    if !out.contains(&q) {
                        out.push(q);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Given => write!(f, "T"),
            Ty::Num => write!(f, "NAT"),
            Ty::Pow(t) => write!(f, "pow({t})"),
            Ty::Prod(a, b) => {
                let wrap = |t: &Ty| matches!(t, Ty::Prod(..));
                if wrap(a) {
                    write!(f, "({a})")?
                } else {
                    write!(f, "{a}")?
                }
                write!(f, "×")?;
                if wrap(b) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

pub fn atom_name(i: u8) -> char {
    (b'a' + i) as char
}

impl fmt::Display for SemVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemVal::Atom(i) => write!(f, "{}", atom_name(*i)),
            SemVal::Kappa => write!(f, "κ"),
            SemVal::Num(n) => write!(f, "{n}"),
            SemVal::Pair(a, b) => {
                if matches!(**b, SemVal::Pair(..)) {
                    write!(f, "{a}↦({b})")
                } else {
                    write!(f, "{a}↦{b}")
                }
            }
            SemVal::Set(s) => write!(f, "{}", Shown(s)),
        }
    }
}

/// Display adapter for a `SemSet`.
pub struct Shown<'a>(pub &'a SemSet);

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub fn powerset(s: &SemSet) -> SemSet {
    let items: Vec<&SemVal> = s.iter().collect();
    assert!(items.len() < 24, "powerset of {} elements", items.len());
    (0u32..1 << items.len())
        .map(|mask| {
            SemVal::Set(
                items
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| (*v).clone())
                    .collect(),
            )
        })
        .collect()
}

pub fn cross(a: &SemSet, b: &SemSet) -> SemSet {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| SemVal::pair(x.clone(), y.clone())))
        .collect()
}

/// The carrier of the given set `T` (without κ).
pub fn atoms(n: usize) -> SemSet {
    (0..n as u8).map(SemVal::Atom).collect()
}

/// Proper elements of `ty` over a carrier of `n` atoms.
pub fn elements(ty: &Ty, n: usize) -> SemSet {
    match ty {
        Ty::Given => atoms(n),
        Ty::Num => panic!("NAT is not enumerable"),
        Ty::Pow(t) => powerset(&elements(t, n)),
        Ty::Prod(a, b) => cross(&elements(a, n), &elements(b, n)),
    }
}

/// κ of `ty`: structural over products, and ⟦⊥⟧ of the element type for
/// power sets.
pub fn kappa(ty: &Ty, n: usize) -> SemVal {
    match ty {
        Ty::Given => SemVal::Kappa,
        Ty::Num => panic!("NAT has no improper bunch in this model"),
        Ty::Prod(a, b) => SemVal::pair(kappa(a, n), kappa(b, n)),
        Ty::Pow(t) => SemVal::Set(bottom(t, n)),
    }
}

/// ⟦⊥_ty⟧: the maximal κ-extended carrier.
pub fn bottom(ty: &Ty, n: usize) -> SemSet {
    match ty {
        Ty::Given => {
            let mut s = atoms(n);
            s.insert(SemVal::Kappa);
            s
        }
        Ty::Num => panic!("NAT has no improper bunch in this model"),
        Ty::Prod(a, b) => cross(&bottom(a, n), &bottom(b, n)),
        Ty::Pow(t) => powerset(&bottom(t, n)),
    }
}

/// 𝒟(ty): the denotations of every proper bunch of `ty`, plus ⟦⊥_ty⟧ when
/// `improper` is set.
pub fn denotations(ty: &Ty, n: usize, improper: bool) -> Vec<SemSet> {
    let mut out: Vec<SemSet> = powerset(&elements(ty, n))
        .into_iter()
        .map(|v| match v {
            SemVal::Set(s) => s,
            _ => unreachable!(),
        })
        .collect();
    if improper {
        out.push(bottom(ty, n));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_enumeration() {
        assert_eq!(Ty::up_to(0), vec![Ty::Given]);
        let one = Ty::up_to(1);
        assert_eq!(one.len(), 3);
        assert!(Ty::up_to(2).iter().all(|t| t.depth() <= 2));
    }

    #[test]
    fn bottoms_are_maximal() {
        let t = Ty::pow(Ty::prod(Ty::Given, Ty::Given));
        let b = bottom(&t, 2);
        assert_eq!(b.len(), 1 << 9);
        assert!(b.contains(&kappa(&t, 2)));
        assert!(elements(&t, 2).is_subset(&b));
    }
}
