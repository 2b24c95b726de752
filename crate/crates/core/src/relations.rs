//! Functions as relations: sets of maplets, possibly non-deterministic.

use std::collections::BTreeSet;

use crate::bunch::Bunch;
use crate::error::{Error, Result};
use crate::types::{EnumBounds, TypeTag};
use crate::value::Value;

/// Split `SET(PAIR(T,U))` into `(T, U)`.
pub fn relation_types(ty: &TypeTag) -> Result<(&TypeTag, &TypeTag)> {
    match ty {
        TypeTag::Set(inner) => match &**inner {
            TypeTag::Pair(l, r) => Ok((l, r)),
            other => Err(Error::mismatch("PAIR(_,_)", other)),
        },
        other => Err(Error::mismatch("SET(PAIR(_,_))", other)),
    }
}

fn maplets(rel: &Value) -> impl Iterator<Item = (&Value, &Value)> {
    rel.as_set()
        .into_iter()
        .flat_map(|b| b.elems().iter())
        .filter_map(Value::as_pair)
}

/// Standard application `F(A)`: strict in ⊥, otherwise every `b` with `a↦b` in some `f:F` and `a:A`.
pub fn apply(f: &Bunch, a: &Bunch) -> Result<Bunch> {
    let (dom, ran) = relation_types(f.type_tag())?;
    if dom != a.type_tag() {
        return Err(Error::mismatch(dom, a.type_tag()));
    }
    if f.is_improper() || a.is_improper() {
        return Ok(Bunch::improper(ran.clone()));
    }
    let mut out = BTreeSet::new();
    for rel in f.elems() {
        for (x, y) in maplets(rel) {
            if a.elems().contains(x) {
                out.insert(y.clone());
            }
        }
    }
    Bunch::from_values(ran.clone(), out)
}

/// Wholistic application `f.X = ~f({X})`.
pub fn wholistic_apply(f: &Bunch, x: &Bunch) -> Result<Bunch> {
    apply(f, &x.pack())?.unpack()
}

/// `λx • E` over an explicit domain: one relation element holding `a↦b` for each `b : body(a)`.
pub fn lambda_ext<'v>(
    domain: impl IntoIterator<Item = &'v Value>,
    dom_ty: &TypeTag,
    ran_ty: &TypeTag,
    mut body: impl FnMut(&Value) -> Result<Bunch>,
) -> Result<Bunch> {
    let pair_ty = TypeTag::pair(dom_ty.clone(), ran_ty.clone());
    let mut pairs = BTreeSet::new();
    for a in domain {
        let b = body(a)?;
        if b.type_tag() != ran_ty {
            return Err(Error::mismatch(ran_ty, b.type_tag()));
        }
        if b.is_improper() {
            return Ok(Bunch::improper(TypeTag::set(pair_ty)));
        }
        for v in b.elems() {
            pairs.insert(Value::pair(a.clone(), v.clone()));
        }
    }
    Ok(Bunch::from_values(pair_ty, pairs)?.pack())
}

/// `ΛX • E` realised over every subset of `dom_ty`: pairs `z ↦ {body(~z)}`.
pub fn big_lambda(
    dom_ty: &TypeTag,
    ran_ty: &TypeTag,
    bounds: &EnumBounds,
    mut body: impl FnMut(&Bunch) -> Result<Bunch>,
) -> Result<Bunch> {
    let set_ty = TypeTag::set(dom_ty.clone());
    let subsets = set_ty.enumerate(bounds)?;
    lambda_ext(&subsets, &set_ty, &TypeTag::set(ran_ty.clone()), |z| {
        let contents = z.as_set().expect("enumerated subsets are sets");
        Ok(body(contents)?.pack())
    })
}

fn compose_elems(f: &Value, g: &Value, pair_ty: &TypeTag) -> Value {
    let mut out = BTreeSet::new();
    for (a, b) in maplets(f) {
        for (b2, c) in maplets(g) {
            if b == b2 {
                out.insert(Value::pair(a.clone(), c.clone()));
            }
        }
    }
    Value::Set(Bunch::from_values_unchecked(pair_ty.clone(), out))
}

/// Relational composition `f ; g`, lifted over relation bunches.
pub fn compose(f: &Bunch, g: &Bunch) -> Result<Bunch> {
    let (a, b) = relation_types(f.type_tag())?;
    let (b2, c) = relation_types(g.type_tag())?;
    if b != b2 {
        return Err(Error::mismatch(b, b2));
    }
    let pair_ty = TypeTag::pair(a.clone(), c.clone());
    let ty = TypeTag::set(pair_ty.clone());
    Ok(Bunch::lift_binary(ty, f, g, |x, y| {
        Some(compose_elems(x, y, &pair_ty))
    }))
}

/// The identity relation over the left components of `f`.
pub fn identity_on_domain(f: &Bunch) -> Result<Bunch> {
    let (a, _) = relation_types(f.type_tag())?;
    let pair_ty = TypeTag::pair(a.clone(), a.clone());
    if f.is_improper() {
        return Ok(Bunch::improper(TypeTag::set(pair_ty)));
    }
    let mut pairs = BTreeSet::new();
    for rel in f.elems() {
        for (x, _) in maplets(rel) {
            pairs.insert(Value::pair(x.clone(), x.clone()));
        }
    }
    Ok(Bunch::from_values(pair_ty, pairs)?.pack())
}

/// `fⁿ`; `n = 0` gives the identity over `f`'s domain side.
pub fn iterate_rel(f: &Bunch, n: usize) -> Result<Bunch> {
    if n == 0 {
        let (a, b) = relation_types(f.type_tag())?;
        if a != b {
            return Err(Error::mismatch(a, b));
        }
        return identity_on_domain(f);
    }
    let mut acc = f.clone();
    for _ in 1..n {
        acc = compose(&acc, f)?;
    }
    Ok(acc)
}

/// A relation element from explicit maplets.
pub fn relation(dom: TypeTag, ran: TypeTag, pairs: impl IntoIterator<Item = (Value, Value)>) -> Result<Bunch> {
    let pair_ty = TypeTag::pair(dom, ran);
    Ok(Bunch::from_values(pair_ty, pairs.into_iter().map(|(a, b)| Value::pair(a, b)))?.pack())
}
