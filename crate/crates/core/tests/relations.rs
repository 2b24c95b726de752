use std::collections::BTreeMap;

use bunch_core::relations::{apply, big_lambda, compose, iterate_rel, lambda_ext, relation, wholistic_apply};
use bunch_core::syntax::{parse_expr, ParseCtx};
use bunch_core::{Bunch, EnumBounds, Env, Evaluator, TypeTag, Value};
use proptest::prelude::*;

fn int_rel(pairs: &[(i64, i64)]) -> Bunch {
    relation(
        TypeTag::Int,
        TypeTag::Int,
        pairs.iter().map(|(a, b)| (Value::Int(*a), Value::Int(*b))),
    )
    .unwrap()
}

/// One step of `F.f = λn • if n = 0 then 1 else n * f(n-1) end` over `0..=6`.
fn factorial_step(ev: &Evaluator, f: &Bunch) -> Bunch {
    let body = parse_expr("if n = 0 then 1 else n * f(n - 1) end", &ParseCtx::default()).unwrap();
    let domain: Vec<Value> = (0..=6).map(Value::Int).collect();
    lambda_ext(&domain, &TypeTag::Int, &TypeTag::Int, |n| {
        let mut env = Env::new();
        env.insert("f", f.clone());
        env.insert("n", Bunch::elem(n.clone()));
        ev.eval(&body, &env)
    })
    .unwrap()
}

fn factorial(n: i64) -> i64 {
    (1..=n).product()
}

#[test]
fn factorial_chain() {
    let ev = Evaluator::default();
    let empty = int_rel(&[]);
    let mut chain = vec![empty];
    for _ in 0..7 {
        let next = factorial_step(&ev, chain.last().unwrap());
        chain.push(next);
    }
    assert_eq!(chain[1], int_rel(&[(0, 1)]));
    assert_eq!(chain[2], int_rel(&[(0, 1), (1, 1)]));
    let fact7 = &chain[7];
    for n in 0..=6 {
        assert_eq!(apply(fact7, &Bunch::int(n)).unwrap(), Bunch::int(factorial(n)), "fact7({n})");
    }
    for n in [-1, 7, 20] {
        assert!(apply(fact7, &Bunch::int(n)).unwrap().is_null(), "fact7({n})");
    }
    // The chain is stable after seven steps.
    assert_eq!(&factorial_step(&ev, fact7), fact7);
}

#[test]
fn application() {
    let empty = int_rel(&[]);
    assert!(apply(&empty, &Bunch::int(3)).unwrap().is_null());
    let f = int_rel(&[(0, 1), (1, 1)]);
    assert_eq!(apply(&f, &Bunch::int(2 - 1)).unwrap(), Bunch::int(1));
    assert!(apply(&Bunch::improper(f.type_tag().clone()), &Bunch::int(0)).unwrap().is_improper());
    assert!(apply(&f, &Bunch::improper(TypeTag::Int)).unwrap().is_improper());
}

#[test]
fn lambda_over_a_domain() {
    let d = [Value::Int(0)];
    let r = lambda_ext(&d, &TypeTag::Int, &TypeTag::Int, |x| {
        let n = x.as_int().unwrap();
        Ok(Bunch::ints([n, n + 1]))
    })
    .unwrap();
    assert_eq!(r, int_rel(&[(0, 0), (0, 1)]));
}

#[test]
fn composition_and_iteration() {
    assert_eq!(compose(&int_rel(&[(1, 2)]), &int_rel(&[(2, 3)])).unwrap(), int_rel(&[(1, 3)]));
    let f = int_rel(&[(1, 2), (2, 3), (3, 1)]);
    assert_eq!(iterate_rel(&f, 2).unwrap(), compose(&f, &f).unwrap());
    assert_eq!(iterate_rel(&f, 0).unwrap(), int_rel(&[(1, 1), (2, 2), (3, 3)]));
}

#[test]
fn wholistic() {
    let ev = Evaluator::new(EnumBounds::default().with_int_range(0, 3));
    let e = parse_expr("(Lambda X :: {X+4}).(1,2)", &ParseCtx::default()).unwrap();
    assert_eq!(ev.eval(&e, &Env::new()).unwrap(), Bunch::ints([5, 6]).pack());
    let bounds = EnumBounds::default().with_int_range(0, 3);
    let plus4 = big_lambda(&TypeTag::Int, &TypeTag::Int, &bounds, |x| {
        Ok(Bunch::lift_unary(TypeTag::Int, x, |v| Some(Value::Int(v.as_int()? + 4))))
    })
    .unwrap();
    assert_eq!(wholistic_apply(&plus4, &Bunch::ints([1, 2])).unwrap(), Bunch::ints([5, 6]));
    assert!(wholistic_apply(&plus4, &Bunch::null(TypeTag::Int)).unwrap().is_null());
}

fn small_rel() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0i64..4, 0i64..4), 0..6)
}

fn small_set() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..4, 0..4)
}

/// Image of `xs` under a maplet list, computed directly.
fn image(pairs: &[(i64, i64)], xs: &[i64]) -> Bunch {
    Bunch::ints(pairs.iter().filter(|(a, _)| xs.contains(a)).map(|(_, b)| *b))
}

proptest! {
    #[test]
    fn application_distributes(f in small_rel(), g in small_rel(), xs in small_set(), ys in small_set()) {
        let (fr, gr) = (int_rel(&f), int_rel(&g));
        let x = Bunch::ints(xs.clone());
        let y = Bunch::ints(ys.clone());
        prop_assert_eq!(
            apply(&fr.union(&gr).unwrap(), &x).unwrap(),
            apply(&fr, &x).unwrap().union(&apply(&gr, &x).unwrap()).unwrap()
        );
        prop_assert_eq!(
            apply(&fr, &x.union(&y).unwrap()).unwrap(),
            apply(&fr, &x).unwrap().union(&apply(&fr, &y).unwrap()).unwrap()
        );
        prop_assert_eq!(apply(&fr, &x).unwrap(), image(&f, &xs));
    }

    #[test]
    fn deterministic_application_is_sound(f in small_rel(), x in 0i64..4) {
        let fr = int_rel(&f);
        let y = apply(&fr, &Bunch::int(x)).unwrap();
        if let Some(v) = y.as_element() {
            let outs: Vec<_> = f.iter().filter(|(a, _)| *a == x).map(|(_, b)| *b).collect();
            prop_assert!(outs.iter().all(|b| Value::Int(*b) == *v));
            prop_assert!(!outs.is_empty());
        }
    }

    #[test]
    fn iterated_wholistic_application(f in small_rel(), xs in small_set(), n in 1usize..5) {
        // f as a set-to-set map: fX = image of X.
        let bounds = EnumBounds::default().with_int_range(0, 3);
        let lifted = big_lambda(&TypeTag::Int, &TypeTag::Int, &bounds, |x| {
            let v: Vec<i64> = x.elems().iter().map(|v| v.as_int().unwrap()).collect();
            Ok(image(&f, &v))
        }).unwrap();
        let x = Bunch::ints(xs.clone());
        let mut step = x.clone();
        for _ in 0..n {
            step = wholistic_apply(&lifted, &step).unwrap();
        }
        let fn_ = iterate_rel(&lifted, n).unwrap();
        prop_assert_eq!(wholistic_apply(&fn_, &x).unwrap(), step);
    }

    #[test]
    fn substitution_matches_big_lambda(k in 0i64..3, xs in small_set()) {
        // (ΛX • X + k).D = D + k
        let ev = Evaluator::new(EnumBounds::default().with_int_range(0, 3));
        let body = parse_expr("X + k", &ParseCtx::default()).unwrap();
        let mut base = Env::new();
        base.insert("k", Bunch::int(k));
        let bounds = EnumBounds::default().with_int_range(0, 3);
        let f = big_lambda(&TypeTag::Int, &TypeTag::Int, &bounds, |x| ev.eval(&body, &base.bind("X", x.clone()))).unwrap();
        let d = Bunch::ints(xs.clone());
        let direct = ev.eval(&body, &base.bind("X", d.clone())).unwrap();
        prop_assert_eq!(wholistic_apply(&f, &d).unwrap(), direct);
    }
}

#[test]
fn identity_big_lambda() {
    let bounds = EnumBounds::default().with_int_range(0, 2);
    let id = big_lambda(&TypeTag::Int, &TypeTag::Int, &bounds, |x| Ok(x.clone())).unwrap();
    let mut seen = BTreeMap::new();
    for d in TypeTag::set(TypeTag::Int).enumerate(&bounds).unwrap() {
        let contents = d.as_set().unwrap().clone();
        seen.insert(contents.to_string(), wholistic_apply(&id, &contents).unwrap() == contents);
    }
    assert_eq!(seen.len(), 8);
    assert!(seen.values().all(|ok| *ok));
}
