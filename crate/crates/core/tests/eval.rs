use bunch_core::syntax::{parse_expr, parse_pred, ParseCtx};
use bunch_core::types::GivenSet;
use bunch_core::{relations, Bunch, EnumBounds, Env, Error, Evaluator, TypeTag, Value};
use proptest::prelude::*;

fn evaluator() -> Evaluator {
    Evaluator::new(EnumBounds::default().with_int_range(-4, 12))
}

fn ev(src: &str) -> String {
    let e = parse_expr(src, &ParseCtx::default()).unwrap();
    evaluator().eval(&e, &Env::new()).unwrap().to_string()
}

fn holds_in(src: &str, ctx: &ParseCtx, env: &Env) -> bool {
    let p = parse_pred(src, ctx).unwrap();
    evaluator().holds(&p, env).unwrap()
}

fn holds(src: &str) -> bool {
    holds_in(src, &ParseCtx::default(), &Env::new())
}

#[test]
fn lifted_arithmetic() {
    assert_eq!(ev("(0,1)+(2,4)"), "2,3,4,5");
    assert_eq!(ev("0,1 + 2,4"), "0,3,4");
    assert_eq!(ev("2 + 1/0"), "null:INT");
    assert_eq!(ev("1 * !!:INT"), "improper:INT");
    assert_eq!(ev("-7 / 2"), "-4");
    assert_eq!(ev("-7 mod 2"), "1");
    assert_eq!(ev("5 mod 0"), "null:INT");
}

#[test]
fn undefinedness() {
    assert!(!holds("2+3/0 = 2"));
    assert!(holds("2+3/0 /= 2"));
    assert!(holds("1/0 = 1/0"));

    let mut ctx = ParseCtx::default();
    let country = GivenSet::new("COUNTRY", vec!["france".into(), "spain".into()]).unwrap();
    let person = GivenSet::new("PERSON", vec!["felipe".into(), "louis".into()]).unwrap();
    ctx.declare_given(country.clone());
    ctx.declare_given(person.clone());
    let king_of = relations::relation(
        TypeTag::Given(country.clone()),
        TypeTag::Given(person.clone()),
        [(country.atom("spain").unwrap(), person.atom("felipe").unwrap())],
    )
    .unwrap();
    let bald = Bunch::from_values(TypeTag::Given(person.clone()), [person.atom("louis").unwrap()])
        .unwrap()
        .pack();
    let mut env = Env::new();
    env.insert("king_of", king_of);
    env.insert("bald", bald);
    assert!(holds_in("king_of(france) in bald", &ctx, &env));
    assert!(holds_in("king_of(france) = null:PERSON", &ctx, &env));
    assert!(!holds_in("king_of(spain) in bald", &ctx, &env));
}

#[test]
fn comprehension() {
    assert_eq!(ev("% x :: x : (1,2) ->> 10*x"), "10,20");
    assert_eq!(ev("% x :: x : (1,2) ->> null:INT"), "null:INT");
    assert_eq!(ev("% x :: x = 3 ->> !!:INT"), "improper:INT");
    // A false guard never evaluates its body.
    assert_eq!(ev("% x :: x : (0,1) ->> x /= 0 ->> 1/x"), "1");
}

#[test]
fn membership() {
    assert!(holds("null:INT in {1}"));
    assert!(holds("(2,3) in {1,2,3}"));
    assert!(!holds("(2,5) in {1,2,3}"));
    assert!(holds("1 in ({1,2},{1,3})"));
    assert!(!holds("2 in ({1,2},{1,3})"));
    assert!(!holds("!!:INT in {1}"));
}

#[test]
fn sets_and_packaging() {
    assert_eq!(ev("{1,2} \\/ {3}"), "{1,2,3}");
    assert_eq!(ev("{1,2} /\\ {2,3}"), "{2}");
    assert_eq!(ev("~{1,2}"), "1,2");
    assert_eq!(ev("$(1,2,3)"), "3");
    assert_eq!(ev("pow {1,2}"), "{},{1},{2},{1,2}");
    assert_eq!(ev("{null:INT}"), "{}");
    assert_eq!(ev("(1,2) ' (2,3)"), "2");
    assert_eq!(ev("(1,2,3) \\ 2"), "1,3");
    assert_eq!(ev("{(x := 1 [] x := 2) <> x}"), "{1,2}");
}

#[test]
fn annotation_required() {
    let e = parse_expr("{}", &ParseCtx::default()).unwrap();
    assert!(matches!(evaluator().eval(&e, &Env::new()), Err(Error::NeedsAnnotation(_))));
}

#[test]
fn rendering() {
    assert_eq!(ev("1 |-> 2"), "1 |-> 2");
    assert_eq!(ev("\"ab\""), "\"ab\"");
    assert_eq!(ev("`a`"), "`a`");
    assert_eq!(ev("eqb(1, 1), eqb(1, 2)"), "F,T");
    assert_eq!(ev("if 1 < 2 then 3 else 4 end"), "3");
}

#[test]
fn atomicity() {
    assert!(Bunch::int(1).is_atomic());
    assert!(!Bunch::ints([1, 2]).is_atomic());
    assert!(Bunch::improper(TypeTag::Int).is_atomic());
    assert!(Bunch::null(TypeTag::Int).is_atomic());
}

#[test]
fn cardinality_of_improper_is_an_error() {
    assert!(Bunch::improper(TypeTag::Int).cardinality().is_err());
}

fn proper() -> impl Strategy<Value = Bunch> {
    prop::collection::btree_set(-3i64..6, 0..5).prop_map(Bunch::ints)
}

fn any_bunch() -> impl Strategy<Value = Bunch> {
    prop_oneof![4 => proper(), 1 => Just(Bunch::improper(TypeTag::Int))]
}

proptest! {
    #[test]
    fn union_and_intersection_laws(a in proper(), b in proper(), c in proper()) {
        prop_assert_eq!(a.union(&b).unwrap(), b.union(&a).unwrap());
        prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
        prop_assert_eq!(a.union(&b).unwrap().union(&c).unwrap(), a.union(&b.union(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.intersect(&b.union(&c).unwrap()).unwrap(),
            a.intersect(&b).unwrap().union(&a.intersect(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.union(&b.intersect(&c).unwrap()).unwrap(),
            a.union(&b).unwrap().intersect(&a.union(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn guard_distributes(g in any::<bool>(), a in proper(), b in proper()) {
        let ty = TypeTag::Int;
        let whole = Bunch::guard(g, &ty, || a.union(&b)).unwrap();
        let parts = Bunch::guard(g, &ty, || Ok(a.clone())).unwrap()
            .union(&Bunch::guard(g, &ty, || Ok(b.clone())).unwrap()).unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn pack_unpack(a in any_bunch()) {
        prop_assert_eq!(a.pack().unpack().unwrap(), a.clone());
        if let Bunch::Proper { .. } = a {
            let s = a.pack();
            prop_assert_eq!(s.unpack().unwrap().pack(), s);
        }
    }

    #[test]
    fn sub_bunch_antisymmetry(a in any_bunch(), b in any_bunch()) {
        let both = a.sub_bunch(&b).unwrap() && b.sub_bunch(&a).unwrap();
        prop_assert_eq!(both, a == b);
    }

    #[test]
    fn improper_is_maximal_and_atomic(a in any_bunch(), b in any_bunch()) {
        let bot = Bunch::improper(TypeTag::Int);
        prop_assert!(a.sub_bunch(&bot).unwrap());
        if bot.sub_bunch(&a.union(&b).unwrap()).unwrap() {
            prop_assert!(a.is_improper() || b.is_improper());
        }
    }

    #[test]
    fn part_of_and_member_of(x in -3i64..6, e in proper(), f in proper()) {
        let xb = Bunch::int(x);
        let ef = e.union(&f).unwrap();
        prop_assert_eq!(
            xb.sub_bunch(&ef).unwrap(),
            xb.sub_bunch(&e).unwrap() || xb.sub_bunch(&f).unwrap()
        );
        let (se, sf) = (e.pack(), f.pack());
        prop_assert_eq!(
            xb.member(&se.union(&sf).unwrap()).unwrap(),
            xb.member(&se).unwrap() && xb.member(&sf).unwrap()
        );
        // Classical membership for elements.
        prop_assert_eq!(xb.member(&se).unwrap(), e.elems().contains(&Value::Int(x)));
    }

    #[test]
    fn addition_is_pointwise(a in proper(), b in proper()) {
        let env = {
            let mut env = Env::new();
            env.insert("a", a.clone());
            env.insert("b", b.clone());
            env
        };
        let e = parse_expr("a + b", &ParseCtx::default()).unwrap();
        let got = evaluator().eval(&e, &env).unwrap();
        let mut want = std::collections::BTreeSet::new();
        for x in a.elems() {
            for y in b.elems() {
                want.insert(x.as_int().unwrap() + y.as_int().unwrap());
            }
        }
        prop_assert_eq!(got, Bunch::ints(want));
    }
}
