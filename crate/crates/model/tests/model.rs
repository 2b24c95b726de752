use std::collections::BTreeSet;

use bunch_model::axioms::axiom_names;
use bunch_model::sem::{self, Shown};
use bunch_model::term::var;
use bunch_model::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const N: usize = 2;

fn set(items: impl IntoIterator<Item = SemVal>) -> SemSet {
    items.into_iter().collect()
}

fn a() -> SemVal {
    SemVal::Atom(0)
}
fn b() -> SemVal {
    SemVal::Atom(1)
}

fn pow_t() -> Ty {
    Ty::pow(Ty::Given)
}

/// ρ with `x`, `y` bunches of T and `s` an element of pow(T).
fn env(x: SemSet, y: SemSet, s: SemSet) -> SemEnv {
    let mut e = SemEnv::new();
    e.bind("x", Ty::Given, x);
    e.bind("y", Ty::Given, y);
    e.bind("s", pow_t(), [SemVal::Set(s)].into());
    e
}

fn all_envs() -> Vec<SemEnv> {
    let bunches = sem::denotations(&Ty::Given, N, false);
    let mut out = Vec::new();
    for x in &bunches {
        for y in &bunches {
            for s in &bunches {
                out.push(env(x.clone(), y.clone(), s.clone()));
            }
        }
    }
    out
}

#[test]
fn constants_and_variables() {
    let m = Model::new(N);
    let e = SemEnv::new();
    assert_eq!(m.vden(&Term::Num(3), &e).unwrap(), set([SemVal::Num(3)]));
    let mut rho = SemEnv::new();
    rho.bind("x", Ty::Num, set([SemVal::Num(1), SemVal::Num(2)]));
    assert_eq!(
        m.vden(&var("x"), &rho).unwrap(),
        set([SemVal::Num(1), SemVal::Num(2)])
    );
    let over = rho.with("x", Ty::Num, set([SemVal::Num(4)]));
    assert_eq!(over.to_string(), "⦇x ↝ {4}⦈");
    assert!(matches!(
        m.vden(&var("q"), &e),
        Err(ModelError::Unbound(_))
    ));
    assert!(matches!(
        m.vden(&Term::Big, &e),
        Err(ModelError::Unsupported(_))
    ));
    assert!(matches!(
        m.holds(&Pred::Infinite(var("x")), &rho),
        Err(ModelError::Unsupported(_))
    ));
}

#[test]
fn structural_rules() {
    let m = Model::new(N);
    let rho = env(set([a(), b()]), set([b()]), set([a()]));
    // maplet of bunches is the cross product
    let pairs = m.vden(&var("x").maplet(var("y")), &rho).unwrap();
    assert_eq!(
        pairs,
        set([SemVal::pair(a(), b()), SemVal::pair(b(), b())])
    );
    // pow of the facsimile, wrapped once
    let p = m.vden(&var("s").pow(), &rho).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(p.iter().next().unwrap().as_set().unwrap().len(), 2);
    // choice of a non-empty set is a singleton, of the empty set is empty
    assert_eq!(m.vden(&var("s").choice(), &rho).unwrap(), set([a()]));
    let empty = env(set([]), set([]), set([]));
    assert!(m.vden(&var("s").choice(), &empty).unwrap().is_empty());
    // comprehension keeps x' exactly when the probe succeeds
    let c = Term::compr("z", var("x").pack(), var("z").eq(var("y")));
    assert_eq!(
        m.vden(&c, &rho).unwrap(),
        set([SemVal::Set(set([b()]))])
    );
    // guard
    let g = Term::guarded(var("y").mem(var("s")), var("x"));
    assert!(m.vden(&g, &rho).unwrap().is_empty());
    assert_eq!(m.vden(&g, &rho.with("y", Ty::Given, set([a()]))).unwrap(), set([a(), b()]));
}

#[test]
fn truth_rules() {
    let m = Model::new(N);
    let envs = all_envs();
    assert_eq!(m.tden(&Pred::True, &envs).unwrap(), envs);
    assert!(m.tden(&Pred::False, &envs).unwrap().is_empty());
    // element means a singleton denotation
    let el = m.tden(&Pred::Element(var("x")), &envs).unwrap();
    assert!(el
        .iter()
        .all(|r| r.get("x").unwrap().val.len() == 1));
    assert_eq!(el.len(), envs.len() / 2);
    // membership is inclusion in the facsimile, so null is in every set
    let none = env(set([]), set([]), set([]));
    assert!(m.holds(&var("x").mem(var("s")), &none).unwrap());
}

/// Random predicates over `x`, `y`, `s`.
fn random_pred(rng: &mut StdRng, depth: u32) -> Pred {
    let leaf = rng.gen_range(0..6);
    if depth == 0 || rng.gen_bool(0.35) {
        return match leaf {
            0 => Pred::True,
            1 => Pred::False,
            2 => var("x").eq(var("y")),
            3 => var("x").mem(var("s")),
            4 => Pred::Element(var("y")),
            _ => Pred::exists("z", var("s"), var("z").eq(var("y"))),
        };
    }
    let l = random_pred(rng, depth - 1);
    match rng.gen_range(0..4) {
        0 => l.not(),
        1 => l.and(random_pred(rng, depth - 1)),
        2 => l.or(random_pred(rng, depth - 1)),
        _ => Pred::forall("z", var("s"), l),
    }
}

/// Random bunch-of-T terms over `x`, `y`, `s`.
fn random_term(rng: &mut StdRng, depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => Term::Atom(rng.gen_range(0..N as u8)),
            1 => var("x"),
            2 => var("y"),
            _ => var("s").unpack(),
        };
    }
    match rng.gen_range(0..5) {
        0 => random_term(rng, depth - 1).union(random_term(rng, depth - 1)),
        1 => random_term(rng, depth - 1).pack().unpack(),
        2 => Term::guarded(random_pred(rng, 1), random_term(rng, depth - 1)),
        3 => Term::compr("x", var("s"), random_pred(rng, 1)).choice(),
        _ => random_term(rng, depth - 1).pack().choice(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn packaging_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let e = random_term(&mut rng, 3);
        let m = Model::new(N);
        for rho in all_envs() {
            prop_assert_eq!(
                m.vden(&e.clone().pack().unpack(), &rho).unwrap(),
                m.vden(&e, &rho).unwrap()
            );
        }
    }

    #[test]
    fn conjunction_is_intersection(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (p, q) = (random_pred(&mut rng, 3), random_pred(&mut rng, 3));
        let m = Model::new(N);
        let envs = all_envs();
        let tp: BTreeSet<_> = m.tden(&p, &envs).unwrap().into_iter().collect();
        let tq: BTreeSet<_> = m.tden(&q, &envs).unwrap().into_iter().collect();
        let both: BTreeSet<_> = m.tden(&p.clone().and(q.clone()), &envs).unwrap().into_iter().collect();
        let either: BTreeSet<_> = m.tden(&p.clone().or(q), &envs).unwrap().into_iter().collect();
        prop_assert_eq!(both, tp.intersection(&tq).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(either, tp.union(&tq).cloned().collect::<BTreeSet<_>>());
    }

    #[test]
    fn negation_probes_each_environment(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_pred(&mut rng, 3);
        let m = Model::new(N);
        for rho in all_envs() {
            let probe = m.tden(&p, std::slice::from_ref(&rho)).unwrap();
            prop_assert_eq!(m.holds(&p.clone().not(), &rho).unwrap(), probe.is_empty());
        }
    }

    #[test]
    fn substitution_is_override(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let e = random_term(&mut rng, 3);
        let p = random_pred(&mut rng, 2);
        // replacement terms built only from free variables other than x
        let f = match rng.gen_range(0..3) {
            0 => Term::Atom(1),
            1 => var("y"),
            _ => var("s").unpack(),
        };
        let m = Model::new(N);
        for rho in all_envs() {
            prop_assert_eq!(
                m.vden(&e.clone().with_subst("x", f.clone()), &rho).unwrap(),
                m.vden(&e.subst("x", &f), &rho).unwrap()
            );
            prop_assert_eq!(
                m.holds(&p.clone().with_subst("x", f.clone()), &rho).unwrap(),
                m.holds(&p.subst("x", &f), &rho).unwrap()
            );
        }
    }
}

#[test]
fn element_terms_denote_singletons() {
    let m = Model::new(N);
    let terms = [
        var("x").pack(),
        var("s").pow(),
        var("s").cross(var("s")),
        var("s").card(),
        Term::compr("z", var("s"), var("z").eq(var("y"))),
        Term::EmptySet(Ty::Given),
    ];
    for rho in all_envs() {
        for t in &terms {
            assert_eq!(m.vden(t, &rho).unwrap().len(), 1, "{t} at {rho}");
        }
    }
}

/// Direct host-level values of a few set terms, computed without the
/// denotation rules.
#[test]
fn facsimile_matches_intended_set() {
    let m = Model::new(N);
    for rho in all_envs() {
        let x = rho.get("x").unwrap().val.clone();
        let s = rho.get("s").unwrap().val.iter().next().unwrap().as_set().unwrap().clone();
        let y = rho.get("y").unwrap().val.clone();
        assert_eq!(m.facsimile(&var("x").pack(), &rho).unwrap(), x);
        assert_eq!(m.facsimile(&var("s"), &rho).unwrap(), s);
        let intended_cross: SemSet = s
            .iter()
            .flat_map(|p| x.iter().map(move |q| SemVal::pair(p.clone(), q.clone())))
            .collect();
        assert_eq!(
            m.facsimile(&var("s").cross(var("x").pack()), &rho).unwrap(),
            intended_cross
        );
        let kept: SemSet = s.iter().filter(|e| !y.contains(*e)).cloned().collect();
        let compr = Term::compr("z", var("s"), var("z").mem(var("y").pack()).not());
        assert_eq!(m.facsimile(&compr, &rho).unwrap(), kept);
        assert_eq!(
            m.facsimile(&var("s").pow(), &rho).unwrap().len(),
            1 << s.len()
        );
    }
}

#[test]
fn improper_rules_absorb() {
    let m = Model::new(N);
    let bt = Term::Bottom(Ty::Given);
    let e = SemEnv::new().with("x", Ty::Given, set([a()]));
    let bot_t = m.bottom(&Ty::Given);
    assert_eq!(
        bot_t,
        set([a(), b(), SemVal::Kappa]),
        "⟦⊥_T⟧ is T with κ"
    );
    assert_eq!(
        m.vden(&bt.clone().pack(), &e).unwrap(),
        m.bottom(&pow_t())
    );
    assert_eq!(
        m.vden(&Term::Bottom(pow_t()).unpack(), &e).unwrap(),
        bot_t
    );
    assert_eq!(
        m.vden(&var("x").maplet(bt.clone()), &e).unwrap(),
        m.bottom(&Ty::prod(Ty::Given, Ty::Given))
    );
    // A , ⊥ = ⊥ follows from maximality
    assert_eq!(m.vden(&var("x").union(bt.clone()), &e).unwrap(), bot_t);
    // the guard is not absorptive
    assert!(m
        .vden(&Term::guarded(Pred::False, bt), &e)
        .unwrap()
        .is_empty());
    assert_eq!(
        sem::kappa(&pow_t(), N),
        SemVal::Set(bot_t),
        "κ of pow(T) is ⟦⊥_T⟧"
    );
}

#[test]
fn axiom_battery_passes() {
    let start = std::time::Instant::now();
    let u = Universe::new(2, 2).improper(true);
    let r = validate_axioms(&u);
    print!("{r}");
    let names: Vec<&str> = r.lines.iter().map(|l| l.name.as_str()).collect();
    assert_eq!(names, axiom_names(true));
    assert!(r.no_failures());
    assert_eq!(r.count_passed(), 16);
    for skipped in ["BIG", "infinity 1", "infinity 2"] {
        assert!(matches!(
            r.get(skipped).unwrap().outcome,
            Outcome::Skipped { .. }
        ));
    }
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn stub_choice_fails_only_the_choice_axiom() {
    let u = Universe::new(2, 2);
    let r = validate_axioms_with(&u, ChoiceMode::Stub { seed: 7 });
    let failed: Vec<&str> = r
        .lines
        .iter()
        .filter(|l| l.failed())
        .map(|l| l.name.as_str())
        .collect();
    assert_eq!(failed, ["choice"]);
}

#[test]
fn carrier_three_depth_one() {
    let r = validate_axioms(&Universe::new(3, 1).improper(true));
    assert!(r.no_failures(), "{r}");
}

#[test]
fn records_are_json_lines() {
    let r = validate_axioms(&Universe::new(2, 1));
    for (rec, line) in r.to_records().lines().zip(&r.lines) {
        let v: serde_json::Value = serde_json::from_str(rec).unwrap();
        assert_eq!(v["name"], line.name.as_str());
        assert!(["PASS", "SKIPPED"].contains(&v["status"].as_str().unwrap()));
    }
}

#[test]
fn lemmas_and_model_properties() {
    let r = lemma_suite(&Universe::new(2, 2));
    print!("{r}");
    assert!(r.no_failures());
    assert_eq!(r.lines.len(), 11);
}

/// The ordered-pair law read for arbitrary bunches E, F fails at null:
/// `null ↦ F` denotes the empty product, which is in every set product.
#[test]
fn ordered_pair_needs_elements() {
    let m = Model::new(N);
    let mut rho = SemEnv::new();
    rho.bind("e", Ty::Given, set([]));
    rho.bind("f", Ty::Given, set([b()]));
    rho.bind("s", pow_t(), [SemVal::Set(set([a()]))].into());
    rho.bind("t", pow_t(), [SemVal::Set(set([a()]))].into());
    let lhs = var("e").maplet(var("f")).mem(var("s").cross(var("t")));
    let rhs = var("e").mem(var("s")).and(var("f").mem(var("t")));
    assert!(m.holds(&lhs, &rho).unwrap());
    assert!(!m.holds(&rhs, &rho).unwrap());

    // L1 as stated has the same gap
    let empty = SemSet::new();
    let one = set([a()]);
    assert!(sem::cross(&empty, &one).is_subset(&sem::cross(&one, &empty)));
    assert!(!one.is_subset(&empty), "{}", Shown(&one));
}
