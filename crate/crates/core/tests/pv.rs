use bunch_core::corpus::{self, CorpusOptions};
use bunch_core::syntax::{parse_cmd, parse_expr, ParseCtx};
use bunch_core::{Bunch, Cmd, Env, Evaluator, Expr, Value};

fn x_env(x: i64) -> Env {
    Env::from_iter([("x".to_string(), Bunch::int(x))])
}

fn xy_env(x: i64, y: i64) -> Env {
    Env::from_iter([("x".to_string(), Bunch::int(x)), ("y".to_string(), Bunch::int(y))])
}

fn cmd(src: &str) -> Cmd {
    parse_cmd(src, &ParseCtx::default()).unwrap()
}

fn expr(src: &str) -> Expr {
    parse_expr(src, &ParseCtx::default()).unwrap()
}

fn pv(src_s: &str, src_e: &str, env: &Env) -> String {
    let ctx = ParseCtx::default();
    let s = parse_cmd(src_s, &ctx).unwrap();
    let e = parse_expr(src_e, &ctx).unwrap();
    Evaluator::default().pv(&s, &e, env).unwrap().to_string()
}

fn expect(src_s: &str, src_e: &str, env: &Env) -> String {
    let ctx = ParseCtx::default();
    let s = parse_cmd(src_s, &ctx).unwrap();
    let e = parse_expr(src_e, &ctx).unwrap();
    Evaluator::default().pv_expect(&s, &e, env).unwrap().to_string()
}

#[test]
fn assignment_and_choice() {
    let env = x_env(0);
    assert_eq!(pv("x := 2", "x + 10", &env), "12");
    assert_eq!(pv("x := 1 [] x := 2", "x + 10", &env), "11,12");
    assert_eq!(pv("false ==> skip", "!!:INT", &env), "null:INT");
}

#[test]
fn preferential_choice() {
    let env = x_env(0);
    assert_eq!(pv("x := 1 >> x := 2 ; x = 2 ==> skip", "x", &env), "2");
    assert_eq!(pv("x := 1 >> abort", "x", &env), "1");
    assert_eq!(pv("skip >> abort", "null:INT", &env), "improper:INT");
    assert_eq!(pv("skip >> abort", "x", &env), "0");
}

#[test]
fn if_reduces_to_taken_branch() {
    let env = x_env(3);
    assert_eq!(pv("if x > 1 then x := 7 else x := 8 end", "x", &env), pv("x := 7", "x", &env));
    assert_eq!(pv("if x > 5 then x := 7 else x := 8 end", "x", &env), "8");
}

#[test]
fn expectation() {
    let env = x_env(0);
    assert_eq!(expect("x := 1 <+>1/2 x := 3", "x", &env), "2");
    assert_eq!(expect("(magic ; x := 1) <+>1/3 x := 4", "x", &env), "4");
    assert_eq!(expect("abort <+>1/3 x := 4", "x", &env), "improper:RAT");
    assert_eq!(expect("x := 1 <+>1/4 x := 2", "x", &env), Value::rat(7, 4).to_string());
}

#[test]
fn feasibility() {
    let ev = Evaluator::default();
    let ctx = ParseCtx::default();
    let env = x_env(0);
    assert!(!ev.fis(&parse_cmd("magic", &ctx).unwrap(), &env).unwrap());
    assert!(ev.fis(&parse_cmd("skip", &ctx).unwrap(), &env).unwrap());
    assert!(ev.fis(&parse_cmd("abort", &ctx).unwrap(), &env).unwrap());
}

#[test]
fn preference_is_not_conjunctive() {
    let env = xy_env(3, 5);
    let s = "x := 0 >> x := 1";
    assert_eq!(pv(s, "(x > 0 ->> x), y", &env), "5");
    assert_eq!(pv(s, "x > 0 ->> x", &env), "1");
    assert_eq!(pv(s, "y", &env), "5");
}

#[test]
fn result_sets() {
    let ev = Evaluator::default();
    let env = x_env(5);
    assert_eq!(ev.results_set(&cmd("x := 1 [] x := 2"), &expr("x"), &env).unwrap().to_string(), "{1,2}");
    assert_eq!(ev.results_set(&cmd("magic"), &expr("x"), &env).unwrap().to_string(), "{}");
    assert_eq!(ev.results_set(&cmd("skip"), &expr("x"), &env).unwrap().to_string(), "{5}");
}

#[test]
fn refinement_examples() {
    let ev = Evaluator::default();
    let space = corpus::space();
    let exprs = corpus::observations();
    let (s, t) = (cmd("x := 1"), cmd("y := 0 [] y := 1"));
    let r = ev.refine_check(&Cmd::choice(s.clone(), t.clone()), &Cmd::pref(s.clone(), t), &exprs, space.states()).unwrap();
    assert!(r.holds());
    assert!(ev.refine_check(&s, &s, &exprs, space.states()).unwrap().holds());
    let r = ev.refine_check(&Cmd::Skip, &Cmd::abort(), &[Expr::var("x")], space.states()).unwrap();
    let c = r.counterexample.expect("abort does not refine skip");
    assert!(c.concrete_value.is_improper());
    assert!(!r.mixed_choice);
}

#[test]
fn mixed_choice_is_flagged() {
    let ev = Evaluator::default();
    let s = cmd("(x := 1 <+>1/2 x := 2) >> skip");
    let r = ev.refine_check(&s, &s, &[], &[x_env(0)]).unwrap();
    assert!(r.mixed_choice);
}

/// Pairs `(E, F)` with `E : F` in every state.
fn nested_pairs() -> Vec<(Expr, Expr)> {
    vec![
        (expr("x"), expr("x, y")),
        (expr("x > y ->> x"), expr("x")),
        (expr("null:INT"), expr("y")),
        (expr("x + y"), expr("(x + y), 7")),
    ]
}

#[test]
fn conjunctivity_and_monotonicity_without_preference() {
    let ev = Evaluator::default();
    let space = corpus::space();
    let obs = corpus::observations();
    for s in corpus::generate(150, 21, CorpusOptions::default()) {
        for st in space.states() {
            for (e, f) in nested_pairs() {
                let se = ev.pv(&s, &e, st).unwrap();
                let sf = ev.pv(&s, &f, st).unwrap();
                assert!(se.sub_bunch(&sf).unwrap(), "{s} <> {e} : {f} at {st}");
                let both = ev.pv(&s, &Expr::union(e.clone(), f.clone()), st).unwrap();
                assert_eq!(both, se.union(&sf).unwrap(), "{s} at {st}");
            }
            for e in &obs {
                let v = ev.pv(&s, e, st).unwrap();
                let t = ev.infer(e, &bunch_core::eval::tyenv_of(st), None).unwrap();
                assert_eq!(v.type_tag(), &t);
            }
        }
    }
}

#[test]
fn sub_conjunctivity_and_refinement_with_preference() {
    let ev = Evaluator::default();
    let space = corpus::space();
    let obs = corpus::observations();
    let progs = corpus::generate(
        160,
        8,
        CorpusOptions {
            allow_pref: true,
            ..Default::default()
        },
    );
    for pair in progs.chunks(2) {
        let (s, t) = (&pair[0], &pair[1]);
        let r = ev
            .refine_check(&Cmd::choice(s.clone(), t.clone()), &Cmd::pref(s.clone(), t.clone()), &obs, space.states())
            .unwrap();
        assert!(r.holds(), "{s} / {t}: {:?}", r.counterexample);
        for st in space.states() {
            for (e, f) in nested_pairs() {
                let both = ev.pv(s, &Expr::union(e.clone(), f.clone()), st).unwrap();
                let split = ev.pv(s, &e, st).unwrap().union(&ev.pv(s, &f, st).unwrap()).unwrap();
                assert!(both.sub_bunch(&split).unwrap(), "{s} at {st}");
            }
        }
    }
}

#[test]
fn sequence_nests_through_prospective_values() {
    let ev = Evaluator::default();
    let space = corpus::space();
    let progs = corpus::generate(100, 4, CorpusOptions { allow_pref: true, ..Default::default() });
    for pair in progs.chunks(2) {
        let (s, t) = (&pair[0], &pair[1]);
        for e in corpus::observations() {
            let inner = Expr::pv(t.clone(), e.clone());
            for st in space.states() {
                assert_eq!(
                    ev.pv(&Cmd::seq(s.clone(), t.clone()), &e, st).unwrap(),
                    ev.pv(s, &inner, st).unwrap(),
                    "{s} ; {t} at {st}"
                );
            }
        }
    }
}

#[test]
fn null_and_improper_assignments() {
    let env = x_env(0);
    assert_eq!(pv("x := null:INT", "7", &env), "null:INT");
    assert_eq!(pv("x := !!:INT", "7", &env), "improper:INT");
    assert_eq!(pv("x, y := y, x", "x |-> y", &xy_env(1, 2)), "2 |-> 1");
}
