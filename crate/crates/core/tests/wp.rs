use bunch_core::corpus::{self, CorpusOptions};
use bunch_core::syntax::{parse_cmd, parse_pred, ParseCtx};
use bunch_core::wp::{independent_of, write_set, PredExt, StateSpace};
use bunch_core::{Bunch, Cmd, Evaluator, Expr};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn cmd(src: &str) -> Cmd {
    parse_cmd(src, &ParseCtx::default()).unwrap()
}

fn ext(ev: &Evaluator, space: &StateSpace, src: &str) -> PredExt {
    let p = parse_pred(src, &ParseCtx::default()).unwrap();
    space.extension(|env| ev.holds(&p, env)).unwrap()
}

fn x_only() -> StateSpace {
    StateSpace::ints(&[("x", 0, 3)]).unwrap()
}

#[test]
fn transformer_examples() {
    let ev = Evaluator::default();
    let sp = x_only();
    let all = sp.everything();
    let none = sp.nothing();
    let q = ext(&ev, &sp, "x = 1");
    assert!(ev.wp(&Cmd::abort(), &q, &sp).unwrap().is_empty());
    assert!(ev.wp(&Cmd::abort(), &all, &sp).unwrap().is_empty());
    assert!(ev.wp(&Cmd::magic(), &none, &sp).unwrap().is_full());
    let choose = cmd("x := (1,2)");
    assert!(ev.wp(&choose, &q, &sp).unwrap().is_empty());
    assert!(ev.wp(&choose, &ext(&ev, &sp, "x in {1,2}"), &sp).unwrap().is_full());
    assert_eq!(ev.cwp(&Cmd::Skip, &q, &sp).unwrap(), q);
    assert!(ev.cwp(&Cmd::abort(), &none, &sp).unwrap().is_full());
    let (s, t) = (cmd("x := 1"), cmd("x := (x + 1) mod 4"));
    assert_eq!(
        ev.cwp(&Cmd::choice(s.clone(), t.clone()), &q, &sp).unwrap(),
        ev.cwp(&s, &q, &sp).unwrap().or(&ev.cwp(&t, &q, &sp).unwrap())
    );
}

#[test]
fn assignment_escaping_the_space_is_reported() {
    let ev = Evaluator::default();
    let sp = x_only();
    assert!(ev.wp(&cmd("x := x + 1"), &sp.everything(), &sp).is_err());
}

#[test]
fn basic_law_examples() {
    let ev = Evaluator::default();
    let sp = x_only();
    let x = Expr::var("x");
    let s = cmd("x := (1,2); x > 1 ==> skip");
    assert!(ev.basic_law_check(&s, &x, &sp).unwrap().is_empty());
    assert!(ev.basic_law_check(&Cmd::abort(), &x, &sp).unwrap().is_empty());
    assert!(ev.basic_law_check(&Cmd::Skip, &x, &sp).unwrap().is_empty());
    // An infeasible program establishes `null : E` nowhere, yet its value is null.
    let v = ev.basic_law_check(&Cmd::magic(), &x, &sp).unwrap();
    assert_eq!(v.len(), sp.len());
    assert!(v.iter().all(|v| v.z.is_null() && v.lhs && !v.rhs));
}

#[test]
fn explicit_values() {
    let ev = Evaluator::default();
    let sp = x_only();
    let x = Expr::var("x");
    let st = &sp.states()[2];
    assert!(ev.pv_explicit(&Cmd::abort(), &x, st, &sp).unwrap().is_improper());
    assert!(ev.pv_explicit(&Cmd::magic(), &x, st, &sp).unwrap().is_null());
    assert_eq!(ev.pv_explicit(&cmd("x := (1,2)"), &x, st, &sp).unwrap(), Bunch::ints([1, 2]));
}

/// On a corpus, the basic law holds for every `z` except null, and fails
/// for null exactly at the states where the program is infeasible.
#[test]
fn basic_law_on_corpus() {
    let ev = Evaluator::default();
    let space = corpus::space();
    for s in corpus::generate(120, 3, CorpusOptions::default()) {
        for e in corpus::observations() {
            for v in ev.basic_law_check(&s, &e, &space).unwrap() {
                assert!(v.z.is_null(), "{v}");
                assert!(!ev.fis(&s, &v.state).unwrap(), "{v}");
            }
            let explicit = ev.pv_explicit_all(&s, &e, &space).unwrap();
            for (st, want) in space.states().iter().zip(&explicit) {
                assert_eq!(&ev.pv(&s, &e, st).unwrap(), want, "{s} <> {e} at {st}");
            }
        }
    }
}

fn random_pred(rng: &mut StdRng, n: usize) -> PredExt {
    PredExt((0..n).map(|_| rng.gen_bool(0.5)).collect())
}

#[test]
fn transformer_laws_on_corpus() {
    let ev = Evaluator::default();
    let space = corpus::space();
    let mut rng = StdRng::seed_from_u64(11);
    let y_only = ext(&ev, &space, "y > 0");
    let x_only = ext(&ev, &space, "x < 2");
    for s in corpus::generate(150, 5, CorpusOptions::default()) {
        for _ in 0..4 {
            let p = random_pred(&mut rng, space.len());
            let q = random_pred(&mut rng, space.len());
            let wp = |r: &PredExt| ev.wp(&s, r, &space).unwrap();
            let cwp = |r: &PredExt| ev.cwp(&s, r, &space).unwrap();
            assert_eq!(wp(&p.and(&q)), wp(&p).and(&wp(&q)), "{s}");
            assert_eq!(cwp(&p.or(&q)), cwp(&p).or(&cwp(&q)), "{s}");
            assert!(wp(&p.and(&q)).subset_of(&wp(&p)), "{s}");
            // A conjunct the program cannot disturb passes through.
            let frame = write_set(&s);
            for r in [&y_only, &x_only] {
                if independent_of(r, &frame, &space) {
                    assert_eq!(cwp(&p.and(r)), cwp(&p).and(&cwp(r)), "{s}");
                    // Away from abortion the conjunct passes through unchanged.
                    let abortive = cwp(&space.nothing());
                    assert_eq!(cwp(&p.and(r)).and(&abortive.not()), cwp(&p).and(r).and(&abortive.not()), "{s}");
                }
            }
        }
    }
}

#[test]
fn frame_independence() {
    let ev = Evaluator::default();
    let space = corpus::space();
    let s = cmd("x := 1");
    assert_eq!(write_set(&s), ["x"]);
    assert!(independent_of(&ext(&ev, &space, "y = 1"), &write_set(&s), &space));
    assert!(!independent_of(&ext(&ev, &space, "x = 1"), &write_set(&s), &space));
}
