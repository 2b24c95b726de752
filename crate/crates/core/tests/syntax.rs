use bunch_core::arbitrary::AstGen;
use bunch_core::{Cmd, Expr, Pred};
use bunch_core::syntax::{parse_cmd, parse_expr, parse_pred, parse_tree, ParseCtx};

fn ctx() -> ParseCtx {
    ParseCtx::default()
}

fn tree(src: &str) -> String {
    parse_tree(src, &ctx()).unwrap().sexp()
}

#[test]
fn bertrand_postulate_shape() {
    assert_eq!(
        tree("∀n • n > 1 ⇒ (∃p • prime(p) ∧ n < p ∧ p < 2*n)"),
        "(• (∀ n) (⇒ (> n 1) (• (∃ p) (∧ (∧ (prime p) (< n p)) (< p (* 2 n))))))"
    );
}

#[test]
fn comma_is_below_plus() {
    assert_eq!(tree("0,1 + 2,4"), "(, (, 0 (+ 1 2)) 4)");
    assert_eq!(tree("(0,1)+(2,4)"), "(+ (, 0 1) (, 2 4))");
}

#[test]
fn preference_binds_tighter_than_sequence() {
    let c = parse_expr("x:=1 ⟩⟩ x:=2 ; x=2 ⟹ skip ◇ x", &ctx()).unwrap();
    let want = Expr::pv(
        Cmd::seq(
            Cmd::pref(Cmd::assign("x", Expr::int(1)), Cmd::assign("x", Expr::int(2))),
            Cmd::guarded(Pred::eq(Expr::var("x"), Expr::int(2)), Cmd::Skip),
        ),
        Expr::var("x"),
    );
    assert_eq!(c, want);
}

#[test]
fn precedence_goldens() {
    let cases = [
        ("a, b |-> c + d * e", "(, a (↦ b (+ c (* d e))))"),
        ("p & q or r => s <=> t", "(⇔ (⇒ (∨ (∧ p q) r) s) t)"),
        ("a => b => c", "(⇒ a (⇒ b c))"),
        ("a - b - c", "(- (- a b) c)"),
        ("x : A, B", "(: x (, A B))"),
        ("g ->> h ->> e", "(↣ g (↣ h e))"),
        ("s [] t ; u", "(; (⊓ s t) u)"),
        ("p | s ; t", "(| p (; s t))"),
        ("s ; t <> e", "(◇ (; s t) e)"),
        ("~s /\\ t \\/ u", "(∪ (∩ (~ s) t) u)"),
        ("f.X", "(. f X)"),
    ];
    for (src, want) in cases {
        assert_eq!(tree(src), want, "{src}");
    }
}

#[derive(Debug, PartialEq)]
enum Parsed {
    E(Expr),
    P(Pred),
}

fn parse_either(src: &str) -> Parsed {
    match parse_expr(src, &ctx()) {
        Ok(e) => Parsed::E(e),
        Err(_) => Parsed::P(parse_pred(src, &ctx()).unwrap_or_else(|e| panic!("{src}: {e}"))),
    }
}

#[test]
fn ascii_and_unicode_agree() {
    let pairs = [
        ("~S", "~S"),
        ("a, b", "a , b"),
        ("a ' b", "a ' b"),
        ("x > 0 ->> x", "x > 0 ↣ x"),
        ("x > 0 |>> x", "x > 0 ⫢ x"),
        ("1 |-> 2", "1 ↦ 2"),
        ("(x := 1) <> x", "(x := 1) ◇ x"),
        ("x := 1 [] x := 2 <> x", "x := 1 ⊓ x := 2 ◇ x"),
        ("x := 1 >> x := 2 <> x", "x := 1 ⟩⟩ x := 2 ◇ x"),
        ("x = 1 ==> skip <> x", "x = 1 ⟹ skip ◇ x"),
        ("x := 1 <+>1/2 x := 3 <> x", "x := 1 ⊕1/2 x := 3 ◇ x"),
        ("!!:INT", "⊥:INT"),
        ("% x :: x : (1,2) ->> x", "∮ x • x : (1,2) ↣ x"),
        ("forall x :: x in S => x /= 0", "∀x • x ∈ S ⇒ x ≠ 0"),
    ];
    for (ascii, uni) in pairs {
        assert_eq!(parse_either(ascii), parse_either(uni), "{ascii} vs {uni}");
    }
}

#[test]
fn quantifier_sugar() {
    let sugared = parse_pred("∀x ∈ S • x > 0", &ctx()).unwrap();
    let plain = parse_pred("∀x • x ∈ S ⇒ x > 0", &ctx()).unwrap();
    assert_eq!(sugared, plain);
    let sugared = parse_pred("∃x : (1,2) • x > 1", &ctx()).unwrap();
    let plain = parse_pred("∃x • x : (1,2) ∧ x > 1", &ctx()).unwrap();
    assert_eq!(sugared, plain);
}

#[test]
fn errors_report_positions() {
    let e = parse_expr("1 +\n  * 2", &ctx()).unwrap_err();
    assert_eq!(e.line, 2);
    assert!(parse_cmd("x := ", &ctx()).is_err());
    assert!(parse_expr("(1, 2", &ctx()).is_err());
}

#[test]
fn render_parse_round_trip() {
    let mut g = AstGen::new(13);
    for i in 0..1000 {
        match i % 3 {
            0 => {
                let e = g.expr(4);
                let text = e.to_string();
                let back = parse_expr(&text, &ctx()).unwrap_or_else(|err| panic!("{text}: {err}"));
                assert_eq!(back, e, "{text}");
            }
            1 => {
                let p = g.pred(4);
                let text = p.to_string();
                let back = parse_pred(&text, &ctx()).unwrap_or_else(|err| panic!("{text}: {err}"));
                assert_eq!(back, p, "{text}");
            }
            _ => {
                let c = g.cmd(4);
                let text = c.to_string();
                let back = parse_cmd(&text, &ctx()).unwrap_or_else(|err| panic!("{text}: {err}"));
                assert_eq!(back, c, "{text}");
            }
        }
    }
}
