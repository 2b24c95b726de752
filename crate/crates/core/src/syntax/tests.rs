use super::*;

fn ctx() -> ParseCtx {
    ParseCtx::default()
}

#[test]
fn bertrand_shape() {
    let t = parse_tree("∀n • n > 1 ⇒ (∃p • prime(p) ∧ n < p ∧ p < 2*n)", &ctx()).unwrap();
    assert_eq!(
        t.sexp(),
        "(• (∀ n) (⇒ (> n 1) (• (∃ p) (∧ (∧ (prime p) (< n p)) (< p (* 2 n))))))"
    );
}
