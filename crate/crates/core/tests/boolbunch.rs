use bunch_core::boolbunch::{and_b, eq_b, lt_b, mem_b, not_b, or_b, BoolBunch, ALL};
use bunch_core::syntax::{parse_expr, ParseCtx};
use bunch_core::{Bunch, EnumBounds, Env, Evaluator, TypeTag};

fn classify(src: &str) -> BoolBunch {
    let e = parse_expr(src, &ParseCtx::default()).unwrap();
    let b = Evaluator::new(EnumBounds::default()).eval(&e, &Env::new()).unwrap();
    BoolBunch::classify(&b).unwrap()
}

/// The conjunction table as printed, row by row, in the order null, T, F, (T,F), ⊥.
const PRINTED: [[&str; 5]; 5] = [
    ["null", "null", "F", "null", "null"],
    ["null", "T", "F", "T,F", "⊥"],
    ["F", "F", "F", "F", "F"],
    ["null", "T,F", "F", "T,F", "⊥"],
    ["null", "⊥", "F", "⊥", "⊥"],
];

fn name(b: BoolBunch) -> &'static str {
    match b {
        BoolBunch::Null => "null",
        BoolBunch::True => "T",
        BoolBunch::False => "F",
        BoolBunch::Both => "T,F",
        BoolBunch::Bottom => "⊥",
    }
}

#[test]
fn conjunction_table() {
    for (i, a) in ALL.iter().enumerate() {
        for (j, b) in ALL.iter().enumerate() {
            let got = BoolBunch::classify(&and_b(&a.to_bunch(), &b.to_bunch()).unwrap()).unwrap();
            assert_eq!(name(got), PRINTED[i][j], "{} and {}", name(*a), name(*b));
        }
    }
}

#[test]
fn interpretations() {
    // king_of(france) with no king: applying a relation with no matching maplet.
    assert_eq!(classify("memb({1 |-> 2}(3), {2})"), BoolBunch::Null);
    assert_eq!(classify("eqb(1+1, 2)"), BoolBunch::True);
    assert_eq!(classify("eqb(1+1, 3)"), BoolBunch::False);
    assert_eq!(classify("ltb((1,3), 2)"), BoolBunch::Both);
    // A factorial that requires a natural argument aborts at -1.
    assert_eq!(
        classify("eqb((lambda n :: n : (-1,0,1) ->> (n >= 0 |>> 1))(-1), 0)"),
        BoolBunch::Bottom
    );
}

#[test]
fn direct_operators() {
    let bot = Bunch::improper(TypeTag::Int);
    assert!(eq_b(&bot, &Bunch::int(1)).unwrap().is_improper());
    assert!(lt_b(&Bunch::int(1), &bot).unwrap().is_improper());
    assert!(mem_b(&Bunch::null(TypeTag::Int), &Bunch::ints([1]).pack()).unwrap().is_null());
    assert!(not_b(&BoolBunch::True.to_bunch()).is_err());
    assert!(or_b(&BoolBunch::True.to_bunch(), &BoolBunch::False.to_bunch()).is_err());
}

#[test]
fn rendering() {
    let shown: Vec<String> = ALL.iter().map(|b| b.to_string()).collect();
    assert_eq!(shown, ["null:BOOL", "T", "F", "T,F", "improper:BOOL"]);
}
