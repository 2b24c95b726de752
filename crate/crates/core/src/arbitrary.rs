//! Random syntax trees over the whole expression, predicate and command
//! language, for render/parse round trips. Values are not meant to be
//! well-typed.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::ast::{ArithOp, BoolOp, Cmd, Expr, Pred, Rel, SetOp};
use crate::pv::probability;
use crate::types::TypeTag;
use crate::value::Value;

pub struct AstGen {
    rng: StdRng,
}

const VARS: [&str; 4] = ["x", "y", "s", "f"];

impl AstGen {
    pub fn new(seed: u64) -> Self {
        AstGen {
            rng: StdRng::seed_from_u64(seed),
        }
    }

    fn var(&mut self) -> String {
        VARS[self.rng.gen_range(0..VARS.len())].to_string()
    }

    fn leaf(&mut self) -> Expr {
        match self.rng.gen_range(0..9) {
            0 => Expr::int(self.rng.gen_range(-5..20)),
            1 => Expr::Lit(Value::Bool(self.rng.gen())),
            2 => Expr::Lit(Value::Char(['a', 'z', '0'][self.rng.gen_range(0..3)])),
            3 => Expr::Lit(Value::str(["", "ab", "x y"][self.rng.gen_range(0..3)])),
            4 => Expr::Null(if self.rng.gen() { Some(TypeTag::Int) } else { None }),
            5 => Expr::Bottom(if self.rng.gen() { Some(TypeTag::set(TypeTag::Int)) } else { None }),
            _ => Expr::Var(self.var()),
        }
    }

    pub fn expr(&mut self, d: u32) -> Expr {
        if d == 0 || self.rng.gen_bool(0.2) {
            return self.leaf();
        }
        let b = |e: Expr| Box::new(e);
        let d = d - 1;
        match self.rng.gen_range(0..22) {
            0 => Expr::Union(b(self.expr(d)), b(self.expr(d))),
            1 => Expr::Inter(b(self.expr(d)), b(self.expr(d))),
            2 => Expr::Diff(b(self.expr(d)), b(self.expr(d))),
            3 => Expr::Maplet(b(self.expr(d)), b(self.expr(d))),
            4 => {
                let op = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div, ArithOp::Mod][self.rng.gen_range(0..5)];
                Expr::Arith(op, b(self.expr(d)), b(self.expr(d)))
            }
            5 => Expr::Neg(b(self.expr(d))),
            6 => {
                let op = if self.rng.gen() { SetOp::Union } else { SetOp::Inter };
                Expr::SetOp(op, b(self.expr(d)), b(self.expr(d)))
            }
            7 => Expr::Pack(b(self.expr(d))),
            8 => Expr::Unpack(b(self.expr(d))),
            9 => Expr::Card(b(self.expr(d))),
            10 => Expr::Pow(b(self.expr(d))),
            11 => Expr::Guard(Box::new(self.pred(d)), b(self.expr(d))),
            12 => Expr::Precond(Box::new(self.pred(d)), b(self.expr(d))),
            13 => Expr::If(Box::new(self.pred(d)), b(self.expr(d)), b(self.expr(d))),
            14 => Expr::Comprehension(self.var(), b(self.expr(d))),
            15 => Expr::Lambda(self.var(), b(self.expr(d))),
            16 => Expr::BigLambda(self.var(), b(self.expr(d))),
            17 => Expr::Apply(b(self.expr(d)), b(self.expr(d))),
            18 => Expr::Wholistic(b(self.expr(d)), b(self.expr(d))),
            19 => {
                let op = [BoolOp::Eq, BoolOp::Lt, BoolOp::Mem, BoolOp::And][self.rng.gen_range(0..4)];
                Expr::BoolOp(op, b(self.expr(d)), b(self.expr(d)))
            }
            20 => Expr::Pv(Box::new(self.cmd(d)), b(self.expr(d))),
            _ => self.leaf(),
        }
    }

    pub fn pred(&mut self, d: u32) -> Pred {
        if d == 0 || self.rng.gen_bool(0.2) {
            return match self.rng.gen_range(0..3) {
                0 => Pred::True,
                1 => Pred::False,
                _ => Pred::Holds(Expr::Var(self.var())),
            };
        }
        let d = d - 1;
        match self.rng.gen_range(0..9) {
            0 | 1 => {
                let rels = [
                    Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge, Rel::Sub, Rel::In, Rel::NotIn, Rel::SubsetEq,
                    Rel::Subset,
                ];
                Pred::Rel(rels[self.rng.gen_range(0..rels.len())], self.expr(d), self.expr(d))
            }
            2 => Pred::Not(Box::new(self.pred(d))),
            3 => Pred::And(Box::new(self.pred(d)), Box::new(self.pred(d))),
            4 => Pred::Or(Box::new(self.pred(d)), Box::new(self.pred(d))),
            5 => Pred::Implies(Box::new(self.pred(d)), Box::new(self.pred(d))),
            6 => Pred::Iff(Box::new(self.pred(d)), Box::new(self.pred(d))),
            7 => Pred::Forall(self.var(), Box::new(self.pred(d))),
            _ => Pred::Exists(self.var(), Box::new(self.pred(d))),
        }
    }

    pub fn cmd(&mut self, d: u32) -> Cmd {
        if d == 0 || self.rng.gen_bool(0.25) {
            return match self.rng.gen_range(0..5) {
                0 => Cmd::Skip,
                1 => Cmd::abort(),
                2 => Cmd::magic(),
                3 => Cmd::Assign(vec!["x".into(), "y".into()], vec![self.expr(1), self.expr(1)]),
                _ => Cmd::assign("x", self.expr(d.min(2))),
            };
        }
        let d = d - 1;
        match self.rng.gen_range(0..7) {
            0 => Cmd::pre(self.pred(d), self.cmd(d)),
            1 => Cmd::guarded(self.pred(d), self.cmd(d)),
            2 => Cmd::choice(self.cmd(d), self.cmd(d)),
            3 => Cmd::seq(self.cmd(d), self.cmd(d)),
            4 => Cmd::pref(self.cmd(d), self.cmd(d)),
            5 => {
                let den = self.rng.gen_range(2..6);
                Cmd::prob(probability(self.rng.gen_range(1..den), den), self.cmd(d), self.cmd(d))
            }
            _ => Cmd::if_(self.pred(d), self.cmd(d), self.cmd(d)),
        }
    }
}
