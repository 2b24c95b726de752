//! Seeded random programs over two small integer variables, for the
//! property and cross-implementation checks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::ast::{ArithOp, Cmd, Expr, Pred, Rel};
use crate::types::TypeTag;
use crate::wp::StateSpace;

/// `x` ranges over `0..=X_MAX`, `y` over `0..=Y_MAX`.
pub const X_MAX: i64 = 3;
pub const Y_MAX: i64 = 2;

#[derive(Debug, Clone, Copy)]
pub struct CorpusOptions {
    pub max_depth: u32,
    /// Allow `⟩⟩`; the weakest-precondition fragment excludes it.
    pub allow_pref: bool,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            max_depth: 3,
            allow_pref: false,
        }
    }
}

pub fn space() -> StateSpace {
    StateSpace::ints(&[("x", 0, X_MAX), ("y", 0, Y_MAX)]).expect("fixed domains are valid")
}

/// Observations used as `E` in the checks.
pub fn observations() -> Vec<Expr> {
    vec![
        Expr::var("x"),
        Expr::var("y"),
        Expr::add(Expr::var("x"), Expr::var("y")),
        Expr::maplet(Expr::var("x"), Expr::var("y")),
        Expr::guard(Pred::rel(Rel::Gt, Expr::var("x"), Expr::var("y")), Expr::var("x")),
    ]
}

pub fn generate(n: usize, seed: u64, opts: CorpusOptions) -> Vec<Cmd> {
    let mut g = Gen {
        rng: StdRng::seed_from_u64(seed),
        opts,
    };
    (0..n).map(|_| g.cmd(opts.max_depth)).collect()
}

struct Gen {
    rng: StdRng,
    opts: CorpusOptions,
}

fn int(n: i64) -> Expr {
    Expr::int(n)
}

fn modulo(e: Expr, m: i64) -> Expr {
    Expr::arith(ArithOp::Mod, e, int(m))
}

impl Gen {
    fn var(&mut self) -> (&'static str, i64) {
        if self.rng.gen_bool(0.6) {
            ("x", X_MAX)
        } else {
            ("y", Y_MAX)
        }
    }

    fn literal_bunch(&mut self, max: i64) -> Expr {
        let a = self.rng.gen_range(0..=max);
        if self.rng.gen_bool(0.4) {
            let b = self.rng.gen_range(0..=max);
            Expr::union(int(a), int(b))
        } else {
            int(a)
        }
    }

    /// An expression whose values all lie in `0..=max`.
    fn rhs(&mut self, max: i64) -> Expr {
        match self.rng.gen_range(0..10) {
            0..=2 => self.literal_bunch(max),
            3 => modulo(Expr::add(Expr::var("x"), int(1)), max + 1),
            4 => modulo(Expr::add(Expr::var("x"), Expr::var("y")), max + 1),
            5 => modulo(Expr::var("x"), max + 1),
            6 => modulo(Expr::var("y"), max + 1),
            7 => Expr::guard(self.pred(), self.literal_bunch(max)),
            8 => Expr::precond(self.pred(), self.literal_bunch(max)),
            _ => {
                if self.rng.gen_bool(0.5) {
                    Expr::Null(Some(TypeTag::Int))
                } else {
                    Expr::Bottom(Some(TypeTag::Int))
                }
            }
        }
    }

    fn pred(&mut self) -> Pred {
        let x = || Expr::var("x");
        let y = || Expr::var("y");
        match self.rng.gen_range(0..9) {
            0 => Pred::rel(Rel::Gt, x(), int(self.rng.gen_range(0..X_MAX))),
            1 => Pred::rel(Rel::Lt, y(), int(self.rng.gen_range(1..=Y_MAX))),
            2 => Pred::eq(x(), y()),
            3 => Pred::rel(Rel::Le, Expr::add(x(), y()), int(self.rng.gen_range(0..=X_MAX + Y_MAX))),
            4 => Pred::eq(y(), int(self.rng.gen_range(0..=Y_MAX))),
            5 => Pred::not(self.pred()),
            6 => Pred::and(self.pred(), self.pred()),
            7 => Pred::rel(Rel::Sub, x(), self.literal_bunch(X_MAX)),
            _ => {
                if self.rng.gen_bool(0.5) {
                    Pred::True
                } else {
                    Pred::False
                }
            }
        }
    }

    fn assignment(&mut self) -> Cmd {
        if self.rng.gen_bool(0.15) {
            let rx = self.rhs(X_MAX);
            let ry = self.rhs(Y_MAX);
            return Cmd::Assign(vec!["x".into(), "y".into()], vec![rx, ry]);
        }
        let (v, max) = self.var();
        let e = self.rhs(max);
        Cmd::assign(v, e)
    }

    fn leaf(&mut self) -> Cmd {
        match self.rng.gen_range(0..10) {
            0 => Cmd::Skip,
            1 => Cmd::abort(),
            2 => Cmd::magic(),
            _ => self.assignment(),
        }
    }

    fn cmd(&mut self, depth: u32) -> Cmd {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return self.leaf();
        }
        let d = depth - 1;
        let kinds = if self.opts.allow_pref { 7 } else { 6 };
        match self.rng.gen_range(0..kinds) {
            0 => Cmd::pre(self.pred(), self.cmd(d)),
            1 => Cmd::guarded(self.pred(), self.cmd(d)),
            2 => Cmd::choice(self.cmd(d), self.cmd(d)),
            3 | 4 => Cmd::seq(self.cmd(d), self.cmd(d)),
            5 => Cmd::if_(self.pred(), self.cmd(d), self.cmd(d)),
            _ => Cmd::pref(self.cmd(d), self.cmd(d)),
        }
    }
}
