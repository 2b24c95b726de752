//! Prospective values `S ◇ E`, the expectation variant for probabilistic
//! choice, feasibility, refinement checking and result sets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::ast::{Cmd, Expr};
use crate::bunch::{Bunch, Env};
use crate::error::{Error, Result};
use crate::eval::{tyenv_of, Evaluator};
use crate::types::TypeTag;
use crate::value::Value;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Plain,
    Expect,
}

struct Run<'a> {
    ty: &'a TypeTag,
    mode: Mode,
}

type Cont<'k> = &'k dyn Fn(&Env) -> Result<Bunch>;

/// A failed refinement obligation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefineCounterexample {
    pub state: Env,
    pub expr: Expr,
    pub abstract_value: Bunch,
    pub concrete_value: Bunch,
}

/// Outcome of checking `S ⊑ T` over a set of states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefineReport {
    pub checked: usize,
    pub counterexample: Option<RefineCounterexample>,
    /// Set when either program mixes `⊕` with `⟩⟩`.
    pub mixed_choice: bool,
}

impl RefineReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Whether a program mixes probabilistic and preferential choice.
pub fn mixes_prob_and_pref(s: &Cmd) -> bool {
    s.contains_prob() && s.contains_pref()
}

impl Evaluator {
    /// `S ◇ E` in state `env`.
    pub fn pv(&self, s: &Cmd, e: &Expr, env: &Env) -> Result<Bunch> {
        self.pv_hint(s, e, env, None)
    }

    pub(crate) fn pv_hint(&self, s: &Cmd, e: &Expr, env: &Env, hint: Option<&TypeTag>) -> Result<Bunch> {
        let ty = self.infer(e, &self.assigned_types(s, &tyenv_of(env))?, hint)?;
        let run = Run {
            ty: &ty,
            mode: Mode::Plain,
        };
        self.pv_k(s, env, &run, &|final_env| self.eval_hint(e, final_env, Some(&ty)))
    }

    /// `S ◇_E X`: expected value of a numeric `X`, as a RAT bunch.
    pub fn pv_expect(&self, s: &Cmd, x: &Expr, env: &Env) -> Result<Bunch> {
        let xt = self.infer(x, &self.assigned_types(s, &tyenv_of(env))?, None)?;
        if !xt.is_numeric() {
            return Err(Error::mismatch("INT or RAT", xt));
        }
        let run = Run {
            ty: &TypeTag::Rat,
            mode: Mode::Expect,
        };
        self.pv_k(s, env, &run, &|final_env| self.eval_hint(x, final_env, Some(&xt))?.to_rat())
    }

    /// A program is feasible iff it cannot establish false: `S ◇ ⊥ ≠ null`.
    pub fn fis(&self, s: &Cmd, env: &Env) -> Result<bool> {
        Ok(!self.pv(s, &Expr::Bottom(Some(TypeTag::Bool)), env)?.is_null())
    }

    /// `{S ◇ E}`
    pub fn results_set(&self, s: &Cmd, e: &Expr, env: &Env) -> Result<Bunch> {
        Ok(self.pv(s, e, env)?.pack())
    }

    /// `S ⊑ T`: for every state and expression, `(T ◇ E) : (S ◇ E)`.
    pub fn refine_check(&self, s: &Cmd, t: &Cmd, exprs: &[Expr], states: &[Env]) -> Result<RefineReport> {
        let mut checked = 0;
        for state in states {
            for e in exprs {
                let abs = self.pv(s, e, state)?;
                let conc = self.pv(t, e, state)?;
                checked += 1;
                if !conc.sub_bunch(&abs)? {
                    return Ok(RefineReport {
                        checked,
                        counterexample: Some(RefineCounterexample {
                            state: state.clone(),
                            expr: e.clone(),
                            abstract_value: abs,
                            concrete_value: conc,
                        }),
                        mixed_choice: mixes_prob_and_pref(s) || mixes_prob_and_pref(t),
                    });
                }
            }
        }
        Ok(RefineReport {
            checked,
            counterexample: None,
            mixed_choice: mixes_prob_and_pref(s) || mixes_prob_and_pref(t),
        })
    }

    fn pv_k(&self, s: &Cmd, env: &Env, run: &Run<'_>, k: Cont<'_>) -> Result<Bunch> {
        match s {
            Cmd::Skip => k(env),
            Cmd::Assign(xs, es) => {
                let mut values = Vec::with_capacity(es.len());
                for (x, e) in xs.iter().zip(es) {
                    let hint = env.get(x).map(|b| b.type_tag().clone());
                    let b = self.eval_hint(e, env, hint.as_ref())?;
                    if let Some(t) = &hint {
                        if b.type_tag() != t {
                            return Err(Error::mismatch(t, b.type_tag()));
                        }
                    }
                    values.push(b);
                }
                if values.iter().any(Bunch::is_improper) {
                    return Ok(Bunch::improper(run.ty.clone()));
                }
                let mut acc = Bunch::null(run.ty.clone());
                self.each_assignment(xs, &values, 0, env.clone(), &mut |next| {
                    acc = acc.union(&k(next)?)?;
                    Ok(!acc.is_improper())
                })?;
                Ok(acc)
            }
            Cmd::Pre(p, body) => {
                if self.holds(p, env)? {
                    self.pv_k(body, env, run, k)
                } else {
                    Ok(Bunch::improper(run.ty.clone()))
                }
            }
            Cmd::Guard(p, body) => {
                if self.holds(p, env)? {
                    self.pv_k(body, env, run, k)
                } else {
                    Ok(Bunch::null(run.ty.clone()))
                }
            }
            Cmd::Choice(a, b) => {
                let x = self.pv_k(a, env, run, k)?;
                if x.is_improper() {
                    return Ok(x);
                }
                x.union(&self.pv_k(b, env, run, k)?)
            }
            Cmd::Seq(a, b) => self.pv_k(a, env, run, &|mid| self.pv_k(b, mid, run, k)),
            Cmd::Pref(a, b) => {
                let x = self.pv_k(a, env, run, k)?;
                if x.is_null() {
                    self.pv_k(b, env, run, k)
                } else {
                    Ok(x)
                }
            }
            Cmd::If(g, a, b) => {
                if self.holds(g, env)? {
                    self.pv_k(a, env, run, k)
                } else {
                    self.pv_k(b, env, run, k)
                }
            }
            Cmd::Prob(p, a, b) => {
                if run.mode == Mode::Plain {
                    return Err(Error::Unsupported(
                        "probabilistic choice has only an expectation semantics; use expect".into(),
                    ));
                }
                let x1 = self.pv_k(a, env, run, k)?;
                let x2 = self.pv_k(b, env, run, k)?;
                weighted_sum(p, &x1, &x2)
            }
        }
    }

    /// Calls `f` with `env` updated by each combination of the elements of
    /// `values`; `f` returns false to stop early.
    fn each_assignment(
        &self,
        xs: &[String],
        values: &[Bunch],
        i: usize,
        env: Env,
        f: &mut dyn FnMut(&Env) -> Result<bool>,
    ) -> Result<bool> {
        if i == xs.len() {
            return f(&env);
        }
        for v in values[i].elems() {
            let next = env.bind(&xs[i], Bunch::elem(v.clone()));
            if !self.each_assignment(xs, values, i + 1, next, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `X₁ p+ X₂ = (X₁=null ↣ X₂), (X₂=null ↣ X₁), p·X₁ + (1−p)·X₂`
pub fn weighted_sum(p: &BigRational, x1: &Bunch, x2: &Bunch) -> Result<Bunch> {
    let rat = |r: &BigRational| Bunch::elem(Value::Rat(r.clone()));
    let scale = |w: &BigRational, x: &Bunch| {
        Bunch::lift_binary(TypeTag::Rat, &rat(w), x, |a, b| {
            Some(Value::Rat(a.to_rat()? * b.to_rat()?))
        })
    };
    let q = BigRational::one() - p;
    let mixed = Bunch::lift_binary(TypeTag::Rat, &scale(p, x1), &scale(&q, x2), |a, b| {
        Some(Value::Rat(a.to_rat()? + b.to_rat()?))
    });
    let only = |cond: bool, x: &Bunch| if cond { x.clone() } else { Bunch::null(TypeTag::Rat) };
    only(x1.is_null(), x2).union(&only(x2.is_null(), x1))?.union(&mixed)
}

/// The probability `n/d` as an exact rational.
pub fn probability(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
