//! Weakest preconditions over finite state spaces, with predicates held
//! extensionally, and the cross-checks against prospective values.

use std::collections::HashMap;
use std::fmt;

use crate::ast::{Cmd, Expr};
use crate::bunch::{Bunch, Env};
use crate::error::{Error, Result};
use crate::eval::{tyenv_of, Evaluator};
use crate::value::Value;

/// Every assignment of the listed variables to values of their domains.
#[derive(Debug, Clone)]
pub struct StateSpace {
    vars: Vec<String>,
    states: Vec<Env>,
    index: HashMap<Vec<Value>, usize>,
}

/// A predicate as the set of states satisfying it, indexed like the space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredExt(pub Vec<bool>);

impl PredExt {
    pub fn and(&self, o: &PredExt) -> PredExt {
        PredExt(self.0.iter().zip(&o.0).map(|(a, b)| *a && *b).collect())
    }
    pub fn or(&self, o: &PredExt) -> PredExt {
        PredExt(self.0.iter().zip(&o.0).map(|(a, b)| *a || *b).collect())
    }
    pub fn not(&self) -> PredExt {
        PredExt(self.0.iter().map(|a| !a).collect())
    }
    pub fn subset_of(&self, o: &PredExt) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| !a || *b)
    }
    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|a| *a)
    }
    pub fn is_full(&self) -> bool {
        self.0.iter().all(|a| *a)
    }
    pub fn contains(&self, i: usize) -> bool {
        self.0[i]
    }
}

impl StateSpace {
    /// The product of the given variable domains, first variable varying slowest.
    pub fn new(vars: Vec<(String, Vec<Value>)>) -> Result<Self> {
        for (x, dom) in &vars {
            let ty = dom.first().map(Value::type_of);
            if dom.iter().any(|v| Some(v.type_of()) != ty) {
                return Err(Error::Type(format!("domain of `{x}` is not homogeneous")));
            }
            if dom.is_empty() {
                return Err(Error::Type(format!("domain of `{x}` is empty")));
            }
        }
        let mut keys: Vec<Vec<Value>> = vec![vec![]];
        for (_, dom) in &vars {
            keys = keys
                .into_iter()
                .flat_map(|k| {
                    dom.iter().map(move |v| {
                        let mut k = k.clone();
                        k.push(v.clone());
                        k
                    })
                })
                .collect();
        }
        let names: Vec<String> = vars.into_iter().map(|(x, _)| x).collect();
        let states = keys
            .iter()
            .map(|k| names.iter().cloned().zip(k.iter().cloned().map(Bunch::elem)).collect())
            .collect();
        let index = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(StateSpace {
            vars: names,
            states,
            index,
        })
    }

    /// Integer variables over inclusive ranges.
    pub fn ints(vars: &[(&str, i64, i64)]) -> Result<Self> {
        Self::new(
            vars.iter()
                .map(|(x, lo, hi)| (x.to_string(), (*lo..=*hi).map(Value::Int).collect()))
                .collect(),
        )
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn states(&self) -> &[Env] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Position of the state that `env` determines; `None` when outside the space.
    pub fn index_of(&self, env: &Env) -> Option<usize> {
        let key: Option<Vec<Value>> = self
            .vars
            .iter()
            .map(|x| env.get(x).and_then(Bunch::as_element).cloned())
            .collect();
        self.index.get(&key?).copied()
    }

    pub fn extension(&self, mut f: impl FnMut(&Env) -> Result<bool>) -> Result<PredExt> {
        Ok(PredExt(self.states.iter().map(&mut f).collect::<Result<_>>()?))
    }

    pub fn everything(&self) -> PredExt {
        PredExt(vec![true; self.len()])
    }

    pub fn nothing(&self) -> PredExt {
        PredExt(vec![false; self.len()])
    }

    pub fn singleton(&self, i: usize) -> PredExt {
        let mut p = self.nothing();
        p.0[i] = true;
        p
    }
}

/// The cached conjugate preconditions used to rebuild prospective values.
#[derive(Debug, Clone)]
pub struct Outcomes {
    /// States from which `S` may abort.
    pub abortive: PredExt,
    /// `reach[j]`: states from which `S` may terminate in state `j`.
    pub reach: Vec<PredExt>,
}

/// One failure of the basic law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub program: String,
    pub state: Env,
    pub z: Bunch,
    /// `z : (S ◇ E)`
    pub lhs: bool,
    /// `⟨S⟩(z : E)`
    pub rhs: bool,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at [{}], z = {}: z:(S<>E) is {} but <S>(z:E) is {}",
            self.program, self.state, self.z, self.lhs, self.rhs
        )
    }
}

impl Evaluator {
    pub fn wp(&self, s: &Cmd, q: &PredExt, space: &StateSpace) -> Result<PredExt> {
        match s {
            Cmd::Skip => Ok(q.clone()),
            Cmd::Assign(xs, es) => space.extension(|env| self.wp_assign(xs, es, env, q, space)),
            Cmd::Pre(p, body) => {
                let pe = space.extension(|env| self.holds(p, env))?;
                Ok(pe.and(&self.wp(body, q, space)?))
            }
            Cmd::Guard(p, body) => {
                let pe = space.extension(|env| self.holds(p, env))?;
                Ok(pe.not().or(&self.wp(body, q, space)?))
            }
            Cmd::Choice(a, b) => Ok(self.wp(a, q, space)?.and(&self.wp(b, q, space)?)),
            Cmd::Seq(a, b) => {
                let mid = self.wp(b, q, space)?;
                self.wp(a, &mid, space)
            }
            Cmd::If(g, a, b) => {
                let ge = space.extension(|env| self.holds(g, env))?;
                let wa = self.wp(a, q, space)?;
                let wb = self.wp(b, q, space)?;
                Ok(ge.and(&wa).or(&ge.not().and(&wb)))
            }
            Cmd::Pref(..) => Err(Error::Unsupported("preferential choice has no weakest precondition".into())),
            Cmd::Prob(..) => Err(Error::Unsupported("probabilistic choice has no weakest precondition".into())),
        }
    }

    fn wp_assign(&self, xs: &[String], es: &[Expr], env: &Env, q: &PredExt, space: &StateSpace) -> Result<bool> {
        let mut values = Vec::with_capacity(es.len());
        for (x, e) in xs.iter().zip(es) {
            let hint = env.get(x).map(|b| b.type_tag().clone());
            values.push(self.eval_hint(e, env, hint.as_ref())?);
        }
        if values.iter().any(Bunch::is_improper) {
            return Ok(false);
        }
        let mut todo = vec![env.clone()];
        for (x, vals) in xs.iter().zip(&values) {
            todo = todo
                .into_iter()
                .flat_map(|st| vals.elems().iter().map(move |v| st.bind(x, Bunch::elem(v.clone()))))
                .collect();
        }
        for next in &todo {
            match space.index_of(next) {
                Some(i) if q.contains(i) => {}
                Some(_) => return Ok(false),
                None => return Err(Error::StateEscape(next.to_string())),
            }
        }
        Ok(true)
    }

    /// `⟨S⟩Q = ¬[S]¬Q`
    pub fn cwp(&self, s: &Cmd, q: &PredExt, space: &StateSpace) -> Result<PredExt> {
        Ok(self.wp(s, &q.not(), space)?.not())
    }

    /// Where `S` can lead from each state: `⟨S⟩false` and `⟨S⟩(state = j)` for every `j`.
    pub fn outcomes(&self, s: &Cmd, space: &StateSpace) -> Result<Outcomes> {
        Ok(Outcomes {
            abortive: self.cwp(s, &space.nothing(), space)?,
            reach: (0..space.len())
                .map(|j| self.cwp(s, &space.singleton(j), space))
                .collect::<Result<_>>()?,
        })
    }

    /// `S ◇ E` rebuilt from the conjugate weakest precondition:
    /// `⟨S⟩false ↣ ⊥ , (∮x' • ⟨S⟩(x = x') ↣ E[x'/x])`.
    pub fn pv_explicit(&self, s: &Cmd, e: &Expr, env: &Env, space: &StateSpace) -> Result<Bunch> {
        let here = space
            .index_of(env)
            .ok_or_else(|| Error::StateEscape(env.to_string()))?;
        self.pv_from_outcomes(&self.outcomes(s, space)?, e, here, env, space)
    }

    /// [`Evaluator::pv_explicit`] at every state of the space.
    pub fn pv_explicit_all(&self, s: &Cmd, e: &Expr, space: &StateSpace) -> Result<Vec<Bunch>> {
        let out = self.outcomes(s, space)?;
        space
            .states()
            .iter()
            .enumerate()
            .map(|(i, env)| self.pv_from_outcomes(&out, e, i, env, space))
            .collect()
    }

    fn pv_from_outcomes(&self, out: &Outcomes, e: &Expr, here: usize, env: &Env, space: &StateSpace) -> Result<Bunch> {
        let ty = self.infer(e, &tyenv_of(env), None)?;
        if out.abortive.contains(here) {
            return Ok(Bunch::improper(ty));
        }
        let mut acc = Bunch::null(ty.clone());
        for (j, target) in space.states().iter().enumerate() {
            if out.reach[j].contains(here) {
                let e_there = self.eval_hint(e, &env.override_with(target), Some(&ty))?;
                acc = acc.union(&e_there)?;
            }
        }
        Ok(acc)
    }

    /// Check `z : (S ◇ E) ⇔ ⟨S⟩(z : E)` at every state and every atomic `z`
    /// (null, ⊥, and each element `E` takes anywhere in the space or its type).
    pub fn basic_law_check(&self, s: &Cmd, e: &Expr, space: &StateSpace) -> Result<Vec<Violation>> {
        let Some(first) = space.states().first() else {
            return Ok(vec![]);
        };
        let ty = self.infer(e, &tyenv_of(first), None)?;
        let mut zs = vec![Bunch::null(ty.clone()), Bunch::improper(ty.clone())];
        let mut elems = std::collections::BTreeSet::new();
        for st in space.states() {
            elems.extend(self.eval_hint(e, st, Some(&ty))?.elems().iter().cloned());
        }
        if let Ok(all) = ty.enumerate(&self.bounds) {
            elems.extend(all);
        }
        zs.extend(elems.into_iter().map(Bunch::elem));

        let mut out = Vec::new();
        let program = s.to_string();
        let pvs: Vec<Bunch> = space
            .states()
            .iter()
            .map(|st| self.pv(s, e, st))
            .collect::<Result<_>>()?;
        for z in &zs {
            let post = space.extension(|st| z.sub_bunch(&self.eval_hint(e, st, Some(&ty))?))?;
            let pre = self.cwp(s, &post, space)?;
            for (i, st) in space.states().iter().enumerate() {
                let lhs = z.sub_bunch(&pvs[i])?;
                let rhs = pre.contains(i);
                if lhs != rhs {
                    out.push(Violation {
                        program: program.clone(),
                        state: st.clone(),
                        z: z.clone(),
                        lhs,
                        rhs,
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Variables a command may write; used to recognise frame-independent predicates.
pub fn write_set(s: &Cmd) -> Vec<String> {
    s.write_set().into_iter().collect()
}

/// Whether `p` holds the same on every pair of states that agree outside `frame`.
pub fn independent_of(p: &PredExt, frame: &[String], space: &StateSpace) -> bool {
    let key = |env: &Env| -> Vec<Option<Bunch>> {
        space
            .vars()
            .iter()
            .filter(|v| !frame.contains(v))
            .map(|v| env.get(v).cloned())
            .collect()
    };
    let mut seen: HashMap<Vec<Option<Bunch>>, bool> = HashMap::new();
    for (i, st) in space.states().iter().enumerate() {
        match seen.insert(key(st), p.contains(i)) {
            Some(prev) if prev != p.contains(i) => return false,
            _ => {}
        }
    }
    true
}
