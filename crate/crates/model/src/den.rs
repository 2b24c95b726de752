//! Value and truth denotations.
//!
//! Every truth rule has the shape `{ρ | ρ ∈ ℰ ∧ φ(ρ)}`, so the model keeps
//! `φ` as [`Model::holds`] and builds [`Model::tden`] as a filter. Checking a
//! law over the full environment set is therefore the same as checking it
//! for every subset, which is why the validator never enumerates subsets of ℰ.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::sem::{self, SemSet, SemVal, Shown, Ty};
use crate::term::{Pred, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unsupported in a finite model: {0}")]
    Unsupported(String),
    #[error("ill-typed term: {0}")]
    Type(String),
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("choice from the empty set in {0}")]
    EmptyChoice(String),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Binding {
    pub ty: Ty,
    pub val: SemSet,
}

/// An environment ρ: source variables bound to typed denotations.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct SemEnv(BTreeMap<String, Binding>);

impl SemEnv {
    pub fn new() -> Self {
        SemEnv::default()
    }

    /// `ρ ⊕ ⦇name ↝ val⦈`
    pub fn with(&self, name: &str, ty: Ty, val: SemSet) -> SemEnv {
        let mut out = self.clone();
        out.0.insert(name.to_string(), Binding { ty, val });
        out
    }

    pub fn bind(&mut self, name: &str, ty: Ty, val: SemSet) {
        self.0.insert(name.to_string(), Binding { ty, val });
    }

    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.0.get(name)
    }
}

impl fmt::Display for SemEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⦇")?;
        for (i, (k, b)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k} ↝ {}", Shown(&b.val))?;
        }
        write!(f, "⦈")
    }
}

/// How the host `choice` picks from a non-empty set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiceMode {
    /// The least element in the canonical order.
    Canonical,
    /// A seeded random member on every call. Still a member, but not a
    /// function; used as a negative control.
    Stub { seed: u64 },
}

pub struct Model {
    carrier: usize,
    mode: ChoiceMode,
    rng: RefCell<StdRng>,
}

impl Model {
    pub fn new(carrier: usize) -> Self {
        Model::with_choice(carrier, ChoiceMode::Canonical)
    }

    pub fn with_choice(carrier: usize, mode: ChoiceMode) -> Self {
        let seed = match mode {
            ChoiceMode::Stub { seed } => seed,
            ChoiceMode::Canonical => 0,
        };
        Model {
            carrier,
            mode,
            rng: RefCell::new(StdRng::seed_from_u64(seed)),
        }
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn choice(&self, s: &SemSet, ctx: &dyn fmt::Display) -> Result<SemVal> {
        if s.is_empty() {
            return Err(ModelError::EmptyChoice(ctx.to_string()));
        }
        Ok(match self.mode {
            ChoiceMode::Canonical => s.iter().next().unwrap().clone(),
            ChoiceMode::Stub { .. } => {
                let i = self.rng.borrow_mut().gen_range(0..s.len());
                s.iter().nth(i).unwrap().clone()
            }
        })
    }

    pub fn bottom(&self, ty: &Ty) -> SemSet {
        sem::bottom(ty, self.carrier)
    }

    /// `x = ⟦⊥_ty⟧`, with a cheap κ test first.
    pub fn is_bottom(&self, x: &SemSet, ty: &Ty) -> bool {
        if matches!(ty, Ty::Num) {
            return false;
        }
        x.contains(&sem::kappa(ty, self.carrier)) && *x == self.bottom(ty)
    }

    pub fn type_of(&self, t: &Term, env: &SemEnv) -> Result<Ty> {
        let set_elem = |t: &Term| -> Result<Ty> {
            match self.type_of(t, env)? {
                Ty::Pow(e) => Ok(*e),
                other => Err(ModelError::Type(format!("{t} has type {other}, not a set"))),
            }
        };
        Ok(match t {
            Term::Atom(_) => Ty::Given,
            Term::Num(_) | Term::Card(_) => Ty::Num,
            Term::Var(x) => env
                .get(x)
                .ok_or_else(|| ModelError::Unbound(x.clone()))?
                .ty
                .clone(),
            Term::Bottom(ty) => ty.clone(),
            Term::EmptySet(e) => Ty::pow(e.clone()),
            Term::Pack(a) | Term::Pow(a) => Ty::pow(self.type_of(a, env)?),
            Term::Unpack(a) | Term::Choice(a) => set_elem(a)?,
            Term::Maplet(a, b) => Ty::prod(self.type_of(a, env)?, self.type_of(b, env)?),
            Term::Cross(a, b) => Ty::pow(Ty::prod(set_elem(a)?, set_elem(b)?)),
            Term::Union(a, b) => {
                let (ta, tb) = (self.type_of(a, env)?, self.type_of(b, env)?);
                if ta != tb {
                    return Err(ModelError::Type(format!("{t}: {ta} vs {tb}")));
                }
                ta
            }
            Term::Compr { set, .. } => self.type_of(set, env)?,
            Term::Guard(_, e) => self.type_of(e, env)?,
            Term::Subst { body, var, with } => {
                let ty = self.type_of(with, env)?;
                self.type_of(body, &env.with(var, ty, SemSet::new()))?
            }
            Term::Big => return Err(ModelError::Unsupported("BIG".into())),
        })
    }

    /// The facsimile `choice(⟦s⟧ν(ρ))` of a set-valued element term.
    pub fn facsimile(&self, s: &Term, env: &SemEnv) -> Result<SemSet> {
        let den = self.vden(s, env)?;
        match self.choice(&den, s)? {
            SemVal::Set(inner) => Ok(inner),
            other => Err(ModelError::Type(format!("{s} denotes {other}, not a set"))),
        }
    }

    /// ⟦t⟧ν(ρ)
    pub fn vden(&self, t: &Term, env: &SemEnv) -> Result<SemSet> {
        Ok(match t {
            Term::Atom(i) => [SemVal::Atom(*i)].into(),
            Term::Num(k) => [SemVal::Num(*k)].into(),
            Term::Var(x) => env
                .get(x)
                .ok_or_else(|| ModelError::Unbound(x.clone()))?
                .val
                .clone(),
            Term::Bottom(ty) => self.bottom(ty),
            Term::EmptySet(_) => [SemVal::Set(SemSet::new())].into(),
            Term::Pack(a) => {
                let v = self.vden(a, env)?;
                let ty = self.type_of(a, env)?;
                if self.is_bottom(&v, &ty) {
                    self.bottom(&Ty::pow(ty))
                } else {
                    [SemVal::Set(v)].into()
                }
            }
            Term::Unpack(a) => {
                let v = self.vden(a, env)?;
                let ty = self.type_of(a, env)?;
                if self.is_bottom(&v, &ty) {
                    let elem = ty.elem().cloned().ok_or_else(|| {
                        ModelError::Type(format!("unpacking non-set {a}"))
                    })?;
                    return Ok(self.bottom(&elem));
                }
                match self.choice(&v, a)? {
                    SemVal::Set(inner) => inner,
                    other => {
                        return Err(ModelError::Type(format!("unpacking {a} = {other}")));
                    }
                }
            }
            Term::Maplet(a, b) => {
                let (va, vb) = (self.vden(a, env)?, self.vden(b, env)?);
                let (ta, tb) = (self.type_of(a, env)?, self.type_of(b, env)?);
                if self.is_bottom(&va, &ta) || self.is_bottom(&vb, &tb) {
                    self.bottom(&Ty::prod(ta, tb))
                } else {
                    sem::cross(&va, &vb)
                }
            }
            Term::Pow(s) => [SemVal::Set(sem::powerset(&self.facsimile(s, env)?))].into(),
            Term::Cross(s, u) => {
                let (ts, tu) = (self.type_of(s, env)?, self.type_of(u, env)?);
                let either_bottom = self.is_bottom(&self.vden(s, env)?, &ts)
                    || self.is_bottom(&self.vden(u, env)?, &tu);
                if either_bottom {
                    let elem = |t: &Ty| t.elem().cloned().expect("typed above");
                    self.bottom(&Ty::pow(Ty::prod(elem(&ts), elem(&tu))))
                } else {
                    let c = sem::cross(&self.facsimile(s, env)?, &self.facsimile(u, env)?);
                    [SemVal::Set(c)].into()
                }
            }
            Term::Choice(s) => {
                let f = self.facsimile(s, env)?;
                if f.is_empty() {
                    SemSet::new()
                } else {
                    [self.choice(&f, t)?].into()
                }
            }
            Term::Card(s) => [SemVal::Num(self.facsimile(s, env)?.len() as u64)].into(),
            Term::Union(a, b) => {
                let mut v = self.vden(a, env)?;
                v.extend(self.vden(b, env)?);
                v
            }
            Term::Compr { var, set, body } => {
                let elem_ty = self.type_of(t, env)?.elem().cloned().expect("set typed");
                let mut kept = SemSet::new();
                for x in self.facsimile(set, env)? {
                    let inner = env.with(var, elem_ty.clone(), [x.clone()].into());
                    if self.holds(body, &inner)? {
                        kept.insert(x);
                    }
                }
                [SemVal::Set(kept)].into()
            }
            Term::Guard(g, e) => {
                if self.holds(g, env)? {
                    self.vden(e, env)?
                } else {
                    SemSet::new()
                }
            }
            Term::Subst { body, var, with } => {
                let ty = self.type_of(with, env)?;
                let v = self.vden(with, env)?;
                self.vden(body, &env.with(var, ty, v))?
            }
            Term::Big => return Err(ModelError::Unsupported("BIG".into())),
        })
    }

    /// Whether ρ survives the truth rule of `p`, i.e. `⟦p⟧τ{ρ} = {ρ}`.
    pub fn holds(&self, p: &Pred, env: &SemEnv) -> Result<bool> {
        Ok(match p {
            Pred::True => true,
            Pred::False => false,
            Pred::Eq(a, b) => self.vden(a, env)? == self.vden(b, env)?,
            Pred::Mem(e, s) => self.vden(e, env)?.is_subset(&self.facsimile(s, env)?),
            Pred::Element(e) => self.vden(e, env)?.len() == 1,
            Pred::Incl(a, b) => self.vden(a, env)?.is_subset(&self.vden(b, env)?),
            Pred::Not(q) => !self.holds(q, env)?,
            Pred::And(a, b) => self.holds(a, env)? && self.holds(b, env)?,
            Pred::Or(a, b) => self.holds(a, env)? || self.holds(b, env)?,
            Pred::Forall { var, set, body } | Pred::Exists { var, set, body } => {
                let elem_ty = match self.type_of(set, env)? {
                    Ty::Pow(e) => *e,
                    other => return Err(ModelError::Type(format!("quantifying over {other}"))),
                };
                let universal = matches!(p, Pred::Forall { .. });
                let mut verdict = universal;
                for x in self.facsimile(set, env)? {
                    let inner = env.with(var, elem_ty.clone(), [x].into());
                    if self.holds(body, &inner)? != universal {
                        verdict = !universal;
                        break;
                    }
                }
                verdict
            }
            Pred::Subst { body, var, with } => {
                let ty = self.type_of(with, env)?;
                let v = self.vden(with, env)?;
                self.holds(body, &env.with(var, ty, v))?
            }
            Pred::Infinite(_) => return Err(ModelError::Unsupported("infinite".into())),
        })
    }

    /// ⟦p⟧τ(ℰ)
    pub fn tden(&self, p: &Pred, envs: &[SemEnv]) -> Result<Vec<SemEnv>> {
        let mut out = Vec::new();
        for env in envs {
            if self.holds(p, env)? {
                out.push(env.clone());
            }
        }
        Ok(out)
    }
}
