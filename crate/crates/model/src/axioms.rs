//! The axiom battery, checked by exhaustive enumeration of environments.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::den::{ChoiceMode, Model, Result, SemEnv};
use crate::report::{Group, Line, Outcome, Report};
use crate::sem::{self, SemSet, Shown, Ty};
use crate::term::{var, Pred, Term};

/// Bounds of the finite universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Universe {
    /// Atoms in the given set `T`.
    pub carrier: usize,
    /// Maximum type depth of the set-valued terms in an axiom.
    pub depth: usize,
    /// Add ⊥ to bunch domains and run the improper battery.
    pub improper: bool,
    /// Instantiations with more environments than this are sampled.
    pub max_envs: usize,
}

impl Default for Universe {
    fn default() -> Self {
        Universe {
            carrier: 2,
            depth: 2,
            improper: false,
            max_envs: 1 << 20,
        }
    }
}

impl Universe {
    pub fn new(carrier: usize, depth: usize) -> Self {
        Universe {
            carrier,
            depth,
            ..Universe::default()
        }
    }

    pub fn improper(mut self, on: bool) -> Self {
        self.improper = on;
        self
    }

    /// Element types whose power set stays within the depth bound.
    fn elem_types(&self) -> Vec<Ty> {
        Ty::up_to(self.depth.max(1) - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    /// Ranges over singletons.
    Elem,
    /// Ranges over every proper bunch.
    Bunch,
    /// Every proper bunch and ⊥.
    AnyBunch,
}

#[derive(Debug, Clone)]
struct VarSpec {
    name: &'static str,
    ty: Ty,
    role: Role,
}

fn v(name: &'static str, ty: &Ty, role: Role) -> VarSpec {
    VarSpec {
        name,
        ty: ty.clone(),
        role,
    }
}

#[derive(Debug, Clone)]
enum Law {
    /// `⟦P⟧τ(ℰ) = ⟦Q⟧τ(ℰ)`
    Iff(Pred, Pred),
    /// `⟦P⟧τ(ℰ) ⊆ ⟦Q⟧τ(ℰ)`
    Implies(Pred, Pred),
    /// `⟦P⟧τ(ℰ) = ℰ`
    Valid(Pred),
    /// `⟦E⟧ν(ρ) = ⟦F⟧ν(ρ)`
    Same(Term, Term),
}

impl std::fmt::Display for Law {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Law::Iff(p, q) => write!(f, "{p} ⇔ {q}"),
            Law::Implies(p, q) => write!(f, "{p} ⇒ {q}"),
            Law::Valid(p) => write!(f, "{p}"),
            Law::Same(a, b) => write!(f, "{a} = {b}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Instance {
    vars: Vec<VarSpec>,
    law: Law,
}

impl Instance {
    fn label(&self) -> String {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|s| format!("{}:{}", s.name, s.ty))
            .collect();
        format!("[{}] {}", vars.join(", "), self.law)
    }
}

struct Axiom {
    name: &'static str,
    group: Group,
    instances: Vec<Instance>,
}

fn axiom(name: &'static str, group: Group, instances: Vec<Instance>) -> Axiom {
    Axiom {
        name,
        group,
        instances,
    }
}

fn inst(vars: Vec<VarSpec>, law: Law) -> Instance {
    Instance { vars, law }
}

/// Predicates over the bound `x` and the free `y` (element), `t` (set).
fn body_pool() -> Vec<Pred> {
    let (x, y, t) = (var("x"), var("y"), var("t"));
    vec![
        Pred::True,
        x.clone().eq(y.clone()),
        x.clone().mem(t.clone()),
        x.clone().eq(y.clone()).not(),
        x.clone().eq(y).or(x.clone().mem(t.clone())),
        Pred::exists("z", t, var("z").eq(x)),
    ]
}

/// Guards over `y` (element), `t` (set) and the guarded bunch `e`.
fn guard_pool() -> Vec<Pred> {
    let (y, t, e) = (var("y"), var("t"), var("e"));
    vec![
        Pred::True,
        Pred::False,
        y.clone().mem(t.clone()),
        y.clone().mem(t.clone()).not(),
        e.clone().eq(y.clone()),
        Pred::Element(e.clone()),
        e.mem(t.clone()),
        Pred::forall("z", t, var("z").eq(y)),
    ]
}

fn set_theory(u: &Universe) -> Vec<Axiom> {
    use Role::Elem;
    let types = u.elem_types();
    let (s, t, x) = (var("s"), var("t"), var("x"));

    let mut pair = Vec::new();
    for a in &types {
        for b in &types {
            pair.push(inst(
                vec![
                    v("e", a, Elem),
                    v("f", b, Elem),
                    v("s", &Ty::pow(a.clone()), Elem),
                    v("t", &Ty::pow(b.clone()), Elem),
                ],
                Law::Iff(
                    var("e").maplet(var("f")).mem(s.clone().cross(t.clone())),
                    var("e").mem(s.clone()).and(var("f").mem(t.clone())),
                ),
            ));
        }
    }

    let sets = |a: &Ty| vec![v("s", &Ty::pow(a.clone()), Elem), v("t", &Ty::pow(a.clone()), Elem)];

    let powerset = types
        .iter()
        .map(|a| {
            inst(
                sets(a),
                Law::Iff(
                    s.clone().mem(t.clone().pow()),
                    Pred::forall("x", s.clone(), x.clone().mem(t.clone())),
                ),
            )
        })
        .collect();

    let mut compr = Vec::new();
    for a in &types {
        for body in body_pool() {
            let mut vars = sets(a);
            vars.push(v("e", a, Elem));
            vars.push(v("y", a, Elem));
            compr.push(inst(
                vars,
                Law::Iff(
                    var("e").mem(Term::compr("x", s.clone(), body.clone())),
                    var("e")
                        .mem(s.clone())
                        .and(body.with_subst("x", var("e"))),
                ),
            ));
        }
    }

    let equality = types
        .iter()
        .map(|a| {
            inst(
                sets(a),
                Law::Iff(
                    Pred::forall("x", s.clone(), x.clone().mem(t.clone()))
                        .and(Pred::forall("x", t.clone(), x.clone().mem(s.clone()))),
                    s.clone().eq(t.clone()),
                ),
            )
        })
        .collect();

    let choice = types
        .iter()
        .map(|a| {
            inst(
                vec![v("s", &Ty::pow(a.clone()), Elem)],
                Law::Implies(
                    Pred::exists("x", s.clone(), Pred::True),
                    Pred::exists("x", s.clone(), x.clone().eq(s.clone().choice())),
                ),
            )
        })
        .collect();

    vec![
        axiom("ordered pair", Group::SetTheory, pair),
        axiom("powerset", Group::SetTheory, powerset),
        axiom("comprehension", Group::SetTheory, compr),
        axiom("set equality", Group::SetTheory, equality),
        axiom("choice", Group::SetTheory, choice),
    ]
}

fn bunch_axioms(u: &Universe) -> Vec<Axiom> {
    use Role::{Bunch, Elem};
    let types = u.elem_types();
    let (a, e) = (var("a"), var("e"));
    let per_type = |f: &dyn Fn(&Ty) -> Instance| types.iter().map(f).collect::<Vec<_>>();

    let packaging1 = per_type(&|t| {
        inst(
            vec![v("a", &Ty::pow(t.clone()), Elem)],
            Law::Same(a.clone().unpack().pack(), a.clone()),
        )
    });
    let packaging2 = per_type(&|t| {
        inst(
            vec![v("e", t, Bunch)],
            Law::Same(e.clone().pack().unpack(), e.clone()),
        )
    });
    let element1 = per_type(&|t| {
        inst(
            vec![v("a", &Ty::pow(t.clone()), Elem)],
            Law::Iff(
                Pred::Element(a.clone().unpack()),
                a.clone().card().eq(Term::Num(1)),
            ),
        )
    });
    let element2 = per_type(&|t| {
        inst(
            vec![v("e", t, Bunch)],
            Law::Valid(Pred::Element(e.clone().pack())),
        )
    });

    let guard_vars = |t: &Ty| {
        vec![
            v("e", t, Bunch),
            v("y", t, Elem),
            v("t", &Ty::pow(t.clone()), Elem),
        ]
    };
    let mut guard1 = Vec::new();
    let mut guard2 = Vec::new();
    for t in &types {
        for g in guard_pool() {
            let guarded = Term::guarded(g.clone(), e.clone());
            guard1.push(inst(
                guard_vars(t),
                Law::Implies(g.clone(), guarded.clone().eq(e.clone())),
            ));
            guard2.push(inst(
                guard_vars(t),
                Law::Implies(
                    g.not(),
                    guarded.eq(Term::EmptySet(t.clone()).unpack()),
                ),
            ));
        }
    }

    vec![
        axiom("packaging 1", Group::Bunch, packaging1),
        axiom("packaging 2", Group::Bunch, packaging2),
        axiom("element 1", Group::Bunch, element1),
        axiom("element 2", Group::Bunch, element2),
        axiom("guard 1", Group::Bunch, guard1),
        axiom("guard 2", Group::Bunch, guard2),
    ]
}

fn improper_axioms(u: &Universe) -> Vec<Axiom> {
    use Role::AnyBunch;
    let types = u.elem_types();
    let bot = |t: &Ty| Term::Bottom(t.clone());
    let (a, b, e) = (var("a"), var("b"), var("e"));

    let maximality = types
        .iter()
        .map(|t| inst(vec![v("e", t, AnyBunch)], Law::Valid(e.clone().incl(bot(t)))))
        .collect();
    let atomicity = types
        .iter()
        .map(|t| {
            inst(
                vec![v("a", t, AnyBunch), v("b", t, AnyBunch)],
                Law::Implies(
                    bot(t).incl(a.clone().union(b.clone())),
                    a.clone().eq(bot(t)).or(b.clone().eq(bot(t))),
                ),
            )
        })
        .collect();
    let packaging = types
        .iter()
        .map(|t| inst(vec![], Law::Same(bot(t).pack(), bot(&Ty::pow(t.clone())))))
        .collect();
    let unpacking = types
        .iter()
        .map(|t| inst(vec![], Law::Same(bot(&Ty::pow(t.clone())).unpack(), bot(t))))
        .collect();
    let guarded = types
        .iter()
        .map(|t| {
            inst(
                vec![v("e", t, AnyBunch)],
                Law::Implies(e.clone().eq(bot(t)).not(), Pred::Element(e.clone().pack())),
            )
        })
        .collect();

    vec![
        axiom("maximality", Group::Improper, maximality),
        axiom("atomicity", Group::Improper, atomicity),
        axiom("improper packaging", Group::Improper, packaging),
        axiom("improper unpacking", Group::Improper, unpacking),
        axiom("guarded element", Group::Improper, guarded),
    ]
}

fn domain(spec: &VarSpec, n: usize) -> Vec<SemSet> {
    match spec.role {
        Role::Elem => sem::elements(&spec.ty, n)
            .into_iter()
            .map(|x| [x].into())
            .collect(),
        Role::Bunch => sem::denotations(&spec.ty, n, false),
        Role::AnyBunch => sem::denotations(&spec.ty, n, true),
    }
}

enum Verdict {
    Holds,
    Violated(String),
}

fn check_env(model: &Model, law: &Law, env: &SemEnv) -> Result<Verdict> {
    let truth = |p: &Pred| model.holds(p, env);
    Ok(match law {
        Law::Iff(p, q) => {
            let (l, r) = (truth(p)?, truth(q)?);
            if l == r {
                Verdict::Holds
            } else {
                Verdict::Violated(format!("left side {l}, right side {r}"))
            }
        }
        Law::Implies(p, q) => {
            if !truth(p)? || truth(q)? {
                Verdict::Holds
            } else {
                Verdict::Violated("hypothesis holds, conclusion does not".into())
            }
        }
        Law::Valid(p) => {
            if truth(p)? {
                Verdict::Holds
            } else {
                Verdict::Violated("predicate is false".into())
            }
        }
        Law::Same(a, b) => {
            let (l, r) = (model.vden(a, env)?, model.vden(b, env)?);
            if l == r {
                Verdict::Holds
            } else {
                Verdict::Violated(format!("{} ≠ {}", Shown(&l), Shown(&r)))
            }
        }
    })
}

/// Runs one instance over every environment (or a seeded sample of
/// `max_envs` of them). Returns the environment count and whether it was
/// sampled, or the first failure.
fn run_instance(
    model: &Model,
    instance: &Instance,
    u: &Universe,
) -> std::result::Result<(usize, bool), Outcome> {
    let domains: Vec<Vec<SemSet>> = instance
        .vars
        .iter()
        .map(|s| domain(s, u.carrier))
        .collect();
    let total = domains
        .iter()
        .try_fold(1usize, |acc, d| acc.checked_mul(d.len()))
        .unwrap_or(usize::MAX);
    let sampled = total > u.max_envs;
    let count = total.min(u.max_envs);
    let mut rng = StdRng::seed_from_u64(0x6d6f64656c);

    let mut idx = vec![0usize; domains.len()];
    for step in 0..count {
        if sampled {
            for (i, d) in domains.iter().enumerate() {
                idx[i] = rng.gen_range(0..d.len());
            }
        } else if step > 0 {
            // odometer over the domains
            for (i, d) in domains.iter().enumerate() {
                idx[i] += 1;
                if idx[i] < d.len() {
                    break;
                }
                idx[i] = 0;
            }
        }
        let mut env = SemEnv::new();
        for ((spec, d), &i) in instance.vars.iter().zip(&domains).zip(&idx) {
            env.bind(spec.name, spec.ty.clone(), d[i].clone());
        }
        let fail = |detail: String| Outcome::Fail {
            instance: instance.label(),
            counterexample: env.to_string(),
            detail,
        };
        match check_env(model, &instance.law, &env) {
            Ok(Verdict::Holds) => {}
            Ok(Verdict::Violated(why)) => return Err(fail(why)),
            Err(e) => return Err(fail(e.to_string())),
        }
    }
    Ok((count, sampled))
}

fn run_axiom(model: &Model, ax: &Axiom, u: &Universe) -> Line {
    let mut envs = 0;
    let mut any_sampled = false;
    for instance in &ax.instances {
        match run_instance(model, instance, u) {
            Ok((n, sampled)) => {
                envs += n;
                any_sampled |= sampled;
            }
            Err(outcome) => {
                return Line {
                    name: ax.name.to_string(),
                    group: ax.group,
                    outcome,
                }
            }
        }
    }
    Line {
        name: ax.name.to_string(),
        group: ax.group,
        outcome: Outcome::Pass {
            instances: ax.instances.len(),
            environments: envs,
            sampled: any_sampled,
            note: None,
        },
    }
}

fn skipped(name: &str, group: Group) -> Line {
    Line {
        name: name.to_string(),
        group,
        outcome: Outcome::Skipped {
            reason: "not finitely checkable".into(),
        },
    }
}

/// Validates every finitely checkable axiom over `u`, with the canonical
/// choice function.
pub fn validate_axioms(u: &Universe) -> Report {
    validate_axioms_with(u, ChoiceMode::Canonical)
}

pub fn validate_axioms_with(u: &Universe, mode: ChoiceMode) -> Report {
    let model = Model::with_choice(u.carrier, mode);
    let mut lines = Vec::new();
    let set = set_theory(u);
    for ax in &set {
        lines.push(run_axiom(&model, ax, u));
    }
    for name in ["BIG", "infinity 1", "infinity 2"] {
        lines.push(skipped(name, Group::SetTheory));
    }
    for ax in &bunch_axioms(u) {
        lines.push(run_axiom(&model, ax, u));
    }
    if u.improper {
        for ax in &improper_axioms(u) {
            lines.push(run_axiom(&model, ax, u));
        }
    }
    Report { lines }
}

/// Names of the axioms [`validate_axioms`] reports, in order.
pub fn axiom_names(improper: bool) -> Vec<&'static str> {
    let mut names = vec![
        "ordered pair",
        "powerset",
        "comprehension",
        "set equality",
        "choice",
        "BIG",
        "infinity 1",
        "infinity 2",
        "packaging 1",
        "packaging 2",
        "element 1",
        "element 2",
        "guard 1",
        "guard 2",
    ];
    if improper {
        names.extend([
            "maximality",
            "atomicity",
            "improper packaging",
            "improper unpacking",
            "guarded element",
        ]);
    }
    names
}
