//! Host set-theory lemmas used by the hand validations, plus the two
//! properties of the κ-extended model. All checked by enumeration; a
//! failure here points at the host kernel, not at bunch theory.

use crate::axioms::Universe;
use crate::den::Model;
use crate::report::{Group, Line, Outcome, Report};
use crate::sem::{self, SemSet, SemVal, Ty};

/// All subsets of `base`.
fn subsets(base: &SemSet) -> Vec<SemSet> {
    sem::powerset(base)
        .into_iter()
        .map(|v| match v {
            SemVal::Set(s) => s,
            _ => unreachable!(),
        })
        .collect()
}

fn filter(x: &SemSet, p: &SemSet) -> SemSet {
    x.intersection(p).cloned().collect()
}

struct Check {
    name: &'static str,
    group: Group,
    checked: usize,
    note: Option<String>,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str, group: Group) -> Self {
        Check {
            name,
            group,
            checked: 0,
            note: None,
            failure: None,
        }
    }

    fn note(mut self, n: &str) -> Self {
        self.note = Some(n.to_string());
        self
    }

    /// Records one case; keeps the first failure.
    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn line(self) -> Line {
        let outcome = match self.failure {
            Some(cx) => Outcome::Fail {
                instance: "host sets".into(),
                counterexample: cx,
                detail: "lemma violated".into(),
            },
            None => Outcome::Pass {
                instances: 1,
                environments: self.checked,
                sampled: false,
                note: self.note,
            },
        };
        Line {
            name: self.name.to_string(),
            group: self.group,
            outcome,
        }
    }
}

fn show(s: &SemSet) -> String {
    sem::Shown(s).to_string()
}

/// L1 to L9 over subsets of the power set of `T`, then Property 1 and
/// Property 2 for every type up to the depth bound.
pub fn lemma_suite(u: &Universe) -> Report {
    let model = Model::new(u.carrier);
    let base = sem::elements(&Ty::pow(Ty::Given), u.carrier);
    let sets = subsets(&base);
    let mut lines = Vec::new();

    // L1 as literally stated fails when a or b is empty (both products are
    // empty); it holds, and is only used, for non-empty a and b.
    let mut l1 = Check::new("L1", Group::Lemma).note("a, b non-empty");
    for a in sets.iter().filter(|s| !s.is_empty()) {
        for b in sets.iter().filter(|s| !s.is_empty()) {
            let ab = sem::cross(a, b);
            for c in &sets {
                for d in &sets {
                    let lhs = ab.is_subset(&sem::cross(c, d));
                    let rhs = a.is_subset(c) && b.is_subset(d);
                    l1.case(lhs == rhs, || {
                        format!("a={} b={} c={} d={}", show(a), show(b), show(c), show(d))
                    });
                }
            }
        }
    }
    lines.push(l1.line());

    let mut l2 = Check::new("L2", Group::Lemma);
    for x in &sets {
        for p in &sets {
            for q in &sets {
                let both = filter(x, &filter(p, q));
                let meet = filter(&filter(x, p), &filter(x, q));
                l2.case(both == meet, || format!("X={} P={} Q={}", show(x), show(p), show(q)));
            }
        }
    }
    lines.push(l2.line());

    let mut l3 = Check::new("L3", Group::Lemma);
    for e in &base {
        let a: SemSet = [e.clone()].into();
        let picked = model.choice(&a, &"L3").ok();
        l3.case(picked.map(|c| SemSet::from([c])) == Some(a.clone()), || show(&a));
    }
    lines.push(l3.line());

    let mut l4 = Check::new("L4", Group::Lemma);
    for a in &base {
        for b in &sets {
            let single: SemSet = [a.clone()].into();
            l4.case(single.is_subset(b) == b.contains(a), || format!("a={a} B={}", show(b)));
        }
    }
    lines.push(l4.line());

    let mut l5 = Check::new("L5", Group::Lemma);
    for a in &sets {
        for b in &sets {
            let in_pow = sem::powerset(b).contains(&SemVal::Set(a.clone()));
            l5.case(in_pow == a.is_subset(b), || format!("a={} b={}", show(a), show(b)));
        }
    }
    lines.push(l5.line());

    let mut l6 = Check::new("L6", Group::Lemma);
    for e in &base {
        for p in &sets {
            let kept = filter(&[e.clone()].into(), p);
            l6.case(!kept.is_empty() == p.contains(e), || format!("e={e} P={}", show(p)));
        }
    }
    lines.push(l6.line());

    let mut l7 = Check::new("L7", Group::Lemma);
    for a in &base {
        for b in &base {
            let sub = SemSet::from([a.clone()]).is_subset(&[b.clone()].into());
            l7.case(sub == (a == b), || format!("a={a} b={b}"));
        }
    }
    lines.push(l7.line());

    let mut l8 = Check::new("L8", Group::Lemma);
    for p in &sets {
        for q in &sets {
            let implies = base.iter().all(|x| !p.contains(x) || q.contains(x));
            l8.case(
                filter(&base, p).is_subset(&filter(&base, q)) == implies,
                || format!("P={} Q={}", show(p), show(q)),
            );
        }
    }
    lines.push(l8.line());

    let mut l9 = Check::new("L9", Group::Lemma);
    for s in &sets {
        for p in &sets {
            for q in &sets {
                let agree = s.iter().all(|x| p.contains(x) == q.contains(x));
                let ok = !agree || filter(s, p) == filter(s, q);
                l9.case(ok, || format!("S={} P={} Q={}", show(s), show(p), show(q)));
            }
        }
    }
    lines.push(l9.line());

    let (p1, p2) = model_properties(u);
    lines.push(p1);
    lines.push(p2);
    Report { lines }
}

/// Property 1 (every denotation lies inside ⟦⊥⟧) and Property 2 (κ marks
/// ⟦⊥⟧ and nothing else) over 𝒟(T) for each type up to `u.depth`.
fn model_properties(u: &Universe) -> (Line, Line) {
    let mut p1 = Check::new("property 1", Group::ModelProperty);
    let mut p2 = Check::new("property 2", Group::ModelProperty);
    for ty in Ty::up_to(u.depth) {
        let bot = sem::bottom(&ty, u.carrier);
        let kappa = sem::kappa(&ty, u.carrier);
        let elems: Vec<SemVal> = sem::elements(&ty, u.carrier).into_iter().collect();
        if elems.len() > 20 {
            continue;
        }
        let proper = (0u32..1 << elems.len()).map(|mask| {
            elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect::<SemSet>()
        });
        for x in proper.chain(std::iter::once(bot.clone())) {
            p1.case(x.is_subset(&bot), || format!("{}: {}", ty, show(&x)));
            p2.case(x.contains(&kappa) == (x == bot), || format!("{}: {}", ty, show(&x)));
        }
    }
    (p1.line(), p2.line())
}
