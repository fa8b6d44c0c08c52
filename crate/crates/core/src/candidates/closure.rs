//! Bounded Curry derivation search for `Cl⁰` and the staged closure.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{cl_step, FiniteCandidate, UniversalContext, Universe};
use crate::rewriting::{congruent, explore_class, Theory};
use crate::syntax::{fresh_name, Env, Name, Prop, Proof, Style, Term};
use crate::typing::{Context, Derivation, Rule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureBounds {
    /// Maximal derivation depth for `Cl⁰`.
    pub depth: usize,
    /// Last stage index computed.
    pub k_max: usize,
    /// Congruence fuel per side condition.
    pub fuel: usize,
}

#[derive(Clone, Debug, Default)]
struct Memo {
    found: Option<(usize, Derivation)>,
    failed_upto: usize,
}

/// Rule-directed derivation search over a fixed proposition pool.
pub struct Typer<'t> {
    theory: &'t Theory,
    delta: Context,
    pool: Vec<Prop>,
    terms: Vec<Term>,
    fuel: usize,
    cong: HashMap<(Prop, Prop), bool>,
    classes: HashMap<Prop, Vec<Prop>>,
    memo: HashMap<MemoKey, Memo>,
}

/// Context, subject, goal.
type MemoKey = (Vec<(Name, Prop)>, Proof, Prop);

fn subformulas(p: &Prop, out: &mut BTreeSet<Prop>) {
    if !out.insert(p.canonical()) {
        return;
    }
    match p {
        Prop::Atom(..) => {}
        Prop::Imp(a, b) => {
            subformulas(a, out);
            subformulas(b, out);
        }
        Prop::Forall(_, b) => subformulas(b, out),
    }
}

impl<'t> Typer<'t> {
    /// The pool holds the sub-propositions of `props` and of the slice of
    /// `delta`, plus their instances by `terms` below quantifiers.
    pub fn new(theory: &'t Theory, delta: &UniversalContext, props: &[Prop], terms: &[Term], fuel: usize) -> Self {
        let ctx = delta.context();
        let mut pool = BTreeSet::new();
        for p in props.iter().chain(ctx.0.iter().map(|(_, p)| p)) {
            subformulas(p, &mut pool);
        }
        let foralls: Vec<Prop> = pool.iter().filter(|p| matches!(p, Prop::Forall(..))).cloned().collect();
        for f in foralls {
            if let Prop::Forall(x, b) = f {
                for t in terms {
                    subformulas(&b.subst(&x, t), &mut pool);
                }
            }
        }
        Typer {
            theory,
            delta: ctx,
            pool: pool.into_iter().collect(),
            terms: terms.to_vec(),
            fuel,
            cong: HashMap::new(),
            classes: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    pub fn pool(&self) -> &[Prop] {
        &self.pool
    }

    pub fn delta(&self) -> &Context {
        &self.delta
    }

    fn congruent(&mut self, a: &Prop, b: &Prop) -> bool {
        if a.alpha_eq(b) {
            return true;
        }
        if !self.theory.has_rules() {
            return false;
        }
        let key = (a.canonical(), b.canonical());
        if let Some(v) = self.cong.get(&key) {
            return *v;
        }
        let v = congruent(self.theory, a, b, self.fuel).is_yes();
        self.cong.insert(key, v);
        v
    }

    /// Known members of the class of `p` no larger than the pool's largest
    /// proposition plus two nodes.
    fn class(&mut self, p: &Prop) -> Vec<Prop> {
        let c = p.canonical();
        if let Some(v) = self.classes.get(&c) {
            return v.clone();
        }
        let v = if self.theory.has_rules() {
            let limit = self.pool.iter().map(Prop::size).max().unwrap_or(0).max(p.size()) + 2;
            let (members, _) = explore_class(self.theory, p, self.fuel);
            members
                .into_iter()
                .map(|(q, _)| q)
                .filter(|q| q.size() <= limit)
                .collect()
        } else {
            vec![p.clone()]
        };
        self.classes.insert(c, v.clone());
        v
    }

    /// A derivation of `ctx ⊢ pi : goal` of depth at most `depth`.
    pub fn derive(&mut self, ctx: &Context, pi: &Proof, goal: &Prop, depth: usize) -> Option<Derivation> {
        if depth == 0 {
            return None;
        }
        let key = (ctx.0.clone(), pi.clone(), goal.canonical());
        if let Some(m) = self.memo.get(&key) {
            if let Some((d, der)) = &m.found {
                if *d <= depth {
                    return Some(der.clone());
                }
            }
            if depth <= m.failed_upto {
                return None;
            }
        }
        let out = self.search(ctx, pi, goal, depth);
        let m = self.memo.entry(key).or_default();
        match &out {
            Some(d) => {
                let dd = d.depth();
                if m.found.as_ref().is_none_or(|(old, _)| dd < *old) {
                    m.found = Some((dd, d.clone()));
                }
            }
            None => m.failed_upto = m.failed_upto.max(depth),
        }
        out
    }

    fn search(&mut self, ctx: &Context, pi: &Proof, goal: &Prop, depth: usize) -> Option<Derivation> {
        let style = Style::Curry;
        match pi {
            Proof::Var(a) => {
                let b = ctx.get(a)?.clone();
                if self.congruent(&b, goal) {
                    let rule = Rule::Axiom { hyp: a.clone() };
                    return Some(Derivation::build(style, rule, ctx.clone(), goal.clone(), vec![]));
                }
            }
            Proof::Lam(b, body) => {
                for c in self.class(goal) {
                    let Prop::Imp(dom, cod) = c else { continue };
                    if let Some(prem) = self.derive(&ctx.extend(b, &dom), body, &cod, depth - 1) {
                        let rule = Rule::ImpIntro {
                            hyp: b.clone(),
                            dom: *dom,
                            cod: *cod,
                        };
                        return Some(Derivation::build(style, rule, ctx.clone(), goal.clone(), vec![prem]));
                    }
                }
            }
            Proof::App(f, x) => {
                for dom in self.pool.clone() {
                    let Some(arg) = self.derive(ctx, x, &dom, depth - 1) else { continue };
                    let fprop = Prop::imp(dom.clone(), goal.clone());
                    if let Some(fun) = self.derive(ctx, f, &fprop, depth - 1) {
                        let rule = Rule::ImpElim {
                            dom,
                            cod: goal.clone(),
                        };
                        return Some(Derivation::build(style, rule, ctx.clone(), goal.clone(), vec![fun, arg]));
                    }
                }
            }
            Proof::TLam(..) | Proof::TApp(..) => return None,
        }
        if depth < 2 {
            return None;
        }
        let fv = ctx.free_term_vars();
        for c in self.class(goal) {
            let Prop::Forall(x, body) = c else { continue };
            let (x, body) = if fv.contains(&x) {
                let y = fresh_name(&x, |n| fv.contains(n) || body.has_free(n));
                let b = body.subst(&x, &Term::Var(y.clone()));
                (y, b)
            } else {
                (x, *body)
            };
            if let Some(prem) = self.derive(ctx, pi, &body, depth - 1) {
                let rule = Rule::ForallIntro { var: x, body };
                return Some(Derivation::build(style, rule, ctx.clone(), goal.clone(), vec![prem]));
            }
        }
        for f in self.pool.clone() {
            let Prop::Forall(x, body) = &f else { continue };
            for t in self.terms.clone() {
                let inst = body.subst(x, &t);
                if !self.congruent(&inst, goal) {
                    continue;
                }
                if let Some(prem) = self.derive(ctx, pi, &f, depth - 1) {
                    let rule = Rule::ForallElim {
                        var: x.clone(),
                        body: (**body).clone(),
                        inst: t,
                    };
                    return Some(Derivation::build(style, rule, ctx.clone(), goal.clone(), vec![prem]));
                }
            }
        }
        None
    }

    /// `Cl⁰(a)_env`: universe members with a derivation from the slice.
    pub fn cl0(&mut self, u: &Universe, a: &Prop, env: &Env, depth: usize) -> (FiniteCandidate, Vec<Option<Derivation>>) {
        let goal = a.subst_env(env);
        let ctx = self.delta.clone();
        let mut set = u.empty_set();
        let mut ders = Vec::with_capacity(u.len());
        for id in 0..u.len() {
            let d = self.derive(&ctx, u.term(id), &goal, depth);
            if d.is_some() {
                set.insert(id);
            }
            ders.push(d);
        }
        (set, ders)
    }
}

/// Stages `Cl⁰ ⊆ Cl¹ ⊆ …` of one proposition and environment.
#[derive(Clone, Debug)]
pub struct ClosureTable {
    pub prop: Prop,
    pub env: Env,
    pub bounds: ClosureBounds,
    pub stages: Vec<FiniteCandidate>,
    /// Stage at which each universe member first entered.
    pub first_stage: Vec<Option<usize>>,
    /// Stage-0 derivations, indexed by universe member.
    pub derivations: Vec<Option<Derivation>>,
    /// Per step, terms excluded only because an instance left the universe.
    pub boundary: Vec<usize>,
}

impl ClosureTable {
    /// The last computed stage.
    pub fn set(&self) -> &FiniteCandidate {
        self.stages.last().expect("a table has stage 0")
    }

    pub fn contains(&self, id: usize) -> bool {
        self.set().contains(id)
    }

    /// True when the last step added nothing.
    pub fn is_fixpoint(&self) -> bool {
        let n = self.stages.len();
        n >= 2 && self.stages[n - 1] == self.stages[n - 2]
    }
}

/// Stage 0 by derivation search, then expansion steps until `k_max` or a
/// fixpoint. `u` must be prepared.
pub fn closure(typer: &mut Typer<'_>, u: &Universe, a: &Prop, env: &Env, bounds: ClosureBounds) -> ClosureTable {
    let (s0, derivations) = typer.cl0(u, a, env, bounds.depth);
    let mut first_stage: Vec<Option<usize>> = (0..u.len()).map(|i| s0.contains(i).then_some(0)).collect();
    let mut stages = vec![s0];
    let mut boundary = Vec::new();
    for k in 1..=bounds.k_max {
        let prev = stages.last().expect("stage 0 exists");
        let step = cl_step(prev, u, None);
        boundary.push(step.boundary);
        for id in step.set.minus(prev) {
            first_stage[id] = Some(k);
        }
        let done = step.set == *prev;
        stages.push(step.set);
        if done {
            break;
        }
    }
    ClosureTable {
        prop: a.clone(),
        env: env.clone(),
        bounds,
        stages,
        first_stage,
        derivations,
        boundary,
    }
}
