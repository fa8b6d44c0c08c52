//! Contexts, derivations and the checker for the typing rules, in Church and
//! Curry variants, plus the derivation transforms for weakening,
//! substitutivity and erasure.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::rewriting::{congruent_with_cost, CongruenceVerdict, Theory};
use crate::syntax::{Name, Proof, Prop, Signature, Style, SyntaxError, Term};

mod drv;
mod enumerate;
mod transform;

pub use drv::{parse_drv, parse_drv_many, print_drv, DrvError};
pub use enumerate::{scan_judgements, JudgementScan};
pub use transform::{
    confusion_witness, erase, erase_derivation, retype, subst_derivation_proof, subst_derivation_term,
    weaken,
};
pub(crate) use transform::{finalize, term_names};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypingError {
    #[error("context does not extend the derivation's context at `{0}`")]
    NotExtension(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("hypothesis `{0}` not declared")]
    UnknownHypothesis(String),
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
}

/// Ordered list of hypotheses with pairwise distinct names; lookup ignores order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context(pub Vec<(Name, Prop)>);

impl Context {
    pub fn new() -> Self {
        Context(Vec::new())
    }

    pub fn get(&self, a: &str) -> Option<&Prop> {
        self.0.iter().find(|(n, _)| &**n == a).map(|(_, p)| p)
    }

    pub fn contains(&self, a: &str) -> bool {
        self.get(a).is_some()
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.0.iter().map(|(n, _)| n)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Γ, a:p`; an earlier declaration of `a` is dropped.
    pub fn extend(&self, a: &Name, p: &Prop) -> Context {
        let mut v: Vec<_> = self.0.iter().filter(|(n, _)| n != a).cloned().collect();
        v.push((a.clone(), p.clone()));
        Context(v)
    }

    pub fn remove(&self, a: &str) -> Context {
        Context(self.0.iter().filter(|(n, _)| &**n != a).cloned().collect())
    }

    pub fn free_term_vars(&self) -> BTreeSet<Name> {
        self.0.iter().flat_map(|(_, p)| p.free_term_vars()).collect()
    }

    pub fn subst(&self, x: &str, t: &Term) -> Context {
        Context(self.0.iter().map(|(n, p)| (n.clone(), p.subst(x, t))).collect())
    }

    /// Every declaration of `self` occurs in `other`, propositions up to α.
    pub fn is_sub(&self, other: &Context) -> bool {
        self.0
            .iter()
            .all(|(n, p)| other.get(n).is_some_and(|q| q.alpha_eq(p)))
    }

    pub fn equiv(&self, other: &Context) -> bool {
        self.len() == other.len() && self.is_sub(other)
    }

    pub fn duplicate(&self) -> Option<&Name> {
        let mut seen = BTreeSet::new();
        self.names().find(|n| !seen.insert(*n))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, p)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}:{p}")?;
        }
        Ok(())
    }
}

impl From<Vec<(Name, Prop)>> for Context {
    fn from(v: Vec<(Name, Prop)>) -> Self {
        Context(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgement {
    pub ctx: Context,
    pub subject: Proof,
    pub prop: Prop,
}

/// Rule tag with its witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Axiom { hyp: Name },
    /// The conclusion is congruent to `dom => cod`; `hyp` is the abstracted variable.
    ImpIntro { hyp: Name, dom: Prop, cod: Prop },
    /// The function premise's proposition is congruent to `dom => cod`.
    ImpElim { dom: Prop, cod: Prop },
    /// The conclusion is congruent to `!var. body`.
    ForallIntro { var: Name, body: Prop },
    /// The premise is congruent to `!var. body`; the conclusion to `(inst/var)body`.
    ForallElim { var: Name, body: Prop, inst: Term },
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Axiom { .. } => "axiom",
            Rule::ImpIntro { .. } => "imp-intro",
            Rule::ImpElim { .. } => "imp-elim",
            Rule::ForallIntro { .. } => "forall-intro",
            Rule::ForallElim { .. } => "forall-elim",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::Axiom { .. } => 0,
            Rule::ImpElim { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub style: Style,
    pub rule: Rule,
    pub concl: Judgement,
    pub premises: Vec<Derivation>,
}

/// Subject a rule assigns given its premises.
pub(crate) fn rule_subject(style: Style, rule: &Rule, premises: &[Derivation]) -> Proof {
    let sub = |i: usize| premises[i].concl.subject.clone();
    match (rule, style) {
        (Rule::Axiom { hyp }, _) => Proof::Var(hyp.clone()),
        (Rule::ImpIntro { hyp, .. }, _) => Proof::Lam(hyp.clone(), Box::new(sub(0))),
        (Rule::ImpElim { .. }, _) => Proof::app(sub(0), sub(1)),
        (Rule::ForallIntro { var, .. }, Style::Church) => Proof::TLam(var.clone(), Box::new(sub(0))),
        (Rule::ForallElim { inst, .. }, Style::Church) => Proof::tapp(sub(0), inst.clone()),
        (Rule::ForallIntro { .. } | Rule::ForallElim { .. }, Style::Curry) => sub(0),
    }
}

impl Derivation {
    /// Node whose subject is computed from the rule and premises.
    pub fn build(style: Style, rule: Rule, ctx: Context, prop: Prop, premises: Vec<Derivation>) -> Self {
        assert_eq!(premises.len(), rule.arity(), "premise count for {}", rule.tag());
        let subject = rule_subject(style, &rule, &premises);
        Derivation {
            style,
            rule,
            concl: Judgement { ctx, subject, prop },
            premises,
        }
    }

    pub fn axiom(style: Style, ctx: Context, hyp: &str, prop: Prop) -> Self {
        let rule = Rule::Axiom { hyp: crate::syntax::name(hyp) };
        Derivation::build(style, rule, ctx, prop, vec![])
    }

    /// `⇒`-introduction concluding exactly `dom => cod` from a premise in `Γ, hyp:dom`.
    pub fn imp_intro(hyp: &str, premise: Derivation, dom: Prop) -> Self {
        let cod = premise.concl.prop.clone();
        let ctx = premise.concl.ctx.remove(hyp);
        let prop = Prop::imp(dom.clone(), cod.clone());
        let rule = Rule::ImpIntro {
            hyp: crate::syntax::name(hyp),
            dom,
            cod,
        };
        Derivation::build(premise.style, rule, ctx, prop, vec![premise])
    }

    /// `⇒`-elimination whose function premise proves exactly an implication.
    pub fn imp_elim(f: Derivation, a: Derivation) -> Option<Self> {
        let Prop::Imp(dom, cod) = f.concl.prop.clone() else {
            return None;
        };
        let rule = Rule::ImpElim {
            dom: *dom,
            cod: (*cod).clone(),
        };
        Some(Derivation::build(f.style, rule, f.concl.ctx.clone(), *cod, vec![f, a]))
    }

    pub fn forall_intro(var: &str, premise: Derivation) -> Self {
        let body = premise.concl.prop.clone();
        let prop = Prop::forall(var, body.clone());
        let rule = Rule::ForallIntro {
            var: crate::syntax::name(var),
            body,
        };
        Derivation::build(premise.style, rule, premise.concl.ctx.clone(), prop, vec![premise])
    }

    /// `∀`-elimination on a premise proving exactly a universal proposition.
    pub fn forall_elim(premise: Derivation, inst: Term) -> Option<Self> {
        let Prop::Forall(var, body) = premise.concl.prop.clone() else {
            return None;
        };
        let prop = body.subst(&var, &inst);
        let rule = Rule::ForallElim {
            var,
            body: *body,
            inst,
        };
        Some(Derivation::build(premise.style, rule, premise.concl.ctx.clone(), prop, vec![premise]))
    }

    pub fn ctx(&self) -> &Context {
        &self.concl.ctx
    }

    pub fn subject(&self) -> &Proof {
        &self.concl.subject
    }

    pub fn prop(&self) -> &Prop {
        &self.concl.prop
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Derivation::depth).max().unwrap_or(0)
    }

    /// Node reached by following premise indices.
    pub fn node(&self, path: &[usize]) -> Option<&Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get(i)?.node(rest),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Premise indices from the root to the failing node.
    pub path: Vec<usize>,
    pub rule: &'static str,
    pub reason: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
        write!(f, "at node [{}] ({}): {}", path.join("."), self.rule, self.reason)
    }
}

/// Cost of one congruence side condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideCondition {
    pub path: Vec<usize>,
    pub condition: String,
    pub expansions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub failure: Option<Failure>,
    pub side_conditions: Vec<SideCondition>,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn fuel_spent(&self) -> usize {
        self.side_conditions.iter().map(|s| s.expansions).sum()
    }

    pub fn max_side_fuel(&self) -> usize {
        self.side_conditions.iter().map(|s| s.expansions).max().unwrap_or(0)
    }
}

struct Checker<'t> {
    theory: &'t Theory,
    fuel: usize,
    style: Style,
    sides: Vec<SideCondition>,
}

fn proof_arity(p: &Proof, sig: &Signature) -> Result<(), String> {
    match p {
        Proof::Var(_) => Ok(()),
        Proof::Lam(_, b) | Proof::TLam(_, b) => proof_arity(b, sig),
        Proof::App(f, a) => proof_arity(f, sig).and_then(|_| proof_arity(a, sig)),
        Proof::TApp(q, t) => proof_arity(q, sig).and_then(|_| t.check_arity(sig)),
    }
}

impl Checker<'_> {
    fn congruent(&mut self, path: &[usize], a: &Prop, b: &Prop, label: &str) -> Result<(), String> {
        let out = congruent_with_cost(self.theory, a, b, self.fuel);
        self.sides.push(SideCondition {
            path: path.to_vec(),
            condition: format!("{a} ≡ {b}"),
            expansions: out.expansions,
        });
        match out.verdict {
            CongruenceVerdict::Yes { .. } => Ok(()),
            CongruenceVerdict::No => Err(format!("{label}: {a} is not congruent to {b}")),
            CongruenceVerdict::Unknown { .. } => Err(format!(
                "{label}: congruence not established for {a} ≡ {b} within fuel {}",
                self.fuel
            )),
        }
    }

    fn check(&mut self, d: &Derivation, path: &mut Vec<usize>) -> Result<(), Failure> {
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            self.check(p, path)?;
            path.pop();
        }
        self.node(d, path).map_err(|reason| Failure {
            path: path.clone(),
            rule: d.rule.tag(),
            reason,
        })
    }

    fn node(&mut self, d: &Derivation, path: &[usize]) -> Result<(), String> {
        if d.style != self.style {
            return Err(format!("{} node inside a {} derivation", d.style, self.style));
        }
        if d.premises.len() != d.rule.arity() {
            return Err(format!("expected {} premises, found {}", d.rule.arity(), d.premises.len()));
        }
        let Judgement { ctx, subject, prop } = &d.concl;
        if let Some(n) = ctx.duplicate() {
            return Err(format!("hypothesis `{n}` declared twice"));
        }
        let sig = &self.theory.signature;
        for (_, p) in &ctx.0 {
            p.check_arity(sig)?;
        }
        prop.check_arity(sig)?;
        proof_arity(subject, sig)?;
        if self.style == Style::Curry && !subject.is_curry() {
            return Err("Church construct in a Curry-style subject".into());
        }
        let prem = |i: usize| &d.premises[i].concl;
        let same_ctx = |j: &Judgement, want: &Context| -> Result<(), String> {
            if j.ctx.equiv(want) {
                Ok(())
            } else {
                Err(format!("premise context `{}` should be `{want}`", j.ctx))
            }
        };
        let expect_subject = rule_subject(self.style, &d.rule, &d.premises);
        if !subject.alpha_eq(&expect_subject) {
            return Err(format!("subject `{subject}` should be `{expect_subject}`"));
        }
        match &d.rule {
            Rule::Axiom { hyp } => {
                let a = ctx.get(hyp).ok_or_else(|| format!("hypothesis `{hyp}` not in context"))?;
                self.congruent(path, a, prop, "axiom A ≡ B")
            }
            Rule::ImpIntro { hyp, dom, cod } => {
                dom.check_arity(sig)?;
                same_ctx(prem(0), &ctx.extend(hyp, dom))?;
                if !prem(0).prop.alpha_eq(cod) {
                    return Err(format!("premise proves `{}`, witness says `{cod}`", prem(0).prop));
                }
                self.congruent(path, prop, &Prop::imp(dom.clone(), cod.clone()), "side condition C ≡ A ⇒ B")
            }
            Rule::ImpElim { dom, cod } => {
                same_ctx(prem(0), ctx)?;
                same_ctx(prem(1), ctx)?;
                if !prem(1).prop.alpha_eq(dom) {
                    return Err(format!("argument proves `{}`, witness says `{dom}`", prem(1).prop));
                }
                if !prop.alpha_eq(cod) {
                    return Err(format!("conclusion `{prop}` differs from witness `{cod}`"));
                }
                let f = prem(0).prop.clone();
                self.congruent(path, &f, &Prop::imp(dom.clone(), cod.clone()), "side condition C ≡ A ⇒ B")
            }
            Rule::ForallElim { var, body, inst } => {
                inst.check_arity(sig)?;
                same_ctx(prem(0), ctx)?;
                let b = prem(0).prop.clone();
                let w = Prop::Forall(var.clone(), Box::new(body.clone()));
                self.congruent(path, &b, &w, "side condition B ≡ ∀x.A")?;
                self.congruent(path, prop, &body.subst(var, inst), "side condition C ≡ (t/x)A")
            }
            Rule::ForallIntro { var, body } => {
                same_ctx(prem(0), ctx)?;
                if !prem(0).prop.alpha_eq(body) {
                    return Err(format!("premise proves `{}`, witness says `{body}`", prem(0).prop));
                }
                if ctx.free_term_vars().contains(var) {
                    return Err(format!("side condition x ∉ FV(Γ) violated: `{var}` is free in the context"));
                }
                let w = Prop::Forall(var.clone(), Box::new(body.clone()));
                self.congruent(path, prop, &w, "side condition B ≡ ∀x.A")
            }
        }
    }
}

/// Checks every node against its rule; premises are checked before their
/// conclusion, left to right, so the reported failure is the leftmost
/// innermost one.
pub fn check_derivation(theory: &Theory, d: &Derivation, fuel: usize) -> CheckReport {
    let mut c = Checker {
        theory,
        fuel,
        style: d.style,
        sides: Vec::new(),
    };
    let failure = c.check(d, &mut Vec::new()).err();
    CheckReport {
        failure,
        side_conditions: c.sides,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::parse_theory;
    use crate::syntax::{name, parse_prop};

    fn p(s: &str) -> Prop {
        parse_prop(s, None).unwrap()
    }

    fn ctx(v: &[(&str, &str)]) -> Context {
        Context(v.iter().map(|(a, q)| (name(a), p(q))).collect())
    }

    fn empty() -> Theory {
        parse_theory("pred P/0, Q/1.\nfun c/0.\n").unwrap()
    }

    #[test]
    fn axiom_checks() {
        let d = Derivation::axiom(Style::Curry, ctx(&[("a", "P")]), "a", p("P"));
        assert!(check_derivation(&empty(), &d, 10).is_ok());
        let bad = Derivation::axiom(Style::Curry, ctx(&[("a", "P")]), "a", p("Q(c)"));
        assert!(!check_derivation(&empty(), &bad, 10).is_ok());
    }

    #[test]
    fn forall_intro_side_condition() {
        let ax = Derivation::axiom(Style::Curry, ctx(&[("a", "Q(x)")]), "a", p("Q(x)"));
        let d = Derivation::forall_intro("x", ax);
        let r = check_derivation(&empty(), &d, 10);
        let f = r.failure.unwrap();
        assert_eq!(f.path, Vec::<usize>::new());
        assert!(f.reason.contains("x ∉ FV(Γ)"));
    }

    #[test]
    fn selfapp_delta_delta() {
        let t = parse_theory("pred A/0.\nrule A --> A => A.\n").unwrap();
        let g = ctx(&[("a", "A")]);
        let ax = |q: &str| Derivation::axiom(Style::Curry, g.clone(), "a", p(q));
        let aa = Derivation::imp_elim(ax("A => A"), ax("A")).unwrap();
        let lam = |prop: &str| {
            let rule = Rule::ImpIntro {
                hyp: name("a"),
                dom: p("A"),
                cod: p("A"),
            };
            Derivation::build(Style::Curry, rule, g.clone(), p(prop), vec![aa.clone()])
        };
        let dd = Derivation::imp_elim(lam("A => A"), lam("A")).unwrap();
        let r = check_derivation(&t, &dd, 50);
        assert!(r.is_ok(), "{:?}", r.failure);
        assert_eq!(dd.subject().to_string(), "(\\a. a a) (\\a. a a)");
    }

    #[test]
    fn leftmost_innermost_failure_reported() {
        let g = ctx(&[("a", "P")]);
        let bad = Derivation::axiom(Style::Curry, g.clone(), "b", p("P"));
        let f = Derivation::imp_intro("z", bad.clone(), p("P"));
        let f = Derivation::build(
            Style::Curry,
            Rule::ImpElim { dom: p("P"), cod: p("P") },
            g.clone(),
            p("P"),
            vec![f, bad],
        );
        let r = check_derivation(&empty(), &f, 10);
        assert_eq!(r.failure.unwrap().path, vec![0, 0]);
    }
}
