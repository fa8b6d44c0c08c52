//! Exhaustive enumeration of derivable judgements by derivation height.
//!
//! Contexts are a fixed base plus any subset of a short list of extra
//! hypotheses. Every rule may conclude any proposition of a finite pool that
//! is congruent to its syntactic conclusion, so the congruence is exercised
//! at each node.

use std::collections::HashSet;

use serde::Serialize;

use super::Context;
use crate::rewriting::{congruent, Theory};
use crate::syntax::{Name, Proof, Prop, Style, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Judgement {
    mask: u32,
    subject: Proof,
    prop: Prop,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct JudgementScan {
    /// Distinct judgements derivable with height at most `k`, for each `k`.
    pub per_height: Vec<usize>,
    /// Judgements whose subject is a `⇒`-abstraction.
    pub lambdas: usize,
    /// Of those, how many have a `∀`-headed proposition.
    pub lambda_forall: usize,
    pub examples: Vec<String>,
}

struct Enumerator<'a> {
    theory: &'a Theory,
    style: Style,
    base: &'a Context,
    extra: &'a [(Name, Prop)],
    pool: Vec<Prop>,
    terms: &'a [Term],
    fuel: usize,
}

impl Enumerator<'_> {
    fn ctx(&self, mask: u32) -> Context {
        let mut c = self.base.clone();
        for (i, (n, p)) in self.extra.iter().enumerate() {
            if mask & (1 << i) != 0 {
                c = c.extend(n, p);
            }
        }
        c
    }

    /// `p` itself and every pool proposition congruent to it.
    fn conversions(&self, p: &Prop) -> Vec<Prop> {
        let mut out = vec![p.canonical()];
        for q in &self.pool {
            if !q.alpha_eq(p) && congruent(self.theory, p, q, self.fuel).is_yes() {
                out.push(q.clone());
            }
        }
        out
    }

    fn axioms(&self) -> HashSet<Judgement> {
        let mut out = HashSet::new();
        for mask in 0..(1u32 << self.extra.len()) {
            let ctx = self.ctx(mask);
            for (n, p) in &ctx.0 {
                if ctx.get(n) != Some(p) {
                    continue;
                }
                for prop in self.conversions(p) {
                    out.insert(Judgement {
                        mask,
                        subject: Proof::Var(n.clone()),
                        prop,
                    });
                }
            }
        }
        out
    }

    fn step(&self, prev: &HashSet<Judgement>) -> HashSet<Judgement> {
        let mut out = prev.clone();
        let mut push = |mask: u32, subject: Proof, p: &Prop| {
            for prop in self.conversions(p) {
                out.insert(Judgement {
                    mask,
                    subject: subject.clone(),
                    prop,
                });
            }
        };
        for j in prev {
            for (i, (n, a)) in self.extra.iter().enumerate() {
                if j.mask & (1 << i) != 0 {
                    let mask = j.mask & !(1 << i);
                    push(mask, Proof::lam(n, j.subject.clone()), &Prop::imp(a.clone(), j.prop.clone()));
                }
            }
            let fv = self.ctx(j.mask).free_term_vars();
            for q in self.conversions(&j.prop) {
                if let Prop::Forall(x, body) = &q {
                    for t in self.terms {
                        let subject = match self.style {
                            Style::Church => Proof::tapp(j.subject.clone(), t.clone()),
                            Style::Curry => j.subject.clone(),
                        };
                        push(j.mask, subject, &body.subst(x, t));
                    }
                }
            }
            for x in self.binders() {
                if fv.contains(&x) {
                    continue;
                }
                let subject = match self.style {
                    Style::Church => Proof::tlam(&x, j.subject.clone()),
                    Style::Curry => j.subject.clone(),
                };
                push(j.mask, subject, &Prop::Forall(x.clone(), Box::new(j.prop.clone())));
            }
        }
        for f in prev {
            let imps: Vec<Prop> = self
                .conversions(&f.prop)
                .into_iter()
                .filter(|p| matches!(p, Prop::Imp(..)))
                .collect();
            if imps.is_empty() {
                continue;
            }
            for a in prev.iter().filter(|a| a.mask == f.mask) {
                for imp in &imps {
                    let Prop::Imp(dom, cod) = imp else { unreachable!() };
                    if congruent(self.theory, dom, &a.prop, self.fuel).is_yes() {
                        push(f.mask, Proof::app(f.subject.clone(), a.subject.clone()), cod);
                    }
                }
            }
        }
        out
    }

    fn binders(&self) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        for p in &self.pool {
            if let Prop::Forall(x, _) = p {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
        }
        out
    }
}

/// Enumerates every judgement `Γ ⊢ π : A` derivable with height at most
/// `height`, where `Γ` is `base` plus a subset of `extra` and each
/// conclusion is its syntactic proposition or a congruent member of `pool`.
#[allow(clippy::too_many_arguments)]
pub fn scan_judgements(
    theory: &Theory,
    style: Style,
    base: &Context,
    extra: &[(Name, Prop)],
    pool: &[Prop],
    terms: &[Term],
    height: usize,
    fuel: usize,
) -> JudgementScan {
    assert!(extra.len() < 16, "too many extra hypotheses");
    let mut pool: Vec<Prop> = pool.iter().map(Prop::canonical).collect();
    pool.sort();
    pool.dedup();
    let e = Enumerator {
        theory,
        style,
        base,
        extra,
        pool,
        terms,
        fuel,
    };
    let mut set = e.axioms();
    let mut scan = JudgementScan {
        per_height: vec![set.len()],
        ..Default::default()
    };
    for _ in 0..height {
        set = e.step(&set);
        scan.per_height.push(set.len());
    }
    let mut hits: Vec<String> = Vec::new();
    for j in &set {
        if let Proof::Lam(..) = j.subject {
            scan.lambdas += 1;
            if let Prop::Forall(..) = j.prop {
                scan.lambda_forall += 1;
                hits.push(format!("{} ⊢ {} : {}", e.ctx(j.mask), j.subject, j.prop));
            }
        }
    }
    hits.sort();
    hits.truncate(5);
    scan.examples = hits;
    scan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::parse_theory;
    use crate::syntax::{name, parse_prop};

    fn setup(rules: &str) -> (Theory, Vec<(Name, Prop)>, Vec<Prop>) {
        let t = parse_theory(&format!("pred A/0, B/1.\nfun c/0.\n{rules}")).unwrap();
        let p = |s: &str| parse_prop(s, Some(&t.signature)).unwrap();
        let extra = vec![(name("u"), p("A")), (name("k"), p("A => !x. B(x)"))];
        let pool = vec![p("!x. (A => B(x))"), p("A => !x. B(x)"), p("!x. A"), p("A")];
        (t, extra, pool)
    }

    #[test]
    fn no_church_abstraction_proves_a_universal_without_rules() {
        let (t, extra, pool) = setup("");
        let s = scan_judgements(&t, Style::Church, &Context::new(), &extra, &pool, &[Term::constant("c")], 3, 100);
        assert!(s.lambdas > 0);
        assert_eq!(s.lambda_forall, 0);
        assert!(s.per_height.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn confusion_gives_abstractions_universal_types() {
        let (t, extra, pool) = setup("rule !x. (A => B(x)) <-> A => !x. B(x).\n");
        let s = scan_judgements(&t, Style::Church, &Context::new(), &extra, &pool, &[Term::constant("c")], 3, 100);
        assert!(s.lambda_forall > 0, "{s:?}");
        assert!(s.examples[0].contains("!x."));
    }
}
