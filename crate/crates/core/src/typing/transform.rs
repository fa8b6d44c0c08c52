use std::collections::BTreeSet;

use super::{rule_subject, Context, Derivation, Rule, TypingError};
use crate::syntax::{fresh_name, name, Name, Proof, Prop, Style, Term};

/// Recomputes contexts top-down from `ctx` and subjects bottom-up.
pub(crate) fn finalize(mut d: Derivation, ctx: Context) -> Derivation {
    recontext(&mut d, ctx);
    d
}

fn recontext(d: &mut Derivation, ctx: Context) {
    let inner = match &d.rule {
        Rule::ImpIntro { hyp, dom, .. } => ctx.extend(hyp, dom),
        _ => ctx.clone(),
    };
    for p in &mut d.premises {
        recontext(p, inner.clone());
    }
    d.concl.ctx = ctx;
    d.concl.subject = rule_subject(d.style, &d.rule, &d.premises);
}

/// Every term-variable name occurring in the subtree.
pub(crate) fn term_names(d: &Derivation) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_term_names(d, &mut out);
    out
}

fn collect_term_names(d: &Derivation, out: &mut BTreeSet<Name>) {
    for (_, p) in &d.concl.ctx.0 {
        p.collect_all_vars(out);
    }
    d.concl.prop.collect_all_vars(out);
    d.concl.subject.collect_all_names(out);
    match &d.rule {
        Rule::Axiom { .. } => {}
        Rule::ImpIntro { dom, cod, .. } | Rule::ImpElim { dom, cod } => {
            dom.collect_all_vars(out);
            cod.collect_all_vars(out);
        }
        Rule::ForallIntro { var, body } => {
            out.insert(var.clone());
            body.collect_all_vars(out);
        }
        Rule::ForallElim { var, body, inst } => {
            out.insert(var.clone());
            body.collect_all_vars(out);
            inst.collect_vars(out);
        }
    }
    for p in &d.premises {
        collect_term_names(p, out);
    }
}

fn proof_names(d: &Derivation, out: &mut BTreeSet<Name>) {
    out.extend(d.concl.ctx.names().cloned());
    d.concl.subject.collect_all_names(out);
    if let Rule::Axiom { hyp } | Rule::ImpIntro { hyp, .. } = &d.rule {
        out.insert(hyp.clone());
    }
    for p in &d.premises {
        proof_names(p, out);
    }
}

fn rename_free_hyp(d: Derivation, a: &Name, b: &Name) -> Derivation {
    match &d.rule {
        Rule::Axiom { hyp } if hyp == a => Derivation {
            rule: Rule::Axiom { hyp: b.clone() },
            ..d
        },
        Rule::ImpIntro { hyp, .. } if hyp == a => d,
        _ => Derivation {
            premises: d.premises.into_iter().map(|p| rename_free_hyp(p, a, b)).collect(),
            ..d
        },
    }
}

/// Renames the variable bound by an `⇒`-introduction node.
pub(crate) fn rename_imp_binder(d: Derivation, b: &Name) -> Derivation {
    let Rule::ImpIntro { hyp, dom, cod } = d.rule else {
        return d;
    };
    let premises = d.premises.into_iter().map(|p| rename_free_hyp(p, &hyp, b)).collect();
    Derivation {
        rule: Rule::ImpIntro {
            hyp: b.clone(),
            dom,
            cod,
        },
        premises,
        ..d
    }
}

/// Renames the variable generalized by a `∀`-introduction node.
pub(crate) fn rename_forall_var(d: Derivation, z: &Name) -> Derivation {
    let Rule::ForallIntro { var, body } = d.rule else {
        return d;
    };
    let zt = Term::Var(z.clone());
    let premises = d.premises.into_iter().map(|p| sub_term(p, &var, &zt)).collect();
    Derivation {
        rule: Rule::ForallIntro {
            var: z.clone(),
            body: body.subst(&var, &zt),
        },
        premises,
        ..d
    }
}

/// `(t/x)` on propositions and witnesses; contexts and subjects are left
/// for `finalize`.
fn sub_term(d: Derivation, x: &str, t: &Term) -> Derivation {
    let d = if let Rule::ForallIntro { var, .. } = &d.rule {
        if &**var == x {
            return d;
        }
        if t.occurs(var) {
            let mut avoid = term_names(&d);
            t.collect_vars(&mut avoid);
            avoid.insert(name(x));
            let z = fresh_name(var, |n| avoid.contains(n));
            rename_forall_var(d, &z)
        } else {
            d
        }
    } else {
        d
    };
    let rule = match d.rule {
        Rule::Axiom { hyp } => Rule::Axiom { hyp },
        Rule::ImpIntro { hyp, dom, cod } => Rule::ImpIntro {
            hyp,
            dom: dom.subst(x, t),
            cod: cod.subst(x, t),
        },
        Rule::ImpElim { dom, cod } => Rule::ImpElim {
            dom: dom.subst(x, t),
            cod: cod.subst(x, t),
        },
        Rule::ForallIntro { var, body } => Rule::ForallIntro {
            var,
            body: body.subst(x, t),
        },
        Rule::ForallElim { var, body, inst } => match Prop::Forall(var, Box::new(body)).subst(x, t) {
            Prop::Forall(v, b) => Rule::ForallElim {
                var: v,
                body: *b,
                inst: inst.subst(x, t),
            },
            _ => unreachable!("substitution preserves the head"),
        },
    };
    let mut concl = d.concl;
    concl.prop = concl.prop.subst(x, t);
    Derivation {
        style: d.style,
        rule,
        concl,
        premises: d.premises.into_iter().map(|p| sub_term(p, x, t)).collect(),
    }
}

/// `(t/x)Γ ⊢ π : (t/x)A`, with the subject substituted in Church style only.
pub fn subst_derivation_term(d: &Derivation, x: &str, t: &Term) -> Derivation {
    let ctx = d.concl.ctx.subst(x, t);
    finalize(sub_term(d.clone(), x, t), ctx)
}

/// Renames binders that would clash in `ctx`: `⇒`-introduced names already
/// declared and `∀`-introduced variables free in the context.
fn unclash(d: Derivation, ctx: &Context, avoid_proof: &BTreeSet<Name>, avoid_term: &BTreeSet<Name>) -> Derivation {
    match d.rule.clone() {
        Rule::ImpIntro { hyp, .. } => {
            let d = if ctx.contains(&hyp) || avoid_proof.contains(&hyp) {
                let mut avoid: BTreeSet<Name> = ctx.names().cloned().collect();
                avoid.extend(avoid_proof.iter().cloned());
                proof_names(&d, &mut avoid);
                let b = fresh_name(&hyp, |n| avoid.contains(n));
                rename_imp_binder(d, &b)
            } else {
                d
            };
            let inner = match &d.rule {
                Rule::ImpIntro { hyp, dom, .. } => ctx.extend(hyp, dom),
                _ => unreachable!("renaming keeps the rule"),
            };
            map_premises(d, |p| unclash(p, &inner, avoid_proof, avoid_term))
        }
        Rule::ForallIntro { var, .. } => {
            let fv = ctx.free_term_vars();
            let d = if fv.contains(&var) || avoid_term.contains(&var) {
                let mut avoid = term_names(&d);
                avoid.extend(fv);
                avoid.extend(avoid_term.iter().cloned());
                let z = fresh_name(&var, |n| avoid.contains(n));
                rename_forall_var(d, &z)
            } else {
                d
            };
            map_premises(d, |p| unclash(p, ctx, avoid_proof, avoid_term))
        }
        _ => map_premises(d, |p| unclash(p, ctx, avoid_proof, avoid_term)),
    }
}

fn map_premises(d: Derivation, f: impl Fn(Derivation) -> Derivation) -> Derivation {
    Derivation {
        premises: d.premises.into_iter().map(f).collect(),
        ..d
    }
}

/// The same judgement in a larger context; clashing binders are renamed.
pub fn weaken(d: &Derivation, g2: &Context) -> Result<Derivation, TypingError> {
    if let Some((n, _)) = d.concl.ctx.0.iter().find(|(n, p)| !g2.get(n).is_some_and(|q| q.alpha_eq(p))) {
        return Err(TypingError::NotExtension(n.to_string()));
    }
    if let Some(n) = g2.duplicate() {
        return Err(TypingError::ContextMismatch(format!("`{n}` declared twice")));
    }
    let none = BTreeSet::new();
    Ok(finalize(unclash(d.clone(), g2, &none, &none), g2.clone()))
}

/// Changes the conclusion to a congruent proposition.
pub fn retype(d: Derivation, p: &Prop) -> Derivation {
    if d.concl.prop == *p {
        return d;
    }
    let rule = match d.rule {
        Rule::ImpElim { dom, .. } => Rule::ImpElim { dom, cod: p.clone() },
        r => r,
    };
    let mut concl = d.concl;
    concl.prop = p.clone();
    Derivation { rule, concl, ..d }
}

/// From `Γ₁, a:A, Γ₂ ⊢ π : B` and `Γ₁ ⊢ π′ : A′` with `A′ ≡ A`, builds
/// `Γ₁, Γ₂ ⊢ (π′/a)π : B`.
pub fn subst_derivation_proof(d: &Derivation, a: &str, darg: &Derivation) -> Result<Derivation, TypingError> {
    if !d.concl.ctx.contains(a) {
        return Err(TypingError::UnknownHypothesis(a.to_string()));
    }
    if d.style != darg.style {
        return Err(TypingError::ContextMismatch("derivation styles differ".into()));
    }
    let out_ctx = d.concl.ctx.remove(a);
    if let Some((n, _)) = darg
        .concl
        .ctx
        .0
        .iter()
        .find(|(n, p)| !out_ctx.get(n).is_some_and(|q| q.alpha_eq(p)))
    {
        return Err(TypingError::ContextMismatch(format!(
            "argument hypothesis `{n}` is not declared in the remaining context"
        )));
    }
    let mut avoid_proof = darg.concl.subject.free_proof_vars();
    avoid_proof.extend(darg.concl.ctx.names().cloned());
    let mut avoid_term = darg.concl.subject.free_term_vars();
    avoid_term.extend(darg.concl.prop.free_term_vars());
    avoid_term.extend(darg.concl.ctx.free_term_vars());
    let prepared = unclash(d.clone(), &d.concl.ctx, &avoid_proof, &avoid_term);
    let prepared = finalize(prepared, d.concl.ctx.clone());
    let a = name(a);
    let out = plug(prepared, &a, darg, &out_ctx)?;
    Ok(finalize(out, out_ctx))
}

fn plug(d: Derivation, a: &Name, darg: &Derivation, ctx: &Context) -> Result<Derivation, TypingError> {
    match &d.rule {
        Rule::Axiom { hyp } if hyp == a => {
            let w = weaken(darg, ctx)?;
            Ok(retype(w, &d.concl.prop))
        }
        Rule::ImpIntro { hyp, .. } if hyp == a => Ok(d),
        Rule::ImpIntro { hyp, dom, .. } => {
            let inner = ctx.extend(hyp, dom);
            let premises = d
                .premises
                .iter()
                .map(|p| plug(p.clone(), a, darg, &inner))
                .collect::<Result<_, _>>()?;
            Ok(Derivation { premises, ..d })
        }
        _ => {
            let premises = d
                .premises
                .iter()
                .map(|p| plug(p.clone(), a, darg, ctx))
                .collect::<Result<_, _>>()?;
            Ok(Derivation { premises, ..d })
        }
    }
}

pub fn erase(p: &Proof) -> Proof {
    p.erase()
}

/// Curry derivation with the same shape and erased subjects.
pub fn erase_derivation(d: &Derivation) -> Derivation {
    let mut concl = d.concl.clone();
    concl.subject = concl.subject.erase();
    Derivation {
        style: Style::Curry,
        rule: d.rule.clone(),
        concl,
        premises: d.premises.iter().map(erase_derivation).collect(),
    }
}

/// From a Curry derivation of `Γ ⊢ π : A ⇒ ∀x.B`, the derivation of
/// `Γ ⊢ π : ∀x.(A ⇒ B)` by a `∀`-elimination at `x` followed by a
/// `∀`-introduction; it checks exactly when the theory identifies the two
/// shapes and `x` is not free in `Γ`.
pub fn confusion_witness(d: &Derivation) -> Option<Derivation> {
    let Prop::Imp(a, fb) = &d.concl.prop else {
        return None;
    };
    let Prop::Forall(x, b) = &**fb else {
        return None;
    };
    let body = Prop::Imp(a.clone(), b.clone());
    let ctx = d.concl.ctx.clone();
    let elim = Derivation::build(
        d.style,
        Rule::ForallElim {
            var: x.clone(),
            body: body.clone(),
            inst: Term::Var(x.clone()),
        },
        ctx.clone(),
        body.clone(),
        vec![d.clone()],
    );
    Some(Derivation::build(
        d.style,
        Rule::ForallIntro {
            var: x.clone(),
            body: body.clone(),
        },
        ctx,
        Prop::Forall(x.clone(), Box::new(body)),
        vec![elim],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::{parse_theory, Theory};
    use crate::syntax::{parse_prop, Proof};
    use crate::typing::check_derivation;

    fn p(s: &str) -> Prop {
        parse_prop(s, None).unwrap()
    }

    fn ctx(v: &[(&str, &str)]) -> Context {
        Context(v.iter().map(|(a, q)| (name(a), p(q))).collect())
    }

    fn th() -> Theory {
        parse_theory("pred P/0, Q/1.\nfun c/0.\n").unwrap()
    }

    fn ok(d: &Derivation) {
        let r = check_derivation(&th(), d, 100);
        assert!(r.is_ok(), "{:?}\n{d:#?}", r.failure);
    }

    fn identity(style: Style) -> Derivation {
        let ax = Derivation::axiom(style, ctx(&[("a", "P")]), "a", p("P"));
        Derivation::imp_intro("a", ax, p("P"))
    }

    #[test]
    fn weakening_examples() {
        let ax = Derivation::axiom(Style::Curry, ctx(&[("a", "P")]), "a", p("P"));
        let w = weaken(&ax, &ctx(&[("a", "P"), ("b", "Q(c)")])).unwrap();
        ok(&w);
        let id = identity(Style::Curry);
        ok(&weaken(&id, &ctx(&[("b", "Q(c)")])).unwrap());
        let shadow = weaken(&id, &ctx(&[("a", "Q(c)")])).unwrap();
        ok(&shadow);
        assert!(shadow.subject().alpha_eq(id.subject()));
        assert!(weaken(&ax, &ctx(&[("b", "P")])).is_err());
    }

    #[test]
    fn weakening_renames_generalized_variable() {
        let ax = Derivation::axiom(Style::Church, ctx(&[("h", "!y. Q(y)")]), "h", p("!y. Q(y)"));
        let e = Derivation::forall_elim(ax, Term::var("x")).unwrap();
        let d = Derivation::forall_intro("x", e);
        ok(&d);
        let w = weaken(&d, &ctx(&[("h", "!y. Q(y)"), ("b", "Q(x)")])).unwrap();
        ok(&w);
        assert!(w.subject().alpha_eq(d.subject()));
    }

    #[test]
    fn substitution_base_and_lambda() {
        let g = ctx(&[("b", "P")]);
        let darg = Derivation::axiom(Style::Curry, g.clone(), "b", p("P"));
        let d = Derivation::axiom(Style::Curry, ctx(&[("b", "P"), ("a", "P")]), "a", p("P"));
        let out = subst_derivation_proof(&d, "a", &darg).unwrap();
        ok(&out);
        assert_eq!(out.subject(), &Proof::var("b"));

        let inner = Derivation::axiom(Style::Curry, ctx(&[("b", "P"), ("a", "P"), ("c", "Q(c)")]), "a", p("P"));
        let d = Derivation::imp_intro("c", inner, p("Q(c)"));
        let out = subst_derivation_proof(&d, "a", &darg).unwrap();
        ok(&out);
        assert!(out.subject().alpha_eq(&Proof::lam("c", Proof::var("b"))));
    }

    #[test]
    fn substitution_avoids_capture() {
        let g = ctx(&[("c", "P")]);
        let darg = Derivation::axiom(Style::Curry, g, "c", p("P"));
        let inner = Derivation::axiom(Style::Curry, ctx(&[("c", "P"), ("a", "P")]), "a", p("P"));
        let d = Derivation::imp_intro("c", inner, p("P"));
        let d = weaken(&d, &ctx(&[("c", "P"), ("a", "P")])).unwrap();
        ok(&d);
        let out = subst_derivation_proof(&d, "a", &darg).unwrap();
        ok(&out);
        assert!(out.subject().alpha_eq(&Proof::lam("z", Proof::var("c"))));
    }

    #[test]
    fn vacuous_substitution_drops_hypothesis() {
        let d = Derivation::axiom(Style::Curry, ctx(&[("b", "P"), ("a", "Q(c)")]), "b", p("P"));
        let darg = Derivation::axiom(Style::Curry, ctx(&[("b", "P")]), "b", p("P"));
        let out = subst_derivation_proof(&d, "a", &darg).unwrap();
        ok(&out);
        assert_eq!(out.ctx(), &ctx(&[("b", "P")]));
    }

    #[test]
    fn term_substitution_styles() {
        let d = Derivation::axiom(Style::Curry, ctx(&[("a", "Q(x)")]), "a", p("Q(x)"));
        let out = subst_derivation_term(&d, "x", &Term::constant("c"));
        ok(&out);
        assert_eq!(out.prop(), &Prop::atom("Q", vec![Term::constant("c")]));
        assert_eq!(out.subject(), d.subject());

        let ax = Derivation::axiom(Style::Church, ctx(&[("h", "!y. Q(y)")]), "h", p("!y. Q(y)"));
        let e = Derivation::forall_elim(ax, Term::var("x")).unwrap();
        let out = subst_derivation_term(&e, "x", &Term::constant("c"));
        ok(&out);
        assert_eq!(out.subject().to_string(), "h [c]");
        assert_eq!(subst_derivation_term(&e, "w", &Term::constant("c")), e);
    }

    #[test]
    fn term_substitution_under_generalization() {
        let ax = Derivation::axiom(Style::Church, ctx(&[("h", "!y. Q(y)")]), "h", p("!y. Q(y)"));
        let e = Derivation::forall_elim(ax, Term::app("f", vec![Term::var("z"), Term::var("x")])).unwrap();
        let th = parse_theory("pred Q/1.\nfun f/2.\n").unwrap();
        let d = Derivation::forall_intro("z", e);
        assert!(check_derivation(&th, &d, 10).is_ok());
        let out = subst_derivation_term(&d, "x", &Term::var("z"));
        let r = check_derivation(&th, &out, 10);
        assert!(r.is_ok(), "{:?}", r.failure);
        assert_eq!(out.prop().free_term_vars().len(), 1);
    }

    #[test]
    fn erasure() {
        let ax = Derivation::axiom(Style::Church, ctx(&[("h", "!y. Q(y)")]), "h", p("!y. Q(y)"));
        let e = Derivation::forall_elim(ax, Term::constant("c")).unwrap();
        let d = Derivation::imp_intro("h", e, p("!y. Q(y)"));
        ok(&d);
        let c = erase_derivation(&d);
        ok(&c);
        assert_eq!(c.subject().to_string(), "\\h. h");
        assert_eq!(erase_derivation(&identity(Style::Church)), identity(Style::Curry));
    }

    #[test]
    fn confusion_witness_needs_the_rule() {
        let conf = parse_theory("pred A/0, B/1.\nrule !x. (A => B(x)) <-> A => !x. B(x).\n").unwrap();
        let g = ctx(&[("f", "A => !x. B(x)")]);
        let d = Derivation::axiom(Style::Curry, g, "f", p("A => !x. B(x)"));
        let w = confusion_witness(&d).unwrap();
        let r = check_derivation(&conf, &w, 100);
        assert!(r.is_ok(), "{:?}", r.failure);
        assert_eq!(w.prop(), &p("!x. (A => B(x))"));
        let plain = parse_theory("pred A/0, B/1.\n").unwrap();
        assert!(!check_derivation(&plain, &w, 100).is_ok());
    }
}
