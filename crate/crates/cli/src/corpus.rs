//! Seeded random generator of well-typed derivations.
//!
//! Derivations are built rule by rule over a fixed base context, so every
//! output checks by construction. Redexes are planted on purpose: a
//! `⇒`-introduction fed straight into an elimination, and in Church style a
//! `∀`-introduction fed into a `∀`-elimination.

use anyhow::{ensure, Result};
use mdm_core::reduction::is_normal;
use mdm_core::rewriting::{parse_theory, rewrite_neighbors, Theory};
use mdm_core::syntax::{name, parse_context, Name, Prop, Style, Term};
use mdm_core::typing::{check_derivation, retype, Context, Derivation, Rule};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Theory the corpus lives in: `A` loops through `A => A`; the rest is
/// rule-free.
pub const CORPUS_THEORY: &str = crate::bundled::CORPUS;

/// Every proposition is declared twice, so any hypothesis can be replaced by
/// its twin. `x` is free in the context.
pub const BASE_CONTEXT: &str =
    "p:P, p2:P, h:P => Q, h2:P => Q, g:!y. R(y), g2:!y. R(y), r:R(x), r2:R(x), a:A, a2:A";

pub fn corpus_theory() -> Theory {
    parse_theory(CORPUS_THEORY).expect("bundled corpus theory parses")
}

pub fn base_context(theory: &Theory) -> Context {
    Context::from(parse_context(BASE_CONTEXT, Some(&theory.signature)).expect("bundled base context parses"))
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusConfig {
    pub style: Style,
    pub count: usize,
    pub max_subject: usize,
    pub seed: u64,
}

struct Gen<'t> {
    theory: &'t Theory,
    style: Style,
    rng: ChaCha8Rng,
    counter: usize,
}

impl Gen<'_> {
    fn fresh_hyp(&mut self) -> Name {
        self.counter += 1;
        name(&format!("z{}", self.counter))
    }

    fn fresh_var(&mut self, ctx: &Context) -> Name {
        let fv = ctx.free_term_vars();
        loop {
            self.counter += 1;
            let v = name(&format!("v{}", self.counter));
            if !fv.contains(&v) {
                return v;
            }
        }
    }

    fn term(&mut self, scope: &[Name]) -> Term {
        let mut pool = vec![Term::constant("c"), Term::app("f", vec![Term::constant("c")]), Term::var("x")];
        pool.extend(scope.iter().map(|v| Term::Var(v.clone())));
        pool.choose(&mut self.rng).expect("pool is not empty").clone()
    }

    fn axiom(&mut self, ctx: &Context) -> Derivation {
        let (h, p) = ctx.0.choose(&mut self.rng).expect("base context is not empty").clone();
        Derivation::axiom(self.style, ctx.clone(), &h, p)
    }

    /// Goal-directed search with the syntax-directed rules only.
    fn prove(&mut self, ctx: &Context, goal: &Prop, depth: usize) -> Option<Derivation> {
        if let Some((h, p)) = ctx.0.iter().rev().find(|(_, p)| p.alpha_eq(goal)) {
            return Some(Derivation::axiom(self.style, ctx.clone(), h, p.clone()));
        }
        if depth == 0 {
            return None;
        }
        match goal {
            Prop::Imp(a, b) => {
                let z = self.fresh_hyp();
                let body = self.prove(&ctx.extend(&z, a), b, depth - 1)?;
                Some(Derivation::imp_intro(&z, body, (**a).clone()))
            }
            Prop::Forall(v, b) if !ctx.free_term_vars().contains(v) => {
                let body = self.prove(ctx, b, depth - 1)?;
                Some(Derivation::forall_intro(v, body))
            }
            _ => None,
        }
    }

    fn gen(&mut self, ctx: &Context, scope: &[Name], depth: usize) -> Derivation {
        if depth == 0 {
            return self.axiom(ctx);
        }
        let church = self.style == Style::Church;
        loop {
            match self.rng.gen_range(0..8) {
                0 => return self.axiom(ctx),
                1 => {
                    let dom = ctx.0.choose(&mut self.rng).expect("context is not empty").1.clone();
                    let z = self.fresh_hyp();
                    let body = self.gen(&ctx.extend(&z, &dom), scope, depth - 1);
                    return Derivation::imp_intro(&z, body, dom);
                }
                2 | 3 => {
                    let arg = self.gen(ctx, scope, depth - 1);
                    let z = self.fresh_hyp();
                    let body = self.gen(&ctx.extend(&z, arg.prop()), scope, depth - 1);
                    let f = Derivation::imp_intro(&z, body, arg.prop().clone());
                    return Derivation::imp_elim(f, arg).expect("an introduction proves an implication");
                }
                4 => {
                    let f = self.gen(ctx, scope, depth - 1);
                    let Prop::Imp(dom, _) = f.prop().clone() else { continue };
                    let Some(arg) = self.prove(ctx, &dom, depth - 1) else { continue };
                    return Derivation::imp_elim(f, arg).expect("checked implication");
                }
                5 => {
                    let d = self.gen(ctx, scope, depth - 1);
                    if !matches!(d.prop(), Prop::Forall(..)) {
                        continue;
                    }
                    let t = self.term(scope);
                    return Derivation::forall_elim(d, t).expect("checked universal");
                }
                6 => {
                    let v = self.fresh_var(ctx);
                    let mut inner = scope.to_vec();
                    inner.push(v.clone());
                    let body = self.gen(ctx, &inner, depth - 1);
                    let intro = Derivation::forall_intro(&v, body);
                    if church && self.rng.gen_bool(0.75) {
                        let t = self.term(scope);
                        return Derivation::forall_elim(intro, t).expect("an introduction proves a universal");
                    }
                    return intro;
                }
                7 => {
                    let d = self.gen(ctx, scope, depth - 1);
                    if matches!(d.rule, Rule::ImpElim { .. }) {
                        continue;
                    }
                    let next = rewrite_neighbors(self.theory, d.prop());
                    let Some(p) = next.choose(&mut self.rng) else { continue };
                    let p = p.clone();
                    return retype(d, &p);
                }
                _ => continue,
            }
        }
    }
}

/// `count` derivations with subject size at most `max_subject`, each with
/// at least one redex, all checking in `theory` from `ctx`.
pub fn generate(theory: &Theory, ctx: &Context, cfg: CorpusConfig, fuel: usize) -> Result<Vec<Derivation>> {
    let mut g = Gen {
        theory,
        style: cfg.style,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        counter: 0,
    };
    let mut out: Vec<Derivation> = Vec::with_capacity(cfg.count);
    let mut attempts = 0usize;
    while out.len() < cfg.count {
        attempts += 1;
        ensure!(attempts <= 1000 * cfg.count.max(1), "corpus generation stalled after {attempts} attempts");
        let depth = g.rng.gen_range(1..=4);
        let d = g.gen(ctx, &[], depth);
        let s = d.subject();
        if s.size() > cfg.max_subject || is_normal(s) || out.iter().any(|e| e == &d) {
            continue;
        }
        let report = check_derivation(theory, &d, fuel);
        if let Some(f) = &report.failure {
            anyhow::bail!("generated derivation of {s} does not check: {f}");
        }
        out.push(d);
    }
    Ok(out)
}
