//! The acceptance battery: one pass/fail line per criterion, thresholds
//! pinned below.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use anyhow::{anyhow, ensure, Result};
use mdm_core::candidates::{
    check_candidate, CandidateReport, check_clfamorph, check_clramorph, check_clsubst, check_mink, check_monotone, closure,
    forall_candidate, imp_candidate, saturate, ClosureBounds, ClosureTable, FiniteCandidate, LemmaReport, Typer,
    UniversalContext, Universe, adequacy_check,
};
use mdm_core::reduction::{contract, one_step_reducts, reduce_derivation, sn_verdict, SnVerdict};
use mdm_core::rewriting::{parse_theory, Theory};
use mdm_core::semantics::{all_families, check_laws, check_lsub, powerset_algebra, FiniteAlgebra, ValuedStructure};
use mdm_core::syntax::{name, parse_prop, parse_proof, Env, Name, Proof, Prop, Style, Term};
use mdm_core::typing::{
    check_derivation, confusion_witness, erase_derivation, parse_drv, scan_judgements, subst_derivation_proof,
    subst_derivation_term, weaken, Context, Derivation, Rule,
};
use mdm_core::Verdict;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bundled;
use crate::corpus::{base_context, corpus_theory, generate, CorpusConfig};

pub const SN_LIMIT: Duration = Duration::from_secs(1);
pub const DELTA_FUEL: usize = 50;
pub const CORPUS_SIZE: usize = 50;
pub const CORPUS_MAX_SUBJECT: usize = 10;
pub const SUBJECT_REDUCTION_LIMIT: Duration = Duration::from_secs(60);
pub const LSUB_SAMPLES: usize = 500;
pub const LSUB_MAX_DEPTH: usize = 4;
pub const SCAN_HEIGHT: usize = 4;
pub const DESK_UNIVERSE_SIZE: usize = 7;
pub const DESK_K_MAX: usize = 3;
pub const DESK_DEPTH: usize = 3;
pub const RELAXED_DEPTH: usize = 8;
pub const LEMMA_LIMIT: Duration = Duration::from_secs(120);
pub const CANDIDATE_SAMPLES: usize = 100;
pub const GLB_POOL: usize = 6;
pub const GLB_MAX_FAMILY: usize = 4;
pub const ADEQUACY_MAX_SUBJECT: usize = 5;
pub const ADEQUACY_BOUNDARY_LIMIT: f64 = 0.20;
pub const HEYTING_MAX_N: u32 = 3;
pub const FUEL: usize = 10_000;

/// Scale of a run. `full` is the pinned acceptance scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Scale {
    pub corpus: usize,
    pub universe_size: usize,
    pub scan_height: usize,
    pub seed: u64,
}

impl Scale {
    pub fn full(seed: u64) -> Self {
        Scale {
            corpus: CORPUS_SIZE,
            universe_size: DESK_UNIVERSE_SIZE,
            scan_height: SCAN_HEIGHT,
            seed,
        }
    }

    pub fn quick(seed: u64) -> Self {
        Scale {
            corpus: 15,
            universe_size: 6,
            scan_height: 3,
            seed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub verdict: Verdict,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let tag = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Unknown => "UNKNOWN",
        };
        format!("[{tag}] {:>2} {:<22} {} ({} ms)", self.id, self.name, self.detail, self.elapsed_ms)
    }
}

pub const NAMES: [&str; 11] = [
    "delta-delta-divergence",
    "delta-delta-derivation",
    "subject-reduction",
    "weaken-substitution",
    "lsub",
    "confusion-asymmetry",
    "erasure-simulation",
    "closure-lemmas",
    "candidate-algebra",
    "adequacy",
    "pre-heyting-laws",
];

/// Runs the criteria in `ids` (all when empty), sharing corpora and
/// universes between them.
pub fn run(ids: &[usize], scale: Scale) -> Vec<CriterionResult> {
    let ids: Vec<usize> = if ids.is_empty() { (1..=NAMES.len()).collect() } else { ids.to_vec() };
    let mut shared = Shared::new(scale);
    ids.iter()
        .map(|&id| {
            let start = Instant::now();
            let outcome = match id {
                1 => c1_divergence(),
                2 => c2_derivation(),
                3 => c3_subject_reduction(&mut shared),
                4 => c4_transforms(&mut shared),
                5 => c5_lsub(scale.seed),
                6 => c6_confusion(scale.scan_height),
                7 => c7_erasure(&mut shared),
                8 => c8_closure(&mut shared),
                9 => c9_candidates(&mut shared),
                10 => c10_adequacy(&mut shared),
                11 => c11_heyting(),
                _ => Err(anyhow!("no criterion {id}")),
            };
            let (verdict, detail) = outcome.unwrap_or_else(|e| (Verdict::Fail, format!("error: {e:#}")));
            CriterionResult {
                id,
                name: NAMES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
                verdict,
                detail,
                elapsed_ms: start.elapsed().as_millis(),
            }
        })
        .collect()
}

type Outcome = Result<(Verdict, String)>;

struct Shared {
    scale: Scale,
    corpora: HashMap<Style, Vec<Derivation>>,
    desk: Option<Desk>,
}

impl Shared {
    fn new(scale: Scale) -> Self {
        Shared {
            scale,
            corpora: HashMap::new(),
            desk: None,
        }
    }

    fn corpus(&mut self, style: Style) -> Result<&[Derivation]> {
        if !self.corpora.contains_key(&style) {
            let t = corpus_theory();
            let cfg = CorpusConfig {
                style,
                count: self.scale.corpus,
                max_subject: CORPUS_MAX_SUBJECT,
                seed: self.scale.seed,
            };
            let ds = generate(&t, &base_context(&t), cfg, FUEL)?;
            self.corpora.insert(style, ds);
        }
        Ok(&self.corpora[&style])
    }

    fn desk(&mut self) -> &Desk {
        let size = self.scale.universe_size;
        self.desk.get_or_insert_with(|| Desk::new(size))
    }
}

fn c1_divergence() -> Outcome {
    let p = parse_proof("(\\a. a a) (\\a. a a)", Style::Curry, None)?;
    let start = Instant::now();
    let v = sn_verdict(&p, 1000);
    let took = start.elapsed();
    let ok = matches!(&v, SnVerdict::Diverges { cycle } if cycle.len() == 1) && took < SN_LIMIT;
    let shape = match &v {
        SnVerdict::Diverges { cycle } => format!("diverges, cycle length {}", cycle.len()),
        other => format!("{other:?}"),
    };
    Ok((Verdict::from_bool(ok), format!("{shape} in {took:?} (limit {SN_LIMIT:?})")))
}

fn c2_derivation() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (theory, drv) in [(bundled::SELFAPP, bundled::DELTA_DELTA), (bundled::SELFAPP_AB, bundled::DELTA_DELTA_AB)] {
        let t = parse_theory(theory)?;
        let d = parse_drv(drv, Style::Curry, Some(&t.signature))?;
        let r = check_derivation(&t, &d, DELTA_FUEL);
        ok &= r.is_ok();
        parts.push(format!("{}: {} : {} {}", t.name, d.subject(), d.prop(), if r.is_ok() { "ok" } else { "fails" }));
    }
    Ok((Verdict::from_bool(ok), format!("{} (fuel {DELTA_FUEL})", parts.join("; "))))
}

fn redex_pairs(d: &Derivation) -> Vec<Vec<mdm_core::syntax::Step>> {
    d.subject().redex_paths()
}

fn c3_subject_reduction(shared: &mut Shared) -> Outcome {
    let t = corpus_theory();
    let start = Instant::now();
    let (mut pairs, mut good) = (0usize, 0usize);
    let mut first_bad = None;
    for style in [Style::Curry, Style::Church] {
        let corpus = shared.corpus(style)?.to_vec();
        for d in &corpus {
            for path in redex_pairs(d) {
                pairs += 1;
                let expected = d
                    .subject()
                    .replace_at(&path, contract(d.subject().at(&path).expect("redex path")).expect("redex"))
                    .expect("valid path");
                let ok = match reduce_derivation(&t, d, &path, FUEL) {
                    Ok(r) => check_derivation(&t, &r, FUEL).is_ok() && r.subject().alpha_eq(&expected) && r.prop() == d.prop(),
                    Err(_) => false,
                };
                if ok {
                    good += 1;
                } else if first_bad.is_none() {
                    first_bad = Some(format!("{} at {path:?}", d.subject()));
                }
            }
        }
    }
    let took = start.elapsed();
    let ok = pairs > 0 && good == pairs && took < SUBJECT_REDUCTION_LIMIT;
    let mut detail = format!("{good}/{pairs} (derivation, redex) pairs re-check in {took:?}");
    if let Some(b) = first_bad {
        detail.push_str(&format!("; first failure {b}"));
    }
    Ok((Verdict::from_bool(ok), detail))
}

fn first_imp_binder(d: &Derivation) -> Option<Name> {
    if let Rule::ImpIntro { hyp, .. } = &d.rule {
        return Some(hyp.clone());
    }
    d.premises.iter().find_map(first_imp_binder)
}

fn c4_transforms(shared: &mut Shared) -> Outcome {
    let t = corpus_theory();
    let q = parse_prop("Q => P", Some(&t.signature))?;
    let (mut total, mut good) = (0usize, 0usize);
    let mut first_bad = None;
    let mut tally = |ok: bool, what: String| {
        total += 1;
        if ok {
            good += 1;
        } else if first_bad.is_none() {
            first_bad = Some(what);
        }
    };
    for style in [Style::Curry, Style::Church] {
        let corpus = shared.corpus(style)?.to_vec();
        for d in &corpus {
            let ctx = d.ctx();
            let extra = first_imp_binder(d).unwrap_or_else(|| name("w"));
            let g2 = ctx.extend(&extra, &q);
            let ok = weaken(d, &g2).is_ok_and(|w| check_derivation(&t, &w, FUEL).is_ok() && w.ctx() == &g2);
            tally(ok, format!("weaken {} by {extra}", d.subject()));
            for (a, p) in &ctx.0 {
                let Some((twin, _)) = ctx.0.iter().find(|(b, q)| b != a && q.alpha_eq(p)) else { continue };
                let rest = ctx.remove(a);
                let darg = Derivation::axiom(style, rest, twin, p.clone());
                let ok = subst_derivation_proof(d, a, &darg).is_ok_and(|s| {
                    check_derivation(&t, &s, FUEL).is_ok()
                        && s.subject().alpha_eq(&d.subject().subst_proof(a, &Proof::Var(twin.clone())))
                });
                tally(ok, format!("{twin}/{a} in {}", d.subject()));
            }
            for inst in [Term::constant("c"), Term::app("f", vec![Term::var("y")])] {
                let s = subst_derivation_term(d, "x", &inst);
                tally(check_derivation(&t, &s, FUEL).is_ok(), format!("{inst}/x in {}", d.subject()));
            }
        }
    }
    let mut detail = format!("{good}/{total} transformed derivations re-check");
    if let Some(b) = first_bad {
        detail.push_str(&format!("; first failure {b}"));
    }
    Ok((Verdict::from_bool(total > 0 && good == total), detail))
}

/// Random proposition of depth at most `depth` over `P/0`, `R/1`, `S/2`.
fn random_prop(rng: &mut ChaCha8Rng, depth: usize, scope: &[Name]) -> Prop {
    let term = |rng: &mut ChaCha8Rng| -> Term {
        let mut pool = vec![Term::constant("c"), Term::constant("d"), Term::var("x"), Term::var("y")];
        pool.extend(scope.iter().map(|v| Term::Var(v.clone())));
        pool.choose(rng).expect("non-empty").clone()
    };
    let leaf = depth <= 1 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..3) {
            0 => Prop::atom("P", vec![]),
            1 => Prop::atom("R", vec![term(rng)]),
            _ => Prop::atom("S", vec![term(rng), term(rng)]),
        };
    }
    if rng.gen_bool(0.5) {
        Prop::imp(random_prop(rng, depth - 1, scope), random_prop(rng, depth - 1, scope))
    } else {
        let v = ["x", "y", "z"].choose(rng).expect("non-empty");
        let mut inner = scope.to_vec();
        inner.push(name(v));
        Prop::forall(v, random_prop(rng, depth - 1, &inner))
    }
}

fn c5_lsub(seed: u64) -> Outcome {
    let t = parse_theory("pred P/0, R/1, S/2.\nfun c/0, d/0.\n")?;
    let alg = powerset_algebra(2).ok_or_else(|| anyhow!("powerset(2)"))?;
    let universe = [Term::constant("c"), Term::constant("d")];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elems = alg.elements();
    let (mut samples, mut violations) = (0usize, 0usize);
    let mut first_bad = None;
    while samples < LSUB_SAMPLES {
        let mut vs = ValuedStructure::constant(alg, t.signature.clone(), *elems.choose(&mut rng).expect("elements"));
        vs.set("P", vec![], *elems.choose(&mut rng).expect("elements"));
        for a in &universe {
            vs.set("R", vec![a.clone()], *elems.choose(&mut rng).expect("elements"));
            for b in &universe {
                vs.set("S", vec![a.clone(), b.clone()], *elems.choose(&mut rng).expect("elements"));
            }
        }
        let p = random_prop(&mut rng, LSUB_MAX_DEPTH, &[]);
        debug_assert!(p.depth() <= LSUB_MAX_DEPTH);
        let inst = [Term::constant("c"), Term::constant("d"), Term::var("y")]
            .choose(&mut rng)
            .expect("non-empty")
            .clone();
        let mut env = Env::new();
        for v in ["x", "y", "z"] {
            env.insert(name(v), universe.choose(&mut rng).expect("non-empty").clone());
        }
        samples += 1;
        if !check_lsub(&vs, &p, "x", &inst, &env, &universe)? {
            violations += 1;
            first_bad.get_or_insert_with(|| format!("{p} with x := {inst}"));
        }
    }
    let mut detail = format!("{violations} violations over {samples} samples (depth <= {LSUB_MAX_DEPTH}, powerset(2), 2-term universe)");
    if let Some(b) = first_bad {
        detail.push_str(&format!("; first {b}"));
    }
    Ok((Verdict::from_bool(violations == 0 && samples >= LSUB_SAMPLES), detail))
}

fn c6_confusion(height: usize) -> Outcome {
    let conf = parse_theory(bundled::CONFUSION)?;
    let plain = parse_theory("pred A/0, B/1.\nfun c/0.\n")?;
    let sig = Some(&conf.signature);
    let imp = parse_prop("A => !x. B(x)", sig)?;
    let all = parse_prop("!x. (A => B(x))", sig)?;
    let ctx = Context(vec![(name("k"), imp.clone())]);
    let d = Derivation::axiom(Style::Curry, ctx, "k", imp);
    let w = confusion_witness(&d).ok_or_else(|| anyhow!("no witness built"))?;
    let curry_ok = check_derivation(&conf, &w, FUEL).is_ok() && w.prop().alpha_eq(&all);
    let curry_plain_rejects = !check_derivation(&plain, &w, FUEL).is_ok();
    let extra = vec![(name("u"), parse_prop("A", sig)?), (name("k"), parse_prop("A => !x. B(x)", sig)?)];
    let pool: Vec<Prop> = ["A", "B(c)", "!x. B(x)", "!x. A", "A => !x. B(x)", "!x. (A => B(x))", "A => A", "!x. (A => A)"]
        .iter()
        .map(|s| parse_prop(s, sig))
        .collect::<Result<_, _>>()?;
    let terms = [Term::constant("c")];
    let scan = scan_judgements(&plain, Style::Church, &Context::new(), &extra, &pool, &terms, height, FUEL);
    let contrast = scan_judgements(&conf, Style::Church, &Context::new(), &extra, &pool, &terms, height, FUEL);
    let ok = curry_ok && curry_plain_rejects && scan.lambdas > 0 && scan.lambda_forall == 0;
    Ok((
        Verdict::from_bool(ok),
        format!(
            "curry witness checks under confusion: {curry_ok}, rejected without the rule: {curry_plain_rejects}; \
             church scan to height {height}: {} judgements, {} abstractions, {} with a universal type \
             (under the confusing rule: {})",
            scan.per_height.last().copied().unwrap_or(0),
            scan.lambdas,
            scan.lambda_forall,
            contrast.lambda_forall
        ),
    ))
}

fn c7_erasure(shared: &mut Shared) -> Outcome {
    let t = corpus_theory();
    let corpus = shared.corpus(Style::Church)?.to_vec();
    let (mut proof_steps, mut proof_ok, mut term_steps, mut term_ok) = (0usize, 0usize, 0usize, 0usize);
    let mut erased_ok = 0usize;
    for d in &corpus {
        let s = d.subject();
        let e = s.erase();
        for path in s.redex_paths() {
            let redex = s.at(&path).expect("redex path");
            let next = s.replace_at(&path, contract(redex).expect("redex")).expect("valid path").erase();
            match redex {
                Proof::App(..) => {
                    proof_steps += 1;
                    if one_step_reducts(&e).iter().any(|(_, r)| r.alpha_eq(&next)) {
                        proof_ok += 1;
                    }
                }
                _ => {
                    term_steps += 1;
                    if e.alpha_eq(&next) {
                        term_ok += 1;
                    }
                }
            }
        }
        if check_derivation(&t, &erase_derivation(d), FUEL).is_ok() {
            erased_ok += 1;
        }
    }
    let ok = proof_steps > 0 && term_steps > 0 && proof_ok == proof_steps && term_ok == term_steps && erased_ok == corpus.len();
    Ok((
        Verdict::from_bool(ok),
        format!(
            "proof-beta {proof_ok}/{proof_steps} map to a curry step, term-beta {term_ok}/{term_steps} erase equal, \
             erased derivations check {erased_ok}/{}",
            corpus.len()
        ),
    ))
}

/// Empty theory, a slice with one name at `P`, `Q` and `∀x.R(x)`, and the
/// Curry universe over those names.
struct Desk {
    theory: Theory,
    delta: UniversalContext,
    universe: Universe,
    build: Duration,
}

impl Desk {
    fn new(size: usize) -> Self {
        let start = Instant::now();
        let theory = parse_theory(bundled::EMPTY).expect("bundled");
        let sig = Some(&theory.signature);
        let decls: Vec<(Prop, usize)> = ["P", "Q", "!x. R(x)"]
            .iter()
            .map(|s| (parse_prop(s, sig).expect("static"), 1))
            .collect();
        let delta = UniversalContext::with_slice(&decls);
        let mut universe = Universe::new(&delta.names(), size, 200);
        universe.prepare(2);
        Desk {
            theory,
            delta,
            universe,
            build: start.elapsed(),
        }
    }

    fn prop(&self, s: &str) -> Prop {
        parse_prop(s, Some(&self.theory.signature)).expect("static")
    }
}

fn bounds(depth: usize) -> ClosureBounds {
    ClosureBounds {
        depth,
        k_max: DESK_K_MAX,
        fuel: 100,
    }
}

fn lemma_line(r: &LemmaReport, took: Duration) -> String {
    let bounded = r.bounded_violations.map(|b| format!(", {b} at depth {DESK_DEPTH}")).unwrap_or_default();
    format!(
        "{} {} ({} checked, {} violations{bounded}, {} boundary, {took:.1?})",
        r.lemma, r.verdict, r.checked, r.violations, r.boundary
    )
}

/// Runs `f` at the desk depth, and again at the relaxed depth when the
/// bounded run reports violations.
fn bounded_then_relaxed(mut f: impl FnMut(usize) -> LemmaReport) -> LemmaReport {
    let bounded = f(DESK_DEPTH);
    if bounded.violations == 0 {
        return bounded;
    }
    bounded.relaxed_by(f(RELAXED_DEPTH))
}

fn c8_closure(shared: &mut Shared) -> Outcome {
    let desk = shared.desk();
    let u = &desk.universe;
    let (p, q, pq) = (desk.prop("P"), desk.prop("Q"), desk.prop("P => Q"));
    let terms = [Term::constant("c"), Term::var("w")];
    let props = [p.clone(), q.clone(), pq.clone(), desk.prop("R(x) => Q"), desk.prop("!x. R(x)")];
    let mut lines = vec![format!("universe {} terms over {} names, built in {:.1?}", u.len(), u.vars.len(), desk.build)];
    let mut verdict = Verdict::Pass;
    let mut slow = false;
    let mut note = |r: LemmaReport, took: Duration, lines: &mut Vec<String>| {
        slow |= took > LEMMA_LIMIT;
        lines.push(lemma_line(&r, took));
        r.verdict
    };
    let env = Env::new();

    let start = Instant::now();
    let mut typer = Typer::new(&desk.theory, &desk.delta, &props, &terms, 100);
    let tables: Vec<ClosureTable> = [&p, &q, &pq]
        .iter()
        .map(|a| closure(&mut typer, u, a, &env, bounds(DESK_DEPTH)))
        .collect();
    let mut mono = check_monotone(&tables[0]);
    for t in &tables[1..] {
        let r = check_monotone(t);
        mono.checked += r.checked;
        mono.violations += r.violations;
        mono.verdict = mono.verdict.and(r.verdict);
    }
    verdict = verdict.and(note(mono, start.elapsed(), &mut lines));

    let start = Instant::now();
    let mut mink = check_mink(&tables[0], u);
    for t in &tables[1..] {
        let r = check_mink(t, u);
        mink.checked += r.checked;
        mink.violations += r.violations;
        mink.boundary += r.boundary;
        mink.verdict = mink.verdict.and(r.verdict);
    }
    let (mut normal, mut normal_at_0) = (0usize, 0usize);
    for t in &tables {
        for id in t.set().ids().filter(|&id| u.is_normal(id)) {
            normal += 1;
            if t.first_stage[id] == Some(0) {
                normal_at_0 += 1;
            }
        }
    }
    verdict = verdict.and(note(mink, start.elapsed(), &mut lines));
    verdict = verdict.and(Verdict::from_bool(normal_at_0 == normal));
    lines.push(format!("normal members at stage 0: {normal_at_0}/{normal}"));

    let start = Instant::now();
    let r = bounded_then_relaxed(|depth| {
        let mut typer = Typer::new(&desk.theory, &desk.delta, &props, &terms, 100);
        let a = closure(&mut typer, u, &p, &env, bounds(depth));
        let b = closure(&mut typer, u, &q, &env, bounds(depth));
        let ab = closure(&mut typer, u, &pq, &env, bounds(depth));
        check_clramorph(u, &a, &b, &ab)
    });
    verdict = verdict.and(note(r, start.elapsed(), &mut lines));

    let start = Instant::now();
    let rx = desk.prop("R(x) => Q");
    let r = bounded_then_relaxed(|depth| {
        let mut typer = Typer::new(&desk.theory, &desk.delta, &props, &terms, 100);
        let mut out = check_clsubst(&mut typer, u, &rx, &name("x"), &terms[0], &env, bounds(depth));
        let more = check_clsubst(&mut typer, u, &rx, &name("x"), &terms[1], &env, bounds(depth));
        out.checked += more.checked;
        out.violations += more.violations;
        out.verdict = out.verdict.and(more.verdict);
        out
    });
    verdict = verdict.and(note(r, start.elapsed(), &mut lines));

    let start = Instant::now();
    let (all, body) = (desk.prop("!x. R(x)"), desk.prop("R(x)"));
    let r = bounded_then_relaxed(|depth| {
        let mut typer = Typer::new(&desk.theory, &desk.delta, &props, &terms, 100);
        let cl_all = closure(&mut typer, u, &all, &env, bounds(depth));
        let family: Vec<ClosureTable> = terms
            .iter()
            .map(|t| {
                let mut e = Env::new();
                e.insert(name("x"), t.clone());
                closure(&mut typer, u, &body, &e, bounds(depth))
            })
            .collect();
        check_clfamorph(u, &cl_all, &family)
    });
    verdict = verdict.and(note(r, start.elapsed(), &mut lines));

    if slow {
        verdict = Verdict::Fail;
        lines.push(format!("a lemma exceeded {LEMMA_LIMIT:?}"));
    }
    Ok((verdict, lines.join("; ")))
}

/// CR₁, CR₂ and CR₃′ without the non-emptiness condition.
fn cr_verdicts(r: &CandidateReport) -> Verdict {
    r.cr1.verdict.and(r.cr2.verdict).and(r.cr3prime.verdict)
}

fn c9_candidates(shared: &mut Shared) -> Outcome {
    let seed = shared.scale.seed;
    let u = &shared.desk().universe;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sn: Vec<usize> = u.sn_slice().ids().collect();
    ensure!(!sn.is_empty(), "empty universe");
    let mut cands: Vec<FiniteCandidate> = Vec::new();
    let mut attempts = 0;
    while cands.len() < CANDIDATE_SAMPLES {
        attempts += 1;
        ensure!(attempts < 20 * CANDIDATE_SAMPLES, "could not sample {CANDIDATE_SAMPLES} candidates");
        let k = rng.gen_range(1..=4);
        let seed_set = FiniteCandidate::from_ids(u.len(), (0..k).map(|_| *sn.choose(&mut rng).expect("non-empty")));
        let s = saturate(&seed_set, u);
        if check_candidate(&s, u, None).verdict() == Verdict::Pass {
            cands.push(s);
        }
    }
    let (mut imp_checked, mut imp_ok, mut imp_boundary, mut imp_empty) = (0usize, 0usize, 0usize, 0usize);
    for _ in 0..CANDIDATE_SAMPLES {
        let a = cands.choose(&mut rng).expect("non-empty");
        let b = cands.choose(&mut rng).expect("non-empty");
        let out = imp_candidate(a, b, u);
        imp_checked += 1;
        imp_boundary += out.boundary.len();
        if cr_verdicts(&check_candidate(&out.set, u, Some(&out.boundary))) == Verdict::Pass {
            imp_ok += 1;
        }
        imp_empty += usize::from(out.set.is_empty());
    }
    let pool = &cands[..GLB_POOL.min(cands.len())];
    let (mut fam_checked, mut fam_ok, mut fam_empty) = (0usize, 0usize, 0usize);
    for mask in 1u32..(1 << pool.len()) {
        if mask.count_ones() as usize > GLB_MAX_FAMILY {
            continue;
        }
        let family: Vec<FiniteCandidate> = (0..pool.len()).filter(|i| mask & (1 << i) != 0).map(|i| pool[i].clone()).collect();
        let Some(meet) = forall_candidate(&family) else { continue };
        fam_checked += 1;
        let is_cand = cr_verdicts(&check_candidate(&meet, u, None)) == Verdict::Pass;
        fam_empty += usize::from(meet.is_empty());
        let lower = family.iter().all(|c| meet.is_subset(c));
        let greatest = cands
            .iter()
            .filter(|c| family.iter().all(|m| c.is_subset(m)))
            .all(|c| c.is_subset(&meet));
        if is_cand && lower && greatest {
            fam_ok += 1;
        }
    }
    let ok = imp_ok == imp_checked && fam_ok == fam_checked && fam_checked > 0;
    Ok((
        Verdict::from_bool(ok),
        format!(
            "{} sampled candidates; imp_candidate {imp_ok}/{imp_checked} pass cr1/cr2/cr3' ({imp_boundary} boundary members, \
             {imp_empty} empty); forall_candidate {fam_ok}/{fam_checked} families of <= {GLB_MAX_FAMILY} pass cr1/cr2/cr3' \
             and are greatest lower bounds ({fam_empty} empty meets, outside the non-empty domain)",
            cands.len()
        ),
    ))
}

fn c10_adequacy(shared: &mut Shared) -> Outcome {
    let seed = shared.scale.seed;
    let count = shared.scale.corpus;
    let desk = shared.desk();
    let u = &desk.universe;
    let t = &desk.theory;
    let ctx = Context::from(mdm_core::syntax::parse_context("p:P, p2:P, q:Q, g:!x. R(x)", Some(&t.signature))?);
    let cfg = CorpusConfig {
        style: Style::Curry,
        count,
        max_subject: ADEQUACY_MAX_SUBJECT,
        seed,
    };
    let corpus = generate(t, &ctx, cfg, FUEL)?;
    let start = Instant::now();
    let terms = [Term::constant("c"), Term::app("f", vec![Term::constant("c")]), Term::var("x")];
    let mut props: Vec<Prop> = ctx.0.iter().map(|(_, p)| p.clone()).collect();
    props.extend(corpus.iter().map(|d| d.prop().clone()));
    let mut typer = Typer::new(t, &desk.delta, &props, &terms, 100);
    let mut tables: HashMap<Prop, ClosureTable> = HashMap::new();
    let mut table = |typer: &mut Typer<'_>, a: &Prop| -> ClosureTable {
        tables
            .entry(a.canonical())
            .or_insert_with(|| closure(typer, u, a, &Env::new(), bounds(RELAXED_DEPTH)))
            .clone()
    };
    let hyp_tables: Vec<(Name, ClosureTable)> = ctx.0.iter().map(|(n, p)| (n.clone(), table(&mut typer, p))).collect();
    let mut choices: Vec<Vec<Proof>> = Vec::new();
    for (_, p) in &ctx.0 {
        let mut opts: Vec<Proof> = desk.delta.names_at(p).into_iter().take(1).map(Proof::Var).collect();
        let tab = &hyp_tables[choices.len()].1;
        if let Some(id) = tab
            .set()
            .ids()
            .filter(|&id| !matches!(u.term(id), Proof::Var(_)))
            .min_by_key(|&id| (u.term(id).size(), id))
        {
            opts.push(u.term(id).clone());
        }
        ensure!(!opts.is_empty(), "no adequate value for {p}");
        choices.push(opts);
    }
    let refs: Vec<(Name, &ClosureTable)> = hyp_tables.iter().map(|(n, t)| (n.clone(), t)).collect();
    let hyp_time = start.elapsed();
    let (mut total, mut pass, mut unknown) = (0usize, 0usize, 0usize);
    let mut first_bad = None;
    let mut first_escape = None;
    let mut check_time = Duration::ZERO;
    for d in &corpus {
        let tab = table(&mut typer, d.prop());
        let fv = d.subject().free_proof_vars();
        let mut seen: HashSet<Vec<Proof>> = HashSet::new();
        let mut idx = vec![0usize; choices.len()];
        loop {
            let sigma: Vec<(Name, Proof)> = ctx
                .0
                .iter()
                .zip(&idx)
                .enumerate()
                .map(|(i, ((n, _), &j))| (n.clone(), choices[i][j].clone()))
                .collect();
            let used: Vec<Proof> = sigma.iter().filter(|(n, _)| fv.contains(n)).map(|(_, p)| p.clone()).collect();
            let fresh = seen.insert(used);
            let started = Instant::now();
            let v = if fresh { Some(adequacy_check(t, d, &tab, &refs, &sigma, u, FUEL)) } else { None };
            check_time += started.elapsed();
            total += usize::from(fresh);
            match v {
                None => {}
                Some(Verdict::Pass) => pass += 1,
                Some(Verdict::Unknown) => {
                    unknown += 1;
                    if first_escape.is_none() {
                        let mut pi = d.subject().clone();
                        for (a, p) in &sigma {
                            pi = pi.subst_proof(a, p);
                        }
                        first_escape = Some(format!("{pi} of size {}", pi.size()));
                    }
                }
                Some(Verdict::Fail) => {
                    first_bad.get_or_insert_with(|| format!("{} : {}", d.subject(), d.prop()));
                }
            }
            let mut i = 0;
            while i < idx.len() {
                idx[i] += 1;
                if idx[i] < choices[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == idx.len() {
                break;
            }
        }
    }
    let inside = total - unknown;
    let escape = if total == 0 { 1.0 } else { unknown as f64 / total as f64 };
    let ok = inside > 0 && pass == inside && escape < ADEQUACY_BOUNDARY_LIMIT;
    let mut detail = format!(
        "{pass}/{inside} in-universe instances in Cl(A); {unknown}/{total} boundary escapes ({:.1}%, limit {:.0}%); \
         {} derivations; hypothesis tables {hyp_time:.1?}, checks {check_time:.1?}, total {:.1?}",
        100.0 * escape,
        100.0 * ADEQUACY_BOUNDARY_LIMIT,
        corpus.len(),
        start.elapsed()
    );
    if let Some(b) = first_bad {
        detail.push_str(&format!("; first failure {b}"));
    }
    if let Some(e) = first_escape {
        detail.push_str(&format!("; first escape {e} (universe bound {})", u.max_size));
    }
    let values: Vec<String> = choices.iter().flatten().map(ToString::to_string).collect();
    detail.push_str(&format!("; sigma values {}", values.join(", ")));
    Ok((Verdict::from_bool(ok), detail))
}

fn c11_heyting() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 1..=HEYTING_MAX_N {
        let alg = powerset_algebra(n).ok_or_else(|| anyhow!("powerset({n})"))?;
        let fams = all_families(&alg.elements());
        let r = check_laws(&alg, &fams);
        ok &= r.holds();
        let law = |l: &mdm_core::semantics::LawResult| format!("{} over {}", if l.holds { "holds" } else { "fails" }, l.checked);
        parts.push(format!(
            "n={n}: preorder {}, imp-stable {}, glb {}",
            law(&r.preorder),
            law(&r.imp_stable),
            law(&r.glb)
        ));
    }
    Ok((Verdict::from_bool(ok), parts.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        for r in run(&[1, 2, 5, 11], Scale::quick(0)) {
            assert_eq!(r.verdict, Verdict::Pass, "{}", r.line());
        }
    }

    #[test]
    fn unknown_criterion_fails() {
        let r = run(&[42], Scale::quick(0));
        assert_eq!(r[0].verdict, Verdict::Fail);
    }
}
