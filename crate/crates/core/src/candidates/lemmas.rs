//! Executable, bounded forms of the closure lemmas and of adequacy.

use serde::Serialize;

use super::{forall_candidate, imp_candidate, ClosureBounds, ClosureTable, Typer, UniversalContext, Universe};
use crate::rewriting::{congruent, Theory};
use crate::syntax::{Env, Name, Prop, Proof, Style, Term};
use crate::typing::{check_derivation, Context, Derivation};
use crate::Verdict;

const MAX_EXAMPLES: usize = 5;

/// Outcome of one lemma check: instances checked, in-universe violations,
/// instances excluded at the universe boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub verdict: Verdict,
    pub checked: usize,
    pub violations: usize,
    pub boundary: usize,
    /// Violations seen under the tighter derivation-depth bound, when the
    /// verdict comes from a relaxed rerun.
    pub bounded_violations: Option<usize>,
    pub examples: Vec<String>,
}

impl LemmaReport {
    fn new(lemma: &str) -> Self {
        LemmaReport {
            lemma: lemma.to_string(),
            verdict: Verdict::Pass,
            checked: 0,
            violations: 0,
            boundary: 0,
            bounded_violations: None,
            examples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            self.verdict = Verdict::Fail;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(why());
            }
        }
    }

    /// Keeps the verdict of `relaxed` and records how many violations the
    /// depth-bounded run `self` had.
    pub fn relaxed_by(self, relaxed: LemmaReport) -> LemmaReport {
        LemmaReport {
            bounded_violations: Some(self.violations),
            ..relaxed
        }
    }
}

/// Stages are weakly increasing.
pub fn check_monotone(tab: &ClosureTable) -> LemmaReport {
    let mut r = LemmaReport::new("monotone");
    for (k, w) in tab.stages.windows(2).enumerate() {
        r.record(w[0].is_subset(&w[1]), || format!("stage {k} is not included in stage {}", k + 1));
    }
    r
}

/// Each member enters no later than its maximal reduction length; normal
/// members enter at stage 0.
pub fn check_mink(tab: &ClosureTable, u: &Universe) -> LemmaReport {
    let mut r = LemmaReport::new("mink");
    for id in tab.set().ids() {
        let stage = tab.first_stage[id].expect("members have an entry stage");
        match u.max_length(id) {
            Some(m) => r.record(stage <= m, || format!("{} enters at stage {stage} > {m}", u.term(id))),
            None => r.boundary += 1,
        }
    }
    r
}

/// `Cl(A ⇒ B) = Cl(A) ⇒̃ Cl(B)` in both directions.
pub fn check_clramorph(u: &Universe, cl_a: &ClosureTable, cl_b: &ClosureTable, cl_ab: &ClosureTable) -> LemmaReport {
    let mut r = LemmaReport::new("clramorph");
    let args: Vec<usize> = cl_a.set().ids().collect();
    for pi in cl_ab.set().ids() {
        let p = u.term(pi);
        for &mu in &args {
            let m = u.term(mu);
            if p.size() + m.size() + 1 > u.max_size {
                r.boundary += 1;
                continue;
            }
            match u.lookup(&Proof::app(p.clone(), m.clone())) {
                Some(j) => r.record(cl_b.contains(j), || format!("⊆: ({p}) ({m}) is not in Cl(B)")),
                None => r.boundary += 1,
            }
        }
    }
    let imp = imp_candidate(cl_a.set(), cl_b.set(), u);
    for pi in imp.set.ids() {
        if imp.boundary.contains(pi) {
            r.boundary += 1;
            continue;
        }
        r.record(cl_ab.contains(pi), || format!("⊇: {} is not in Cl(A => B)", u.term(pi)));
    }
    r
}

/// `Cl((t/x)A)_φ = Cl(A)_{φ+⟨x,t⟩}`, stage by stage.
pub fn check_clsubst(
    typer: &mut Typer<'_>,
    u: &Universe,
    a: &Prop,
    x: &Name,
    t: &Term,
    env: &Env,
    bounds: ClosureBounds,
) -> LemmaReport {
    let mut r = LemmaReport::new("clsubst");
    let left = super::closure(typer, u, &a.subst(x, t), env, bounds);
    let mut ext = env.clone();
    ext.insert(x.clone(), t.clone());
    let right = super::closure(typer, u, a, &ext, bounds);
    r.record(left.stages.len() == right.stages.len(), || "stage counts differ".into());
    for (k, (l, rt)) in left.stages.iter().zip(&right.stages).enumerate() {
        r.record(l == rt, || format!("stage {k} differs"));
    }
    r
}

/// `Cl(∀x.A)_φ = ∀̃ {Cl(A)_{φ+⟨x,t⟩}}` over the given instances.
pub fn check_clfamorph(u: &Universe, cl_all: &ClosureTable, family: &[ClosureTable]) -> LemmaReport {
    let mut r = LemmaReport::new("clfamorph");
    let sets: Vec<_> = family.iter().map(|t| t.set().clone()).collect();
    let Some(meet) = forall_candidate(&sets) else {
        r.verdict = Verdict::Unknown;
        return r;
    };
    for id in 0..u.len() {
        let (l, m) = (cl_all.contains(id), meet.contains(id));
        if l || m {
            r.record(l == m, || {
                let side = if l { "⊆" } else { "⊇" };
                format!("{side}: {} is in only one side", u.term(id))
            });
        }
    }
    r
}

/// If `(α/β)π ∈ Cl(B)` for a slice name `α` at `φA` not free in `π`, then
/// `λβ.π ∈ Cl(A ⇒ B)`.
pub fn check_lambdacl(
    u: &Universe,
    delta: &UniversalContext,
    a: &Prop,
    env: &Env,
    cl_b: &ClosureTable,
    cl_ab: &ClosureTable,
) -> LemmaReport {
    let mut r = LemmaReport::new("lambdacl");
    let alphas = delta.names_at(&a.subst_env(env));
    for id in 0..u.len() {
        let Proof::Lam(beta, body) = u.term(id) else { continue };
        for alpha in &alphas {
            if body.has_free_proof_var(alpha) {
                continue;
            }
            let Some(j) = u.lookup(&body.subst_proof(beta, &Proof::Var(alpha.clone()))) else {
                r.boundary += 1;
                continue;
            };
            if cl_b.contains(j) {
                r.record(cl_ab.contains(id), || format!("{} is not in Cl(A => B)", u.term(id)));
            }
        }
    }
    r
}

/// `σπ ∈ Cl(A)_φ` for a derivation of `Γ ⊢ π : A` and `σ` drawn from the
/// tables of the hypotheses. `Unknown` when `σπ` leaves the universe.
pub fn adequacy_check(
    theory: &Theory,
    d: &Derivation,
    table: &ClosureTable,
    hyp_tables: &[(Name, &ClosureTable)],
    sigma: &[(Name, Proof)],
    u: &Universe,
    fuel: usize,
) -> Verdict {
    if !check_derivation(theory, d, fuel).is_ok() {
        return Verdict::Fail;
    }
    for (a, p) in sigma {
        let Some((_, tab)) = hyp_tables.iter().find(|(n, _)| n == a) else {
            return Verdict::Fail;
        };
        if !u.lookup(p).is_some_and(|id| tab.contains(id)) {
            return Verdict::Fail;
        }
    }
    let mut pi = d.subject().clone();
    for (a, p) in sigma {
        pi = pi.subst_proof(a, p);
    }
    match u.lookup(&pi) {
        Some(id) => Verdict::from_bool(table.contains(id)),
        None => Verdict::Unknown,
    }
}

/// One application `h t₁` tested against the instance at `t₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectRow {
    pub proof: String,
    pub t1: String,
    pub t2: String,
    pub member: bool,
}

/// Rows with `member = false` are proofs of `∀x.A` excluded by the
/// unsynchronized Church quantifier; the Curry side records whether each
/// hypothesis lies in the intersection of the instance sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub rows: Vec<DefectRow>,
    pub defects: usize,
    pub curry_in_intersection: Vec<(String, bool)>,
}

/// For each hypothesis `h : ∀x.A` of the slice and terms `t₁ ≠ t₂`, checks
/// whether the Church proof `h t₁` proves `(t₂/x)A`.
pub fn church_forall_defect_demo(
    theory: &Theory,
    delta: &UniversalContext,
    terms: &[Term],
    fuel: usize,
) -> DefectReport {
    let mut report = DefectReport::default();
    let ctx: Context = delta.context();
    for (h, p) in &ctx.0 {
        let Prop::Forall(x, body) = p else { continue };
        let mut all_instances = true;
        for t1 in terms {
            let ax = Derivation::axiom(Style::Church, ctx.clone(), h, p.clone());
            let d = Derivation::forall_elim(ax, t1.clone()).expect("axiom proves a universal");
            debug_assert!(check_derivation(theory, &d, fuel).is_ok());
            for t2 in terms {
                if t1 == t2 {
                    continue;
                }
                let member = congruent(theory, d.prop(), &body.subst(x, t2), fuel).is_yes();
                if !member {
                    report.defects += 1;
                }
                report.rows.push(DefectRow {
                    proof: d.subject().to_string(),
                    t1: t1.to_string(),
                    t2: t2.to_string(),
                    member,
                });
            }
            let curry = Derivation::forall_elim(Derivation::axiom(Style::Curry, ctx.clone(), h, p.clone()), t1.clone())
                .expect("axiom proves a universal");
            all_instances &= check_derivation(theory, &curry, fuel).is_ok();
        }
        report.curry_in_intersection.push((h.to_string(), all_instances));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidates::closure;
    use crate::syntax::{name, parse_prop, Signature};

    fn sig() -> Signature {
        Signature::new(
            vec![(name("c"), 0), (name("d"), 0)],
            vec![(name("P"), 0), (name("Q"), 0), (name("R"), 1)],
        )
        .unwrap()
    }

    fn prop(s: &str) -> Prop {
        parse_prop(s, Some(&sig())).unwrap()
    }

    fn setup(decls: &[(&str, usize)], size: usize) -> (Theory, UniversalContext, Universe) {
        let theory = Theory::empty("empty", sig());
        let decls: Vec<(Prop, usize)> = decls.iter().map(|(p, n)| (prop(p), *n)).collect();
        let delta = UniversalContext::with_slice(&decls);
        let mut u = Universe::new(&delta.names(), size, 200);
        u.prepare(2);
        (theory, delta, u)
    }

    const RELAXED: ClosureBounds = ClosureBounds { depth: 8, k_max: 3, fuel: 100 };

    #[test]
    fn closure_lemmas_hold_on_a_small_universe() {
        let (theory, delta, u) = setup(&[("P", 2), ("Q", 1)], 5);
        let props = [prop("P"), prop("Q"), prop("P => Q")];
        let mut typer = Typer::new(&theory, &delta, &props, &[], 100);
        let env = Env::new();
        let a = closure(&mut typer, &u, &props[0], &env, RELAXED);
        let b = closure(&mut typer, &u, &props[1], &env, RELAXED);
        let ab = closure(&mut typer, &u, &props[2], &env, RELAXED);
        for tab in [&a, &b, &ab] {
            assert_eq!(check_monotone(tab).verdict, Verdict::Pass);
            let m = check_mink(tab, &u);
            assert_eq!(m.verdict, Verdict::Pass, "{m:?}");
        }
        let r = check_clramorph(&u, &a, &b, &ab);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert!(r.checked > 0);
        let r = check_lambdacl(&u, &delta, &props[0], &env, &b, &ab);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }

    #[test]
    fn substitution_and_quantifier_lemmas() {
        let (theory, delta, u) = setup(&[("R(c)", 1), ("!x. R(x)", 1), ("P", 1)], 4);
        let terms = [Term::constant("c"), Term::var("w")];
        let ra = prop("R(x)");
        let mut typer = Typer::new(&theory, &delta, &[prop("!x. R(x)"), prop("R(c)")], &terms, 100);
        let r = check_clsubst(&mut typer, &u, &ra, &name("x"), &terms[0], &Env::new(), RELAXED);
        assert_eq!(r.verdict, Verdict::Pass);
        let all = closure(&mut typer, &u, &prop("!x. R(x)"), &Env::new(), RELAXED);
        let family: Vec<ClosureTable> = terms
            .iter()
            .map(|t| {
                let mut env = Env::new();
                env.insert(name("x"), t.clone());
                closure(&mut typer, &u, &ra, &env, RELAXED)
            })
            .collect();
        let r = check_clfamorph(&u, &all, &family);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert!(r.checked > 0);
    }

    #[test]
    fn relaxed_keeps_the_relaxed_verdict() {
        let mut bounded = LemmaReport::new("x");
        bounded.record(false, || "v".into());
        let relaxed = LemmaReport::new("x");
        let r = bounded.relaxed_by(relaxed);
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.bounded_violations, Some(1));
    }

    #[test]
    fn adequacy_of_the_identity() {
        let (theory, delta, u) = setup(&[("P", 1)], 3);
        let pp = prop("P => P");
        let mut typer = Typer::new(&theory, &delta, std::slice::from_ref(&pp), &[], 100);
        let tab = closure(&mut typer, &u, &pp, &Env::new(), ClosureBounds { depth: 2, ..RELAXED });
        let body = Derivation::axiom(Style::Curry, Context(vec![(name("a"), prop("P"))]), "a", prop("P"));
        let d = Derivation::imp_intro("a", body, prop("P"));
        assert_eq!(adequacy_check(&theory, &d, &tab, &[], &[], &u, 100), Verdict::Pass);
    }

    #[test]
    fn church_defect_is_exhibited() {
        let (theory, delta, _) = setup(&[("!x. R(x)", 1)], 1);
        let terms = [Term::constant("c"), Term::constant("d")];
        let r = church_forall_defect_demo(&theory, &delta, &terms, 100);
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.defects, 2);
        assert!(r.curry_in_intersection.iter().all(|(_, ok)| *ok));
        let (theory, delta, _) = setup(&[("P", 1)], 1);
        let r = church_forall_defect_demo(&theory, &delta, &terms, 100);
        assert!(r.rows.is_empty());
    }
}
