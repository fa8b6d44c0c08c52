//! Reducibility candidates over a finite universe of Curry proof-terms:
//! the CR predicates, Ω, the candidate operations, the universal context and
//! the closure `Cl^k`.
//!
//! Every check is relative to the universe. A quantifier instance that leaves
//! the universe is excluded from the check and counted as a boundary case.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::reduction::{distinct_reducts, is_normal, sn_verdict, SnVerdict};
use crate::syntax::{name, Name, Path, Prop, Proof};
use crate::typing::Context;
use crate::Verdict;

mod closure;
mod lemmas;

pub use closure::{closure, ClosureBounds, ClosureTable, Typer};
pub use lemmas::{
    adequacy_check, check_clfamorph, check_clramorph, check_clsubst, check_lambdacl, check_mink,
    check_monotone, church_forall_defect_demo, DefectReport, DefectRow, LemmaReport,
};

/// Deterministic, injective supply of hypothesis names per proposition.
/// Only the materialized slice exists as a context.
#[derive(Clone, Debug, Default)]
pub struct UniversalContext {
    props: Vec<Prop>,
    slice: Vec<(Name, Prop)>,
}

impl UniversalContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Slice declaring `count` names for each listed proposition.
    pub fn with_slice(decls: &[(Prop, usize)]) -> Self {
        let mut d = Self::new();
        for (p, n) in decls {
            for i in 0..*n {
                d.name(p, i);
            }
        }
        d
    }

    /// The `index`-th name declared at `p`, materializing it.
    pub fn name(&mut self, p: &Prop, index: usize) -> Name {
        let c = p.canonical();
        let id = match self.props.iter().position(|q| *q == c) {
            Some(i) => i,
            None => {
                self.props.push(c);
                self.props.len() - 1
            }
        };
        let n = name(&format!("h{id}_{index}"));
        if !self.slice.iter().any(|(m, _)| *m == n) {
            self.slice.push((n.clone(), p.clone()));
        }
        n
    }

    /// Materialized names declared at a proposition α-equal to `p`.
    pub fn names_at(&self, p: &Prop) -> Vec<Name> {
        self.slice
            .iter()
            .filter(|(_, q)| q.alpha_eq(p))
            .map(|(n, _)| n.clone())
            .collect()
    }

    pub fn names(&self) -> Vec<Name> {
        self.slice.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn context(&self) -> Context {
        Context(self.slice.clone())
    }
}

/// Curry terms of exactly `size` nodes, free variables from `vars`, binders
/// named `p{depth}`.
fn enumerate(size: usize, vars: &[Name], depth: usize, out: &mut Vec<Proof>) {
    if size == 0 {
        return;
    }
    if size == 1 {
        out.extend(vars.iter().map(|v| Proof::Var(v.clone())));
        out.extend((0..depth).map(|i| Proof::var(&format!("p{i}"))));
        return;
    }
    let mut bodies = Vec::new();
    enumerate(size - 1, vars, depth + 1, &mut bodies);
    let binder = name(&format!("p{depth}"));
    out.extend(bodies.into_iter().map(|b| Proof::Lam(binder.clone(), Box::new(b))));
    for left in 1..size - 1 {
        let mut fs = Vec::new();
        let mut xs = Vec::new();
        enumerate(left, vars, depth, &mut fs);
        enumerate(size - 1 - left, vars, depth, &mut xs);
        for f in &fs {
            for x in &xs {
                out.push(Proof::app(f.clone(), x.clone()));
            }
        }
    }
}

/// Finite stand-in for the set of proof-terms: canonical Curry terms up to a
/// size bound, with their one-step reducts and SN data precomputed.
#[derive(Clone, Debug)]
pub struct Universe {
    pub max_size: usize,
    pub vars: Vec<Name>,
    terms: Vec<Proof>,
    index: HashMap<Proof, usize>,
    /// Distinct one-step reducts; `None` marks a reduct outside the universe.
    reducts: Vec<Vec<Option<usize>>>,
    /// Maximal reduction length, `None` when the verdict is not SN.
    sn: Vec<Option<usize>>,
    boundary: BTreeSet<Proof>,
    decomps: Option<(usize, Vec<Vec<Decomposition>>)>,
    pub sn_budget: usize,
}

/// One way of writing a term as `[μᵢ/αᵢ]ᵢ ν` with Ω-members at disjoint
/// occurrences, stored as the universe ids of every `[ρᵢ/αᵢ]ᵢ ν`.
#[derive(Clone, Debug)]
struct Decomposition {
    instances: Vec<Option<usize>>,
}

impl Universe {
    pub fn new(vars: &[Name], max_size: usize, sn_budget: usize) -> Self {
        let mut terms = Vec::new();
        for s in 1..=max_size {
            enumerate(s, vars, 0, &mut terms);
        }
        let mut index = HashMap::new();
        let mut uniq = Vec::new();
        for t in terms {
            let c = t.canonical();
            if !index.contains_key(&c) {
                index.insert(c.clone(), uniq.len());
                uniq.push(c);
            }
        }
        let mut boundary = BTreeSet::new();
        let reducts = uniq
            .iter()
            .map(|t| {
                distinct_reducts(t)
                    .into_iter()
                    .map(|r| {
                        let c = r.canonical();
                        let id = index.get(&c).copied();
                        if id.is_none() {
                            boundary.insert(c);
                        }
                        id
                    })
                    .collect()
            })
            .collect();
        let sn = uniq
            .iter()
            .map(|t| match sn_verdict(t, sn_budget) {
                SnVerdict::Sn { max_length, .. } => Some(max_length),
                _ => None,
            })
            .collect();
        Universe {
            max_size,
            vars: vars.to_vec(),
            terms: uniq,
            index,
            reducts,
            sn,
            boundary,
            decomps: None,
            sn_budget,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, id: usize) -> &Proof {
        &self.terms[id]
    }

    pub fn terms(&self) -> &[Proof] {
        &self.terms
    }

    pub fn lookup(&self, p: &Proof) -> Option<usize> {
        self.index.get(&p.canonical()).copied()
    }

    pub fn reducts(&self, id: usize) -> &[Option<usize>] {
        &self.reducts[id]
    }

    pub fn max_length(&self, id: usize) -> Option<usize> {
        self.sn[id]
    }

    pub fn is_normal(&self, id: usize) -> bool {
        self.reducts[id].is_empty()
    }

    /// Reducts of members that fall outside the size bound.
    pub fn boundary(&self) -> &BTreeSet<Proof> {
        &self.boundary
    }

    pub fn empty_set(&self) -> FiniteCandidate {
        FiniteCandidate::new(self.len())
    }

    pub fn full_set(&self) -> FiniteCandidate {
        let mut s = self.empty_set();
        s.members.insert_range(..);
        s
    }

    /// Members whose SN verdict is positive.
    pub fn sn_slice(&self) -> FiniteCandidate {
        let mut s = self.empty_set();
        for (i, v) in self.sn.iter().enumerate() {
            if v.is_some() {
                s.insert(i);
            }
        }
        s
    }

    /// Precomputes decompositions with up to `n_max` holes.
    pub fn prepare(&mut self, n_max: usize) {
        if matches!(self.decomps, Some((n, _)) if n == n_max) {
            return;
        }
        let mut sn_cache = HashMap::new();
        let all = (0..self.len())
            .map(|id| self.decompose(id, n_max, &mut sn_cache))
            .collect();
        self.decomps = Some((n_max, all));
    }

    fn decompositions(&self, id: usize) -> &[Decomposition] {
        let (_, all) = self
            .decomps
            .as_ref()
            .expect("Universe::prepare must run before closure steps");
        &all[id]
    }

    fn decompose(&self, id: usize, n_max: usize, sn_cache: &mut HashMap<Proof, bool>) -> Vec<Decomposition> {
        let pi = &self.terms[id];
        let mut occ: Vec<(Path, Vec<Proof>)> = Vec::new();
        for path in pi.positions() {
            let mu = pi.at(&path).expect("position is valid");
            if !mu.is_neutral() || is_normal(mu) {
                continue;
            }
            let budget = self.sn_budget;
            let sn = *sn_cache
                .entry(mu.canonical())
                .or_insert_with(|| sn_verdict(mu, budget).is_sn());
            if sn {
                occ.push((path, distinct_reducts(mu)));
            }
        }
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.choose(pi, &occ, 0, n_max, &mut chosen, &mut out);
        out
    }

    fn choose(
        &self,
        pi: &Proof,
        occ: &[(Path, Vec<Proof>)],
        from: usize,
        left: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Decomposition>,
    ) {
        if !chosen.is_empty() {
            out.push(self.instances(pi, occ, chosen));
        }
        if left == 0 {
            return;
        }
        for i in from..occ.len() {
            let disjoint = chosen
                .iter()
                .all(|&j| !occ[i].0.starts_with(&occ[j].0) && !occ[j].0.starts_with(&occ[i].0));
            if disjoint {
                chosen.push(i);
                self.choose(pi, occ, i + 1, left - 1, chosen, out);
                chosen.pop();
            }
        }
    }

    fn instances(&self, pi: &Proof, occ: &[(Path, Vec<Proof>)], chosen: &[usize]) -> Decomposition {
        let mut instances = Vec::new();
        let mut pick = vec![0usize; chosen.len()];
        loop {
            let mut t = pi.clone();
            for (k, &j) in chosen.iter().enumerate() {
                t = t
                    .replace_at(&occ[j].0, occ[j].1[pick[k]].clone())
                    .expect("disjoint holes stay valid");
            }
            instances.push(self.lookup(&t));
            let mut k = 0;
            loop {
                if k == chosen.len() {
                    return Decomposition { instances };
                }
                pick[k] += 1;
                if pick[k] < occ[chosen[k]].1.len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
        }
    }
}

/// A subset of a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCandidate {
    pub members: FixedBitSet,
}

impl FiniteCandidate {
    pub fn new(universe_len: usize) -> Self {
        FiniteCandidate {
            members: FixedBitSet::with_capacity(universe_len),
        }
    }

    pub fn from_ids(universe_len: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(universe_len);
        for i in ids {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, id: usize) {
        self.members.insert(id);
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members.contains(id)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.count_ones(..) == 0
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn is_subset(&self, other: &FiniteCandidate) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn union_with(&mut self, other: &FiniteCandidate) {
        self.members.union_with(&other.members);
    }

    pub fn intersect_with(&mut self, other: &FiniteCandidate) {
        self.members.intersect_with(&other.members);
    }

    /// Members of `self` missing from `other`.
    pub fn minus(&self, other: &FiniteCandidate) -> Vec<usize> {
        self.members.difference(&other.members).collect()
    }
}

/// Verdict of a CR predicate with its boundary tally and a witness term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrReport {
    pub verdict: Verdict,
    pub boundary: usize,
    pub witness: Option<String>,
}

impl CrReport {
    fn pass() -> Self {
        CrReport {
            verdict: Verdict::Pass,
            boundary: 0,
            witness: None,
        }
    }

    fn fail(&mut self, u: &Universe, id: usize) {
        if self.verdict != Verdict::Fail {
            self.verdict = Verdict::Fail;
            self.witness = Some(u.term(id).to_string());
        }
    }
}

/// `𝓡 ⊆ SN`.
pub fn cr1(s: &FiniteCandidate, u: &Universe) -> CrReport {
    let mut r = CrReport::pass();
    for id in s.ids() {
        if u.max_length(id).is_none() {
            match sn_verdict(u.term(id), u.sn_budget) {
                SnVerdict::Diverges { .. } => r.fail(u, id),
                _ => {
                    if r.verdict == Verdict::Pass {
                        r.verdict = Verdict::Unknown;
                        r.witness = Some(u.term(id).to_string());
                    }
                }
            }
        }
    }
    r
}

fn excluded(skip: Option<&FiniteCandidate>, id: usize) -> bool {
    skip.is_some_and(|s| s.contains(id))
}

/// Closure under one-step reduction. Members in `skip` are treated as
/// boundary cases.
pub fn cr2(s: &FiniteCandidate, u: &Universe, skip: Option<&FiniteCandidate>) -> CrReport {
    let mut r = CrReport::pass();
    for id in s.ids() {
        for red in u.reducts(id) {
            match red {
                None => r.boundary += 1,
                Some(j) if excluded(skip, id) || excluded(skip, *j) => r.boundary += 1,
                Some(j) if !s.contains(*j) => r.fail(u, id),
                Some(_) => {}
            }
        }
    }
    r
}

fn cr3_generic(s: &FiniteCandidate, u: &Universe, only_non_normal: bool) -> CrReport {
    let mut r = CrReport::pass();
    for id in 0..u.len() {
        if s.contains(id) || !u.term(id).is_neutral() || (only_non_normal && u.is_normal(id)) {
            continue;
        }
        let reds = u.reducts(id);
        if reds.iter().any(Option::is_none) {
            r.boundary += 1;
            continue;
        }
        if reds.iter().all(|j| s.contains(j.expect("checked above"))) {
            r.fail(u, id);
        }
    }
    r
}

/// Every neutral term whose reducts all lie in `s` is in `s`.
pub fn cr3(s: &FiniteCandidate, u: &Universe) -> CrReport {
    cr3_generic(s, u, false)
}

/// As [`cr3`], restricted to non-normal terms.
pub fn cr3aux(s: &FiniteCandidate, u: &Universe) -> CrReport {
    cr3_generic(s, u, true)
}

/// Outcome of one expansion step.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub set: FiniteCandidate,
    /// Terms left out only because some instance leaves the universe.
    pub boundary: usize,
}

/// `prev ∪ {[μᵢ/αᵢ]ᵢν : every [ρᵢ/αᵢ]ᵢν ∈ prev}`. Instances touching
/// `skip` count as boundary.
pub fn cl_step(prev: &FiniteCandidate, u: &Universe, skip: Option<&FiniteCandidate>) -> StepOutcome {
    let mut set = prev.clone();
    let mut boundary = 0;
    for id in 0..u.len() {
        if prev.contains(id) {
            continue;
        }
        let mut blocked = false;
        for d in u.decompositions(id) {
            let mut ok = true;
            let mut escaped = false;
            for inst in &d.instances {
                match inst {
                    None => escaped = true,
                    Some(j) if excluded(skip, *j) => escaped = true,
                    Some(j) if !prev.contains(*j) => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                }
            }
            if ok && !escaped {
                set.insert(id);
                blocked = false;
                break;
            }
            blocked |= ok && escaped;
        }
        if blocked {
            boundary += 1;
        }
    }
    StepOutcome { set, boundary }
}

/// CR₃′: `s` is closed under the expansion step.
pub fn cr3prime(s: &FiniteCandidate, u: &Universe, skip: Option<&FiniteCandidate>) -> CrReport {
    let out = cl_step(s, u, skip);
    let mut r = CrReport::pass();
    r.boundary = out.boundary;
    if let Some(id) = out.set.minus(s).first() {
        r.fail(u, *id);
    }
    r
}

/// Verdicts of the three candidate conditions plus non-emptiness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateReport {
    pub cr1: CrReport,
    pub cr2: CrReport,
    pub cr3prime: CrReport,
    pub non_empty: bool,
}

impl CandidateReport {
    pub fn verdict(&self) -> Verdict {
        self.cr1
            .verdict
            .and(self.cr2.verdict)
            .and(self.cr3prime.verdict)
            .and(Verdict::from_bool(self.non_empty))
    }
}

pub fn check_candidate(s: &FiniteCandidate, u: &Universe, skip: Option<&FiniteCandidate>) -> CandidateReport {
    CandidateReport {
        cr1: cr1(s, u),
        cr2: cr2(s, u, skip),
        cr3prime: cr3prime(s, u, skip),
        non_empty: !s.is_empty(),
    }
}

/// Ω: strongly normalizing, neutral and not normal.
pub fn omega(p: &Proof, budget: usize) -> Verdict {
    if !p.is_neutral() || is_normal(p) {
        return Verdict::Fail;
    }
    match sn_verdict(p, budget) {
        SnVerdict::Sn { .. } => Verdict::Pass,
        SnVerdict::Diverges { .. } => Verdict::Fail,
        SnVerdict::Unknown { .. } => Verdict::Unknown,
    }
}

/// `a ⇒̃ b` inside the universe, with the members some of whose applications
/// leave it.
#[derive(Clone, Debug)]
pub struct ImpOutcome {
    pub set: FiniteCandidate,
    pub boundary: FiniteCandidate,
}

pub fn imp_candidate(a: &FiniteCandidate, b: &FiniteCandidate, u: &Universe) -> ImpOutcome {
    let mut set = u.empty_set();
    let mut boundary = u.empty_set();
    let args: Vec<&Proof> = a.ids().map(|m| u.term(m)).collect();
    for id in 0..u.len() {
        let pi = u.term(id);
        let mut ok = true;
        for mu in &args {
            if pi.size() + mu.size() + 1 > u.max_size {
                boundary.insert(id);
                continue;
            }
            match u.lookup(&Proof::app(pi.clone(), (*mu).clone())) {
                Some(j) if b.contains(j) => {}
                Some(_) => {
                    ok = false;
                    break;
                }
                None => {
                    boundary.insert(id);
                }
            }
        }
        if ok {
            set.insert(id);
        }
    }
    ImpOutcome { set, boundary }
}

/// Intersection of a non-empty family.
pub fn forall_candidate(family: &[FiniteCandidate]) -> Option<FiniteCandidate> {
    let (first, rest) = family.split_first()?;
    let mut out = first.clone();
    for s in rest {
        out.intersect_with(s);
    }
    Some(out)
}

/// Smallest superset of `seed` closed under in-universe reduction and the
/// expansion step.
pub fn saturate(seed: &FiniteCandidate, u: &Universe) -> FiniteCandidate {
    let mut s = seed.clone();
    loop {
        let mut grown = s.clone();
        let mut stack: Vec<usize> = s.ids().collect();
        while let Some(id) = stack.pop() {
            for j in u.reducts(id).iter().flatten() {
                if !grown.contains(*j) {
                    grown.insert(*j);
                    stack.push(*j);
                }
            }
        }
        let grown = cl_step(&grown, u, None).set;
        if grown == s {
            return s;
        }
        s = grown;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_proof, Style};

    fn vars() -> Vec<Name> {
        vec![name("a"), name("b"), name("g")]
    }

    fn t(s: &str) -> Proof {
        parse_proof(s, Style::Curry, None).unwrap()
    }

    /// Terms of exactly `n` nodes with `k` variables in scope.
    fn count(n: usize, k: usize) -> usize {
        match n {
            0 => 0,
            1 => k,
            _ => count(n - 1, k + 1) + (1..n - 1).map(|i| count(i, k) * count(n - 1 - i, k)).sum::<usize>(),
        }
    }

    #[test]
    fn universe_size_matches_the_recurrence() {
        let u = Universe::new(&vars(), 5, 100);
        assert_eq!(u.len(), (1..=5).map(|n| count(n, 3)).sum::<usize>());
        assert_eq!((1..=7).map(|n| count(n, 3)).sum::<usize>(), 3822);
        assert!(u.lookup(&t("\\x. x")).is_some());
        assert!(u.lookup(&t("\\y. y")).is_some());
        assert!(u.lookup(&t("(\\x. x x) (\\x. x x)")).is_none());
    }

    #[test]
    fn universal_context_is_injective() {
        let p = crate::syntax::parse_prop("P", None).unwrap();
        let q = crate::syntax::parse_prop("P => P", None).unwrap();
        let mut d = UniversalContext::new();
        let a = d.name(&p, 0);
        let b = d.name(&p, 1);
        let c = d.name(&q, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(d.name(&p, 0), a);
        assert_eq!(d.names_at(&p), vec![a, b]);
        assert_eq!(d.context().len(), 3);
    }

    fn set(u: &Universe, terms: &[&str]) -> FiniteCandidate {
        FiniteCandidate::from_ids(u.len(), terms.iter().map(|s| u.lookup(&t(s)).unwrap()))
    }

    #[test]
    fn cr_examples() {
        let mut u = Universe::new(&vars(), 5, 100);
        u.prepare(2);
        assert_eq!(cr1(&set(&u, &["\\x. x"]), &u).verdict, Verdict::Pass);
        assert_eq!(cr1(&u.empty_set(), &u).verdict, Verdict::Pass);
        assert_eq!(cr2(&set(&u, &["(\\x. x) b", "b"]), &u, None).verdict, Verdict::Pass);
        let r = cr2(&set(&u, &["(\\x. x) b"]), &u, None);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(cr2(&u.sn_slice(), &u, None).verdict, Verdict::Pass);
        let r = cr3(&set(&u, &["b"]), &u);
        assert_eq!(r.verdict, Verdict::Fail);
        let aa = u.lookup(&t("a a")).unwrap();
        let mut no_aa = u.full_set();
        no_aa.members.set(aa, false);
        assert_eq!(cr3(&no_aa, &u).verdict, Verdict::Fail);
        assert_eq!(cr3(&no_aa, &u).witness.as_deref(), Some("a a"));
        let sat = saturate(&set(&u, &["b", "a"]), &u);
        assert_eq!(cr3aux(&sat, &u).verdict, Verdict::Pass);
        assert_eq!(cr3(&sat, &u).verdict, Verdict::Fail);
        let r = cr3prime(&set(&u, &["g"]), &u, None);
        assert_eq!(r.verdict, Verdict::Fail);
        let s = cl_step(&set(&u, &["g"]), &u, None).set;
        assert!(s.contains(u.lookup(&t("(\\x. x) g")).unwrap()));
    }

    #[test]
    fn cr1_rejects_delta_delta() {
        let u = Universe::new(&[], 9, 50);
        let dd = u.lookup(&t("(\\x. x x) (\\x. x x)")).unwrap();
        assert_eq!(u.max_length(dd), None);
        assert_eq!(cr1(&FiniteCandidate::from_ids(u.len(), [dd]), &u).verdict, Verdict::Fail);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&t("(\\x. x) b"), 100), Verdict::Pass);
        assert_eq!(omega(&t("a a"), 100), Verdict::Fail);
        assert_eq!(omega(&t("(\\x. x x) (\\x. x x)"), 100), Verdict::Fail);
        assert_eq!(omega(&t("\\x. (\\y. y) x"), 100), Verdict::Fail);
    }

    #[test]
    fn candidate_operations() {
        let mut u = Universe::new(&vars(), 5, 100);
        u.prepare(2);
        let full = u.full_set();
        let a = set(&u, &["b"]);
        let r = imp_candidate(&a, &full, &u);
        assert_eq!(r.set, full);
        let b = set(&u, &["g", "a b"]);
        let r = imp_candidate(&a, &b, &u);
        assert!(r.set.contains(u.lookup(&t("a")).unwrap()));
        assert!(!r.set.contains(u.lookup(&t("g")).unwrap()));
        let x = set(&u, &["a", "b"]);
        let y = set(&u, &["b", "g"]);
        assert_eq!(forall_candidate(std::slice::from_ref(&x)), Some(x.clone()));
        assert_eq!(forall_candidate(&[x, y]), Some(set(&u, &["b"])));
        assert_eq!(forall_candidate(&[]), None);
        let sat = saturate(&set(&u, &["b", "a"]), &u);
        let report = check_candidate(&sat, &u, None);
        assert_eq!(report.verdict(), Verdict::Pass, "{report:?}");
        let id = u.lookup(&t("\\x. x")).unwrap();
        let sn = u.sn_slice();
        assert!(imp_candidate(&sat, &sat, &u).set.contains(id));
        assert!(imp_candidate(&sn, &sn, &u).set.contains(id));
    }
}
