//! Rewrite rules, the congruence they generate, bounded congruence decisions
//! and confusion detection.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::syntax::{name, Env, Head, Name, Prop, Signature, Term};

mod file;

pub use file::{parse_theory, TheoryError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleBody {
    Prop { lhs: Prop, rhs: Prop },
    Term { lhs: Term, rhs: Term },
}

/// One rule; free term variables of either side act as pattern variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub body: RuleBody,
    /// Written `-->` rather than `<->`; the congruence is symmetric either way.
    pub oriented: bool,
}

impl RewriteRule {
    pub fn prop(lhs: Prop, rhs: Prop, oriented: bool) -> Self {
        RewriteRule {
            body: RuleBody::Prop { lhs, rhs },
            oriented,
        }
    }

    pub fn term(lhs: Term, rhs: Term, oriented: bool) -> Self {
        RewriteRule {
            body: RuleBody::Term { lhs, rhs },
            oriented,
        }
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = if self.oriented { "-->" } else { "<->" };
        match &self.body {
            RuleBody::Prop { lhs, rhs } => write!(f, "rule {lhs} {arrow} {rhs}."),
            RuleBody::Term { lhs, rhs } => write!(f, "rule term {lhs} {arrow} {rhs}."),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum HeadKey {
    Atom(Name),
    Imp,
    Forall,
}

fn head_key(p: &Prop) -> HeadKey {
    match p.head() {
        Head::Atom(q) => HeadKey::Atom(name(q)),
        Head::Imp => HeadKey::Imp,
        Head::Forall => HeadKey::Forall,
    }
}

/// Signature plus finitely many rules.
#[derive(Clone, Debug)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    rules: Vec<RewriteRule>,
    /// Head constructors linked by some rule; heads outside one class never meet.
    head_links: Vec<(HeadKey, HeadKey)>,
}

impl Theory {
    pub fn new(name: &str, signature: Signature, rules: Vec<RewriteRule>) -> Result<Self, TheoryError> {
        for r in &rules {
            validate_rule(&signature, r).map_err(|msg| TheoryError { line: 0, msg })?;
        }
        let head_links = rules
            .iter()
            .filter_map(|r| match &r.body {
                RuleBody::Prop { lhs, rhs } => Some((head_key(lhs), head_key(rhs))),
                RuleBody::Term { .. } => None,
            })
            .collect();
        Ok(Theory {
            name: name.to_string(),
            signature,
            rules,
            head_links,
        })
    }

    pub fn empty(name: &str, signature: Signature) -> Self {
        Theory::new(name, signature, Vec::new()).expect("no rules to validate")
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn has_rules(&self) -> bool {
        !self.rules.is_empty()
    }

    /// Size of the largest rule side.
    pub fn max_rule_size(&self) -> usize {
        self.rules
            .iter()
            .map(|r| match &r.body {
                RuleBody::Prop { lhs, rhs } => lhs.size().max(rhs.size()),
                RuleBody::Term { lhs, rhs } => lhs.size().max(rhs.size()),
            })
            .max()
            .unwrap_or(0)
    }

    /// Largest proposition a class search starting from propositions of
    /// size at most `start` visits. Larger neighbours are pruned.
    pub fn search_size_cap(&self, start: usize) -> usize {
        2 * start + 4 * self.max_rule_size() + 16
    }

    fn heads_linked(&self, a: &Prop, b: &Prop) -> bool {
        let (ha, hb) = (head_key(a), head_key(b));
        if ha == hb {
            return true;
        }
        let mut seen = vec![ha.clone()];
        let mut queue = vec![ha];
        while let Some(h) = queue.pop() {
            for (l, r) in &self.head_links {
                for (x, y) in [(l, r), (r, l)] {
                    if *x == h && !seen.contains(y) {
                        if *y == hb {
                            return true;
                        }
                        seen.push(y.clone());
                        queue.push(y.clone());
                    }
                }
            }
        }
        false
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theory {}.", self.name)?;
        write!(f, "{}", self.signature)?;
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

fn validate_rule(sig: &Signature, r: &RewriteRule) -> Result<(), String> {
    let (fl, fr) = match &r.body {
        RuleBody::Prop { lhs, rhs } => {
            lhs.check_arity(sig)?;
            rhs.check_arity(sig)?;
            (lhs.free_term_vars(), rhs.free_term_vars())
        }
        RuleBody::Term { lhs, rhs } => {
            if matches!(lhs, Term::Var(_)) || matches!(rhs, Term::Var(_)) {
                return Err(format!("{r}: a term rule side may not be a bare variable"));
            }
            lhs.check_arity(sig)?;
            rhs.check_arity(sig)?;
            (lhs.free_vars(), rhs.free_vars())
        }
    };
    if let Some(x) = fr.difference(&fl).next() {
        return Err(format!("{r}: right-hand side introduces variable `{x}`"));
    }
    if let Some(x) = fl.difference(&fr).next() {
        return Err(format!(
            "{r}: variable `{x}` is dropped, so the reverse step would be infinitely branching"
        ));
    }
    Ok(())
}

fn match_term(pat: &Term, tgt: &Term, bound: &[(Name, Name)], sub: &mut Env) -> bool {
    match pat {
        Term::Var(v) => {
            if let Some(i) = bound.iter().rposition(|(p, _)| p == v) {
                return matches!(tgt, Term::Var(w) if bound.iter().rposition(|(_, t)| t == w) == Some(i));
            }
            if bound.iter().any(|(_, w)| tgt.occurs(w)) {
                return false;
            }
            match sub.get(v) {
                Some(t) => t == tgt,
                None => {
                    sub.insert(v.clone(), tgt.clone());
                    true
                }
            }
        }
        Term::App(f, args) => match tgt {
            Term::App(g, targs) if f == g && args.len() == targs.len() => args
                .iter()
                .zip(targs)
                .all(|(p, t)| match_term(p, t, bound, sub)),
            _ => false,
        },
    }
}

fn match_prop(pat: &Prop, tgt: &Prop, bound: &mut Vec<(Name, Name)>, sub: &mut Env) -> bool {
    match (pat, tgt) {
        (Prop::Atom(p, a), Prop::Atom(q, b)) => {
            p == q && a.len() == b.len() && a.iter().zip(b).all(|(s, t)| match_term(s, t, bound, sub))
        }
        (Prop::Imp(a1, b1), Prop::Imp(a2, b2)) => {
            match_prop(a1, a2, bound, sub) && match_prop(b1, b2, bound, sub)
        }
        (Prop::Forall(x, a), Prop::Forall(y, b)) => {
            bound.push((x.clone(), y.clone()));
            let r = match_prop(a, b, bound, sub);
            bound.pop();
            r
        }
        _ => false,
    }
}

/// Instance of `to` when `from` matches `p`.
pub fn rewrite_root(from: &Prop, to: &Prop, p: &Prop) -> Option<Prop> {
    let mut sub = Env::new();
    match_prop(from, p, &mut Vec::new(), &mut sub).then(|| to.subst_env(&sub))
}

fn term_neighbors(theory: &Theory, t: &Term, out: &mut Vec<Term>) {
    for r in &theory.rules {
        if let RuleBody::Term { lhs, rhs } = &r.body {
            for (l, rr) in [(lhs, rhs), (rhs, lhs)] {
                let mut sub = Env::new();
                if match_term(l, t, &[], &mut sub) {
                    out.push(rr.subst_env(&sub));
                }
            }
        }
    }
    if let Term::App(f, args) = t {
        for i in 0..args.len() {
            let mut inner = Vec::new();
            term_neighbors(theory, &args[i], &mut inner);
            for a in inner {
                let mut v = args.clone();
                v[i] = a;
                out.push(Term::App(f.clone(), v));
            }
        }
    }
}

fn prop_neighbors(theory: &Theory, p: &Prop, out: &mut Vec<Prop>) {
    for r in &theory.rules {
        if let RuleBody::Prop { lhs, rhs } = &r.body {
            out.extend(rewrite_root(lhs, rhs, p));
            out.extend(rewrite_root(rhs, lhs, p));
        }
    }
    match p {
        Prop::Atom(q, args) => {
            for i in 0..args.len() {
                let mut inner = Vec::new();
                term_neighbors(theory, &args[i], &mut inner);
                for a in inner {
                    let mut v = args.clone();
                    v[i] = a;
                    out.push(Prop::Atom(q.clone(), v));
                }
            }
        }
        Prop::Imp(a, b) => {
            let mut inner = Vec::new();
            prop_neighbors(theory, a, &mut inner);
            out.extend(inner.drain(..).map(|a2| Prop::Imp(Box::new(a2), b.clone())));
            prop_neighbors(theory, b, &mut inner);
            out.extend(inner.drain(..).map(|b2| Prop::Imp(a.clone(), Box::new(b2))));
        }
        Prop::Forall(x, a) => {
            let mut inner = Vec::new();
            prop_neighbors(theory, a, &mut inner);
            out.extend(inner.into_iter().map(|a2| Prop::Forall(x.clone(), Box::new(a2))));
        }
    }
}

/// All propositions one rule application away, in either direction, at any
/// position; duplicates modulo α removed.
pub fn rewrite_neighbors(theory: &Theory, p: &Prop) -> Vec<Prop> {
    let mut raw = Vec::new();
    prop_neighbors(theory, p, &mut raw);
    let mut seen = HashSet::new();
    raw.into_iter().filter(|q| seen.insert(q.canonical())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum CongruenceVerdict {
    Yes { path_len: usize },
    No,
    Unknown { spent: usize },
}

impl CongruenceVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, CongruenceVerdict::Yes { .. })
    }
}

impl fmt::Display for CongruenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongruenceVerdict::Yes { path_len } => write!(f, "yes (path length {path_len})"),
            CongruenceVerdict::No => f.write_str("no"),
            CongruenceVerdict::Unknown { spent } => write!(f, "unknown (fuel {spent} spent)"),
        }
    }
}

/// Verdict plus the number of node expansions it cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceOutcome {
    pub verdict: CongruenceVerdict,
    pub expansions: usize,
}

/// Bidirectional breadth-first search over `rewrite_neighbors`; `fuel`
/// bounds the total number of node expansions. Heads that no rule links are
/// answered `No` without search. Neighbours larger than
/// [`Theory::search_size_cap`] are pruned, and a pruned side that runs dry
/// answers `Unknown` rather than `No`.
pub fn congruent_with_cost(theory: &Theory, a: &Prop, b: &Prop, fuel: usize) -> CongruenceOutcome {
    let done = |verdict, expansions| CongruenceOutcome { verdict, expansions };
    let (ca, cb) = (a.canonical(), b.canonical());
    if ca == cb {
        return done(CongruenceVerdict::Yes { path_len: 0 }, 0);
    }
    if !theory.heads_linked(a, b) || !theory.has_rules() {
        return done(CongruenceVerdict::No, 0);
    }
    let mut dist: [HashMap<Prop, usize>; 2] = [HashMap::new(), HashMap::new()];
    let mut queue: [VecDeque<Prop>; 2] = [VecDeque::new(), VecDeque::new()];
    dist[0].insert(ca.clone(), 0);
    dist[1].insert(cb.clone(), 0);
    queue[0].push_back(ca);
    queue[1].push_back(cb);
    let cap = theory.search_size_cap(a.size().max(b.size()));
    let mut pruned = [false, false];
    let mut spent = 0;
    loop {
        for side in 0..2 {
            if queue[side].is_empty() {
                let v = if pruned[side] { CongruenceVerdict::Unknown { spent } } else { CongruenceVerdict::No };
                return done(v, spent);
            }
        }
        if spent >= fuel {
            return done(CongruenceVerdict::Unknown { spent }, spent);
        }
        let side = usize::from(queue[1].len() < queue[0].len());
        let node = queue[side].pop_front().expect("checked non-empty");
        let d = dist[side][&node];
        spent += 1;
        for m in rewrite_neighbors(theory, &node) {
            let m = m.canonical();
            if dist[side].contains_key(&m) {
                continue;
            }
            if m.size() > cap {
                pruned[side] = true;
                continue;
            }
            if let Some(&e) = dist[1 - side].get(&m) {
                return done(CongruenceVerdict::Yes { path_len: d + 1 + e }, spent);
            }
            dist[side].insert(m.clone(), d + 1);
            queue[side].push_back(m);
        }
    }
}

pub fn congruent(theory: &Theory, a: &Prop, b: &Prop, fuel: usize) -> CongruenceVerdict {
    congruent_with_cost(theory, a, b, fuel).verdict
}

/// Explores the class of `p` breadth-first until saturation or `fuel`
/// expansions; returns members (canonical) with their distance and whether
/// the class was exhausted. Members above [`Theory::search_size_cap`] are
/// pruned, which counts as not exhausted.
pub fn explore_class(theory: &Theory, p: &Prop, fuel: usize) -> (Vec<(Prop, usize)>, bool) {
    let start = p.canonical();
    let mut seen: HashSet<Prop> = HashSet::from([start.clone()]);
    let mut order = vec![(start.clone(), 0)];
    let mut queue = VecDeque::from([(start, 0usize)]);
    let cap = theory.search_size_cap(p.size());
    let mut pruned = false;
    let mut spent = 0;
    while let Some((node, d)) = queue.pop_front() {
        if spent >= fuel {
            return (order, false);
        }
        spent += 1;
        for m in rewrite_neighbors(theory, &node) {
            let m = m.canonical();
            if m.size() > cap {
                pruned = true;
                continue;
            }
            if seen.insert(m.clone()) {
                order.push((m.clone(), d + 1));
                queue.push_back((m, d + 1));
            }
        }
    }
    (order, !pruned)
}

/// Terms over the signature of exactly `size` nodes using the given variables.
pub fn enumerate_terms(sig: &Signature, vars: &[Name], size: usize) -> Vec<Term> {
    let mut out = Vec::new();
    if size == 1 {
        out.extend(vars.iter().map(|v| Term::Var(v.clone())));
    }
    for (f, n) in sig.functions() {
        if *n == 0 {
            if size == 1 {
                out.push(Term::App(f.clone(), Vec::new()));
            }
        } else if size > *n {
            for args in term_tuples(sig, vars, *n, size - 1) {
                out.push(Term::App(f.clone(), args));
            }
        }
    }
    out
}

fn term_tuples(sig: &Signature, vars: &[Name], n: usize, total: usize) -> Vec<Vec<Term>> {
    if n == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(n - 1) {
        for t in enumerate_terms(sig, vars, first) {
            for mut rest in term_tuples(sig, vars, n - 1, total - first) {
                rest.insert(0, t.clone());
                out.push(rest);
            }
        }
    }
    out
}

/// Propositions of exactly `size` nodes; `scope` holds the variables usable
/// in atoms, binders draw from `binders`.
pub fn enumerate_props(sig: &Signature, scope: &[Name], binders: &[Name], size: usize) -> Vec<Prop> {
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    for (p, n) in sig.predicates() {
        if *n == 0 {
            if size == 1 {
                out.push(Prop::Atom(p.clone(), Vec::new()));
            }
        } else if size > *n {
            for args in term_tuples(sig, scope, *n, size - 1) {
                out.push(Prop::Atom(p.clone(), args));
            }
        }
    }
    for left in 1..size.saturating_sub(1) {
        let right = size - 1 - left;
        let ls = enumerate_props(sig, scope, binders, left);
        let rs = enumerate_props(sig, scope, binders, right);
        for a in &ls {
            for b in &rs {
                out.push(Prop::imp(a.clone(), b.clone()));
            }
        }
    }
    if size >= 2 {
        for x in binders {
            let mut inner: Vec<Name> = scope.to_vec();
            if !inner.contains(x) {
                inner.push(x.clone());
            }
            for body in enumerate_props(sig, &inner, binders, size - 1) {
                out.push(Prop::Forall(x.clone(), Box::new(body)));
            }
        }
    }
    let mut seen = HashSet::new();
    out.retain(|p| seen.insert(p.canonical()));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfusionReport {
    pub verdict: CongruenceVerdict,
    /// An implication and a universal proposition found congruent.
    pub witness: Option<(String, String)>,
    pub imp_props: usize,
    pub forall_props: usize,
    pub undecided: usize,
}

/// Searches closed propositions up to `size_bound` for an `=>`-headed one
/// congruent to a `!`-headed one.
pub fn detect_confusion(theory: &Theory, size_bound: usize, fuel: usize) -> ConfusionReport {
    let binders = [name("x"), name("y")];
    let mut imps = Vec::new();
    let mut foralls = HashSet::new();
    for size in 1..=size_bound {
        for p in enumerate_props(&theory.signature, &[], &binders, size) {
            match p.head() {
                Head::Imp => imps.push(p),
                Head::Forall => {
                    foralls.insert(p.canonical());
                }
                Head::Atom(_) => {}
            }
        }
    }
    let mut report = ConfusionReport {
        verdict: CongruenceVerdict::No,
        witness: None,
        imp_props: imps.len(),
        forall_props: foralls.len(),
        undecided: 0,
    };
    let probe = Prop::forall("x", Prop::Atom(theory.signature.predicates()[0].0.clone(), vec![]));
    if foralls.is_empty() || imps.is_empty() || !theory.heads_linked(&imps[0], &probe) {
        return report;
    }
    let mut spent = 0;
    for p in &imps {
        let (class, saturated) = explore_class(theory, p, fuel);
        spent += class.len();
        if let Some((q, d)) = class.iter().find(|(q, _)| foralls.contains(q)) {
            report.verdict = CongruenceVerdict::Yes { path_len: *d };
            report.witness = Some((p.to_string(), q.to_string()));
            return report;
        }
        if !saturated {
            report.undecided += 1;
        }
    }
    if report.undecided > 0 {
        report.verdict = CongruenceVerdict::Unknown { spent };
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_prop;

    fn sig_ab() -> Signature {
        Signature::new(vec![], vec![(name("A"), 0), (name("B"), 0)]).unwrap()
    }

    fn p(s: &str) -> Prop {
        parse_prop(s, None).unwrap()
    }

    fn selfapp() -> Theory {
        Theory::new("selfapp", sig_ab(), vec![RewriteRule::prop(p("A"), p("A => A"), true)]).unwrap()
    }

    fn confusion() -> Theory {
        let r = RewriteRule::prop(p("!x. (A => B)"), p("A => !x. B"), false);
        Theory::new("confusion", sig_ab(), vec![r]).unwrap()
    }

    fn set(v: Vec<Prop>) -> HashSet<Prop> {
        v.iter().map(Prop::canonical).collect()
    }

    #[test]
    fn pruned_search_is_unknown_not_no() {
        let t = Theory::new("ab", sig_ab(), vec![RewriteRule::prop(p("A"), p("A => B"), true)]).unwrap();
        let out = congruent_with_cost(&t, &p("A"), &p("A => A"), 1_000_000);
        assert!(matches!(out.verdict, CongruenceVerdict::Unknown { .. }), "{out:?}");
        assert!(out.expansions < 1000);
        let (_, exhausted) = explore_class(&t, &p("A"), 1_000_000);
        assert!(!exhausted);
        assert_eq!(congruent(&confusion(), &p("A"), &p("B"), 100), CongruenceVerdict::No);
    }

    #[test]
    fn neighbors_of_selfapp() {
        let t = selfapp();
        assert_eq!(set(rewrite_neighbors(&t, &p("A"))), set(vec![p("A => A")]));
        let want = set(vec![p("A"), p("(A => A) => A"), p("A => A => A")]);
        assert_eq!(set(rewrite_neighbors(&t, &p("A => A"))), want);
        let e = Theory::empty("empty", sig_ab());
        assert!(rewrite_neighbors(&e, &p("A => B")).is_empty());
    }

    #[test]
    fn congruence_examples() {
        let t = selfapp();
        assert!(congruent(&t, &p("A"), &p("A => A"), 10).is_yes());
        assert_eq!(congruent(&t, &p("A"), &p("A"), 0), CongruenceVerdict::Yes { path_len: 0 });
        let e = Theory::empty("empty", sig_ab());
        assert_eq!(congruent(&e, &p("A"), &p("B"), 10), CongruenceVerdict::No);
        assert!(matches!(congruent(&t, &p("A"), &p("A => B"), 50), CongruenceVerdict::Unknown { .. }));
    }

    #[test]
    fn confusion_rule_matches_under_renamed_binder() {
        let t = confusion();
        assert!(congruent(&t, &p("!y. (A => B)"), &p("A => !z. B"), 5).is_yes());
    }

    #[test]
    fn confusion_detection() {
        let r = detect_confusion(&confusion(), 4, 1000);
        assert!(r.verdict.is_yes());
        let e = Theory::empty("empty", sig_ab());
        assert_eq!(detect_confusion(&e, 4, 1000).verdict, CongruenceVerdict::No);
        assert_eq!(detect_confusion(&selfapp(), 4, 1000).verdict, CongruenceVerdict::No);
    }

    #[test]
    fn term_rules_rewrite_inside_atoms() {
        let sig = Signature::new(
            vec![(name("z"), 0), (name("s"), 1)],
            vec![(name("N"), 1)],
        )
        .unwrap();
        let s = |t: Term| Term::app("s", vec![t]);
        let rule = RewriteRule::term(s(s(Term::var("x"))), s(Term::var("x")), true);
        let t = Theory::new("t", sig, vec![rule]).unwrap();
        let a = Prop::atom("N", vec![s(s(s(Term::constant("z"))))]);
        let b = Prop::atom("N", vec![s(Term::constant("z"))]);
        assert!(congruent(&t, &a, &b, 100).is_yes());
    }

    #[test]
    fn rejects_variable_dropping_rules() {
        let sig = Signature::new(vec![], vec![(name("Q"), 1), (name("P"), 0)]).unwrap();
        let r = RewriteRule::prop(p("Q(x)"), p("P"), true);
        assert!(Theory::new("bad", sig, vec![r]).is_err());
    }

    #[test]
    fn enumeration_sizes() {
        let sig = sig_ab();
        assert_eq!(enumerate_props(&sig, &[], &[name("x")], 1).len(), 2);
        assert_eq!(enumerate_props(&sig, &[], &[name("x")], 3).len(), 4 + 2);
    }
}
