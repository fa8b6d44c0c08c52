//! β-reduction, reduction trees, bounded strong-normalization verdicts and
//! the subject-reduction transform on derivations.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::rewriting::{congruent, CongruenceVerdict, Theory};
use crate::syntax::{fresh_name, Name, Path, Proof, Step, Style, Term};
use crate::typing::{
    finalize, retype, subst_derivation_proof, subst_derivation_term, term_names, weaken,
    Derivation, Rule, TypingError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("path does not address a redex of the subject")]
    NotARedex,
    #[error("the abstraction is typed through a quantifier the eliminations do not undo; the theory is confusing")]
    Confusing,
    #[error("no congruence witness: {0}")]
    Witness(String),
    #[error(transparent)]
    Typing(#[from] TypingError),
}

/// Contracts the redex at the root.
pub fn contract(p: &Proof) -> Option<Proof> {
    match p {
        Proof::App(f, x) => match &**f {
            Proof::Lam(a, b) => Some(b.subst_proof(a, x)),
            _ => None,
        },
        Proof::TApp(f, t) => match &**f {
            Proof::TLam(x, b) => Some(b.subst_term(x, t)),
            _ => None,
        },
        _ => None,
    }
}

/// One reduct per redex position, leftmost-outermost first.
pub fn one_step_reducts(p: &Proof) -> Vec<(Path, Proof)> {
    p.redex_paths()
        .into_iter()
        .map(|path| {
            let r = contract(p.at(&path).expect("redex path is valid")).expect("path addresses a redex");
            let q = p.replace_at(&path, r).expect("redex path is valid");
            (path, q)
        })
        .collect()
}

/// One-step reducts, one per redex position (so two redexes with α-equal
/// contracta both appear).
pub fn beta_reducts(p: &Proof) -> Vec<Proof> {
    one_step_reducts(p).into_iter().map(|(_, q)| q).collect()
}

/// One-step reducts modulo α, in first-occurrence order.
pub fn distinct_reducts(p: &Proof) -> Vec<Proof> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for q in beta_reducts(p) {
        let c = q.canonical();
        if !seen.contains(&c) {
            seen.push(c);
            out.push(q);
        }
    }
    out
}

pub fn is_normal(p: &Proof) -> bool {
    !p.positions().iter().any(|path| p.at(path).is_some_and(Proof::is_redex))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum SnVerdict {
    Sn { max_length: usize, tree_size: u64 },
    Diverges { cycle: Vec<String> },
    Unknown { spent: usize },
}

impl SnVerdict {
    pub fn is_sn(&self) -> bool {
        matches!(self, SnVerdict::Sn { .. })
    }

    pub fn max_length(&self) -> Option<usize> {
        match self {
            SnVerdict::Sn { max_length, .. } => Some(*max_length),
            _ => None,
        }
    }
}

/// Graph of α-classes reachable from a term.
struct ClassGraph {
    terms: Vec<Proof>,
    succ: Vec<Option<Vec<usize>>>,
}

fn explore(p: &Proof, budget: usize) -> (ClassGraph, bool) {
    let mut index: HashMap<Proof, usize> = HashMap::new();
    let mut g = ClassGraph {
        terms: vec![p.clone()],
        succ: vec![None],
    };
    index.insert(p.canonical(), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut expanded = 0;
    while let Some(i) = queue.pop_front() {
        if expanded >= budget {
            return (g, false);
        }
        expanded += 1;
        let mut out = Vec::new();
        for q in beta_reducts(&g.terms[i]) {
            let c = q.canonical();
            let j = match index.get(&c) {
                Some(&j) => j,
                None => {
                    let j = g.terms.len();
                    index.insert(c, j);
                    g.terms.push(q);
                    g.succ.push(None);
                    queue.push_back(j);
                    j
                }
            };
            if !out.contains(&j) {
                out.push(j);
            }
        }
        g.succ[i] = Some(out);
    }
    (g, true)
}

fn find_cycle(g: &ClassGraph) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; g.terms.len()];
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    let mut trail = vec![0usize];
    mark[0] = Mark::Active;
    while let Some(&mut (v, ref mut k)) = stack.last_mut() {
        let succ = g.succ[v].as_deref().unwrap_or(&[]);
        if *k < succ.len() {
            let w = succ[*k];
            *k += 1;
            match mark[w] {
                Mark::Active => {
                    let from = trail.iter().position(|&u| u == w).expect("active node on trail");
                    return Some(trail[from..].to_vec());
                }
                Mark::New => {
                    mark[w] = Mark::Active;
                    stack.push((w, 0));
                    trail.push(w);
                }
                Mark::Done => {}
            }
        } else {
            mark[v] = Mark::Done;
            stack.pop();
            trail.pop();
        }
    }
    None
}

/// Bounded strong-normalization verdict; `budget` bounds the number of
/// α-classes expanded.
pub fn sn_verdict(p: &Proof, budget: usize) -> SnVerdict {
    let (g, complete) = explore(p, budget);
    if let Some(cycle) = find_cycle(&g) {
        return SnVerdict::Diverges {
            cycle: cycle.iter().map(|&i| g.terms[i].to_string()).collect(),
        };
    }
    if !complete {
        return SnVerdict::Unknown { spent: budget };
    }
    let n = g.terms.len();
    let mut longest = vec![0usize; n];
    let mut size = vec![1u64; n];
    let mut order = Vec::with_capacity(n);
    let mut state = vec![0u8; n];
    let mut stack = vec![(0usize, false)];
    while let Some((v, post)) = stack.pop() {
        if post {
            order.push(v);
            continue;
        }
        if state[v] != 0 {
            continue;
        }
        state[v] = 1;
        stack.push((v, true));
        for &w in g.succ[v].as_deref().unwrap_or(&[]) {
            if state[w] == 0 {
                stack.push((w, false));
            }
        }
    }
    for &v in &order {
        for &w in g.succ[v].as_deref().unwrap_or(&[]) {
            longest[v] = longest[v].max(longest[w] + 1);
            size[v] = size[v].saturating_add(size[w]);
        }
    }
    SnVerdict::Sn {
        max_length: longest[0],
        tree_size: size[0],
    }
}

/// Node of a materialized reduction tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTree {
    pub term: String,
    pub children: Vec<ReductionTree>,
    /// Not expanded because the node budget ran out.
    pub truncated: bool,
    /// α-equal to an ancestor; not expanded again.
    pub repeats_ancestor: bool,
}

/// Breadth-first reduction tree with at most `budget` nodes; children are
/// the distinct one-step reducts.
pub fn reduction_tree(p: &Proof, budget: usize) -> ReductionTree {
    struct Node {
        term: Proof,
        parent: Option<usize>,
        children: Vec<usize>,
        truncated: bool,
        repeat: bool,
    }
    let mut nodes = vec![Node {
        term: p.clone(),
        parent: None,
        children: Vec::new(),
        truncated: false,
        repeat: false,
    }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let reducts = distinct_reducts(&nodes[i].term);
        if reducts.is_empty() {
            continue;
        }
        if nodes.len() + reducts.len() > budget.max(1) {
            nodes[i].truncated = true;
            continue;
        }
        for q in reducts {
            let c = q.canonical();
            let mut anc = Some(i);
            let mut repeat = false;
            while let Some(a) = anc {
                if nodes[a].term.canonical() == c {
                    repeat = true;
                    break;
                }
                anc = nodes[a].parent;
            }
            let j = nodes.len();
            nodes.push(Node {
                term: q,
                parent: Some(i),
                children: Vec::new(),
                truncated: false,
                repeat,
            });
            nodes[i].children.push(j);
            if !repeat {
                queue.push_back(j);
            }
        }
    }
    fn build(nodes: &[Node], i: usize) -> ReductionTree {
        ReductionTree {
            term: nodes[i].term.to_string(),
            children: nodes[i].children.iter().map(|&j| build(nodes, j)).collect(),
            truncated: nodes[i].truncated,
            repeats_ancestor: nodes[i].repeat,
        }
    }
    build(&nodes, 0)
}

impl ReductionTree {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ReductionTree::size).sum::<usize>()
    }

    /// Graphviz rendering; repeated terms are drawn with a double border.
    pub fn to_dot(&self) -> String {
        fn esc(s: &str) -> String {
            s.replace('\\', "\\\\").replace('"', "\\\"")
        }
        fn walk(t: &ReductionTree, next: &mut usize, out: &mut String) -> usize {
            let id = *next;
            *next += 1;
            let mut attrs = format!("label=\"{}\"", esc(&t.term));
            if t.truncated {
                attrs.push_str(", style=dashed");
            }
            if t.repeats_ancestor {
                attrs.push_str(", peripheries=2");
            }
            let _ = writeln!(out, "  n{id} [{attrs}];");
            for c in &t.children {
                let cid = walk(c, next, out);
                let _ = writeln!(out, "  n{id} -> n{cid};");
            }
            id
        }
        let mut out = String::from("digraph reduction {\n  node [shape=box, fontname=\"monospace\"];\n");
        walk(self, &mut 0, &mut out);
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum NormalizeOutcome {
    Normal { term: String, steps: usize },
    OutOfFuel { term: String, steps: usize },
}

/// Leftmost-outermost reduction with at most `fuel` steps.
pub fn normalize(p: &Proof, fuel: usize) -> (Proof, NormalizeOutcome) {
    let mut cur = p.clone();
    for steps in 0..=fuel {
        let Some(path) = cur.redex_paths().into_iter().next() else {
            let term = cur.to_string();
            return (cur, NormalizeOutcome::Normal { term, steps });
        };
        if steps == fuel {
            break;
        }
        let r = contract(cur.at(&path).expect("valid path")).expect("redex");
        cur = cur.replace_at(&path, r).expect("valid path");
    }
    let term = cur.to_string();
    (cur, NormalizeOutcome::OutOfFuel { term, steps: fuel })
}

/// Subject reduction: from a derivation of `Γ ⊢ π : A` and a redex position
/// in `π`, a derivation of `Γ ⊢ π′ : A` for the one-step reduct `π′`.
pub fn reduce_derivation(theory: &Theory, d: &Derivation, path: &[Step], fuel: usize) -> Result<Derivation, ReduceError> {
    if !d.subject().at(path).is_some_and(Proof::is_redex) {
        return Err(ReduceError::NotARedex);
    }
    let d0 = weaken(d, d.ctx())?;
    let out = descend(theory, d0, path, fuel)?;
    Ok(finalize(out, d.ctx().clone()))
}

fn descend(theory: &Theory, mut d: Derivation, path: &[Step], fuel: usize) -> Result<Derivation, ReduceError> {
    let curry_forall = d.style == Style::Curry && matches!(d.rule, Rule::ForallIntro { .. } | Rule::ForallElim { .. });
    if curry_forall {
        let p = d.premises.remove(0);
        d.premises.insert(0, descend(theory, p, path, fuel)?);
        return Ok(d);
    }
    let Some((step, rest)) = path.split_first() else {
        return match d.rule {
            Rule::ImpElim { .. } => contract_imp(theory, d, fuel),
            Rule::ForallElim { .. } => contract_forall(theory, d, fuel),
            _ => Err(ReduceError::NotARedex),
        };
    };
    let i = match (&d.rule, step) {
        (Rule::ImpIntro { .. }, Step::LamBody)
        | (Rule::ImpElim { .. }, Step::AppFun)
        | (Rule::ForallIntro { .. }, Step::TLamBody)
        | (Rule::ForallElim { .. }, Step::TAppFun) => 0,
        (Rule::ImpElim { .. }, Step::AppArg) => 1,
        _ => return Err(ReduceError::NotARedex),
    };
    let p = std::mem::replace(&mut d.premises[i], placeholder(d.style));
    d.premises[i] = descend(theory, p, rest, fuel)?;
    Ok(d)
}

fn placeholder(style: Style) -> Derivation {
    Derivation::axiom(style, Default::default(), "_", crate::syntax::Prop::atom("_", vec![]))
}

fn witness(theory: &Theory, a: &crate::syntax::Prop, b: &crate::syntax::Prop, fuel: usize) -> Result<(), ReduceError> {
    match congruent(theory, a, b, fuel) {
        CongruenceVerdict::Yes { .. } => Ok(()),
        v => Err(ReduceError::Witness(format!("{a} ≡ {b}: {v}"))),
    }
}

fn contract_imp(theory: &Theory, n: Derivation, fuel: usize) -> Result<Derivation, ReduceError> {
    let mut premises = n.premises.into_iter();
    let (f, x) = (premises.next().expect("two premises"), premises.next().expect("two premises"));
    let mut chain = Vec::new();
    let mut cur = f;
    while n.style == Style::Curry && matches!(cur.rule, Rule::ForallIntro { .. } | Rule::ForallElim { .. }) {
        let mut c = cur;
        let next = c.premises.remove(0);
        chain.push(c.rule);
        cur = next;
    }
    if !matches!(cur.rule, Rule::ImpIntro { .. }) {
        return Err(ReduceError::NotARedex);
    }
    let mut intro = cur;
    let mut pending: Vec<Name> = Vec::new();
    let mut avoid = term_names(&intro);
    for r in chain.iter().rev() {
        match r {
            Rule::ForallIntro { var, .. } => {
                for rr in &chain {
                    if let Rule::ForallElim { inst, .. } = rr {
                        inst.collect_vars(&mut avoid);
                    }
                }
                let z = fresh_name(var, |s| avoid.contains(s));
                avoid.insert(z.clone());
                intro = subst_derivation_term(&intro, var, &Term::Var(z.clone()));
                pending.push(z);
            }
            Rule::ForallElim { inst, .. } => {
                let z = pending.pop().ok_or(ReduceError::Confusing)?;
                intro = subst_derivation_term(&intro, &z, inst);
            }
            _ => unreachable!("chain holds quantifier rules only"),
        }
    }
    if !pending.is_empty() {
        return Err(ReduceError::Confusing);
    }
    let Rule::ImpIntro { hyp, dom, cod } = intro.rule.clone() else {
        unreachable!("term substitution keeps the rule")
    };
    witness(theory, &dom, x.prop(), fuel)?;
    witness(theory, &cod, &n.concl.prop, fuel)?;
    let body = intro.premises.remove(0);
    let out = subst_derivation_proof(&body, &hyp, &x)?;
    Ok(retype(out, &n.concl.prop))
}

fn contract_forall(theory: &Theory, n: Derivation, fuel: usize) -> Result<Derivation, ReduceError> {
    let Rule::ForallElim { inst, .. } = &n.rule else {
        return Err(ReduceError::NotARedex);
    };
    let f = &n.premises[0];
    let Rule::ForallIntro { var, .. } = &f.rule else {
        return Err(ReduceError::NotARedex);
    };
    let body = &f.premises[0];
    let out = subst_derivation_term(body, var, inst);
    witness(theory, out.prop(), &n.concl.prop, fuel)?;
    Ok(retype(out, &n.concl.prop))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::parse_theory;
    use crate::syntax::{name, parse_proof, parse_prop};
    use crate::typing::{check_derivation, parse_drv, Context};

    fn curry(s: &str) -> Proof {
        parse_proof(s, Style::Curry, None).unwrap()
    }

    fn set(v: Vec<Proof>) -> Vec<Proof> {
        let mut v: Vec<Proof> = v.iter().map(Proof::canonical).collect();
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn reducts() {
        let dd = curry("(\\a. a a) (\\a. a a)");
        assert_eq!(set(beta_reducts(&dd)), set(vec![dd.clone()]));
        assert!(beta_reducts(&curry("a")).is_empty());
        let r = beta_reducts(&curry("(\\a. a) ((\\b. b) g)"));
        assert_eq!(set(r), set(vec![curry("(\\b. b) g"), curry("(\\a. a) g")]));
        let i = curry("(\\a. a) ((\\a. a) (\\a. a))");
        assert_eq!(beta_reducts(&i).len(), 2);
        assert_eq!(distinct_reducts(&i).len(), 1);
    }

    #[test]
    fn normality() {
        assert!(is_normal(&curry("a")));
        assert!(is_normal(&curry("a a")));
        assert!(!is_normal(&curry("(\\a. a) b")));
    }

    #[test]
    fn verdicts() {
        match sn_verdict(&curry("(\\a. a a) (\\a. a a)"), 100) {
            SnVerdict::Diverges { cycle } => assert_eq!(cycle.len(), 1),
            v => panic!("{v:?}"),
        }
        assert_eq!(
            sn_verdict(&curry("\\a. a"), 10),
            SnVerdict::Sn {
                max_length: 0,
                tree_size: 1
            }
        );
        assert_eq!(sn_verdict(&curry("(\\a. a a) (\\b. b)"), 10).max_length(), Some(2));
        let three = curry("(\\a. a a a) (\\a. a a a)");
        assert!(matches!(sn_verdict(&three, 5), SnVerdict::Unknown { .. }));
    }

    #[test]
    fn trees() {
        let t = reduction_tree(&curry("a"), 5);
        assert!(t.children.is_empty() && !t.truncated);
        let t = reduction_tree(&curry("(\\a. b) g"), 5);
        assert_eq!(t.children.len(), 1);
        assert_eq!(t.children[0].term, "b");
        let t = reduction_tree(&curry("(\\a. a a) (\\a. a a)"), 3);
        assert!(t.children[0].repeats_ancestor);
        assert!(t.to_dot().contains("peripheries=2"));
    }

    #[test]
    fn leftmost_outermost() {
        let (_, out) = normalize(&curry("(\\a. a) ((\\b. b) g)"), 10);
        assert_eq!(out, NormalizeOutcome::Normal { term: "g".into(), steps: 2 });
        let (_, out) = normalize(&curry("(\\a. a a) (\\a. a a)"), 7);
        assert!(matches!(out, NormalizeOutcome::OutOfFuel { steps: 7, .. }));
    }

    #[test]
    fn identity_redex_reduces() {
        let th = parse_theory("pred P/0.\n").unwrap();
        let p = parse_prop("P", Some(&th.signature)).unwrap();
        let g = Context(vec![(name("b"), p.clone())]);
        let id = Derivation::imp_intro("a", Derivation::axiom(Style::Curry, g.extend(&name("a"), &p), "a", p.clone()), p.clone());
        let d = Derivation::imp_elim(id, Derivation::axiom(Style::Curry, g.clone(), "b", p.clone())).unwrap();
        assert!(check_derivation(&th, &d, 10).is_ok());
        let out = reduce_derivation(&th, &d, &[], 10).unwrap();
        assert!(check_derivation(&th, &out, 10).is_ok());
        assert_eq!(out.subject(), &Proof::var("b"));
        assert!(matches!(reduce_derivation(&th, &d, &[Step::AppArg], 10), Err(ReduceError::NotARedex)));
    }

    #[test]
    fn delta_delta_reduces_to_itself() {
        let th = parse_theory("pred A/0.\nrule A --> A => A.\n").unwrap();
        let text = r#"(imp-elim ctx:"a:A" subj:"(\a. a a) (\a. a a)" prop:"A" wit:"A => A"
  (imp-intro ctx:"a:A" subj:"\a. a a" prop:"A => A" wit:"A => A"
    (imp-elim ctx:"a:A" subj:"a a" prop:"A" wit:"A => A"
      (axiom ctx:"a:A" subj:"a" prop:"A => A" hyp:"a") (axiom ctx:"a:A" subj:"a" prop:"A" hyp:"a")))
  (imp-intro ctx:"a:A" subj:"\a. a a" prop:"A" wit:"A => A"
    (imp-elim ctx:"a:A" subj:"a a" prop:"A" wit:"A => A"
      (axiom ctx:"a:A" subj:"a" prop:"A => A" hyp:"a") (axiom ctx:"a:A" subj:"a" prop:"A" hyp:"a"))))"#;
        let d = parse_drv(text, Style::Curry, Some(&th.signature)).unwrap();
        let out = reduce_derivation(&th, &d, &[], 50).unwrap();
        let r = check_derivation(&th, &out, 50);
        assert!(r.is_ok(), "{:?}", r.failure);
        assert!(out.subject().alpha_eq(d.subject()));
        assert_eq!(out.ctx(), d.ctx());
        assert_eq!(out.prop(), d.prop());
    }

    #[test]
    fn church_term_redex() {
        let th = parse_theory("pred Q/1.\nfun c/0.\n").unwrap();
        let q = |s: &str| parse_prop(s, Some(&th.signature)).unwrap();
        let g = Context(vec![(name("h"), q("!y. Q(y)"))]);
        let ax = Derivation::axiom(Style::Church, g, "h", q("!y. Q(y)"));
        let e = Derivation::forall_elim(ax, Term::var("x")).unwrap();
        let gen = Derivation::forall_intro("x", e);
        let d = Derivation::forall_elim(gen, Term::constant("c")).unwrap();
        assert!(check_derivation(&th, &d, 10).is_ok());
        assert_eq!(d.subject().to_string(), "(^x. h [x]) [c]");
        let out = reduce_derivation(&th, &d, &[], 10).unwrap();
        assert!(check_derivation(&th, &out, 10).is_ok());
        assert_eq!(out.subject().to_string(), "h [c]");
    }

    #[test]
    fn curry_redex_behind_quantifier_rules() {
        let th = parse_theory("pred Q/1.\nfun c/0.\n").unwrap();
        let q = |s: &str| parse_prop(s, Some(&th.signature)).unwrap();
        let g = Context(vec![(name("b"), q("Q(c)"))]);
        let inner = Derivation::axiom(Style::Curry, g.extend(&name("a"), &q("Q(x)")), "a", q("Q(x)"));
        let lam = Derivation::imp_intro("a", inner, q("Q(x)"));
        let gen = Derivation::forall_intro("x", lam);
        let inst = Derivation::forall_elim(gen, Term::constant("c")).unwrap();
        let d = Derivation::imp_elim(inst, Derivation::axiom(Style::Curry, g, "b", q("Q(c)"))).unwrap();
        assert!(check_derivation(&th, &d, 10).is_ok());
        let out = reduce_derivation(&th, &d, &[], 10).unwrap();
        let r = check_derivation(&th, &out, 10);
        assert!(r.is_ok(), "{:?}", r.failure);
        assert_eq!(out.subject(), &Proof::var("b"));
    }
}
