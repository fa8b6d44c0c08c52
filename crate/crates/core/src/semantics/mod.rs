//! Pre-Heyting algebras, algebra-valued structures and interpretations.
//!
//! The term model is always approximated by a caller-supplied finite term
//! universe; every `∀` is read as a greatest lower bound over it.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::rewriting::{congruent, CongruenceVerdict, Theory};
use crate::syntax::{Env, Name, Prop, Signature, Term};
use crate::Verdict;

mod table;

pub use table::{check_model2, parse_table, table_from_interpret, ClauseReport, InterpretationTable, Model2Report, TableError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("term variable `{0}` is not bound by the environment")]
    Unbound(String),
    #[error("the term universe is empty")]
    EmptyUniverse,
    #[error("the family interpreting `{0}` is not admissible")]
    NotAdmissible(String),
}

/// `⟨𝓑, ≤, 𝒜, ⇒̃, ∀̃⟩`. `glb` returns `None` outside `𝒜`.
pub trait PreHeyting {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn imp(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn admissible(&self, family: &[Self::Elem]) -> bool;
    fn glb(&self, family: &[Self::Elem]) -> Option<Self::Elem>;
    fn format_elem(&self, e: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Option<Self::Elem>;
}

/// An algebra whose domain can be listed.
pub trait FiniteAlgebra: PreHeyting {
    fn elements(&self) -> Vec<Self::Elem>;
}

/// Subsets of `{0, …, n-1}` as bitmasks, ordered by inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowersetAlgebra {
    n: u32,
}

pub fn powerset_algebra(n: u32) -> Option<PowersetAlgebra> {
    (1..=5).contains(&n).then_some(PowersetAlgebra { n })
}

impl PowersetAlgebra {
    pub fn size(&self) -> u32 {
        self.n
    }

    pub fn top(&self) -> u32 {
        (1u32 << self.n) - 1
    }
}

impl PreHeyting for PowersetAlgebra {
    type Elem = u32;

    fn leq(&self, a: &u32, b: &u32) -> bool {
        a & !b == 0
    }

    fn imp(&self, a: &u32, b: &u32) -> u32 {
        (!a & self.top()) | b
    }

    fn admissible(&self, family: &[u32]) -> bool {
        family.iter().all(|e| e & !self.top() == 0)
    }

    fn glb(&self, family: &[u32]) -> Option<u32> {
        self.admissible(family)
            .then(|| family.iter().fold(self.top(), |acc, e| acc & e))
    }

    fn format_elem(&self, e: &u32) -> String {
        e.to_string()
    }

    fn parse_elem(&self, s: &str) -> Option<u32> {
        let v = match s.trim() {
            "top" => self.top(),
            "bot" => 0,
            other => other.parse().ok()?,
        };
        (v & !self.top() == 0).then_some(v)
    }
}

impl FiniteAlgebra for PowersetAlgebra {
    fn elements(&self) -> Vec<u32> {
        (0..=self.top()).collect()
    }
}

/// Outcome of one algebra law over an exhaustive sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub holds: bool,
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl LawResult {
    fn new() -> Self {
        LawResult {
            holds: true,
            checked: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.holds {
            self.holds = false;
            self.counterexample = Some(why());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub preorder: LawResult,
    pub imp_stable: LawResult,
    pub glb: LawResult,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.preorder.holds && self.imp_stable.holds && self.glb.holds
    }
}

/// Every subset of `elems`, as families; `elems` must have at most 20 members.
pub fn all_families<E: Clone>(elems: &[E]) -> Vec<Vec<E>> {
    assert!(elems.len() <= 20, "too many elements for exhaustive families");
    (0u32..1 << elems.len())
        .map(|mask| {
            elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

/// Checks the pre-order, `⇒̃`-stability and glb laws over the domain and the
/// admissible members of `families`.
pub fn check_laws<A: FiniteAlgebra>(alg: &A, families: &[Vec<A::Elem>]) -> LawReport {
    let elems = alg.elements();
    let show = |e: &A::Elem| alg.format_elem(e);
    let mut preorder = LawResult::new();
    for a in &elems {
        preorder.record(alg.leq(a, a), || format!("{} is not below itself", show(a)));
        for b in &elems {
            if !alg.leq(a, b) {
                continue;
            }
            for c in &elems {
                if alg.leq(b, c) {
                    preorder.record(alg.leq(a, c), || {
                        format!("{} ≤ {} ≤ {} but not {} ≤ {}", show(a), show(b), show(c), show(a), show(c))
                    });
                }
            }
        }
    }
    let mut imp_stable = LawResult::new();
    let mut glb = LawResult::new();
    for s in families.iter().filter(|s| alg.admissible(s)) {
        for a in &elems {
            let image: Vec<_> = s.iter().map(|b| alg.imp(a, b)).collect();
            imp_stable.record(alg.admissible(&image), || {
                format!("{} ⇒ {:?} leaves the admissible family", show(a), s)
            });
        }
        let Some(g) = alg.glb(s) else {
            glb.record(false, || format!("glb undefined on admissible {s:?}"));
            continue;
        };
        let lower = s.iter().all(|x| alg.leq(&g, x));
        glb.record(lower, || format!("glb {} of {s:?} is not a lower bound", show(&g)));
        for l in &elems {
            if s.iter().all(|x| alg.leq(l, x)) {
                glb.record(alg.leq(l, &g), || {
                    format!("lower bound {} of {s:?} is not below glb {}", show(l), show(&g))
                });
            }
        }
    }
    LawReport {
        preorder,
        imp_stable,
        glb,
    }
}

/// A `𝓑`-valued structure over the term model; function symbols are
/// interpreted by themselves, predicates by a table with a default value.
#[derive(Clone, Debug)]
pub struct ValuedStructure<A: PreHeyting> {
    pub algebra: A,
    pub signature: Signature,
    pub preds: BTreeMap<(Name, Vec<Term>), A::Elem>,
    pub default: A::Elem,
}

impl<A: PreHeyting> ValuedStructure<A> {
    /// Every predicate constant at `value`.
    pub fn constant(algebra: A, signature: Signature, value: A::Elem) -> Self {
        ValuedStructure {
            algebra,
            signature,
            preds: BTreeMap::new(),
            default: value,
        }
    }

    pub fn set(&mut self, pred: &str, args: Vec<Term>, value: A::Elem) {
        self.preds.insert((Name::from(pred), args), value);
    }

    pub fn pred_value(&self, pred: &Name, args: &[Term]) -> A::Elem {
        self.preds
            .get(&(pred.clone(), args.to_vec()))
            .unwrap_or(&self.default)
            .clone()
    }

    /// True when every predicate maps every argument tuple to `value`.
    pub fn is_constant_at(&self, value: &A::Elem) -> bool {
        self.default == *value && self.preds.values().all(|v| v == value)
    }
}

/// `⟦p⟧_env`, with `∀` ranging over `universe`.
pub fn interpret<A: PreHeyting>(
    vs: &ValuedStructure<A>,
    p: &Prop,
    env: &Env,
    universe: &[Term],
) -> Result<A::Elem, SemanticsError> {
    if universe.is_empty() {
        return Err(SemanticsError::EmptyUniverse);
    }
    eval(vs, p, env, universe)
}

fn eval<A: PreHeyting>(
    vs: &ValuedStructure<A>,
    p: &Prop,
    env: &Env,
    universe: &[Term],
) -> Result<A::Elem, SemanticsError> {
    match p {
        Prop::Atom(pred, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for t in args {
                if let Some(x) = t.free_vars().into_iter().find(|x| !env.contains_key(x)) {
                    return Err(SemanticsError::Unbound(x.to_string()));
                }
                vals.push(t.subst_env(env));
            }
            Ok(vs.pred_value(pred, &vals))
        }
        Prop::Imp(a, b) => {
            let va = eval(vs, a, env, universe)?;
            let vb = eval(vs, b, env, universe)?;
            Ok(vs.algebra.imp(&va, &vb))
        }
        Prop::Forall(x, body) => {
            let mut family = Vec::with_capacity(universe.len());
            let mut inner = env.clone();
            for e in universe {
                inner.insert(x.clone(), e.clone());
                family.push(eval(vs, body, &inner, universe)?);
            }
            vs.algebra
                .glb(&family)
                .ok_or_else(|| SemanticsError::NotAdmissible(p.to_string()))
        }
    }
}

/// `⟦(t/x)p⟧_env = ⟦p⟧_{env + ⟨x, ⟦t⟧_env⟩}`.
pub fn check_lsub<A: PreHeyting>(
    vs: &ValuedStructure<A>,
    p: &Prop,
    x: &str,
    t: &Term,
    env: &Env,
    universe: &[Term],
) -> Result<bool, SemanticsError> {
    let lhs = interpret(vs, &p.subst(x, t), env, universe)?;
    if let Some(y) = t.free_vars().into_iter().find(|y| !env.contains_key(y)) {
        return Err(SemanticsError::Unbound(y.to_string()));
    }
    let mut extended = env.clone();
    extended.insert(Name::from(x), t.subst_env(env));
    let rhs = interpret(vs, p, &extended, universe)?;
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelCounterexample {
    pub lhs: String,
    pub rhs: String,
    pub env: String,
    pub lhs_value: String,
    pub rhs_value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub verdict: Verdict,
    pub pairs: usize,
    pub congruent_pairs: usize,
    /// Pairs whose congruence could not be settled within fuel.
    pub unknown_pairs: Vec<(String, String)>,
    pub counterexample: Option<ModelCounterexample>,
    pub universe_size: usize,
}

pub fn format_env(env: &Env) -> String {
    env.iter()
        .map(|(x, t)| format!("{x}:={t}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Checks that congruent sampled propositions receive equal values under
/// every sampled environment.
pub fn is_model_inductive<A: PreHeyting>(
    vs: &ValuedStructure<A>,
    theory: &Theory,
    props: &[Prop],
    envs: &[Env],
    universe: &[Term],
    fuel: usize,
) -> Result<ModelReport, SemanticsError> {
    let mut report = ModelReport {
        verdict: Verdict::Pass,
        pairs: 0,
        congruent_pairs: 0,
        unknown_pairs: Vec::new(),
        counterexample: None,
        universe_size: universe.len(),
    };
    for (i, a) in props.iter().enumerate() {
        for b in &props[i + 1..] {
            report.pairs += 1;
            match congruent(theory, a, b, fuel) {
                CongruenceVerdict::Yes { .. } => report.congruent_pairs += 1,
                CongruenceVerdict::No => continue,
                CongruenceVerdict::Unknown { .. } => {
                    report.unknown_pairs.push((a.to_string(), b.to_string()));
                    continue;
                }
            }
            for env in envs {
                let va = interpret(vs, a, env, universe)?;
                let vb = interpret(vs, b, env, universe)?;
                if va != vb {
                    report.verdict = Verdict::Fail;
                    report.counterexample = Some(ModelCounterexample {
                        lhs: a.to_string(),
                        rhs: b.to_string(),
                        env: format_env(env),
                        lhs_value: vs.algebra.format_elem(&va),
                        rhs_value: vs.algebra.format_elem(&vb),
                    });
                    return Ok(report);
                }
            }
        }
    }
    if report.congruent_pairs == 0 && !report.unknown_pairs.is_empty() {
        report.verdict = Verdict::Unknown;
    }
    Ok(report)
}
