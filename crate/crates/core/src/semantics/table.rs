//! Interpretations given as explicit tables from (proposition, environment)
//! pairs to algebra elements.
//!
//! Text format, one entry per line, `#` starts a comment:
//!
//! ```text
//! P(x) => P(x) | x:=c | 3
//! default 0
//! ```

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{format_env, interpret, PreHeyting, SemanticsError, ValuedStructure};
use crate::rewriting::{congruent, CongruenceVerdict, Theory};
use crate::syntax::{parse_env, parse_prop, Env, Prop, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct TableError {
    pub line: usize,
    pub msg: String,
}

/// Keys are α-canonical propositions with the environment restricted to
/// their free variables.
#[derive(Clone, Debug)]
pub struct InterpretationTable<E> {
    entries: BTreeMap<(Prop, Env), E>,
    pub default: Option<E>,
}

impl<E> Default for InterpretationTable<E> {
    fn default() -> Self {
        InterpretationTable {
            entries: BTreeMap::new(),
            default: None,
        }
    }
}

fn key(p: &Prop, env: &Env) -> (Prop, Env) {
    let fv = p.free_term_vars();
    let env = env
        .iter()
        .filter(|(x, _)| fv.contains(*x))
        .map(|(x, t)| (x.clone(), t.clone()))
        .collect();
    (p.canonical(), env)
}

impl<E: Clone> InterpretationTable<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: &Prop, env: &Env, value: E) {
        self.entries.insert(key(p, env), value);
    }

    /// Explicit entry only.
    pub fn entry(&self, p: &Prop, env: &Env) -> Option<&E> {
        self.entries.get(&key(p, env))
    }

    /// Explicit entry, else the default.
    pub fn get(&self, p: &Prop, env: &Env) -> Option<&E> {
        self.entry(p, env).or(self.default.as_ref())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Prop, &Env, &E)> {
        self.entries.iter().map(|((p, env), e)| (p, env, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn parse_table<A: PreHeyting>(
    text: &str,
    alg: &A,
    sig: &Signature,
) -> Result<InterpretationTable<A::Elem>, TableError> {
    let mut tab = InterpretationTable::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| TableError { line, msg };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(id) = body.strip_prefix("default ") {
            let e = alg
                .parse_elem(id)
                .ok_or_else(|| err(format!("unknown element `{}`", id.trim())))?;
            tab.default = Some(e);
            continue;
        }
        let fields: Vec<&str> = body.split('|').collect();
        let [p, env, id] = fields[..] else {
            return Err(err("expected `<prop> | <env> | <element>`".into()));
        };
        let p = parse_prop(p.trim(), Some(sig)).map_err(|e| err(format!("proposition: {e}")))?;
        let env = parse_env(env.trim(), Some(sig)).map_err(|e| err(format!("environment: {e}")))?;
        let e = alg
            .parse_elem(id)
            .ok_or_else(|| err(format!("unknown element `{}`", id.trim())))?;
        tab.insert(&p, &env, e);
    }
    Ok(tab)
}

fn closure_pairs(p: &Prop, env: &Env, universe: &[Term], out: &mut BTreeSet<(Prop, Env)>) {
    if !out.insert(key(p, env)) {
        return;
    }
    match p {
        Prop::Atom(..) => {}
        Prop::Imp(a, b) => {
            closure_pairs(a, env, universe, out);
            closure_pairs(b, env, universe, out);
        }
        Prop::Forall(x, body) => {
            let mut inner = env.clone();
            for t in universe {
                inner.insert(x.clone(), t.clone());
                closure_pairs(body, &inner, universe, out);
            }
        }
    }
}

/// Tabulates `interpret` on the given pairs, closed under sub-propositions
/// and under substitution instances by universe terms.
pub fn table_from_interpret<A: PreHeyting>(
    vs: &ValuedStructure<A>,
    props: &[Prop],
    envs: &[Env],
    universe: &[Term],
) -> Result<InterpretationTable<A::Elem>, SemanticsError> {
    let mut pairs = BTreeSet::new();
    for p in props {
        for env in envs {
            closure_pairs(p, env, universe, &mut pairs);
        }
    }
    let base: Vec<_> = pairs.iter().cloned().collect();
    for (p, env) in base {
        for x in p.free_term_vars() {
            for t in universe {
                closure_pairs(&p.subst(&x, t), &env, universe, &mut pairs);
            }
        }
    }
    let mut tab = InterpretationTable::new();
    for (p, env) in pairs {
        let v = interpret(vs, &p, &env, universe)?;
        tab.insert(&p, &env, v);
    }
    Ok(tab)
}

/// One model condition: instances checked, instances skipped for lack of
/// table entries, and the first few failures.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClauseReport {
    pub checked: usize,
    pub skipped: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

const MAX_LISTED: usize = 10;

impl ClauseReport {
    pub fn passes(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(why());
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Model2Report {
    pub connectives: ClauseReport,
    pub substitution: ClauseReport,
    pub congruence: ClauseReport,
    /// Congruence questions left open by the fuel bound.
    pub unknown_pairs: usize,
    pub universe_size: usize,
}

impl Model2Report {
    pub fn passes(&self) -> bool {
        self.connectives.passes() && self.substitution.passes() && self.congruence.passes()
    }
}

/// Checks the three model conditions on the explicit entries of `tab`.
pub fn check_model2<A: PreHeyting>(
    tab: &InterpretationTable<A::Elem>,
    alg: &A,
    theory: &Theory,
    universe: &[Term],
    fuel: usize,
) -> Model2Report {
    let mut report = Model2Report {
        universe_size: universe.len(),
        ..Default::default()
    };
    let show = |e: &A::Elem| alg.format_elem(e);
    for (p, env, v) in tab.entries() {
        match p {
            Prop::Atom(..) => {}
            Prop::Imp(a, b) => match (tab.entry(a, env), tab.entry(b, env)) {
                (Some(va), Some(vb)) => {
                    let want = alg.imp(va, vb);
                    report.connectives.record(want == *v, || {
                        format!(
                            "[{p}]_{{{}}} = {} but [{a}] => [{b}] = {}",
                            format_env(env),
                            show(v),
                            show(&want)
                        )
                    });
                }
                _ => report.connectives.skipped += 1,
            },
            Prop::Forall(x, body) => {
                let mut family = Vec::with_capacity(universe.len());
                let mut inner = env.clone();
                for t in universe {
                    inner.insert(x.clone(), t.clone());
                    match tab.entry(body, &inner) {
                        Some(e) => family.push(e.clone()),
                        None => break,
                    }
                }
                if family.len() < universe.len() {
                    report.connectives.skipped += 1;
                    continue;
                }
                let want = alg.glb(&family);
                report.connectives.record(want.as_ref() == Some(v), || {
                    format!(
                        "[{p}]_{{{}}} = {} but the glb over the universe is {}",
                        format_env(env),
                        show(v),
                        want.as_ref().map_or_else(|| "undefined".to_string(), show)
                    )
                });
            }
        }
        for x in p.free_term_vars() {
            for t in universe {
                let inst = p.subst(&x, t);
                let mut ext = env.clone();
                ext.insert(x.clone(), t.clone());
                match (tab.entry(&inst, env), tab.entry(p, &ext)) {
                    (Some(l), Some(r)) => report.substitution.record(l == r, || {
                        format!(
                            "[{inst}]_{{{}}} = {} but [{p}]_{{{}}} = {}",
                            format_env(env),
                            show(l),
                            format_env(&ext),
                            show(r)
                        )
                    }),
                    _ => report.substitution.skipped += 1,
                }
            }
        }
    }
    let props: Vec<&Prop> = tab
        .entries()
        .map(|(p, _, _)| p)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let envs: BTreeSet<&Env> = tab.entries().map(|(_, e, _)| e).collect();
    for (i, a) in props.iter().enumerate() {
        for b in &props[i + 1..] {
            match congruent(theory, a, b, fuel) {
                CongruenceVerdict::Yes { .. } => {}
                CongruenceVerdict::No => continue,
                CongruenceVerdict::Unknown { .. } => {
                    report.unknown_pairs += 1;
                    continue;
                }
            }
            for env in &envs {
                if let (Some(va), Some(vb)) = (tab.entry(a, env), tab.entry(b, env)) {
                    report.congruence.record(va == vb, || {
                        format!("[{a}] = {} but congruent [{b}] = {} at {{{}}}", show(va), show(vb), format_env(env))
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::parse_theory;
    use crate::semantics::powerset_algebra;

    fn theory() -> Theory {
        parse_theory("pred A/0, Q/1.\nfun c/0, d/0.\nrule A --> A => A.\n").unwrap()
    }

    fn universe() -> Vec<Term> {
        vec![Term::constant("c"), Term::constant("d")]
    }

    #[test]
    fn tables_from_interpret_are_models() {
        let t = theory();
        let alg = powerset_algebra(2).unwrap();
        let mut vs = ValuedStructure::constant(alg, t.signature.clone(), alg.top());
        vs.set("Q", vec![Term::constant("c")], 1);
        let props: Vec<Prop> = ["A", "A => A", "!x. Q(x)", "Q(y) => A"]
            .iter()
            .map(|s| parse_prop(s, Some(&t.signature)).unwrap())
            .collect();
        let mut env = Env::new();
        env.insert("y".into(), Term::constant("d"));
        let tab = table_from_interpret(&vs, &props, &[env], &universe()).unwrap();
        let r = check_model2(&tab, &alg, &t, &universe(), 100);
        assert!(r.passes(), "{r:?}");
        assert!(r.connectives.checked >= 3);
        assert!(r.substitution.checked >= 2);
        assert!(r.congruence.checked >= 1);
    }

    #[test]
    fn arbitrary_implication_is_caught() {
        let t = theory();
        let alg = powerset_algebra(2).unwrap();
        let tab = parse_table("A | | 3\nQ(c) | | 1\nQ(c) => A | | 0\n", &alg, &t.signature).unwrap();
        let r = check_model2(&tab, &alg, &t, &universe(), 100);
        assert_eq!(r.connectives.failed, 1);
        assert!(r.connectives.failures[0].contains("Q(c) => A"));
        assert!(r.substitution.passes());
    }

    #[test]
    fn parse_errors_have_lines() {
        let t = theory();
        let alg = powerset_algebra(2).unwrap();
        let e = parse_table("A | | 3\n# c\nA | 7\n", &alg, &t.signature).unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_table("A | | 9\n", &alg, &t.signature).unwrap_err();
        assert!(e.msg.contains("unknown element"));
        let tab = parse_table("default top\n", &alg, &t.signature).unwrap();
        assert_eq!(tab.get(&parse_prop("A", Some(&t.signature)).unwrap(), &Env::new()), Some(&3));
    }
}
