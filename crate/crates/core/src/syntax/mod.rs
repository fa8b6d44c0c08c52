//! Terms, propositions and proof-terms, with binding, α-equivalence and the
//! four substitution operations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

mod parse;
mod print;

pub use parse::{
    parse_context, parse_env, parse_proof, parse_prop, parse_term, ParseError, Parser,
};

/// Identifier shared by term variables, proof variables and symbols.
pub type Name = Arc<str>;

/// Environment: a finite map from term variables to terms.
pub type Env = BTreeMap<Name, Term>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Curry,
    Church,
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Curry => "curry",
            Style::Church => "church",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("signature declares no predicate symbol")]
    NoPredicates,
    #[error("symbol `{0}` declared twice")]
    Duplicate(String),
    #[error("term substitution needs a Church-style proof-term")]
    CurryInput,
}

/// Mono-sorted first-order signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    functions: Vec<(Name, usize)>,
    predicates: Vec<(Name, usize)>,
}

impl Signature {
    pub fn new(
        functions: Vec<(Name, usize)>,
        predicates: Vec<(Name, usize)>,
    ) -> Result<Self, SyntaxError> {
        if predicates.is_empty() {
            return Err(SyntaxError::NoPredicates);
        }
        for list in [&functions, &predicates] {
            let mut seen = BTreeSet::new();
            for (n, _) in list {
                if !seen.insert(n.clone()) {
                    return Err(SyntaxError::Duplicate(n.to_string()));
                }
            }
        }
        Ok(Signature {
            functions,
            predicates,
        })
    }

    pub fn functions(&self) -> &[(Name, usize)] {
        &self.functions
    }

    pub fn predicates(&self) -> &[(Name, usize)] {
        &self.predicates
    }

    pub fn fun_arity(&self, f: &str) -> Option<usize> {
        self.functions
            .iter()
            .find(|(n, _)| &**n == f)
            .map(|(_, a)| *a)
    }

    pub fn pred_arity(&self, p: &str) -> Option<usize> {
        self.predicates
            .iter()
            .find(|(n, _)| &**n == p)
            .map(|(_, a)| *a)
    }

    pub fn constants(&self) -> impl Iterator<Item = &Name> {
        self.functions
            .iter()
            .filter(|(_, a)| *a == 0)
            .map(|(n, _)| n)
    }
}

/// First-order term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Name),
    App(Name, Vec<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(name(x))
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(name(f), args)
    }

    pub fn constant(c: &str) -> Term {
        Term::App(name(c), Vec::new())
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn occurs(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => &**y == x,
            Term::App(_, args) => args.iter().any(|a| a.occurs(x)),
        }
    }

    pub fn subst(&self, x: &str, t: &Term) -> Term {
        match self {
            Term::Var(y) if &**y == x => t.clone(),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.subst(x, t)).collect())
            }
        }
    }

    /// Simultaneous substitution; unmapped variables stay put.
    pub fn subst_env(&self, env: &Env) -> Term {
        match self {
            Term::Var(y) => env.get(y).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.subst_env(env)).collect())
            }
        }
    }

    fn rename(&self, map: &[(Name, Name)]) -> Term {
        match self {
            Term::Var(y) => match map.iter().rev().find(|(a, _)| a == y) {
                Some((_, b)) => Term::Var(b.clone()),
                None => self.clone(),
            },
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.rename(map)).collect()),
        }
    }

    fn eq_under(&self, other: &Term, env: &[(Name, Name)]) -> bool {
        match (self, other) {
            (Term::Var(x), Term::Var(y)) => var_eq(x, y, env),
            (Term::App(f, a), Term::App(g, b)) => {
                f == g && a.len() == b.len() && a.iter().zip(b).all(|(s, t)| s.eq_under(t, env))
            }
            _ => false,
        }
    }

    pub fn check_arity(&self, sig: &Signature) -> Result<(), String> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                match sig.fun_arity(f) {
                    Some(n) if n == args.len() => {}
                    Some(n) => {
                        return Err(format!(
                            "function `{f}` expects {n} argument(s), got {}",
                            args.len()
                        ))
                    }
                    None => return Err(format!("undeclared function `{f}`")),
                }
                args.iter().try_for_each(|a| a.check_arity(sig))
            }
        }
    }
}

/// Compares two variables under paired binder stacks.
fn var_eq(x: &Name, y: &Name, env: &[(Name, Name)]) -> bool {
    let px = env.iter().rposition(|(a, _)| a == x);
    let py = env.iter().rposition(|(_, b)| b == y);
    match (px, py) {
        (None, None) => x == y,
        (Some(i), Some(j)) => i == j,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Head<'a> {
    Atom(&'a str),
    Imp,
    Forall,
}

/// Proposition built from atoms, `=>` and `!x.`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop {
    Atom(Name, Vec<Term>),
    Imp(Box<Prop>, Box<Prop>),
    Forall(Name, Box<Prop>),
}

impl Prop {
    pub fn atom(p: &str, args: Vec<Term>) -> Prop {
        Prop::Atom(name(p), args)
    }

    pub fn imp(a: Prop, b: Prop) -> Prop {
        Prop::Imp(Box::new(a), Box::new(b))
    }

    pub fn forall(x: &str, a: Prop) -> Prop {
        Prop::Forall(name(x), Box::new(a))
    }

    pub fn head(&self) -> Head<'_> {
        match self {
            Prop::Atom(p, _) => Head::Atom(p),
            Prop::Imp(..) => Head::Imp,
            Prop::Forall(..) => Head::Forall,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Prop::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Prop::Imp(a, b) => 1 + a.size() + b.size(),
            Prop::Forall(_, a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Prop::Atom(..) => 1,
            Prop::Imp(a, b) => 1 + a.depth().max(b.depth()),
            Prop::Forall(_, a) => 1 + a.depth(),
        }
    }

    pub fn free_term_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Prop::Atom(_, args) => {
                for a in args {
                    for v in a.free_vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Prop::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Prop::Forall(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Prop::Atom(_, args) => args.iter().any(|a| a.occurs(x)),
            Prop::Imp(a, b) => a.has_free(x) || b.has_free(x),
            Prop::Forall(y, a) => &**y != x && a.has_free(x),
        }
    }

    /// Every term-variable name occurring anywhere, bound or free.
    pub fn collect_all_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Prop::Atom(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Prop::Imp(a, b) => {
                a.collect_all_vars(out);
                b.collect_all_vars(out);
            }
            Prop::Forall(x, a) => {
                out.insert(x.clone());
                a.collect_all_vars(out);
            }
        }
    }

    /// Capture-avoiding `(t/x)A`.
    pub fn subst(&self, x: &str, t: &Term) -> Prop {
        let mut env = Env::new();
        env.insert(name(x), t.clone());
        self.subst_env(&env)
    }

    /// Capture-avoiding simultaneous substitution.
    pub fn subst_env(&self, env: &Env) -> Prop {
        if env.is_empty() {
            return self.clone();
        }
        match self {
            Prop::Atom(p, args) => Prop::Atom(p.clone(), args.iter().map(|a| a.subst_env(env)).collect()),
            Prop::Imp(a, b) => Prop::imp(a.subst_env(env), b.subst_env(env)),
            Prop::Forall(y, body) => {
                let mut inner = env.clone();
                inner.remove(y);
                inner.retain(|k, _| body.has_free(k));
                if inner.is_empty() {
                    return self.clone();
                }
                let captures = inner.values().any(|t| t.occurs(y));
                if captures {
                    let mut avoid = BTreeSet::new();
                    body.collect_all_vars(&mut avoid);
                    for (k, t) in &inner {
                        avoid.insert(k.clone());
                        t.collect_vars(&mut avoid);
                    }
                    let z = fresh_name(y, |n| avoid.contains(n));
                    let renamed = body.subst(y, &Term::Var(z.clone()));
                    Prop::Forall(z, Box::new(renamed.subst_env(&inner)))
                } else {
                    Prop::Forall(y.clone(), Box::new(body.subst_env(&inner)))
                }
            }
        }
    }

    pub fn alpha_eq(&self, other: &Prop) -> bool {
        self.eq_under(other, &mut Vec::new())
    }

    fn eq_under(&self, other: &Prop, env: &mut Vec<(Name, Name)>) -> bool {
        match (self, other) {
            (Prop::Atom(p, a), Prop::Atom(q, b)) => {
                p == q && a.len() == b.len() && a.iter().zip(b).all(|(s, t)| s.eq_under(t, env))
            }
            (Prop::Imp(a1, b1), Prop::Imp(a2, b2)) => a1.eq_under(a2, env) && b1.eq_under(b2, env),
            (Prop::Forall(x, a), Prop::Forall(y, b)) => {
                env.push((x.clone(), y.clone()));
                let r = a.eq_under(b, env);
                env.pop();
                r
            }
            _ => false,
        }
    }

    /// Representative of the α-class: binders renamed by nesting depth.
    pub fn canonical(&self) -> Prop {
        let free = self.free_term_vars();
        let names = BinderNames::new("x", &free);
        self.canon(&names, &mut Vec::new())
    }

    fn canon(&self, names: &BinderNames, env: &mut Vec<(Name, Name)>) -> Prop {
        match self {
            Prop::Atom(p, args) => Prop::Atom(p.clone(), args.iter().map(|a| a.rename(env)).collect()),
            Prop::Imp(a, b) => Prop::imp(a.canon(names, env), b.canon(names, env)),
            Prop::Forall(x, a) => {
                let z = names.get(env.len());
                env.push((x.clone(), z.clone()));
                let body = a.canon(names, env);
                env.pop();
                Prop::Forall(z, Box::new(body))
            }
        }
    }

    pub fn check_arity(&self, sig: &Signature) -> Result<(), String> {
        match self {
            Prop::Atom(p, args) => {
                match sig.pred_arity(p) {
                    Some(n) if n == args.len() => {}
                    Some(n) => {
                        return Err(format!(
                            "predicate `{p}` expects {n} argument(s), got {}",
                            args.len()
                        ))
                    }
                    None => return Err(format!("undeclared predicate `{p}`")),
                }
                args.iter().try_for_each(|a| a.check_arity(sig))
            }
            Prop::Imp(a, b) => {
                a.check_arity(sig)?;
                b.check_arity(sig)
            }
            Prop::Forall(_, a) => a.check_arity(sig),
        }
    }
}

/// Depth-indexed binder names that avoid a set of free names.
struct BinderNames {
    names: Vec<Name>,
}

impl BinderNames {
    fn new(prefix: &str, free: &BTreeSet<Name>) -> Self {
        let mut names = Vec::new();
        let mut i = 0usize;
        while names.len() < 64 {
            let n = format!("{prefix}{i}");
            if !free.contains(n.as_str()) {
                names.push(name(&n));
            }
            i += 1;
        }
        BinderNames { names }
    }

    fn get(&self, depth: usize) -> Name {
        self.names
            .get(depth)
            .cloned()
            .unwrap_or_else(|| panic!("binder nesting deeper than {}", self.names.len()))
    }
}

/// Deterministic fresh name: `base` with its numeric suffix replaced by the
/// first counter value not rejected by `taken`.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() { "v" } else { stem };
    (1usize..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !taken(n))
        .map(|n| name(&n))
        .expect("unbounded counter")
}

/// One step of a position inside a proof-term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    LamBody,
    AppFun,
    AppArg,
    TLamBody,
    TAppFun,
}

pub type Path = Vec<Step>;

/// Proof-term; Curry-style terms contain no `TLam`/`TApp` node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Proof {
    Var(Name),
    Lam(Name, Box<Proof>),
    App(Box<Proof>, Box<Proof>),
    TLam(Name, Box<Proof>),
    TApp(Box<Proof>, Term),
}

/// Capturing substitution `[μₙ/αₙ]…[μ₁/α₁]`, stored as `[(α₁, μ₁), …, (αₙ, μₙ)]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CaptureSubst(pub Vec<(Name, Proof)>);

impl CaptureSubst {
    /// Applies the pairs in list order, first pair innermost.
    pub fn apply(&self, nu: &Proof) -> Proof {
        self.0
            .iter()
            .fold(nu.clone(), |acc, (a, mu)| acc.replace_capturing(a, mu))
    }
}

pub fn apply_capture_subst(s: &CaptureSubst, nu: &Proof) -> Proof {
    s.apply(nu)
}

/// `(t/x)p` on a proof-term declared Church-style.
pub fn subst_term_in_proof(p: &Proof, style: Style, x: &str, t: &Term) -> Result<Proof, SyntaxError> {
    match style {
        Style::Curry => Err(SyntaxError::CurryInput),
        Style::Church => Ok(p.subst_term(x, t)),
    }
}

impl Proof {
    pub fn var(a: &str) -> Proof {
        Proof::Var(name(a))
    }

    pub fn lam(a: &str, body: Proof) -> Proof {
        Proof::Lam(name(a), Box::new(body))
    }

    pub fn app(f: Proof, a: Proof) -> Proof {
        Proof::App(Box::new(f), Box::new(a))
    }

    pub fn tlam(x: &str, body: Proof) -> Proof {
        Proof::TLam(name(x), Box::new(body))
    }

    pub fn tapp(p: Proof, t: Term) -> Proof {
        Proof::TApp(Box::new(p), t)
    }

    pub fn is_curry(&self) -> bool {
        match self {
            Proof::Var(_) => true,
            Proof::Lam(_, b) => b.is_curry(),
            Proof::App(f, a) => f.is_curry() && a.is_curry(),
            Proof::TLam(..) | Proof::TApp(..) => false,
        }
    }

    /// Not a λ-abstraction of either kind.
    pub fn is_neutral(&self) -> bool {
        !matches!(self, Proof::Lam(..) | Proof::TLam(..))
    }

    pub fn size(&self) -> usize {
        match self {
            Proof::Var(_) => 1,
            Proof::Lam(_, b) | Proof::TLam(_, b) => 1 + b.size(),
            Proof::App(f, a) => 1 + f.size() + a.size(),
            Proof::TApp(p, t) => 1 + p.size() + t.size(),
        }
    }

    pub fn free_proof_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free_proof(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_proof(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Proof::Var(a) => {
                if !bound.contains(a) {
                    out.insert(a.clone());
                }
            }
            Proof::Lam(a, b) => {
                bound.push(a.clone());
                b.collect_free_proof(bound, out);
                bound.pop();
            }
            Proof::App(f, a) => {
                f.collect_free_proof(bound, out);
                a.collect_free_proof(bound, out);
            }
            Proof::TLam(_, b) => b.collect_free_proof(bound, out),
            Proof::TApp(p, _) => p.collect_free_proof(bound, out),
        }
    }

    pub fn has_free_proof_var(&self, a: &str) -> bool {
        match self {
            Proof::Var(b) => &**b == a,
            Proof::Lam(b, body) => &**b != a && body.has_free_proof_var(a),
            Proof::App(f, x) => f.has_free_proof_var(a) || x.has_free_proof_var(a),
            Proof::TLam(_, body) => body.has_free_proof_var(a),
            Proof::TApp(p, _) => p.has_free_proof_var(a),
        }
    }

    pub fn free_term_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free_term(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_term(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Proof::Var(_) => {}
            Proof::Lam(_, b) => b.collect_free_term(bound, out),
            Proof::App(f, a) => {
                f.collect_free_term(bound, out);
                a.collect_free_term(bound, out);
            }
            Proof::TLam(x, b) => {
                bound.push(x.clone());
                b.collect_free_term(bound, out);
                bound.pop();
            }
            Proof::TApp(p, t) => {
                p.collect_free_term(bound, out);
                for v in t.free_vars() {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
        }
    }

    fn has_free_term_var(&self, x: &str) -> bool {
        match self {
            Proof::Var(_) => false,
            Proof::Lam(_, b) => b.has_free_term_var(x),
            Proof::App(f, a) => f.has_free_term_var(x) || a.has_free_term_var(x),
            Proof::TLam(y, b) => &**y != x && b.has_free_term_var(x),
            Proof::TApp(p, t) => p.has_free_term_var(x) || t.occurs(x),
        }
    }

    /// Every name used anywhere: proof binders, proof variables, term variables.
    pub fn collect_all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Proof::Var(a) => {
                out.insert(a.clone());
            }
            Proof::Lam(a, b) | Proof::TLam(a, b) => {
                out.insert(a.clone());
                b.collect_all_names(out);
            }
            Proof::App(f, a) => {
                f.collect_all_names(out);
                a.collect_all_names(out);
            }
            Proof::TApp(p, t) => {
                p.collect_all_names(out);
                t.collect_vars(out);
            }
        }
    }

    /// Capture-avoiding `(arg/a)self`.
    pub fn subst_proof(&self, a: &str, arg: &Proof) -> Proof {
        if !self.has_free_proof_var(a) {
            return self.clone();
        }
        match self {
            Proof::Var(b) if &**b == a => arg.clone(),
            Proof::Var(_) => self.clone(),
            Proof::Lam(b, body) => {
                if arg.has_free_proof_var(b) {
                    let mut avoid = BTreeSet::new();
                    body.collect_all_names(&mut avoid);
                    arg.collect_all_names(&mut avoid);
                    avoid.insert(name(a));
                    let b2 = fresh_name(b, |n| avoid.contains(n));
                    let body2 = body.subst_proof(b, &Proof::Var(b2.clone()));
                    Proof::Lam(b2, Box::new(body2.subst_proof(a, arg)))
                } else {
                    Proof::Lam(b.clone(), Box::new(body.subst_proof(a, arg)))
                }
            }
            Proof::App(f, x) => Proof::app(f.subst_proof(a, arg), x.subst_proof(a, arg)),
            Proof::TLam(x, body) => {
                if arg.has_free_term_var(x) {
                    let mut avoid = BTreeSet::new();
                    body.collect_all_names(&mut avoid);
                    arg.collect_all_names(&mut avoid);
                    let x2 = fresh_name(x, |n| avoid.contains(n));
                    let body2 = body.subst_term(x, &Term::Var(x2.clone()));
                    Proof::TLam(x2, Box::new(body2.subst_proof(a, arg)))
                } else {
                    Proof::TLam(x.clone(), Box::new(body.subst_proof(a, arg)))
                }
            }
            Proof::TApp(p, t) => Proof::tapp(p.subst_proof(a, arg), t.clone()),
        }
    }

    /// Capture-avoiding `(t/x)self`; the identity on Curry terms.
    pub fn subst_term(&self, x: &str, t: &Term) -> Proof {
        if !self.has_free_term_var(x) {
            return self.clone();
        }
        match self {
            Proof::Var(_) => self.clone(),
            Proof::Lam(a, b) => Proof::Lam(a.clone(), Box::new(b.subst_term(x, t))),
            Proof::App(f, a) => Proof::app(f.subst_term(x, t), a.subst_term(x, t)),
            Proof::TLam(y, body) => {
                if t.occurs(y) {
                    let mut avoid = BTreeSet::new();
                    body.collect_all_names(&mut avoid);
                    t.collect_vars(&mut avoid);
                    avoid.insert(name(x));
                    let y2 = fresh_name(y, |n| avoid.contains(n));
                    let body2 = body.subst_term(y, &Term::Var(y2.clone()));
                    Proof::TLam(y2, Box::new(body2.subst_term(x, t)))
                } else {
                    Proof::TLam(y.clone(), Box::new(body.subst_term(x, t)))
                }
            }
            Proof::TApp(p, s) => Proof::tapp(p.subst_term(x, t), s.subst(x, t)),
        }
    }

    /// Replaces free occurrences of `a` by `mu` without renaming binders.
    pub fn replace_capturing(&self, a: &str, mu: &Proof) -> Proof {
        match self {
            Proof::Var(b) if &**b == a => mu.clone(),
            Proof::Var(_) => self.clone(),
            Proof::Lam(b, _) if &**b == a => self.clone(),
            Proof::Lam(b, body) => Proof::Lam(b.clone(), Box::new(body.replace_capturing(a, mu))),
            Proof::App(f, x) => Proof::app(f.replace_capturing(a, mu), x.replace_capturing(a, mu)),
            Proof::TLam(x, body) => Proof::TLam(x.clone(), Box::new(body.replace_capturing(a, mu))),
            Proof::TApp(p, t) => Proof::tapp(p.replace_capturing(a, mu), t.clone()),
        }
    }

    /// Drops every term abstraction and term application.
    pub fn erase(&self) -> Proof {
        match self {
            Proof::Var(_) => self.clone(),
            Proof::Lam(a, b) => Proof::Lam(a.clone(), Box::new(b.erase())),
            Proof::App(f, a) => Proof::app(f.erase(), a.erase()),
            Proof::TLam(_, b) => b.erase(),
            Proof::TApp(p, _) => p.erase(),
        }
    }

    pub fn alpha_eq(&self, other: &Proof) -> bool {
        self.eq_under(other, &mut Vec::new(), &mut Vec::new())
    }

    fn eq_under(
        &self,
        other: &Proof,
        penv: &mut Vec<(Name, Name)>,
        tenv: &mut Vec<(Name, Name)>,
    ) -> bool {
        match (self, other) {
            (Proof::Var(a), Proof::Var(b)) => var_eq(a, b, penv),
            (Proof::Lam(a, p), Proof::Lam(b, q)) => {
                penv.push((a.clone(), b.clone()));
                let r = p.eq_under(q, penv, tenv);
                penv.pop();
                r
            }
            (Proof::App(f, a), Proof::App(g, b)) => {
                f.eq_under(g, penv, tenv) && a.eq_under(b, penv, tenv)
            }
            (Proof::TLam(x, p), Proof::TLam(y, q)) => {
                tenv.push((x.clone(), y.clone()));
                let r = p.eq_under(q, penv, tenv);
                tenv.pop();
                r
            }
            (Proof::TApp(p, s), Proof::TApp(q, t)) => p.eq_under(q, penv, tenv) && s.eq_under(t, tenv),
            _ => false,
        }
    }

    /// Representative of the α-class: binders renamed by nesting depth.
    pub fn canonical(&self) -> Proof {
        let pnames = BinderNames::new("p", &self.free_proof_vars());
        let tnames = BinderNames::new("x", &self.free_term_vars());
        self.canon(&pnames, &tnames, &mut Vec::new(), &mut Vec::new())
    }

    fn canon(
        &self,
        pn: &BinderNames,
        tn: &BinderNames,
        penv: &mut Vec<(Name, Name)>,
        tenv: &mut Vec<(Name, Name)>,
    ) -> Proof {
        match self {
            Proof::Var(a) => match penv.iter().rev().find(|(x, _)| x == a) {
                Some((_, b)) => Proof::Var(b.clone()),
                None => self.clone(),
            },
            Proof::Lam(a, body) => {
                let z = pn.get(penv.len());
                penv.push((a.clone(), z.clone()));
                let b = body.canon(pn, tn, penv, tenv);
                penv.pop();
                Proof::Lam(z, Box::new(b))
            }
            Proof::App(f, a) => Proof::app(f.canon(pn, tn, penv, tenv), a.canon(pn, tn, penv, tenv)),
            Proof::TLam(x, body) => {
                let z = tn.get(tenv.len());
                tenv.push((x.clone(), z.clone()));
                let b = body.canon(pn, tn, penv, tenv);
                tenv.pop();
                Proof::TLam(z, Box::new(b))
            }
            Proof::TApp(p, t) => Proof::tapp(p.canon(pn, tn, penv, tenv), t.rename(tenv)),
        }
    }

    pub fn at(&self, path: &[Step]) -> Option<&Proof> {
        let Some((step, rest)) = path.split_first() else {
            return Some(self);
        };
        match (step, self) {
            (Step::LamBody, Proof::Lam(_, b))
            | (Step::TLamBody, Proof::TLam(_, b))
            | (Step::AppFun, Proof::App(b, _))
            | (Step::AppArg, Proof::App(_, b))
            | (Step::TAppFun, Proof::TApp(b, _)) => b.at(rest),
            _ => None,
        }
    }

    pub fn replace_at(&self, path: &[Step], new: Proof) -> Option<Proof> {
        let Some((step, rest)) = path.split_first() else {
            return Some(new);
        };
        Some(match (step, self) {
            (Step::LamBody, Proof::Lam(a, b)) => Proof::Lam(a.clone(), Box::new(b.replace_at(rest, new)?)),
            (Step::TLamBody, Proof::TLam(x, b)) => Proof::TLam(x.clone(), Box::new(b.replace_at(rest, new)?)),
            (Step::AppFun, Proof::App(f, a)) => Proof::App(Box::new(f.replace_at(rest, new)?), a.clone()),
            (Step::AppArg, Proof::App(f, a)) => Proof::App(f.clone(), Box::new(a.replace_at(rest, new)?)),
            (Step::TAppFun, Proof::TApp(p, t)) => Proof::TApp(Box::new(p.replace_at(rest, new)?), t.clone()),
            _ => return None,
        })
    }

    pub fn is_redex(&self) -> bool {
        matches!(self, Proof::App(f, _) if matches!(**f, Proof::Lam(..)))
            || matches!(self, Proof::TApp(p, _) if matches!(**p, Proof::TLam(..)))
    }

    /// All subterm positions in pre-order (leftmost-outermost first).
    pub fn positions(&self) -> Vec<Path> {
        let mut out = Vec::new();
        self.collect_positions(&mut Vec::new(), &mut out);
        out
    }

    fn collect_positions(&self, cur: &mut Path, out: &mut Vec<Path>) {
        out.push(cur.clone());
        let mut go = |step: Step, p: &Proof, cur: &mut Path| {
            cur.push(step);
            p.collect_positions(cur, out);
            cur.pop();
        };
        match self {
            Proof::Var(_) => {}
            Proof::Lam(_, b) => go(Step::LamBody, b, cur),
            Proof::TLam(_, b) => go(Step::TLamBody, b, cur),
            Proof::App(f, a) => {
                go(Step::AppFun, f, cur);
                go(Step::AppArg, a, cur);
            }
            Proof::TApp(p, _) => go(Step::TAppFun, p, cur),
        }
    }

    /// Positions of redexes, leftmost-outermost first.
    pub fn redex_paths(&self) -> Vec<Path> {
        self.positions()
            .into_iter()
            .filter(|p| self.at(p).is_some_and(Proof::is_redex))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(t: Term) -> Prop {
        Prop::atom("Q", vec![t])
    }

    #[test]
    fn free_vars_respect_binders() {
        let x = Term::var("x");
        assert!(Prop::forall("x", q(x.clone())).free_term_vars().is_empty());
        let p = Prop::imp(q(x.clone()), Prop::forall("x", q(x.clone())));
        assert_eq!(p.free_term_vars(), [name("x")].into_iter().collect());
        let r = Prop::atom("R", vec![x, Term::var("y")]);
        assert_eq!(r.free_term_vars().len(), 2);
    }

    #[test]
    fn prop_substitution_avoids_capture() {
        let p = Prop::forall("y", Prop::atom("R", vec![Term::var("x"), Term::var("y")]));
        let s = p.subst("x", &Term::var("y"));
        let Prop::Forall(z, body) = &s else { panic!() };
        assert_ne!(&**z, "y");
        assert_eq!(**body, Prop::atom("R", vec![Term::var("y"), Term::Var(z.clone())]));
        let c = q(Term::var("x")).subst("x", &Term::constant("c"));
        assert_eq!(c, q(Term::constant("c")));
        assert!(p.subst("x", &Term::var("x")).alpha_eq(&p));
    }

    #[test]
    fn proof_substitution_examples() {
        let p = Proof::lam("b", Proof::var("a"));
        let s = p.subst_proof("a", &Proof::var("b"));
        let Proof::Lam(b2, body) = &s else { panic!() };
        assert_ne!(&**b2, "b");
        assert_eq!(**body, Proof::var("b"));
        let mu = Proof::app(Proof::var("m"), Proof::var("n"));
        assert_eq!(Proof::var("a").subst_proof("a", &mu), mu);
        let id = Proof::lam("a", Proof::var("a"));
        assert_eq!(id.subst_proof("a", &mu), id);
    }

    #[test]
    fn term_substitution_in_church_proofs() {
        let c = Term::constant("c");
        let p = Proof::tapp(Proof::var("a"), Term::var("x"));
        assert_eq!(p.subst_term("x", &c), Proof::tapp(Proof::var("a"), c.clone()));
        let t = Proof::tlam("x", Proof::var("a"));
        assert_eq!(t.subst_term("x", &c), t);
        assert_eq!(Proof::var("a").subst_term("x", &c), Proof::var("a"));
    }

    #[test]
    fn capture_substitution_examples() {
        let nu = Proof::lam("b", Proof::var("a"));
        let s = CaptureSubst(vec![(name("a"), Proof::var("b"))]);
        assert_eq!(s.apply(&nu), Proof::lam("b", Proof::var("b")));
        let m1 = Proof::var("m1");
        let m2 = Proof::lam("z", Proof::var("z"));
        let s2 = CaptureSubst(vec![(name("a1"), m1.clone()), (name("a2"), m2.clone())]);
        let nu2 = Proof::app(Proof::var("a1"), Proof::var("a2"));
        assert_eq!(s2.apply(&nu2), Proof::app(m1, m2));
        let vac = CaptureSubst(vec![(name("q"), Proof::var("w"))]);
        assert_eq!(vac.apply(&nu2), nu2);
    }

    #[test]
    fn capture_subst_order_matters() {
        let nu = Proof::var("a1");
        let s = CaptureSubst(vec![(name("a1"), Proof::var("a2")), (name("a2"), Proof::var("m"))]);
        assert_eq!(s.apply(&nu), Proof::var("m"));
        let r = CaptureSubst(vec![(name("a2"), Proof::var("m")), (name("a1"), Proof::var("a2"))]);
        assert_eq!(r.apply(&nu), Proof::var("a2"));
    }

    #[test]
    fn neutrality() {
        assert!(Proof::var("a").is_neutral());
        assert!(!Proof::lam("a", Proof::var("a")).is_neutral());
        assert!(Proof::app(Proof::lam("a", Proof::var("a")), Proof::var("b")).is_neutral());
        assert!(!Proof::tlam("x", Proof::var("a")).is_neutral());
    }

    #[test]
    fn alpha_equivalence() {
        let a = Prop::forall("x", q(Term::var("x")));
        let b = Prop::forall("y", q(Term::var("y")));
        assert!(a.alpha_eq(&b));
        assert!(!q(Term::var("x")).alpha_eq(&q(Term::var("y"))));
        assert!(Proof::lam("a", Proof::var("a")).alpha_eq(&Proof::lam("b", Proof::var("b"))));
        assert!(!Proof::lam("a", Proof::var("b")).alpha_eq(&Proof::lam("b", Proof::var("b"))));
        let shadow = Proof::lam("a", Proof::lam("a", Proof::var("a")));
        let plain = Proof::lam("a", Proof::lam("b", Proof::var("b")));
        assert!(shadow.alpha_eq(&plain));
        assert_eq!(shadow.canonical(), plain.canonical());
    }

    #[test]
    fn canonical_avoids_free_names() {
        let p = Proof::lam("a", Proof::app(Proof::var("a"), Proof::var("p0")));
        let c = p.canonical();
        assert!(c.alpha_eq(&p));
        assert_eq!(c.free_proof_vars(), p.free_proof_vars());
    }

    #[test]
    fn redex_positions() {
        let id = |v: &str| Proof::lam(v, Proof::var(v));
        let inner = Proof::app(id("b"), Proof::var("c"));
        let p = Proof::app(id("a"), inner);
        assert_eq!(p.redex_paths(), vec![vec![], vec![Step::AppArg]]);
        assert!(p.at(&[Step::AppArg]).unwrap().is_redex());
    }

    #[test]
    fn fresh_names_use_counter() {
        assert_eq!(&*fresh_name("y", |n| n == "y1"), "y2");
        assert_eq!(&*fresh_name("b3", |_| false), "b1");
    }

    #[test]
    fn signature_rejects_empty_predicates() {
        assert_eq!(Signature::new(vec![], vec![]), Err(SyntaxError::NoPredicates));
        let dup = Signature::new(vec![(name("f"), 1), (name("f"), 2)], vec![(name("P"), 0)]);
        assert!(matches!(dup, Err(SyntaxError::Duplicate(_))));
    }
}
