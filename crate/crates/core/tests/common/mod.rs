#![allow(dead_code)]

use mdm_core::syntax::{name, Proof, Prop, Signature, Term};
use proptest::prelude::*;

pub const TERM_VARS: [&str; 3] = ["x", "y", "z"];
pub const PROOF_VARS: [&str; 3] = ["a", "b", "h"];

pub fn signature() -> Signature {
    Signature::new(
        vec![(name("c"), 0), (name("d"), 0), (name("f"), 1), (name("g"), 2)],
        vec![(name("P"), 0), (name("Q"), 0), (name("R"), 1), (name("S"), 2)],
    )
    .unwrap()
}

pub fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(&TERM_VARS[..]).prop_map(Term::var),
        prop::sample::select(&["c", "d"][..]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("f", vec![t])),
            (inner.clone(), inner).prop_map(|(s, t)| Term::app("g", vec![s, t])),
        ]
    })
}

pub fn closed_term() -> impl Strategy<Value = Term> {
    prop::sample::select(vec![Term::constant("c"), Term::constant("d"), Term::app("f", vec![Term::constant("c")])])
}

pub fn prop_of(depth: u32) -> impl Strategy<Value = Prop> {
    let leaf = prop_oneof![
        Just(Prop::atom("P", vec![])),
        Just(Prop::atom("Q", vec![])),
        term().prop_map(|t| Prop::atom("R", vec![t])),
        (term(), term()).prop_map(|(s, t)| Prop::atom("S", vec![s, t])),
    ];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Prop::imp(a, b)),
            (prop::sample::select(&TERM_VARS[..]), inner).prop_map(|(x, a)| Prop::forall(x, a)),
        ]
    })
}

pub fn prop() -> impl Strategy<Value = Prop> {
    prop_of(4)
}

pub fn curry_proof() -> impl Strategy<Value = Proof> {
    let leaf = prop::sample::select(&PROOF_VARS[..]).prop_map(Proof::var);
    leaf.prop_recursive(4, 12, 2, |inner| {
        prop_oneof![
            (prop::sample::select(&PROOF_VARS[..]), inner.clone()).prop_map(|(a, b)| Proof::lam(a, b)),
            (inner.clone(), inner).prop_map(|(f, a)| Proof::app(f, a)),
        ]
    })
}

pub fn church_proof() -> impl Strategy<Value = Proof> {
    let leaf = prop::sample::select(&PROOF_VARS[..]).prop_map(Proof::var);
    leaf.prop_recursive(4, 12, 2, |inner| {
        prop_oneof![
            (prop::sample::select(&PROOF_VARS[..]), inner.clone()).prop_map(|(a, b)| Proof::lam(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Proof::app(f, a)),
            (prop::sample::select(&TERM_VARS[..]), inner.clone()).prop_map(|(x, b)| Proof::tlam(x, b)),
            (inner, term()).prop_map(|(p, t)| Proof::tapp(p, t)),
        ]
    })
}

/// Renames every binder of `p` to a name unused in `p`.
pub fn rename_binders(p: &Prop) -> Prop {
    fn go(p: &Prop, counter: &mut usize) -> Prop {
        match p {
            Prop::Atom(..) => p.clone(),
            Prop::Imp(a, b) => Prop::imp(go(a, counter), go(b, counter)),
            Prop::Forall(x, b) => {
                *counter += 1;
                let fresh = format!("w{counter}");
                Prop::forall(&fresh, go(&b.subst(x, &Term::var(&fresh)), counter))
            }
        }
    }
    go(p, &mut 0)
}
