mod common;

use common::{church_proof, curry_proof};
use mdm_core::reduction::{beta_reducts, distinct_reducts, is_normal, normalize, one_step_reducts, sn_verdict, NormalizeOutcome, SnVerdict};
use mdm_core::syntax::Proof;
use proptest::prelude::*;

/// Longest reduction by plain recursion; `None` once `depth` is exceeded.
fn longest(p: &Proof, depth: usize) -> Option<usize> {
    let mut best = 0;
    for q in beta_reducts(p) {
        if depth == 0 {
            return None;
        }
        best = best.max(longest(&q, depth - 1)? + 1);
    }
    Some(best)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn one_reduct_per_redex(p in church_proof()) {
        prop_assert_eq!(beta_reducts(&p).len(), p.redex_paths().len());
        prop_assert_eq!(is_normal(&p), p.redex_paths().is_empty());
    }

    #[test]
    fn sn_bound_agrees_with_naive_recursion(p in curry_proof()) {
        if let SnVerdict::Sn { max_length, .. } = sn_verdict(&p, 2000) {
            if let Some(n) = longest(&p, 12) {
                prop_assert_eq!(max_length, n);
            }
        }
    }

    #[test]
    fn sn_bound_drops_along_every_step(p in church_proof()) {
        if let SnVerdict::Sn { max_length, .. } = sn_verdict(&p, 2000) {
            for q in distinct_reducts(&p) {
                let v = sn_verdict(&q, 2000);
                let m = v.max_length();
                prop_assert!(m.is_some_and(|m| m < max_length), "{} -> {}: {:?}", p, q, v);
            }
        }
    }

    #[test]
    fn erasure_simulates_reduction(p in church_proof()) {
        let e = p.erase();
        let curry: Vec<Proof> = beta_reducts(&e).iter().map(Proof::erase).collect();
        for (path, q) in one_step_reducts(&p) {
            let eq = q.erase();
            match p.at(&path) {
                Some(Proof::App(..)) => prop_assert!(curry.iter().any(|r| r.alpha_eq(&eq)), "{} -> {}", p, q),
                Some(Proof::TApp(..)) => prop_assert!(eq.alpha_eq(&e), "{} -> {}", p, q),
                other => prop_assert!(false, "not a redex: {:?}", other),
            }
        }
    }

    #[test]
    fn normal_forms_are_normal(p in curry_proof()) {
        let (n, outcome) = normalize(&p, 200);
        if matches!(outcome, NormalizeOutcome::Normal { .. }) {
            prop_assert!(is_normal(&n));
        }
    }
}
