mod common;

use std::collections::BTreeSet;

use common::*;
use mdm_core::syntax::{apply_capture_subst, name, parse_proof, parse_prop, parse_term, CaptureSubst, Proof, Style};
use proptest::prelude::*;

fn binders(p: &Proof, out: &mut BTreeSet<String>) {
    match p {
        Proof::Var(_) => {}
        Proof::Lam(a, b) => {
            out.insert(a.to_string());
            binders(b, out);
        }
        Proof::App(f, a) => {
            binders(f, out);
            binders(a, out);
        }
        Proof::TLam(_, b) | Proof::TApp(b, _) => binders(b, out),
    }
}

proptest! {
    #[test]
    fn terms_round_trip(t in term()) {
        let sig = signature();
        let back = parse_term(&t.to_string(), Some(&sig)).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn props_round_trip(p in prop_of(5)) {
        let sig = signature();
        let back = parse_prop(&p.to_string(), Some(&sig)).unwrap();
        prop_assert!(back.alpha_eq(&p), "{} printed as {}", p, back);
    }

    #[test]
    fn curry_proofs_round_trip(p in curry_proof()) {
        let back = parse_proof(&p.to_string(), Style::Curry, None).unwrap();
        prop_assert!(back.alpha_eq(&p), "{} reparsed as {}", p, back);
    }

    #[test]
    fn church_proofs_round_trip(p in church_proof()) {
        let sig = signature();
        let back = parse_proof(&p.to_string(), Style::Church, Some(&sig)).unwrap();
        prop_assert!(back.alpha_eq(&p), "{} reparsed as {}", p, back);
    }

    #[test]
    fn substitution_free_variables(p in prop(), x in prop::sample::select(&TERM_VARS[..]), t in term()) {
        let got = p.subst(x, &t).free_term_vars();
        let mut want = p.free_term_vars();
        let occurs = want.remove(x);
        if occurs {
            want.extend(t.free_vars());
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn alpha_renaming_is_alpha_equal(p in prop()) {
        let q = rename_binders(&p);
        prop_assert!(q.alpha_eq(&p));
        prop_assert_eq!(q.canonical(), p.canonical());
    }

    #[test]
    fn capture_substitution_matches_substitution_without_capture(nu in curry_proof(), mu in curry_proof()) {
        let a = "a";
        let mut bound = BTreeSet::new();
        binders(&nu, &mut bound);
        let mut dangerous: BTreeSet<String> = mu.free_proof_vars().iter().map(|n| n.to_string()).collect();
        dangerous.insert(a.to_string());
        let capturing = apply_capture_subst(&CaptureSubst(vec![(name(a), mu.clone())]), &nu);
        if bound.is_disjoint(&dangerous) {
            prop_assert!(capturing.alpha_eq(&nu.subst_proof(a, &mu)));
        }
        if !nu.has_free_proof_var(a) && !bound.contains(a) {
            prop_assert!(capturing.alpha_eq(&nu));
        }
    }

    #[test]
    fn erasure_is_idempotent_and_fixes_curry_terms(p in church_proof(), q in curry_proof()) {
        let e = p.erase();
        prop_assert!(e.is_curry());
        prop_assert!(e.erase().alpha_eq(&e));
        prop_assert!(q.erase().alpha_eq(&q));
    }

    #[test]
    fn erasure_commutes_with_proof_substitution(p in church_proof(), arg in church_proof()) {
        let lhs = p.subst_proof("a", &arg).erase();
        let rhs = p.erase().subst_proof("a", &arg.erase());
        prop_assert!(lhs.alpha_eq(&rhs), "{} vs {}", lhs, rhs);
    }
}
