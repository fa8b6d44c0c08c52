//! Replays the checked-in fuzz seeds; every seed is a valid input.

use std::path::PathBuf;

use mdm_core::rewriting::parse_theory;
use mdm_core::semantics::{parse_table, powerset_algebra};
use mdm_core::syntax::{name, parse_context, parse_env, parse_prop, parse_proof, parse_term, Signature, Style};
use mdm_core::typing::parse_drv_many;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with("seed-"))
        .map(|p| (p.display().to_string(), std::fs::read(&p).unwrap()))
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(bytes: &[u8]) -> &str {
    std::str::from_utf8(bytes).unwrap()
}

/// Leading style byte, as the fuzz targets decode it.
fn styled(bytes: &[u8]) -> (Style, &str) {
    let style = if bytes[0] & 1 == 1 { Style::Church } else { Style::Curry };
    (style, text(&bytes[1..]))
}

#[test]
fn term_seeds_round_trip() {
    for (path, b) in seeds("parse_term") {
        let t = parse_term(text(&b), None).unwrap_or_else(|e| panic!("{path}: {e}"));
        assert_eq!(parse_term(&t.to_string(), None).unwrap(), t, "{path}");
    }
}

#[test]
fn prop_seeds_round_trip() {
    for (path, b) in seeds("parse_prop") {
        let p = parse_prop(text(&b), None).unwrap_or_else(|e| panic!("{path}: {e}"));
        assert!(parse_prop(&p.to_string(), None).unwrap().alpha_eq(&p), "{path}");
    }
}

#[test]
fn proof_seeds_round_trip() {
    for (path, b) in seeds("parse_proof") {
        let (style, s) = styled(&b);
        let p = parse_proof(s, style, None).unwrap_or_else(|e| panic!("{path}: {e}"));
        assert!(parse_proof(&p.to_string(), style, None).unwrap().alpha_eq(&p), "{path}");
    }
}

#[test]
fn context_and_env_seeds_parse() {
    for (path, b) in seeds("parse_context") {
        parse_context(text(&b), None).unwrap_or_else(|e| panic!("{path}: {e}"));
    }
    for (path, b) in seeds("parse_env") {
        parse_env(text(&b), None).unwrap_or_else(|e| panic!("{path}: {e}"));
    }
}

#[test]
fn theory_seeds_parse() {
    for (path, b) in seeds("parse_theory") {
        parse_theory(text(&b)).unwrap_or_else(|e| panic!("{path}: {e}"));
    }
}

#[test]
fn drv_seeds_parse() {
    for (path, b) in seeds("parse_drv") {
        let (style, s) = styled(&b);
        assert!(!parse_drv_many(s, style, None).unwrap_or_else(|e| panic!("{path}: {e}")).is_empty());
    }
}

#[test]
fn table_seeds_parse() {
    let alg = powerset_algebra(2).unwrap();
    let sig = Signature::new(
        vec![(name("c"), 0), (name("f"), 1)],
        vec![(name("A"), 0), (name("P"), 0), (name("R"), 1)],
    )
    .unwrap();
    for (path, b) in seeds("parse_table") {
        parse_table(text(&b), &alg, &sig).unwrap_or_else(|e| panic!("{path}: {e}"));
    }
}
