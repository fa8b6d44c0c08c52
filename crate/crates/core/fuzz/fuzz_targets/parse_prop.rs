#![no_main]

use libfuzzer_sys::fuzz_target;
use mdm_core::syntax::{name, parse_prop, Signature};

fuzz_target!(|text: &str| {
    let sig = Signature::new(
        vec![(name("c"), 0), (name("d"), 0), (name("f"), 1), (name("g"), 2)],
        vec![(name("A"), 0), (name("P"), 0), (name("Q"), 0), (name("R"), 1), (name("S"), 2)],
    )
    .expect("fixed signature is valid");
    if let Ok(p) = parse_prop(text, Some(&sig)) {
        assert!(p.alpha_eq(&parse_prop(&p.to_string(), Some(&sig)).expect("printed proposition parses")));
    }
    if let Ok(p) = parse_prop(text, None) {
        let once = parse_prop(&p.to_string(), None).expect("printed proposition parses");
        assert!(once.alpha_eq(&parse_prop(&once.to_string(), None).expect("printed proposition parses")));
    }
});
