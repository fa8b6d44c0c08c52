#![no_main]

use libfuzzer_sys::fuzz_target;
use mdm_core::syntax::{name, parse_proof, Signature, Style};

fuzz_target!(|input: (bool, &str)| {
    let (church, text) = input;
    let style = if church { Style::Church } else { Style::Curry };
    let sig = Signature::new(
        vec![(name("c"), 0), (name("d"), 0), (name("f"), 1), (name("g"), 2)],
        vec![(name("P"), 0)],
    )
    .expect("fixed signature is valid");
    if let Ok(p) = parse_proof(text, style, Some(&sig)) {
        assert!(p.alpha_eq(&parse_proof(&p.to_string(), style, Some(&sig)).expect("printed proof parses")));
    }
    if let Ok(p) = parse_proof(text, style, None) {
        let once = parse_proof(&p.to_string(), style, None).expect("printed proof parses");
        assert!(once.alpha_eq(&parse_proof(&once.to_string(), style, None).expect("printed proof parses")));
    }
});
