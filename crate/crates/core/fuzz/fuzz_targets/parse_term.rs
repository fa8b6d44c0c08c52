#![no_main]

use libfuzzer_sys::fuzz_target;
use mdm_core::syntax::{name, parse_term, Signature};

fuzz_target!(|text: &str| {
    let sig = Signature::new(
        vec![(name("c"), 0), (name("d"), 0), (name("f"), 1), (name("g"), 2)],
        vec![(name("P"), 0), (name("R"), 1)],
    )
    .expect("fixed signature is valid");
    if let Ok(t) = parse_term(text, Some(&sig)) {
        assert_eq!(parse_term(&t.to_string(), Some(&sig)).expect("printed term parses"), t);
    }
    // Without a signature a nullary application prints like a variable, so
    // only the printed form is stable.
    if let Ok(t) = parse_term(text, None) {
        let once = parse_term(&t.to_string(), None).expect("printed term parses");
        assert_eq!(parse_term(&once.to_string(), None).expect("printed term parses"), once);
    }
});
