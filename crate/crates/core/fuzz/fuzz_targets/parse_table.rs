#![no_main]

use libfuzzer_sys::fuzz_target;
use mdm_core::semantics::{parse_table, powerset_algebra};
use mdm_core::syntax::{name, Signature};

fuzz_target!(|text: &str| {
    let alg = powerset_algebra(2).expect("size 2 is supported");
    let sig = Signature::new(
        vec![(name("c"), 0), (name("f"), 1)],
        vec![(name("A"), 0), (name("P"), 0), (name("R"), 1)],
    )
    .expect("fixed signature is valid");
    let _ = parse_table(text, &alg, &sig);
});
