#![no_main]

use libfuzzer_sys::fuzz_target;
use mdm_core::rewriting::parse_theory;

fuzz_target!(|text: &str| {
    let _ = parse_theory(text);
});
