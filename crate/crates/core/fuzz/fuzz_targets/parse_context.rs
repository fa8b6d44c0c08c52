#![no_main]

use libfuzzer_sys::fuzz_target;
use mdm_core::syntax::parse_context;

fuzz_target!(|text: &str| {
    let _ = parse_context(text, None);
});
