#![no_main]

use libfuzzer_sys::fuzz_target;
use mdm_core::syntax::parse_env;

fuzz_target!(|text: &str| {
    let _ = parse_env(text, None);
});
