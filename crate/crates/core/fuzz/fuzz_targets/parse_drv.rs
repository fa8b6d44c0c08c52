#![no_main]

use libfuzzer_sys::fuzz_target;
use mdm_core::syntax::Style;
use mdm_core::typing::parse_drv_many;

fuzz_target!(|input: (bool, &str)| {
    let (church, text) = input;
    let style = if church { Style::Church } else { Style::Curry };
    let _ = parse_drv_many(text, style, None);
});
