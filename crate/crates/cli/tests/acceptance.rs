//! Acceptance battery at full scale: one line per criterion.
//!
//! Criterion 10 cannot meet its escape threshold inside the size-7 universe,
//! so it is listed in `EXPECTED_FAIL`; its line still reads FAIL. Any other
//! criterion that does not pass, or an expected failure that starts passing,
//! fails this target.

use mdm_cli::suite::{self, Scale};
use mdm_core::Verdict;

const SEED: u64 = 0;
const EXPECTED_FAIL: &[usize] = &[10];

fn main() {
    let results = suite::run(&[], Scale::full(SEED));
    let mut unexpected = Vec::new();
    for r in &results {
        println!("{}", r.line());
        let expected_fail = EXPECTED_FAIL.contains(&r.id);
        if (r.verdict == Verdict::Pass) == expected_fail {
            unexpected.push(r.id);
        }
    }
    let passed = results.iter().filter(|r| r.verdict == Verdict::Pass).count();
    println!("acceptance: {passed}/{} criteria pass; expected failures {EXPECTED_FAIL:?}", results.len());
    if !unexpected.is_empty() {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
