//! Example theories and derivations shipped with the binary.

use mdm_core::rewriting::{parse_theory, Theory};

pub const EMPTY: &str = include_str!("../examples/empty.mdm");
pub const SELFAPP: &str = include_str!("../examples/selfapp.mdm");
pub const SELFAPP_AB: &str = include_str!("../examples/selfapp-ab.mdm");
pub const CONFUSION: &str = include_str!("../examples/confusion.mdm");
pub const ARITH_TOY: &str = include_str!("../examples/arith-toy.mdm");
pub const CORPUS: &str = include_str!("../examples/corpus.mdm");
pub const DELTA_DELTA: &str = include_str!("../examples/deltadelta.drv");
pub const DELTA_DELTA_AB: &str = include_str!("../examples/deltadelta-ab.drv");

pub const THEORIES: [(&str, &str); 6] = [
    ("empty", EMPTY),
    ("selfapp", SELFAPP),
    ("selfapp-ab", SELFAPP_AB),
    ("confusion", CONFUSION),
    ("arith-toy", ARITH_TOY),
    ("corpus", CORPUS),
];

/// A bundled theory by name.
pub fn theory(name: &str) -> Option<Theory> {
    THEORIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_theory(text).expect("bundled theories parse"))
}
