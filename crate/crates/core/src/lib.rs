//! Kernel and semantics laboratory for minimal deduction modulo: derivation
//! checking modulo a rewrite congruence, β-reduction and strong-normalization
//! verdicts, pre-Heyting algebra models and reducibility candidates over
//! finite universes.

pub mod candidates;
pub mod reduction;
pub mod rewriting;
pub mod semantics;
pub mod syntax;
pub mod typing;

use serde::Serialize;

/// Three-valued outcome of a bounded check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    /// Fail dominates Unknown, which dominates Pass.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Pass,
        }
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unknown => "unknown",
        })
    }
}
