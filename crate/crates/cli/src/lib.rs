//! Driver for the `mdm` binary: bundled theories, corpus generation, the
//! acceptance battery and the subcommands.

pub mod app;
pub mod bundled;
pub mod corpus;
pub mod suite;
