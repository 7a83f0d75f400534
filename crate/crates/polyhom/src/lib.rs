//! File formats, random instances and the comparison harness around
//! `polyhom-core`.
//!
//! The `polyhom` binary is a thin layer over this crate: every subcommand
//! reads one of the formats in [`format`], calls into the core and prints
//! either a human table or the JSON form of the result.

pub mod compare;
pub mod error;
pub mod expr;
pub mod format;
pub mod random;
pub mod srs;

pub use compare::{compare, ComparisonReport, CompareInput, CompareOptions, DegreeComparison, Verdict};
pub use error::Error;
pub use format::{read_input, Input};
