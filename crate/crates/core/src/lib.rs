//! Self-referential integer sequences in the style of Aronson's sequence.
//!
//! The crate generates sequences defined by rules such as "n is in the
//! sequence iff the n-th term is odd", transforms arbitrary increasing
//! sequences into such sequences and back, solves square constraints
//! `s(s(n)) = y n + z`, evaluates closed forms, and describes the resulting
//! difference sequences as words over small alphabets.

pub mod analysis;
pub mod bfile;
pub mod cli;
pub mod closedform;
pub mod engine;
mod error;
pub mod oracle;
pub mod registry;
pub mod sequence;
pub mod squares;
pub mod term;
pub mod transform;
pub mod words;

pub use engine::{Mode, RuleSpec, WindowCondition, WindowSide};
pub use error::{Error, Result};
pub use oracle::{MembershipOracle, OracleKind};
pub use sequence::{GeneratedSequence, Provenance};
pub use term::Term;
