//! Verification lab for multiple base revision over finite logics.
//!
//! Logics are given extensionally (worlds, sentences, model sets). On top of
//! that the crate audits change operators against the postulates (G1)–(G6),
//! extracts the preference relations an operator encodes, detects critical
//! loops and decides total-preorder representability where the evidence
//! allows.

pub mod audit;
pub mod change;
pub mod error;
pub mod extract;
pub mod format;
pub mod kernel;
pub mod loops;
pub mod orders;
pub mod random;

pub use error::{Error, Result};
