//! Extensional logics and their model-theoretic primitives.

mod builtin;
mod logic;
mod model_set;

pub use builtin::{
    builtin_logic, horn, lex_core, lex_paper, propositional, MAX_HORN_ATOMS,
    MAX_PROPOSITIONAL_ATOMS,
};
pub use logic::{BeliefBase, ClassId, Logic, SemanticClass};
pub use model_set::{ModelSet, MAX_WORLDS};
