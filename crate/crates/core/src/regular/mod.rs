//! Finite automata: combinators, the coverage language of an analysis, and
//! DFA extraction from machines that run in linear time.

mod coverage;
mod dfa;
mod extract;

use thiserror::Error;

use crate::decision::{DecisionError, Verdict};

pub(crate) use coverage::LanguageBuilder;
pub use coverage::{coverage_automaton, language_of_sequence};
pub use dfa::{Dfa, DfaDocument, DfaError, DfaTransition};
pub use extract::extract_dfa;

#[derive(Debug, Error)]
pub enum RegularError {
    #[error(transparent)]
    Dfa(#[from] DfaError),
    #[error("automaton construction exceeded the effort limit")]
    Effort,
    #[error("sequence is not a member of the given subset")]
    NotInSubset,
    #[error("symbol {0} is not an input letter")]
    ForeignSymbol(u32),
    #[error("extraction needs D >= 1: with D = 0 the machine would make no step on the empty input")]
    ZeroOffset,
    #[error("machine was not shown to run in the given time: {0:?}")]
    NotInTime(Box<Verdict>),
    #[error(transparent)]
    Decision(#[from] DecisionError),
}
