//! Time-bound verification for deterministic one-tape Turing machines.
//!
//! Given a machine and a bound `T(n)` below `n log n`, the [`decision`]
//! module decides whether the machine makes at most `⌊T(|w|)⌋` steps on every
//! input `w`. The analysis is built on crossing sequences ([`crossing`]),
//! manageable bounds ([`bounds`]) and finite automata ([`regular`]); the
//! [`gadgets`] module compiles the reduction machines that show where the
//! problem stops being decidable.

pub mod bounds;
pub mod crossing;
pub mod decision;
pub mod fixtures;
pub mod gadgets;
pub mod machine;
pub mod regular;

pub use bounds::{KobayashiConstant, LinearBound, TableBound, TimeBound};
pub use crossing::{CrossingRecord, TapeSegment};
pub use decision::{AnalysisTables, CompatResult, Limits, Verdict};
pub use machine::{
    Dir, Machine, MachineDocument, MachineError, MultiTapeMachine, OneTapeMachine, RunOutcome,
    StateId, Status, Sym, Tape, Word,
};
pub use regular::Dfa;
