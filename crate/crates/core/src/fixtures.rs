//! Small reference machines used by tests, benchmarks and examples.

use crate::machine::{Machine, MultiTapeMachine, OneTapeMachine};

pub const M_RIGHT: &str = include_str!("../fixtures/m_right.json");
pub const M_LOOP: &str = include_str!("../fixtures/m_loop.json");
pub const M_PARITY: &str = include_str!("../fixtures/m_parity.json");
pub const H_IMMEDIATE: &str = include_str!("../fixtures/h_immediate.json");
pub const H_TWO: &str = include_str!("../fixtures/h_two.json");
pub const CONSTANT_TWO_TAPE: &str = include_str!("../fixtures/constant_two_tape.json");

fn one(text: &str) -> OneTapeMachine {
    Machine::from_json(text)
        .expect("fixture is valid")
        .one_tape()
        .expect("fixture is one-tape")
}

/// Scans right over its input and accepts on the first blank: n+1 steps.
pub fn m_right() -> OneTapeMachine {
    one(M_RIGHT)
}

/// Moves right forever.
pub fn m_loop() -> OneTapeMachine {
    one(M_LOOP)
}

/// Accepts words over {a,b} with an even number of a's in one scan.
pub fn m_parity() -> OneTapeMachine {
    one(M_PARITY)
}

/// Halts on every tape after one step.
pub fn h_immediate() -> OneTapeMachine {
    one(H_IMMEDIATE)
}

/// Never halts.
pub fn h_loop() -> OneTapeMachine {
    one(M_LOOP)
}

/// Halts on every tape after two steps.
pub fn h_two() -> OneTapeMachine {
    one(H_TWO)
}

/// Two-tape machine that accepts every input after exactly three steps.
pub fn constant_two_tape() -> MultiTapeMachine {
    Machine::from_json(CONSTANT_TWO_TAPE)
        .expect("fixture is valid")
        .multi_tape()
        .expect("fixture is multi-tape")
}
