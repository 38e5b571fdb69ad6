//! Pretend-simulation of a word `y` placed between two boundaries that both
//! carry the crossing sequence `s`.

use serde::{Deserialize, Serialize};

use crate::machine::{OneTapeMachine, StateId, Sym};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureReason {
    /// An exit state disagreed with `s`, or the head crossed an end more
    /// than `|s|` times.
    Mismatch,
    /// The machine halted with its head inside `y`.
    HaltInside,
    /// A configuration repeated, so the head never leaves `y`.
    LoopInside,
    /// An internal boundary carried a sequence longer than the cap.
    OverCap,
    /// Compatible, but internal sequences repeat or equal `s`.
    NotPrimitive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatResult {
    pub compatible: bool,
    pub primitive: bool,
    /// Sequences at boundaries `1..|y|` (empty unless compatible).
    pub internal: Vec<Vec<StateId>>,
    /// `|s|` plus the total length of the internal sequences.
    pub time: u64,
    pub failure: Option<FailureReason>,
    /// Machine steps simulated.
    pub steps: u64,
}

impl CompatResult {
    fn fail(reason: FailureReason, steps: u64) -> Self {
        CompatResult { compatible: false, primitive: false, internal: Vec::new(), time: 0, failure: Some(reason), steps }
    }
}

/// Decide whether `y` is (primitive) compatible with `s`.
///
/// The head enters cell 0 of `y` in state `s[0]`. Odd-numbered crossings of
/// either end go rightward, even ones leftward. An exit through the right
/// end must be in the next unused odd entry of `s`; the head then re-enters
/// the last cell in the following entry. Exits through the left end use the
/// even entries symmetrically. The run is compatible when both ends have
/// used exactly `|s|` crossings and no re-entry is left.
pub fn probe_primitive_compat(machine: &OneTapeMachine, s: &[StateId], y: &[Sym], cap: u64) -> CompatResult {
    let m = y.len();
    let k = s.len();
    if k == 0 {
        // The head never reaches y, so every internal boundary is empty.
        return CompatResult {
            compatible: true,
            primitive: m == 1,
            internal: vec![Vec::new(); m.saturating_sub(1)],
            time: 0,
            failure: (m != 1).then_some(FailureReason::NotPrimitive),
            steps: 0,
        };
    }
    if m == 0 {
        return CompatResult::fail(FailureReason::Mismatch, 0);
    }

    let mut tape = y.to_vec();
    let mut head: usize = 0;
    let mut state = s[0];
    // Crossings consumed at the left and right ends.
    let (mut left, mut right) = (1usize, 0usize);
    let mut internal: Vec<Vec<StateId>> = vec![Vec::new(); m - 1];
    let mut steps = 0u64;
    // Brent-style cycle detection, reset whenever the head leaves y.
    let mut snapshot = (state, head, tape.clone());
    let mut power = 1u64;
    let mut since = 0u64;

    loop {
        if machine.is_halting(state) {
            return CompatResult::fail(FailureReason::HaltInside, steps);
        }
        let t = machine.transition(state, tape[head]).expect("validated machine is total");
        tape[head] = t.write;
        state = t.next;
        steps += 1;
        let exit_right = t.dir.delta() > 0 && head == m - 1;
        let exit_left = t.dir.delta() < 0 && head == 0;
        if exit_right {
            right += 1;
            if right > k || s[right - 1] != state {
                return CompatResult::fail(FailureReason::Mismatch, steps);
            }
            if right == k {
                return finish(s, left == k, internal, steps);
            }
            right += 1;
            state = s[right - 1];
            head = m - 1;
        } else if exit_left {
            left += 1;
            if left > k || s[left - 1] != state {
                return CompatResult::fail(FailureReason::Mismatch, steps);
            }
            if left == k {
                return finish(s, right == k, internal, steps);
            }
            left += 1;
            state = s[left - 1];
            head = 0;
        } else {
            let to = if t.dir.delta() > 0 { head + 1 } else { head - 1 };
            let boundary = head.max(to);
            let seq = &mut internal[boundary - 1];
            seq.push(state);
            if seq.len() as u64 > cap {
                return CompatResult::fail(FailureReason::OverCap, steps);
            }
            head = to;
            since += 1;
            if snapshot.0 == state && snapshot.1 == head && snapshot.2 == tape {
                return CompatResult::fail(FailureReason::LoopInside, steps);
            }
            if since == power {
                snapshot = (state, head, tape.clone());
                power *= 2;
                since = 0;
            }
            continue;
        }
        snapshot = (state, head, tape.clone());
        power = 1;
        since = 0;
    }
}

fn finish(s: &[StateId], other_end_done: bool, internal: Vec<Vec<StateId>>, steps: u64) -> CompatResult {
    if !other_end_done {
        return CompatResult::fail(FailureReason::Mismatch, steps);
    }
    let time = s.len() as u64 + internal.iter().map(|c| c.len() as u64).sum::<u64>();
    let mut distinct = true;
    for (i, c) in internal.iter().enumerate() {
        if c.as_slice() == s || internal[..i].contains(c) {
            distinct = false;
            break;
        }
    }
    CompatResult {
        compatible: true,
        primitive: distinct,
        internal,
        time,
        failure: (!distinct).then_some(FailureReason::NotPrimitive),
        steps,
    }
}
