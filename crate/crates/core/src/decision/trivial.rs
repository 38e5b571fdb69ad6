//! Bounds with `T(n_0) < n_0 + 1` for some `n_0`.
//!
//! On an input of length at least `n_0` the machine makes at most
//! `⌊T(n_0)⌋ <= n_0` steps, so it never reads past the first `n_0` cells and
//! behaves exactly as on the length-`n_0` prefix. Checking every input up to
//! `n_0` and then `T(n) >= T_w` for all `n > n_0` settles the question, for
//! any number of tapes.

use crate::bounds::TimeBound;
use crate::machine::{enumerate_inputs, MultiTapeMachine, OneTapeMachine, RunOutcome, Sym, Word};

use super::{DecisionError, Effort, Exhausted, Limits, Verdict, ViolationDetail};

pub(crate) fn trivial_one_tape(
    machine: &OneTapeMachine,
    bound: &dyn TimeBound,
    n0: u64,
    effort: &mut Effort,
) -> Result<Verdict, DecisionError> {
    trivial_branch(
        machine.input_alphabet(),
        bound,
        n0,
        effort,
        |w, b| machine.run(w, b),
        |w| machine.format_word(w),
    )
}

/// Decide a multi-tape machine against a bound that drops below `n + 1`.
pub fn check_time_multi_tape(
    machine: &MultiTapeMachine,
    bound: &dyn TimeBound,
    limits: &Limits,
) -> Result<Verdict, DecisionError> {
    let n0 = bound
        .find_trivial_n0()
        .ok_or_else(|| DecisionError::OutsideDecidableRange { bound: bound.describe() })?;
    let mut effort = Effort::new(limits.effort);
    trivial_branch(
        machine.input_alphabet(),
        bound,
        n0,
        &mut effort,
        |w, b| machine.run(w, b),
        |w| machine.format_word(w),
    )
}

fn trivial_branch(
    alphabet: &[Sym],
    bound: &dyn TimeBound,
    n0: u64,
    effort: &mut Effort,
    run: impl Fn(&[Sym], u64) -> RunOutcome,
    format: impl Fn(&[Sym]) -> String,
) -> Result<Verdict, DecisionError> {
    let inconclusive = |what: String| Verdict::Inconclusive { exhausted: Exhausted::Effort, note: what };
    let overrun = |w: &[Sym], steps: u64| Verdict::Violation {
        witness: w.to_vec(),
        witness_text: format(w),
        detail: ViolationDetail::Overrun {
            length: w.len() as u64,
            allowed: bound.floor_eval(w.len() as u64),
            steps,
        },
    };

    // Count the inputs before enumerating them.
    let k = alphabet.len() as u128;
    let mut count: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=n0 {
        count = count.saturating_add(layer);
        layer = layer.saturating_mul(k);
        if count > effort.remaining() as u128 {
            return Ok(inconclusive(format!("too many inputs of length at most {n0} to enumerate")));
        }
    }

    let mut worst: Option<(Word, u64)> = None;
    for w in enumerate_inputs(alphabet, n0 as usize) {
        let allowed = bound.floor_eval(w.len() as u64);
        let budget = u64::try_from(allowed.saturating_add(1)).unwrap_or(u64::MAX);
        let room = effort.remaining().max(1);
        let out = run(&w, budget.min(room));
        effort.spend(out.steps.max(1));
        if out.steps as u128 > allowed {
            return Ok(overrun(&w, out.steps));
        }
        if !out.status.halted() {
            return Ok(inconclusive(format!("simulating `{}` exhausted the effort limit", format(&w))));
        }
        if w.len() as u64 == n0 && worst.as_ref().is_none_or(|(_, s)| out.steps > *s) {
            worst = Some((w, out.steps));
        }
    }
    let (worst, t_w) = worst.expect("at least one input of length n0");

    // Longer inputs take exactly as long as their length-n0 prefix, so the
    // remaining question is whether T(n) < T_w for some n > n0.
    match bound.witness_linear_inequality(&[n0 + 1, 1], &[t_w, 0])? {
        None => Ok(Verdict::RunsInTime),
        Some(x) => {
            let n = n0 + 1 + x[0];
            let mut w = worst;
            w.resize(n as usize, alphabet[0]);
            let allowed = bound.floor_eval(n);
            let out = run(&w, u64::try_from(allowed.saturating_add(1)).unwrap_or(u64::MAX));
            if out.steps as u128 > allowed {
                Ok(overrun(&w, out.steps))
            } else {
                Err(DecisionError::Internal(format!(
                    "padding `{}` to length {n} should exceed the bound but took {} steps",
                    format(&w),
                    out.steps
                )))
            }
        }
    }
}
