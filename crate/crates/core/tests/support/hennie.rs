//! Cut-and-paste properties of crossing sequences on small random machines.
//!
//! Swapping: two halting runs with the same outcome that produce the same
//! crossing sequence at boundaries `i` and `j` (both positive, or both
//! non-positive) can trade the tape segments on one side of those
//! boundaries; the result is unchanged and so are the crossing sequences on
//! every kept segment.
//!
//! Pumping: a segment not containing cell 0 whose two ends carry the same
//! crossing sequence can be removed or repeated without changing the result.

use std::cell::Cell;

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use tmtime::crossing::{cut, pump, record_crossings, record_word, splice, CrossingRecord, TapeSegment};
use tmtime::machine::{Dir, OneTapeMachine, StateId, Status, Sym, Tape, Transition};

const BUDGET: u64 = 200;
const SPLICED_BUDGET: u64 = 20_000;

/// At most four states: one or two working states plus accept and reject.
fn machine() -> impl Strategy<Value = OneTapeMachine> {
    (1usize..=2).prop_flat_map(|working| {
        let n = working as u32 + 2;
        vec((0..n, 0..3u32, prop::bool::weighted(0.6)), working * 3).prop_map(move |rules| {
            let mut states: Vec<String> = (0..working).map(|i| format!("q{i}")).collect();
            states.extend(["qa".to_string(), "qr".to_string()]);
            OneTapeMachine::from_parts(
                states,
                vec!["a".into(), "b".into(), "_".into()],
                vec![Sym(0), Sym(1)],
                Sym(2),
                (StateId(0), StateId(n - 2), StateId(n - 1)),
                |s, y| {
                    let (next, write, right) = rules[s.index() * 3 + y.index()];
                    Transition { next: StateId(next), write: Sym(write), dir: if right { Dir::R } else { Dir::L } }
                },
            )
            .unwrap()
        })
    })
}

fn word() -> impl Strategy<Value = Vec<Sym>> {
    vec((0..2u32).prop_map(Sym), 0..8)
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { failure_persistence: None, ..Config::with_cases(cases) };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn keys(rec: &CrossingRecord) -> (i64, i64) {
    let lo = rec.boundaries.keys().next().copied().unwrap_or(0);
    let hi = rec.boundaries.keys().last().copied().unwrap_or(0);
    (lo, hi)
}

/// The tape made of `a`'s part left of boundary `i` and `b`'s part from
/// boundary `j` on, with the shifts that map old boundary numbers of each
/// part to new ones.
fn swapped(a: &Tape, i: i64, b: &Tape, j: i64) -> (Tape, i64, i64) {
    let left = cut(a, &[i]).unwrap().swap_remove(0);
    let right = cut(b, &[j]).unwrap().pop().unwrap();
    let tape = splice(a.blank_symbol(), &[left, right]).unwrap();
    // The part holding cell 0 keeps its numbering.
    if i > 0 {
        (tape, 0, i - j)
    } else {
        (tape, j - i, 0)
    }
}

/// Check a swap and return whether every claim held.
fn swap_holds(m: &OneTapeMachine, a: &Tape, ra: &CrossingRecord, i: i64, b: &Tape, rb: &CrossingRecord, j: i64, status: Status) -> bool {
    let (tape, shift_a, shift_b) = swapped(a, i, b, j);
    let (out, rec) = record_crossings(m, &tape, SPLICED_BUDGET);
    if out.status != status {
        return false;
    }
    let (lo_new, hi_new) = keys(&rec);
    let (lo_a, _) = keys(ra);
    let (_, hi_b) = keys(rb);
    let left_ok = (lo_a.min(lo_new - shift_a) - 1..=i).all(|k| rec.at(k + shift_a) == ra.at(k));
    let right_ok = (j..=hi_b.max(hi_new - shift_b) + 1).all(|k| rec.at(k + shift_b) == rb.at(k));
    left_ok && right_ok
}

/// Run `cases` random swap cases; the number of premise-satisfying trials.
pub fn swap_trials(cases: u32) -> Result<u32, String> {
    let trials = Cell::new(0u32);
    let mut runner = runner(cases);
    runner
        .run(&(machine(), word(), word()), |(m, w1, w2)| {
            let a = Tape::from_word(m.blank(), &w1);
            let b = Tape::from_word(m.blank(), &w2);
            let (oa, ra) = record_crossings(&m, &a, BUDGET);
            let (ob, rb) = record_crossings(&m, &b, BUDGET);
            if !oa.status.halted() || oa.status != ob.status {
                return Ok(());
            }
            for (&i, si) in &ra.boundaries {
                for (&j, sj) in &rb.boundaries {
                    if si != sj || (i > 0) != (j > 0) {
                        continue;
                    }
                    trials.set(trials.get() + 1);
                    prop_assert!(swap_holds(&m, &a, &ra, i, &b, &rb, j, oa.status), "{:?} | {:?}", (i, j), m.to_document());
                    prop_assert!(swap_holds(&m, &b, &rb, j, &a, &ra, i, oa.status));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(trials.get())
}

/// `tape` with the segment between boundaries `i < j` repeated `reps` times.
fn pumped_tape(tape: &Tape, i: i64, j: i64, reps: usize) -> Tape {
    let segs = cut(tape, &[i, j]).unwrap();
    let mut parts: Vec<TapeSegment> = vec![segs[0].clone()];
    parts.extend(std::iter::repeat_n(segs[1].clone(), reps));
    parts.push(segs[2].clone());
    splice(tape.blank_symbol(), &parts).unwrap()
}

/// Run `cases` random pump cases; the number of premise-satisfying trials.
pub fn pump_trials(cases: u32) -> Result<u32, String> {
    let trials = Cell::new(0u32);
    let mut runner = runner(cases);
    runner
        .run(&(machine(), word()), |(m, w)| {
            let tape = Tape::from_word(m.blank(), &w);
            let (out, rec) = record_crossings(&m, &tape, BUDGET);
            if !out.status.halted() {
                return Ok(());
            }
            let bs: Vec<(&i64, &Vec<StateId>)> = rec.boundaries.iter().collect();
            for (x, &(&i, si)) in bs.iter().enumerate() {
                for &(&j, sj) in &bs[x + 1..] {
                    // The pumped segment must not contain cell 0.
                    if si != sj || (i <= 0 && j > 0) {
                        continue;
                    }
                    trials.set(trials.get() + 1);
                    for reps in 0..=3 {
                        let t = pumped_tape(&tape, i, j, reps);
                        prop_assert_eq!(m.run_on_tape(&t, SPLICED_BUDGET).status, out.status);
                        if i > 0 && (j as usize) <= w.len() {
                            let pw = pump(&w, i as usize, j as usize, reps).unwrap();
                            prop_assert_eq!(record_word(&m, &pw, SPLICED_BUDGET).0.status, out.status);
                        }
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(trials.get())
}
