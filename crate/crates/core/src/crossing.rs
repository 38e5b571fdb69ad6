//! Crossing sequences of one-tape machines, and cutting, gluing and pumping
//! of tapes.
//!
//! Boundary `i` separates cells `i-1` and `i`. A step that moves the head from
//! cell `c` to `c+1` crosses boundary `c+1`; a step from `c` to `c-1` crosses
//! boundary `c`. The state recorded for a crossing is the state entered by
//! that step.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::machine::{BoundaryTally, OneTapeMachine, RunOutcome, StateId, Sym, Tape, Word};

/// Crossing sequences per boundary. Boundaries that were never crossed are
/// not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingRecord {
    pub boundaries: BTreeMap<i64, Vec<StateId>>,
    pub total_steps: u64,
}

impl CrossingRecord {
    /// The sequence at boundary `i` (empty if never crossed).
    pub fn at(&self, i: i64) -> &[StateId] {
        self.boundaries.get(&i).map_or(&[], Vec::as_slice)
    }

    /// Sum of sequence lengths over every boundary.
    pub fn total_length(&self) -> u64 {
        self.boundaries.values().map(|s| s.len() as u64).sum()
    }

    pub fn longest(&self) -> usize {
        self.boundaries.values().map(Vec::len).max().unwrap_or(0)
    }
}

/// Run `machine` on `tape` for at most `budget` steps, recording every crossing.
pub fn record_crossings(
    machine: &OneTapeMachine,
    tape: &Tape,
    budget: u64,
) -> (RunOutcome, CrossingRecord) {
    let mut st = machine.stepper_on(tape);
    let mut rec = CrossingRecord::default();
    let mut tally = BoundaryTally::default();
    while st.steps() < budget {
        let Some(step) = st.step() else { break };
        rec.boundaries.entry(step.boundary()).or_default().push(step.state);
        tally.record(step.boundary());
    }
    let outcome = st.outcome();
    rec.total_steps = outcome.steps;
    if outcome.status.halted() {
        tally.check(outcome.steps);
    }
    (outcome, rec)
}

/// Convenience wrapper for an input word.
pub fn record_word(machine: &OneTapeMachine, word: &[Sym], budget: u64) -> (RunOutcome, CrossingRecord) {
    record_crossings(machine, &Tape::from_word(machine.blank(), word), budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    LeftInfinite,
    Finite,
    RightInfinite,
}

/// A piece of tape between two cuts. Infinite segments store only a finite
/// window; everything beyond it is blank. `origin` is the index in `content`
/// of cell 0, if this segment contains it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TapeSegment {
    pub kind: SegmentKind,
    pub content: Vec<Sym>,
    pub origin: Option<usize>,
}

impl TapeSegment {
    pub fn left(content: Vec<Sym>, origin: Option<usize>) -> Self {
        TapeSegment { kind: SegmentKind::LeftInfinite, content, origin }
    }

    pub fn finite(content: Vec<Sym>, origin: Option<usize>) -> Self {
        TapeSegment { kind: SegmentKind::Finite, content, origin }
    }

    pub fn right(content: Vec<Sym>, origin: Option<usize>) -> Self {
        TapeSegment { kind: SegmentKind::RightInfinite, content, origin }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpliceError {
    #[error("expected exactly one segment containing cell 0, found {0}")]
    OriginCount(usize),
    #[error("origin offset {0} lies outside its segment")]
    OriginOutOfRange(usize),
    #[error("segments must be left-infinite, finite..., right-infinite")]
    Kinds,
    #[error("cut boundaries must be non-empty and strictly increasing")]
    Cuts,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PumpError {
    #[error("boundaries must satisfy 0 < i < j <= |w|, got i={i}, j={j}, |w|={len}")]
    Range { i: usize, j: usize, len: usize },
}

/// Cut `tape` at the given boundaries (strictly increasing).
pub fn cut(tape: &Tape, cuts: &[i64]) -> Result<Vec<TapeSegment>, SpliceError> {
    if cuts.is_empty() || cuts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SpliceError::Cuts);
    }
    let (lo, hi) = tape.support().unwrap_or((0, 0));
    let first = cuts[0];
    let last = *cuts.last().unwrap();
    let mut out = Vec::with_capacity(cuts.len() + 1);

    let start = lo.min(0).min(first);
    out.push(segment(tape, SegmentKind::LeftInfinite, start, first));
    for w in cuts.windows(2) {
        out.push(segment(tape, SegmentKind::Finite, w[0], w[1]));
    }
    let end = hi.max(0).max(last - 1) + 1;
    out.push(segment(tape, SegmentKind::RightInfinite, last, end.max(last)));
    Ok(out)
}

fn segment(tape: &Tape, kind: SegmentKind, from: i64, to: i64) -> TapeSegment {
    let content = (from..to).map(|c| tape.get(c)).collect();
    let origin = (from <= 0 && 0 < to).then(|| (-from) as usize);
    TapeSegment { kind, content, origin }
}

/// Glue segments into a tape whose cell numbering is fixed by the segment
/// carrying the origin.
pub fn splice(blank: Sym, segments: &[TapeSegment]) -> Result<Tape, SpliceError> {
    let n = segments.len();
    if n < 2
        || segments[0].kind != SegmentKind::LeftInfinite
        || segments[n - 1].kind != SegmentKind::RightInfinite
        || segments[1..n - 1].iter().any(|s| s.kind != SegmentKind::Finite)
    {
        return Err(SpliceError::Kinds);
    }
    let marked: Vec<usize> = (0..n).filter(|&i| segments[i].origin.is_some()).collect();
    if marked.len() != 1 {
        return Err(SpliceError::OriginCount(marked.len()));
    }
    let m = marked[0];
    let off = segments[m].origin.unwrap();
    if off >= segments[m].content.len() {
        return Err(SpliceError::OriginOutOfRange(off));
    }
    let before: usize = segments[..m].iter().map(|s| s.content.len()).sum();
    let base = -((before + off) as i64);
    let mut tape = Tape::blank(blank);
    let mut cell = base;
    for seg in segments {
        for &s in &seg.content {
            tape.set(cell, s);
            cell += 1;
        }
    }
    Ok(tape)
}

/// Repeat the subword between boundaries `i` and `j` of `word` `reps` times.
pub fn pump(word: &[Sym], i: usize, j: usize, reps: usize) -> Result<Word, PumpError> {
    if !(0 < i && i < j && j <= word.len()) {
        return Err(PumpError::Range { i, j, len: word.len() });
    }
    let mut out = word[..i].to_vec();
    for _ in 0..reps {
        out.extend_from_slice(&word[i..j]);
    }
    out.extend_from_slice(&word[j..]);
    Ok(out)
}

/// Insert `reps` copies of `part` at boundary `at` of `word`.
pub fn insert(word: &[Sym], at: usize, part: &[Sym], reps: usize) -> Word {
    let mut out = word[..at].to_vec();
    for _ in 0..reps {
        out.extend_from_slice(part);
    }
    out.extend_from_slice(&word[at..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::machine::Status;

    #[test]
    fn m_right_crossings() {
        let m = fixtures::m_right();
        let q0 = m.start();
        let (out, rec) = record_word(&m, &m.parse_word("aa").unwrap(), 100);
        assert_eq!(out.status, Status::Accepted);
        assert_eq!(rec.total_steps, 3);
        assert_eq!(rec.at(1), &[q0]);
        assert_eq!(rec.at(2), &[q0]);
        assert_eq!(rec.at(3), &[m.accept()]);
        assert_eq!(rec.boundaries.len(), 3);

        let (_, rec) = record_word(&m, &[], 100);
        assert_eq!(rec.at(1), &[m.accept()]);
        assert_eq!(rec.boundaries.len(), 1);
        assert!(rec.at(0).is_empty());
    }

    #[test]
    fn budget_exceeded_step_sum() {
        let m = fixtures::m_loop();
        let (out, rec) = record_word(&m, &m.parse_word("a").unwrap(), 37);
        assert_eq!(out.status, Status::BudgetExceeded);
        assert_eq!(rec.total_length(), 37);
    }

    #[test]
    fn splice_identity() {
        let (a, b, blank) = (Sym(0), Sym(1), Sym(2));
        let t = splice(
            blank,
            &[
                TapeSegment::left(vec![blank], None),
                TapeSegment::finite(vec![a, b], Some(0)),
                TapeSegment::right(vec![blank], None),
            ],
        )
        .unwrap();
        assert_eq!(t, Tape::from_word(blank, &[a, b]));
    }

    #[test]
    fn cut_then_splice_is_identity() {
        let (a, b, blank) = (Sym(0), Sym(1), Sym(2));
        let t = Tape::from_word(blank, &[a, b, a]);
        for cuts in [vec![1], vec![0], vec![-2, 1, 3], vec![5], vec![1, 2, 3, 4]] {
            let segs = cut(&t, &cuts).unwrap();
            assert_eq!(splice(blank, &segs).unwrap(), t, "cuts {cuts:?}");
        }
    }

    #[test]
    fn splice_errors() {
        let blank = Sym(1);
        let l = TapeSegment::left(vec![], None);
        let r = TapeSegment::right(vec![Sym(0)], None);
        assert_eq!(splice(blank, &[l.clone(), r.clone()]), Err(SpliceError::OriginCount(0)));
        let f = TapeSegment::finite(vec![Sym(0)], Some(0));
        assert_eq!(splice(blank, &[f.clone(), l, r]), Err(SpliceError::Kinds));
    }

    #[test]
    fn pump_examples() {
        let w: Word = vec![Sym(0), Sym(1), Sym(2)];
        assert_eq!(pump(&w, 1, 2, 3).unwrap(), vec![Sym(0), Sym(1), Sym(1), Sym(1), Sym(2)]);
        assert_eq!(pump(&w, 1, 2, 0).unwrap(), vec![Sym(0), Sym(2)]);
        assert_eq!(pump(&w, 1, 2, 1).unwrap(), w);
        assert!(pump(&w, 2, 2, 1).is_err());
        assert!(pump(&w, 0, 2, 1).is_err());
        assert!(pump(&w, 1, 4, 1).is_err());
    }
}
