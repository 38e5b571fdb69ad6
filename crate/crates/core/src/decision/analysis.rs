//! The crossing-sequence analysis for bounds with `T(n) >= n + 1`.
//!
//! The textbook procedure enumerates every input up to the length bound `K`,
//! which is astronomical even for tiny machines. Here the tables start from
//! a short exhaustive seed and grow by refinement: whenever the coverage
//! language misses a word, that word is simulated and decomposed, and its
//! base word and parts join the tables. Every addition is something the full
//! enumeration would also have produced, so a universal coverage language
//! with all family inequalities holding is the same certificate.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{kobayashi_constant, sequence_count_bound_u128, TimeBound, DEFAULT_SEARCH_EFFORT};
use crate::crossing::{record_word, CrossingRecord};
use crate::machine::{enumerate_inputs, OneTapeMachine, RunOutcome, Sym, Word};
use crate::regular::{LanguageBuilder, RegularError};

use super::decompose::decompose;
use super::probe::probe_primitive_compat;
use super::tables::{realizable, AnalysisTables, BaseWord, Part, SeqId, TableSizes};
use super::trivial::trivial_one_tape;
use super::{family_inequality_witness, DecisionError, Effort, Exhausted, Limits, Verdict, ViolationDetail};

/// Outcome of [`check_time_one_tape`] with the evidence behind it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Analysis {
    pub verdict: Verdict,
    /// Tables of the crossing-sequence analysis; `None` on the trivial branch.
    #[serde(skip)]
    pub tables: Option<AnalysisTables>,
    pub sizes: Option<TableSizes>,
    /// Crossing-length cap used, and whether it was the certified constant.
    pub crossing_cap: Option<u64>,
    pub crossing_cap_certified: bool,
    /// Length cap: the user's, or the certified count of sequences.
    pub length_cap: Option<String>,
    pub length_cap_certified: bool,
    /// `n_0` when the trivial branch ran.
    pub trivial_n0: Option<u64>,
    pub refinements: u64,
    pub effort_used: u64,
}

impl Analysis {
    fn bare(verdict: Verdict) -> Self {
        Analysis {
            verdict,
            tables: None,
            sizes: None,
            crossing_cap: None,
            crossing_cap_certified: false,
            length_cap: None,
            length_cap_certified: false,
            trivial_n0: None,
            refinements: 0,
            effort_used: 0,
        }
    }
}

/// Decide whether `machine` makes at most `⌊T(|w|)⌋` steps on every input `w`.
///
/// `RunsInTime` is returned only when both caps are the certified ones.
/// Witnessed violations are reported under any caps; an over-long crossing
/// sequence counts as a violation only against the certified constant.
pub fn check_time_one_tape(
    machine: &OneTapeMachine,
    bound: &dyn TimeBound,
    limits: &Limits,
) -> Result<Analysis, DecisionError> {
    if let Some(n0) = bound.find_trivial_n0() {
        let mut effort = Effort::new(limits.effort);
        let verdict = trivial_one_tape(machine, bound, n0, &mut effort)?;
        let mut a = Analysis::bare(verdict);
        a.trivial_n0 = Some(n0);
        a.effort_used = effort.used();
        return Ok(a);
    }

    let q = machine.state_count() as u64;
    let (c, c_certified) = match limits.cap_c {
        Some(c) => (c, false),
        None => (kobayashi_constant(q, bound, DEFAULT_SEARCH_EFFORT.max(limits.effort))?.c, true),
    };
    // For large c the count has millions of digits; keep it symbolic then.
    let k = sequence_count_bound_u128(q, c);
    let len_certified = limits.max_len.is_none_or(|m| k.is_some_and(|k| m as u128 >= k));
    let seed = match limits.max_len {
        Some(m) => m,
        None => limits.seed_len,
    };
    let seed = k.map_or(seed, |k| seed.min(k.min(usize::MAX as u128) as usize));
    let k_text = match (len_certified, k, limits.max_len) {
        (false, _, Some(m)) => m.to_string(),
        (_, Some(k), _) => k.to_string(),
        _ => format!("({q}^{}-1)/({q}-1)", c + 1),
    };

    let mut engine = Engine {
        machine,
        bound,
        limits,
        c,
        c_certified,
        seed,
        tables: AnalysisTables::new(c, k_text),
        effort: Effort::new(limits.effort),
        pending: VecDeque::new(),
        checked: HashSet::new(),
        letters: machine.input_alphabet().to_vec(),
        refinements: 0,
    };
    let verdict = match engine.run() {
        Ok(()) => {
            if c_certified && len_certified {
                Verdict::RunsInTime
            } else {
                let (exhausted, note) = if !c_certified {
                    (Exhausted::CrossingCap, format!("analysis passed under crossing cap {c}, which is not certified"))
                } else {
                    (Exhausted::LengthCap, format!("analysis passed under length cap {}, which is not certified", engine.tables.k))
                };
                Verdict::Inconclusive { exhausted, note }
            }
        }
        Err(Stop::Verdict(v)) => v,
        Err(Stop::Error(e)) => return Err(e),
    };
    Ok(Analysis {
        verdict,
        sizes: Some(engine.tables.sizes()),
        crossing_cap: Some(c),
        crossing_cap_certified: c_certified,
        length_cap: Some(engine.tables.k.to_string()),
        length_cap_certified: len_certified,
        trivial_n0: None,
        refinements: engine.refinements,
        effort_used: engine.effort.used(),
        tables: Some(engine.tables),
    })
}

enum Stop {
    Verdict(Verdict),
    Error(DecisionError),
}

impl From<DecisionError> for Stop {
    fn from(e: DecisionError) -> Self {
        Stop::Error(e)
    }
}

type Flow<T> = Result<T, Stop>;

fn internal<T>(msg: String) -> Flow<T> {
    Err(Stop::Error(DecisionError::Internal(msg)))
}

fn out_of_effort<T>(what: &str) -> Flow<T> {
    Err(Stop::Verdict(Verdict::Inconclusive { exhausted: Exhausted::Effort, note: format!("effort limit reached while {what}") }))
}

struct Engine<'a> {
    machine: &'a OneTapeMachine,
    bound: &'a dyn TimeBound,
    limits: &'a Limits,
    c: u64,
    c_certified: bool,
    seed: usize,
    tables: AnalysisTables,
    effort: Effort,
    /// Sequences whose parts up to the seed length are not yet probed.
    pending: VecDeque<SeqId>,
    /// Families already checked: `(base index, sorted pair indices)`.
    checked: HashSet<(usize, Vec<usize>)>,
    letters: Vec<Sym>,
    refinements: u64,
}

impl Engine<'_> {
    fn run(&mut self) -> Flow<()> {
        self.base_tables()?;
        self.saturate()?;
        let alphabet: Vec<String> =
            self.letters.iter().map(|&s| self.machine.symbol_name(s).to_string()).collect();
        loop {
            self.families()?;
            let dfa = {
                let mut builder = LanguageBuilder::new(&self.tables, alphabet.clone(), &self.letters);
                match builder.coverage(|_| true, true, &mut self.effort) {
                    Ok(d) => d,
                    Err(RegularError::Effort) => return out_of_effort("building the coverage automaton"),
                    Err(e) => return internal(format!("coverage automaton: {e}")),
                }
            };
            let (universal, gap) = dfa.is_universal();
            if universal {
                return Ok(());
            }
            let gap: Word = gap.unwrap().into_iter().map(|i| self.letters[i]).collect();
            if let Some(m) = self.limits.max_len {
                if gap.len() > m {
                    return Err(Stop::Verdict(Verdict::Inconclusive {
                        exhausted: Exhausted::LengthCap,
                        note: format!(
                            "coverage misses `{}`, longer than the length cap {m}",
                            self.machine.format_word(&gap)
                        ),
                    }));
                }
            }
            self.refinements += 1;
            self.absorb(&gap)?;
            self.saturate()?;
        }
    }

    /// Simulate under budget `⌊T(|w|)⌋ + 1`, stopping on an overrun or an
    /// over-long crossing sequence.
    fn simulate(&mut self, w: &[Sym]) -> Flow<(RunOutcome, CrossingRecord)> {
        let allowed = self.bound.floor_eval(w.len() as u64);
        let budget = u64::try_from(allowed.saturating_add(1)).unwrap_or(u64::MAX);
        let room = self.effort.remaining().max(1);
        let (out, rec) = record_word(self.machine, w, budget.min(room));
        self.effort.spend(out.steps.max(1));
        self.judge(w, &out, &rec, budget)?;
        Ok((out, rec))
    }

    fn judge(&self, w: &[Sym], out: &RunOutcome, rec: &CrossingRecord, budget: u64) -> Flow<()> {
        let allowed = self.bound.floor_eval(w.len() as u64);
        if out.steps as u128 > allowed {
            return Err(Stop::Verdict(self.overrun(w, out.steps)));
        }
        if !out.status.halted() {
            debug_assert!(out.steps < budget);
            return out_of_effort("simulating an input");
        }
        if let Some((&b, seq)) = rec.boundaries.iter().find(|(_, s)| s.len() as u64 > self.c) {
            return Err(Stop::Verdict(if self.c_certified {
                Verdict::Violation {
                    witness: w.to_vec(),
                    witness_text: self.machine.format_word(w),
                    detail: ViolationDetail::CrossingLength { boundary: b, length: seq.len() as u64, cap: self.c },
                }
            } else {
                Verdict::Inconclusive {
                    exhausted: Exhausted::CrossingCap,
                    note: format!(
                        "input `{}` crosses boundary {b} {} times, over the cap {}",
                        self.machine.format_word(w),
                        seq.len(),
                        self.c
                    ),
                }
            }));
        }
        Ok(())
    }

    fn overrun(&self, w: &[Sym], steps: u64) -> Verdict {
        Verdict::Violation {
            witness: w.to_vec(),
            witness_text: self.machine.format_word(w),
            detail: ViolationDetail::Overrun {
                length: w.len() as u64,
                allowed: self.bound.floor_eval(w.len() as u64),
                steps,
            },
        }
    }

    fn intern_all(&mut self, rec: &CrossingRecord, len: usize) -> Vec<SeqId> {
        (1..=len as i64)
            .map(|b| {
                let before = self.tables.sequences.len();
                let id = self.tables.intern(rec.at(b));
                if self.tables.sequences.len() > before {
                    self.pending.push_back(id);
                }
                id
            })
            .collect()
    }

    /// Record `w` as a base word if its boundary sequences are distinct.
    fn record_base(&mut self, w: &[Sym], out: &RunOutcome, rec: &CrossingRecord) -> bool {
        let seqs = self.intern_all(rec, w.len());
        let distinct = seqs.iter().enumerate().all(|(i, s)| !seqs[..i].contains(s));
        if distinct {
            self.tables.add_base(BaseWord { word: w.to_vec(), sequences: seqs, steps: out.steps, status: out.status });
        }
        distinct
    }

    /// Exhaustive simulation of every input up to the seed length.
    fn base_tables(&mut self) -> Flow<()> {
        let words: Vec<Word> = enumerate_inputs(&self.letters, self.seed).collect();
        let budgets: Vec<u64> = words
            .iter()
            .map(|w| u64::try_from(self.bound.floor_eval(w.len() as u64).saturating_add(1)).unwrap_or(u64::MAX))
            .collect();
        let total = budgets.iter().fold(0u64, |a, &b| a.saturating_add(b));
        if total <= self.effort.remaining() && words.len() > 1 {
            // Everything fits in the budget: simulate in parallel, then merge
            // in enumeration order so the tables do not depend on scheduling.
            let machine = self.machine;
            let jobs = self.limits.jobs;
            let work = || -> Vec<(RunOutcome, CrossingRecord)> {
                words.par_iter().zip(&budgets).map(|(w, &b)| record_word(machine, w, b)).collect()
            };
            let runs = match jobs {
                Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
                    Ok(pool) => pool.install(work),
                    Err(_) => work(),
                },
                None => work(),
            };
            for ((w, (out, rec)), &b) in words.iter().zip(runs).zip(&budgets) {
                self.effort.spend(out.steps.max(1));
                self.judge(w, &out, &rec, b)?;
                self.record_base(w, &out, &rec);
            }
        } else {
            for w in &words {
                let (out, rec) = self.simulate(w)?;
                self.record_base(w, &out, &rec);
            }
        }
        Ok(())
    }

    /// Probe every pending sequence against every word up to the seed length.
    fn saturate(&mut self) -> Flow<()> {
        let ys: Vec<Word> = enumerate_inputs(&self.letters, self.seed).filter(|y| !y.is_empty()).collect();
        while let Some(s) = self.pending.pop_front() {
            for y in &ys {
                self.probe_into(s, y, false)?;
            }
        }
        Ok(())
    }

    /// Probe `(s, y)` and store it when primitive. With `must`, failing to be
    /// primitive is an inconsistency.
    fn probe_into(&mut self, s: SeqId, y: &[Sym], must: bool) -> Flow<bool> {
        if self.tables.has_part(s, y) {
            return Ok(false);
        }
        let r = probe_primitive_compat(self.machine, self.tables.seq(s), y, self.c);
        if !self.effort.spend(r.steps + 1) {
            return out_of_effort("probing parts");
        }
        if !r.primitive {
            if must {
                return internal(format!(
                    "part `{}` cut from a real run failed its probe: {:?}",
                    self.machine.format_word(y),
                    r.failure
                ));
            }
            return Ok(false);
        }
        let internal: Vec<SeqId> = r
            .internal
            .iter()
            .map(|seq| {
                let before = self.tables.sequences.len();
                let id = self.tables.intern(seq);
                if self.tables.sequences.len() > before {
                    self.pending.push_back(id);
                }
                id
            })
            .collect();
        Ok(self.tables.add_part(s, Part { word: y.to_vec(), internal, time: r.time }))
    }

    /// Simulate an uncovered word and add its base word and parts.
    fn absorb(&mut self, w: &[Sym]) -> Flow<()> {
        let (_, rec) = self.simulate(w)?;
        let seqs = self.intern_all(&rec, w.len());
        let d = decompose(&seqs);
        let mut progress = false;
        let x: Word = d.base.iter().map(|&i| w[i]).collect();
        if !self.tables.has_base(&x) {
            let (out, rec) = self.simulate(&x)?;
            if !self.record_base(&x, &out, &rec) {
                return internal(format!(
                    "base word `{}` of `{}` has repeated boundary sequences",
                    self.machine.format_word(&x),
                    self.machine.format_word(w)
                ));
            }
            progress = true;
        }
        for (s, cells) in &d.parts {
            let y: Word = cells.iter().map(|&i| w[i]).collect();
            progress |= self.probe_into(*s, &y, true)?;
        }
        if !progress {
            return internal(format!(
                "uncovered word `{}` decomposes into known pieces",
                self.machine.format_word(w)
            ));
        }
        Ok(())
    }

    /// Check the inequality for every realizable family of parts at every
    /// base word.
    fn families(&mut self) -> Flow<()> {
        for xi in 0..self.tables.base.len() {
            let x = &self.tables.base[xi];
            if x.word.is_empty() {
                // No boundaries to insert at; the direct check already ran.
                continue;
            }
            // Pairs whose sequence can become available from x.
            let mut avail: HashSet<SeqId> = x.sequences.iter().copied().collect();
            loop {
                let before = avail.len();
                for &(s, j) in self.tables.pairs() {
                    if avail.contains(&s) {
                        avail.extend(self.tables.parts[s][j].internal.iter().copied());
                    }
                }
                if avail.len() == before {
                    break;
                }
            }
            let candidates: Vec<usize> =
                (0..self.tables.pairs().len()).filter(|&p| avail.contains(&self.tables.pairs()[p].0)).collect();
            let m = candidates.len();
            if m >= 63 || (1u64 << m) > self.effort.remaining() {
                return out_of_effort("enumerating part families");
            }
            for mask in 0u64..(1u64 << m) {
                self.effort.spend(1);
                let chosen: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| candidates[i]).collect();
                if !self.checked.insert((xi, chosen.clone())) {
                    continue;
                }
                let family: Vec<(SeqId, usize)> = chosen.iter().map(|&p| self.tables.pairs()[p]).collect();
                let x = &self.tables.base[xi];
                if !realizable(&self.tables, &x.sequences, &family) {
                    continue;
                }
                let parts: Vec<&Part> = family.iter().map(|&p| self.tables.part(p)).collect();
                let witness = family_inequality_witness(self.bound, x, &parts).map_err(DecisionError::from)?;
                if let Some(mult) = witness {
                    return Err(Stop::Verdict(self.family_violation(xi, &family, &mult)?));
                }
            }
        }
        Ok(())
    }

    /// Build the pumped word for a failed family and replay it.
    fn family_violation(&mut self, xi: usize, family: &[(SeqId, usize)], mult: &[u64]) -> Flow<Verdict> {
        let x = self.tables.base[xi].clone();
        let structural = Verdict::Violation {
            witness: x.word.clone(),
            witness_text: self.machine.format_word(&x.word),
            detail: ViolationDetail::FamilyInequality {
                base: x.word.clone(),
                parts: family
                    .iter()
                    .map(|&(s, j)| {
                        (self.tables.seq(s).iter().map(|q| q.0).collect(), self.tables.parts[s][j].word.clone())
                    })
                    .collect(),
                multiplicities: mult.to_vec(),
            },
        };
        let Some(word) = compose(&self.tables, &x, family, mult) else {
            return Ok(structural);
        };
        match self.simulate(&word) {
            Err(Stop::Verdict(v @ Verdict::Violation { .. })) => Ok(v),
            Err(Stop::Verdict(_)) | Ok(_) => Ok(structural),
            Err(e) => Err(e),
        }
    }
}

/// Longest pumped word worth replaying.
const MAX_COMPOSED: u64 = 1 << 24;

/// Insert `y_i^{k_i}` for every family member into `x`, each at a boundary
/// carrying its sequence, in an order that keeps every sequence available.
pub(crate) fn compose(tables: &AnalysisTables, x: &BaseWord, family: &[(SeqId, usize)], mult: &[u64]) -> Option<Word> {
    let total = family
        .iter()
        .zip(mult)
        .try_fold(x.word.len() as u64, |acc, (&p, &k)| acc.checked_add((tables.part(p).word.len() as u64).checked_mul(k)?))?;
    if total > MAX_COMPOSED {
        return None;
    }
    let mut word = x.word.clone();
    // seqs[b - 1] is the sequence at boundary b.
    let mut seqs = x.sequences.clone();
    let mut used = vec![false; family.len()];
    for _ in 0..family.len() {
        let i = (0..family.len()).find(|&i| !used[i] && seqs.contains(&family[i].0))?;
        used[i] = true;
        let (s, _) = family[i];
        let part = tables.part(family[i]);
        let b = seqs.iter().position(|&t| t == s)? + 1;
        let mut cells = Vec::new();
        let mut new_seqs = Vec::new();
        for _ in 0..mult[i] {
            cells.extend_from_slice(&part.word);
            new_seqs.extend_from_slice(&part.internal);
            new_seqs.push(s);
        }
        word.splice(b..b, cells);
        seqs.splice(b..b, new_seqs);
    }
    Some(word)
}
