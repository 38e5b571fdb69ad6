//! Deciding whether a one-tape machine runs in time `T(n)`, with
//! three-valued verdicts.
//!
//! When `T(n_0) < n_0 + 1` for some `n_0` the machine cannot read past cell
//! `n_0`, so an exhaustive check up to `n_0` settles the question. Otherwise
//! crossing sequences are bounded by a computable constant `c` and every
//! input decomposes into a base word with pairwise-distinct boundary
//! sequences plus primitive parts pumped in at matching boundaries. The
//! analysis collects base words and parts, checks that the regular language
//! they generate is everything, and checks each family of parts against the
//! bound's linear inequality.

mod analysis;
pub mod decompose;
mod probe;
mod tables;
mod trivial;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{BoundError, TimeBound};
use crate::machine::Word;

pub use analysis::{check_time_one_tape, Analysis};
pub use probe::{probe_primitive_compat, CompatResult, FailureReason};
pub use tables::{realizable, AnalysisTables, BaseWord, Part, Seq, SeqId, TableSizes};
pub use trivial::check_time_multi_tape;

/// Default work budget: machine steps plus probes plus automaton states.
pub const DEFAULT_EFFORT: u64 = 200_000_000;
/// Default length of the words enumerated before refinement starts.
pub const DEFAULT_SEED_LEN: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    RunsInTime,
    Violation { witness: Word, witness_text: String, detail: ViolationDetail },
    Inconclusive { exhausted: Exhausted, note: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ViolationDetail {
    /// Replaying the witness takes more than `⌊T(|w|)⌋` steps.
    Overrun {
        length: u64,
        #[serde(with = "wide")]
        allowed: u128,
        steps: u64,
    },
    /// The witness produced a crossing sequence longer than the certified
    /// cap, which no machine running in time `T` can do.
    CrossingLength { boundary: i64, length: u64, cap: u64 },
    /// Structural: the witness is not generated by the collected base words
    /// and parts.
    CoverageGap,
    /// Structural: pumping these parts into `base` with the given
    /// multiplicities breaks the bound by the step-count formula.
    FamilyInequality { base: Word, parts: Vec<(Vec<u32>, Word)>, multiplicities: Vec<u64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exhausted {
    /// A user-supplied crossing-length cap was hit, or the analysis passed
    /// under it without certification.
    CrossingCap,
    /// A user-supplied length cap was hit or left the analysis uncertified.
    LengthCap,
    /// The work budget ran out.
    Effort,
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::RunsInTime => 0,
            Verdict::Violation { .. } => 1,
            Verdict::Inconclusive { .. } => 2,
        }
    }

    pub fn witness(&self) -> Option<&Word> {
        match self {
            Verdict::Violation { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn is_runs_in_time(&self) -> bool {
        matches!(self, Verdict::RunsInTime)
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, Verdict::Violation { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Use this crossing-length cap instead of the certified constant.
    pub cap_c: Option<u64>,
    /// Never examine inputs or parts longer than this.
    pub max_len: Option<usize>,
    pub effort: u64,
    /// Length of the initial exhaustive enumeration (clamped by `max_len`
    /// when that is given, which then takes its place).
    pub seed_len: usize,
    /// Worker threads for the base enumeration; `None` uses rayon's default.
    pub jobs: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { cap_c: None, max_len: None, effort: DEFAULT_EFFORT, seed_len: DEFAULT_SEED_LEN, jobs: None }
    }
}

impl Limits {
    pub fn certified() -> Self {
        Self::default()
    }

    pub fn capped(cap_c: u64, max_len: usize) -> Self {
        Limits { cap_c: Some(cap_c), max_len: Some(max_len), ..Self::default() }
    }
}

#[derive(Debug, Error)]
pub enum DecisionError {
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(
        "outside decidable range: bound {bound} satisfies T(n) >= n+1 for every n, and for multi-tape \
         machines that question is undecidable"
    )]
    OutsideDecidableRange { bound: String },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Shared work counter.
#[derive(Debug, Clone)]
pub(crate) struct Effort {
    limit: u64,
    used: u64,
}

impl Effort {
    pub(crate) fn new(limit: u64) -> Self {
        Effort { limit, used: 0 }
    }

    /// Charge `n` units; false once the limit is passed.
    pub(crate) fn spend(&mut self, n: u64) -> bool {
        self.used = self.used.saturating_add(n);
        self.used <= self.limit
    }

    pub(crate) fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used)
    }

    pub(crate) fn used(&self) -> u64 {
        self.used
    }
}

/// Solutions of the family inequality: `Some(k)` gives multiplicities
/// `k_i >= 1` for which pumping breaks the bound, `None` means the bound
/// holds for every pumping.
///
/// With `A_0 = |x| + Σ|y_i|`, `A_i = |y_i|`, `B_0 = T_x + Σ T_i` and
/// `B_i = T_i`, a solution `z` of the manageability query gives `k_i = 1 + z_i`.
/// An empty family reduces to `T_x <= ⌊T(|x|)⌋`.
pub fn family_inequality_witness(
    bound: &dyn TimeBound,
    base: &BaseWord,
    parts: &[&Part],
) -> Result<Option<Vec<u64>>, BoundError> {
    if parts.is_empty() {
        let ok = base.steps as u128 <= bound.floor_eval(base.word.len() as u64);
        return Ok((!ok).then(Vec::new));
    }
    let mut a = vec![base.word.len() as u64];
    let mut b = vec![base.steps];
    for p in parts {
        a[0] += p.word.len() as u64;
        b[0] += p.time;
        a.push(p.word.len() as u64);
        b.push(p.time);
    }
    Ok(bound.witness_linear_inequality(&a, &b)?.map(|z| z.into_iter().map(|z| z + 1).collect()))
}

/// Whether every pumping of `parts` into `base` respects the bound.
pub fn check_family_inequality(bound: &dyn TimeBound, base: &BaseWord, parts: &[&Part]) -> Result<bool, BoundError> {
    Ok(family_inequality_witness(bound, base, parts)?.is_none())
}

/// `u128` as a JSON number when it fits in 64 bits and as a decimal string
/// otherwise. Internally tagged enums cannot carry a plain `u128` through
/// deserialization.
mod wide {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(*v) {
            Ok(small) => s.serialize_u64(small),
            Err(_) => s.serialize_str(&v.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(u64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(n) => Ok(n as u128),
            Repr::Text(t) => t.parse().map_err(de::Error::custom),
        }
    }
}
