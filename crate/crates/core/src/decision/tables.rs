use std::collections::{HashMap, HashSet};

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::machine::{StateId, Status, Sym, Word};

/// A crossing sequence: the states entered by successive crossings of one
/// boundary.
pub type Seq = Vec<StateId>;

/// Index of an interned crossing sequence.
pub type SeqId = usize;

/// An input on which the sequences at boundaries `1..=|x|` are pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseWord {
    pub word: Word,
    /// Sequence at boundary `i` is `sequences[i - 1]`.
    pub sequences: Vec<SeqId>,
    pub steps: u64,
    pub status: Status,
}

/// A word `y` that is primitive compatible with a sequence `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub word: Word,
    /// Sequences at the internal boundaries `1..|y|`.
    pub internal: Vec<SeqId>,
    /// Steps spent inside `y`, counting the crossings of `s` on its left end.
    pub time: u64,
}

/// The working state of the analysis: base words `X`, sequences `S`, and for
/// each `s ∈ S` its primitive compatible parts `Y_s`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AnalysisTables {
    pub sequences: IndexSet<Seq>,
    pub base: Vec<BaseWord>,
    /// `parts[s]` is `Y_s`.
    pub parts: Vec<Vec<Part>>,
    /// Crossing-length cap in force.
    pub c: u64,
    /// Length cap in force (`(q^{c+1}−1)/(q−1)` when certified), in decimal
    /// or, when too large for that, in closed form.
    pub k: String,
    #[serde(skip)]
    base_index: HashMap<Word, usize>,
    #[serde(skip)]
    part_index: HashSet<(SeqId, Word)>,
    /// Every stored part as `(s, index into parts[s])`, in insertion order.
    #[serde(skip)]
    pairs: Vec<(SeqId, usize)>,
}

/// Summary sizes for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSizes {
    pub base_words: usize,
    pub sequences: usize,
    pub parts: usize,
    pub longest_sequence: usize,
    pub longest_part: usize,
}

impl AnalysisTables {
    pub fn new(c: u64, k: String) -> Self {
        AnalysisTables { c, k, ..Default::default() }
    }

    pub fn intern(&mut self, seq: &[StateId]) -> SeqId {
        if let Some(i) = self.sequences.get_index_of(seq) {
            return i;
        }
        let (i, _) = self.sequences.insert_full(seq.to_vec());
        self.parts.push(Vec::new());
        i
    }

    pub fn seq(&self, id: SeqId) -> &[StateId] {
        &self.sequences[id]
    }

    pub fn seq_id(&self, seq: &[StateId]) -> Option<SeqId> {
        self.sequences.get_index_of(seq)
    }

    pub fn has_base(&self, word: &[Sym]) -> bool {
        self.base_index.contains_key(word)
    }

    pub fn base_word(&self, word: &[Sym]) -> Option<&BaseWord> {
        self.base_index.get(word).map(|&i| &self.base[i])
    }

    pub fn add_base(&mut self, entry: BaseWord) -> bool {
        if self.base_index.contains_key(&entry.word) {
            return false;
        }
        self.base_index.insert(entry.word.clone(), self.base.len());
        self.base.push(entry);
        true
    }

    pub fn has_part(&self, s: SeqId, y: &[Sym]) -> bool {
        self.part_index.contains(&(s, y.to_vec()))
    }

    pub fn add_part(&mut self, s: SeqId, part: Part) -> bool {
        if !self.part_index.insert((s, part.word.clone())) {
            return false;
        }
        self.pairs.push((s, self.parts[s].len()));
        self.parts[s].push(part);
        true
    }

    /// All stored `(s, y)` pairs in insertion order.
    pub fn pairs(&self) -> &[(SeqId, usize)] {
        &self.pairs
    }

    pub fn part(&self, pair: (SeqId, usize)) -> &Part {
        &self.parts[pair.0][pair.1]
    }

    pub fn part_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn sizes(&self) -> TableSizes {
        TableSizes {
            base_words: self.base.len(),
            sequences: self.sequences.len(),
            parts: self.pairs.len(),
            longest_sequence: self.sequences.iter().map(Vec::len).max().unwrap_or(0),
            longest_part: self.pairs.iter().map(|&p| self.part(p).word.len()).max().unwrap_or(0),
        }
    }

    /// Rebuild the lookup indexes after deserialization.
    pub fn reindex(&mut self) {
        self.base_index = self.base.iter().enumerate().map(|(i, b)| (b.word.clone(), i)).collect();
        self.part_index.clear();
        self.pairs.clear();
        for (s, list) in self.parts.iter().enumerate() {
            for (j, p) in list.iter().enumerate() {
                self.part_index.insert((s, p.word.clone()));
                self.pairs.push((s, j));
            }
        }
    }
}

/// Whether `family` can all be inserted, each at least once, starting from a
/// base word whose boundary sequences are `start`: repeatedly consume any
/// pair whose sequence is already available, making its internal sequences
/// available. Order does not matter since availability only grows.
pub fn realizable(tables: &AnalysisTables, start: &[SeqId], family: &[(SeqId, usize)]) -> bool {
    let mut avail: HashSet<SeqId> = start.iter().copied().collect();
    let mut used = vec![false; family.len()];
    let mut remaining = family.len();
    loop {
        let mut changed = false;
        for (i, &(s, j)) in family.iter().enumerate() {
            if !used[i] && avail.contains(&s) {
                used[i] = true;
                remaining -= 1;
                changed = true;
                avail.extend(tables.parts[s][j].internal.iter().copied());
            }
        }
        if remaining == 0 {
            return true;
        }
        if !changed {
            return false;
        }
    }
}
