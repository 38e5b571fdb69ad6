//! The languages generated by base words and primitive parts.
//!
//! `L(s, S̃)` is the set of words that fit between two boundaries carrying
//! `s` using only parts whose internal sequences lie in `S̃`:
//!
//! ```text
//! L(s, S̃) = ( ⋃_{y ∈ Y_s, internal ⊆ S̃∖{s}} y_1 · L(s_1, S̄) · y_2 ⋯ L(s_{k−1}, S̄) · y_k )*
//! ```
//!
//! with `S̄ = S̃∖{s}`. When `S̃ = {s}` only one-symbol parts qualify, which
//! gives the base case directly.

use std::collections::HashMap;

use crate::decision::{AnalysisTables, Effort, SeqId};
use crate::machine::Sym;

use super::dfa::Dfa;
use super::RegularError;

/// Builds and memoizes `L(s, S̃)` over one set of tables.
pub(crate) struct LanguageBuilder<'t> {
    tables: &'t AnalysisTables,
    alphabet: Vec<String>,
    letter: HashMap<Sym, usize>,
    memo: HashMap<(SeqId, Vec<SeqId>), Dfa>,
}

impl<'t> LanguageBuilder<'t> {
    /// `alphabet[i]` names the DFA letter for `letters[i]`.
    pub(crate) fn new(tables: &'t AnalysisTables, alphabet: Vec<String>, letters: &[Sym]) -> Self {
        let letter = letters.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        LanguageBuilder { tables, alphabet, letter, memo: HashMap::new() }
    }

    fn letters(&self, word: &[Sym]) -> Result<Vec<usize>, RegularError> {
        word.iter()
            .map(|s| self.letter.get(s).copied().ok_or(RegularError::ForeignSymbol(s.0)))
            .collect()
    }

    fn charge(effort: &mut Effort, dfa: &Dfa) -> Result<(), RegularError> {
        if effort.spend(dfa.state_count() as u64 * dfa.alphabet().len().max(1) as u64) {
            Ok(())
        } else {
            Err(RegularError::Effort)
        }
    }

    /// `L(s, subset)`; `subset` must be sorted and contain `s`.
    pub(crate) fn language(&mut self, s: SeqId, subset: &[SeqId], effort: &mut Effort) -> Result<Dfa, RegularError> {
        if subset.binary_search(&s).is_err() {
            return Err(RegularError::NotInSubset);
        }
        let key = (s, subset.to_vec());
        if let Some(d) = self.memo.get(&key) {
            return Ok(d.clone());
        }
        let rest: Vec<SeqId> = subset.iter().copied().filter(|&t| t != s).collect();
        let mut terms = Vec::new();
        for part in &self.tables.parts[s] {
            if !part.internal.iter().all(|t| rest.binary_search(t).is_ok()) {
                continue;
            }
            let letters = self.letters(&part.word)?;
            let mut term = Dfa::word(&self.alphabet, &letters[..1]);
            for (i, &t) in part.internal.iter().enumerate() {
                let inner = self.language(t, &rest, effort)?;
                term = term.concat(&inner)?.concat(&Dfa::word(&self.alphabet, &letters[i + 1..i + 2]))?;
                Self::charge(effort, &term)?;
            }
            terms.push(term);
        }
        let result = Dfa::union_all(&self.alphabet, &terms)?.star();
        Self::charge(effort, &result)?;
        self.memo.insert(key, result.clone());
        Ok(result)
    }

    /// `x_1 · L(s_1, S) · x_2 ⋯ x_k · L(s_k, S)` for a base word `x`, using
    /// only the base words accepted by `keep`; plus `{ε}`.
    pub(crate) fn coverage(
        &mut self,
        keep: impl Fn(usize) -> bool,
        with_epsilon: bool,
        effort: &mut Effort,
    ) -> Result<Dfa, RegularError> {
        let all: Vec<SeqId> = (0..self.tables.sequences.len()).collect();
        let mut terms = Vec::new();
        if with_epsilon {
            terms.push(Dfa::epsilon(&self.alphabet));
        }
        for (i, x) in self.tables.base.iter().enumerate() {
            if !keep(i) {
                continue;
            }
            let letters = self.letters(&x.word)?;
            let mut term = Dfa::epsilon(&self.alphabet);
            for (j, &s) in x.sequences.iter().enumerate() {
                let inner = self.language(s, &all, effort)?;
                term = term.concat(&Dfa::word(&self.alphabet, &letters[j..j + 1]))?.concat(&inner)?;
                Self::charge(effort, &term)?;
            }
            terms.push(term);
        }
        let result = Dfa::union_all(&self.alphabet, &terms)?;
        Self::charge(effort, &result)?;
        Ok(result)
    }
}

/// `L(s, subset)` over the machine's input letters `letters`, named by
/// `alphabet`.
pub fn language_of_sequence(
    tables: &AnalysisTables,
    alphabet: &[String],
    letters: &[Sym],
    s: SeqId,
    subset: &[SeqId],
    effort: u64,
) -> Result<Dfa, RegularError> {
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    LanguageBuilder::new(tables, alphabet.to_vec(), letters).language(s, &sorted, &mut Effort::new(effort))
}

/// The coverage language: `{ε}` together with every word obtained from a
/// base word by inserting parts at matching boundaries.
pub fn coverage_automaton(tables: &AnalysisTables, alphabet: &[String], letters: &[Sym], effort: u64) -> Result<Dfa, RegularError> {
    LanguageBuilder::new(tables, alphabet.to_vec(), letters).coverage(|_| true, true, &mut Effort::new(effort))
}
