use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DfaError {
    #[error("alphabet mismatch: {0:?} vs {1:?}")]
    AlphabetMismatch(Vec<String>, Vec<String>),
    #[error("malformed automaton: {0}")]
    Malformed(String),
}

/// A complete deterministic automaton. Letters are indices into `alphabet`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<String>,
    start: usize,
    accepting: Vec<bool>,
    /// `delta[state * |alphabet| + letter]`.
    delta: Vec<usize>,
}

impl Dfa {
    pub fn from_parts(
        alphabet: Vec<String>,
        start: usize,
        accepting: Vec<bool>,
        delta: Vec<usize>,
    ) -> Result<Dfa, DfaError> {
        let n = accepting.len();
        if n == 0 || start >= n {
            return Err(DfaError::Malformed("start state out of range".into()));
        }
        if delta.len() != n * alphabet.len() || delta.iter().any(|&t| t >= n) {
            return Err(DfaError::Malformed("transition table is not total".into()));
        }
        Ok(Dfa { alphabet, start, accepting, delta })
    }

    /// The empty language.
    pub fn empty(alphabet: &[String]) -> Dfa {
        Dfa { alphabet: alphabet.to_vec(), start: 0, accepting: vec![false], delta: vec![0; alphabet.len()] }
    }

    /// Every word.
    pub fn universal(alphabet: &[String]) -> Dfa {
        Dfa { alphabet: alphabet.to_vec(), start: 0, accepting: vec![true], delta: vec![0; alphabet.len()] }
    }

    /// Just the empty word.
    pub fn epsilon(alphabet: &[String]) -> Dfa {
        Dfa::word(alphabet, &[])
    }

    /// Exactly one word.
    pub fn word(alphabet: &[String], word: &[usize]) -> Dfa {
        let k = alphabet.len();
        let n = word.len() + 2;
        let sink = n - 1;
        let mut delta = vec![sink; n * k];
        for (i, &a) in word.iter().enumerate() {
            delta[i * k + a] = i + 1;
        }
        let mut accepting = vec![false; n];
        accepting[word.len()] = true;
        Dfa { alphabet: alphabet.to_vec(), start: 0, accepting, delta }.minimize()
    }

    /// A finite set of words.
    pub fn finite(alphabet: &[String], words: &[Vec<usize>]) -> Dfa {
        let mut nfa = Nfa::new(alphabet.len());
        let start = nfa.add_state(false);
        nfa.starts.push(start);
        for w in words {
            let mut at = start;
            for &a in w {
                let next = nfa.add_state(false);
                nfa.edges[at].push((a, next));
                at = next;
            }
            nfa.accepting[at] = true;
        }
        nfa.determinize(alphabet)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let q = word.iter().fold(self.start, |q, &a| self.next(q, a));
        self.accepting[q]
    }

    /// Parse a word written as letter names, using the same rules as machine
    /// inputs: separators if present, else greedy longest match.
    pub fn letters_of(&self, text: &str) -> Option<Vec<usize>> {
        let find = |t: &str| self.alphabet.iter().position(|s| s == t);
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Some(Vec::new());
        }
        if text.contains(|c: char| c.is_whitespace() || c == ',') {
            return text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(find)
                .collect();
        }
        let mut order: Vec<usize> = (0..self.alphabet.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.alphabet[i].len()));
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let i = *order.iter().find(|&&i| rest.starts_with(&self.alphabet[i]))?;
            out.push(i);
            rest = &rest[self.alphabet[i].len()..];
        }
        Some(out)
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        let names: Vec<&str> = word.iter().map(|&a| self.alphabet[a].as_str()).collect();
        if self.alphabet.iter().all(|s| s.chars().count() == 1) {
            names.concat()
        } else {
            names.join(" ")
        }
    }

    fn check_alphabet(&self, other: &Dfa) -> Result<(), DfaError> {
        if self.alphabet != other.alphabet {
            return Err(DfaError::AlphabetMismatch(self.alphabet.clone(), other.alphabet.clone()));
        }
        Ok(())
    }

    fn to_nfa(&self, nfa: &mut Nfa) -> usize {
        let base = nfa.accepting.len();
        for q in 0..self.state_count() {
            nfa.add_state(self.accepting[q]);
        }
        let k = self.alphabet.len();
        for q in 0..self.state_count() {
            for a in 0..k {
                nfa.edges[base + q].push((a, base + self.next(q, a)));
            }
        }
        base
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa, DfaError> {
        self.check_alphabet(other)?;
        let mut nfa = Nfa::new(self.alphabet.len());
        let a = self.to_nfa(&mut nfa);
        let b = other.to_nfa(&mut nfa);
        nfa.starts = vec![a + self.start, b + other.start];
        Ok(nfa.determinize(&self.alphabet))
    }

    pub fn concat(&self, other: &Dfa) -> Result<Dfa, DfaError> {
        self.check_alphabet(other)?;
        let mut nfa = Nfa::new(self.alphabet.len());
        let a = self.to_nfa(&mut nfa);
        let b = other.to_nfa(&mut nfa);
        let b_start = b + other.start;
        // A move that completes a word of A may hand over to B's start.
        for p in 0..self.state_count() {
            for x in 0..self.alphabet.len() {
                let f = self.next(p, x);
                if self.accepting[f] {
                    nfa.edges[a + p].push((x, b_start));
                }
            }
        }
        for q in 0..self.state_count() {
            nfa.accepting[a + q] = false;
        }
        nfa.starts.push(a + self.start);
        if self.accepting[self.start] {
            nfa.starts.push(b_start);
        }
        Ok(nfa.determinize(&self.alphabet))
    }

    pub fn star(&self) -> Dfa {
        let mut nfa = Nfa::new(self.alphabet.len());
        let base = self.to_nfa(&mut nfa);
        let s0 = nfa.add_state(true);
        for p in 0..self.state_count() {
            for x in 0..self.alphabet.len() {
                if self.accepting[self.next(p, x)] {
                    nfa.edges[base + p].push((x, s0));
                }
            }
        }
        // s0 behaves like the start state, including the new edges.
        let start_edges = nfa.edges[base + self.start].clone();
        nfa.edges[s0].extend(start_edges);
        // Only s0 and states reached after completing a factor accept.
        for q in 0..self.state_count() {
            nfa.accepting[base + q] = false;
        }
        nfa.starts.push(s0);
        nfa.determinize(&self.alphabet)
    }

    /// Union of any number of automata; the empty language for none.
    pub fn union_all<'a>(alphabet: &[String], dfas: impl IntoIterator<Item = &'a Dfa>) -> Result<Dfa, DfaError> {
        let mut nfa = Nfa::new(alphabet.len());
        for d in dfas {
            if d.alphabet != alphabet {
                return Err(DfaError::AlphabetMismatch(alphabet.to_vec(), d.alphabet.clone()));
            }
            let base = d.to_nfa(&mut nfa);
            nfa.starts.push(base + d.start);
        }
        Ok(nfa.determinize(alphabet))
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        for a in d.accepting.iter_mut() {
            *a = !*a;
        }
        d
    }

    /// `(true, None)` if every word is accepted, else the shortest rejected
    /// word (shortlex-least among the shortest).
    pub fn is_universal(&self) -> (bool, Option<Vec<usize>>) {
        match self.shortest_where(|q| !self.accepting[q]) {
            None => (true, None),
            Some(w) => (false, Some(w)),
        }
    }

    /// The shortest accepted word, if any.
    pub fn shortest_accepted(&self) -> Option<Vec<usize>> {
        self.shortest_where(|q| self.accepting[q])
    }

    fn shortest_where(&self, target: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        let n = self.state_count();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(q) = queue.pop_front() {
            if target(q) {
                let mut word = Vec::new();
                let mut at = q;
                while let Some((p, a)) = parent[at] {
                    word.push(a);
                    at = p;
                }
                word.reverse();
                return Some(word);
            }
            for a in 0..self.alphabet.len() {
                let r = self.next(q, a);
                if !seen[r] {
                    seen[r] = true;
                    parent[r] = Some((q, a));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    /// Shortest word on which the two automata disagree, if any.
    pub fn equivalent(&self, other: &Dfa) -> Result<(bool, Option<Vec<usize>>), DfaError> {
        self.check_alphabet(other)?;
        let w = self.product_search(other, |x, y| x != y);
        Ok((w.is_none(), w))
    }

    /// Shortest word accepted by `self` but not by `other`, if any.
    pub fn difference_witness(&self, other: &Dfa) -> Result<Option<Vec<usize>>, DfaError> {
        self.check_alphabet(other)?;
        Ok(self.product_search(other, |x, y| x && !y))
    }

    pub fn is_subset_of(&self, other: &Dfa) -> Result<bool, DfaError> {
        Ok(self.difference_witness(other)?.is_none())
    }

    fn product_search(&self, other: &Dfa, bad: impl Fn(bool, bool) -> bool) -> Option<Vec<usize>> {
        let k = self.alphabet.len();
        let m = other.state_count();
        let idx = |p: usize, q: usize| p * m + q;
        let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
        let start = idx(self.start, other.start);
        let mut seen = vec![false; self.state_count() * m];
        seen[start] = true;
        let mut queue = VecDeque::from([(self.start, other.start)]);
        while let Some((p, q)) = queue.pop_front() {
            if bad(self.accepting[p], other.accepting[q]) {
                let mut word = Vec::new();
                let mut at = idx(p, q);
                while let Some(&(prev, a)) = parent.get(&at) {
                    word.push(a);
                    at = prev;
                }
                word.reverse();
                return Some(word);
            }
            for a in 0..k {
                let (p2, q2) = (self.next(p, a), other.next(q, a));
                let j = idx(p2, q2);
                if !seen[j] {
                    seen[j] = true;
                    parent.insert(j, (idx(p, q), a));
                    queue.push_back((p2, q2));
                }
            }
        }
        None
    }

    /// Minimal equivalent automaton (Hopcroft's partition refinement), with
    /// states renumbered in breadth-first order from the start state.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let reach = self.reachable();
        let live: Vec<usize> = (0..self.state_count()).filter(|&q| reach[q]).collect();
        let mut local = vec![usize::MAX; self.state_count()];
        for (i, &q) in live.iter().enumerate() {
            local[q] = i;
        }
        let n = live.len();
        let next = |i: usize, a: usize| local[self.next(live[i], a)];

        let mut inverse: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; k];
        for i in 0..n {
            for a in 0..k {
                inverse[a][next(i, a)].push(i);
            }
        }

        let (acc, rej): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| self.accepting[live[i]]);
        let mut blocks: Vec<Vec<usize>> = [acc, rej].into_iter().filter(|b| !b.is_empty()).collect();
        let mut block_of = vec![0; n];
        for (b, members) in blocks.iter().enumerate() {
            for &i in members {
                block_of[i] = b;
            }
        }
        let mut queued = vec![true; blocks.len()];
        let mut work: Vec<usize> = (0..blocks.len()).collect();
        let mut mark = vec![false; n];

        while let Some(splitter) = work.pop() {
            queued[splitter] = false;
            let members = blocks[splitter].clone();
            for a in 0..k {
                let mut touched: HashMap<usize, Vec<usize>> = HashMap::new();
                for &t in &members {
                    for &p in &inverse[a][t] {
                        if !mark[p] {
                            mark[p] = true;
                            touched.entry(block_of[p]).or_default().push(p);
                        }
                    }
                }
                for (&b, hit) in &touched {
                    for &p in hit {
                        mark[p] = false;
                    }
                    if hit.len() == blocks[b].len() {
                        continue;
                    }
                    let nb = blocks.len();
                    blocks[b].retain(|p| !hit.contains(p));
                    for &p in hit {
                        block_of[p] = nb;
                    }
                    blocks.push(hit.clone());
                    if queued[b] {
                        queued.push(true);
                        work.push(nb);
                    } else {
                        let smaller = if blocks[nb].len() <= blocks[b].len() { nb } else { b };
                        queued.push(false);
                        queued[smaller] = true;
                        work.push(smaller);
                    }
                }
            }
        }

        // Renumber blocks breadth-first from the start block.
        let mut order = vec![usize::MAX; blocks.len()];
        let start_block = block_of[local[self.start]];
        order[start_block] = 0;
        let mut queue = VecDeque::from([start_block]);
        let mut count = 1;
        let mut delta = Vec::new();
        let mut accepting = Vec::new();
        while let Some(b) = queue.pop_front() {
            let rep = blocks[b][0];
            accepting.push(self.accepting[live[rep]]);
            for a in 0..k {
                let t = block_of[next(rep, a)];
                if order[t] == usize::MAX {
                    order[t] = count;
                    count += 1;
                    queue.push_back(t);
                }
                delta.push(order[t]);
            }
        }
        Dfa { alphabet: self.alphabet.clone(), start: 0, accepting, delta }
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(q) = stack.pop() {
            for a in 0..self.alphabet.len() {
                let r = self.next(q, a);
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        seen
    }

    pub fn to_document(&self) -> DfaDocument {
        let k = self.alphabet.len();
        let mut transitions = Vec::with_capacity(self.delta.len());
        for q in 0..self.state_count() {
            for a in 0..k {
                transitions.push(DfaTransition { from: q, symbol: self.alphabet[a].clone(), to: self.next(q, a) });
            }
        }
        DfaDocument {
            alphabet: self.alphabet.clone(),
            states: (0..self.state_count()).collect(),
            start: self.start,
            accepting: (0..self.state_count()).filter(|&q| self.accepting[q]).collect(),
            transitions,
        }
    }

    pub fn from_document(doc: &DfaDocument) -> Result<Dfa, DfaError> {
        let n = doc.states.len();
        if doc.states.iter().enumerate().any(|(i, &s)| i != s) {
            return Err(DfaError::Malformed("states must be numbered 0..n".into()));
        }
        let k = doc.alphabet.len();
        let mut delta = vec![usize::MAX; n * k];
        for t in &doc.transitions {
            let a = doc
                .alphabet
                .iter()
                .position(|s| s == &t.symbol)
                .ok_or_else(|| DfaError::Malformed(format!("unknown symbol `{}`", t.symbol)))?;
            if t.from >= n || t.to >= n {
                return Err(DfaError::Malformed("transition state out of range".into()));
            }
            delta[t.from * k + a] = t.to;
        }
        let mut accepting = vec![false; n];
        for &q in &doc.accepting {
            *accepting
                .get_mut(q)
                .ok_or_else(|| DfaError::Malformed("accepting state out of range".into()))? = true;
        }
        Dfa::from_parts(doc.alphabet.clone(), doc.start, accepting, delta)
    }

    /// Graphviz rendering; parallel edges are merged into one labelled edge.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n");
        for q in 0..self.state_count() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  q{q} [shape={shape}];");
        }
        let _ = writeln!(out, "  init -> q{};", self.start);
        for q in 0..self.state_count() {
            let mut by_target: Vec<(usize, Vec<&str>)> = Vec::new();
            for a in 0..self.alphabet.len() {
                let t = self.next(q, a);
                match by_target.iter_mut().find(|(x, _)| *x == t) {
                    Some((_, labels)) => labels.push(&self.alphabet[a]),
                    None => by_target.push((t, vec![&self.alphabet[a]])),
                }
            }
            for (t, labels) in by_target {
                let label = labels.join(",").replace('"', "\\\"");
                let _ = writeln!(out, "  q{q} -> q{t} [label=\"{label}\"];");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaTransition {
    pub from: usize,
    pub symbol: String,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaDocument {
    pub alphabet: Vec<String>,
    pub states: Vec<usize>,
    pub start: usize,
    pub accepting: Vec<usize>,
    pub transitions: Vec<DfaTransition>,
}

/// Epsilon-free nondeterministic automaton with several start states.
#[derive(Debug, Clone)]
pub(crate) struct Nfa {
    letters: usize,
    pub(crate) starts: Vec<usize>,
    pub(crate) accepting: Vec<bool>,
    pub(crate) edges: Vec<Vec<(usize, usize)>>,
}

impl Nfa {
    pub(crate) fn new(letters: usize) -> Nfa {
        Nfa { letters, starts: Vec::new(), accepting: Vec::new(), edges: Vec::new() }
    }

    pub(crate) fn add_state(&mut self, accepting: bool) -> usize {
        self.accepting.push(accepting);
        self.edges.push(Vec::new());
        self.accepting.len() - 1
    }

    /// Subset construction followed by minimization.
    pub(crate) fn determinize(&self, alphabet: &[String]) -> Dfa {
        debug_assert_eq!(alphabet.len(), self.letters);
        let n = self.accepting.len();
        let words = n.div_ceil(64).max(1);
        let k = self.letters;
        let set_of = |states: &[usize]| {
            let mut bits = vec![0u64; words];
            for &s in states {
                bits[s / 64] |= 1 << (s % 64);
            }
            bits
        };
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut subsets: Vec<Vec<u64>> = Vec::new();
        let start = set_of(&self.starts);
        index.insert(start.clone(), 0);
        subsets.push(start);
        let mut delta = Vec::new();
        let mut accepting = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let cur = subsets[i].clone();
            let mut acc = false;
            let mut next = vec![vec![0u64; words]; k];
            for (w, &bits) in cur.iter().enumerate() {
                let mut b = bits;
                while b != 0 {
                    let s = w * 64 + b.trailing_zeros() as usize;
                    b &= b - 1;
                    acc |= self.accepting[s];
                    for &(a, t) in &self.edges[s] {
                        next[a][t / 64] |= 1 << (t % 64);
                    }
                }
            }
            accepting.push(acc);
            for set in next {
                let id = match index.get(&set) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len();
                        index.insert(set.clone(), id);
                        subsets.push(set);
                        id
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        Dfa { alphabet: alphabet.to_vec(), start: 0, accepting, delta }.minimize()
    }
}
