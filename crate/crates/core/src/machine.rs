//! Deterministic one-tape and multi-tape Turing machines: the JSON document
//! format, validation, and step-exact simulation.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a machine state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateId(pub u32);

/// Index of a tape symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sym(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Sym {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An input word, as symbol indices into the tape alphabet.
pub type Word = Vec<Sym>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    L,
    R,
}

impl Dir {
    pub fn delta(self) -> i64 {
        match self {
            Dir::L => -1,
            Dir::R => 1,
        }
    }

    pub fn reverse(self) -> Dir {
        match self {
            Dir::L => Dir::R,
            Dir::R => Dir::L,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: StateId,
    pub write: Sym,
    pub dir: Dir,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("malformed machine document: {0}")]
    Json(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("empty symbol name")]
    EmptySymbol,
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("input alphabet is empty")]
    EmptyInputAlphabet,
    #[error("start, accept and reject states must be pairwise distinct")]
    HaltingStatesNotDistinct,
    #[error("blank symbol `{0}` is declared in the input alphabet")]
    BlankInInput(String),
    #[error("blank symbol `{0}` is not in the tape alphabet")]
    BlankNotInTape(String),
    #[error("input symbol `{0}` is not in the tape alphabet")]
    InputNotInTape(String),
    #[error("missing transition for ({state}, {read})")]
    MissingTransition { state: String, read: String },
    #[error("duplicate transition for ({state}, {read})")]
    DuplicateTransition { state: String, read: String },
    #[error("halting state `{0}` has an outgoing transition")]
    HaltingTransition(String),
    #[error("stay move `{mv}` in transition for ({state}, {read}); every step must move the head")]
    StayMove { state: String, read: String, mv: String },
    #[error("read-only input tape: transition for ({state}, {read}) writes `{write}` on tape 0")]
    ReadOnlyInput { state: String, read: String, write: String },
    #[error("multi-tape machine needs at least 2 tapes, got {0}")]
    TapeCount(usize),
    #[error("{0} machine document: {1}")]
    Shape(&'static str, String),
}

// ---------------------------------------------------------------------------
// Document format

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MachineKind {
    #[serde(rename = "one-tape")]
    OneTape,
    #[serde(rename = "multi-tape")]
    MultiTape,
}

/// A field that is a single string for one-tape machines and an array for
/// multi-tape machines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn as_slice(&self) -> &[String] {
        match self {
            OneOrMany::One(s) => std::slice::from_ref(s),
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleDoc {
    pub state: String,
    pub read: OneOrMany,
    pub write: OneOrMany,
    #[serde(rename = "move")]
    pub mv: OneOrMany,
    pub next: String,
}

/// The on-disk machine description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineDocument {
    #[serde(rename = "type")]
    pub kind: MachineKind,
    pub states: Vec<String>,
    pub start: String,
    pub accept: String,
    pub reject: String,
    pub input_alphabet: Vec<String>,
    pub tape_alphabet: Vec<String>,
    pub blank: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tapes: Option<usize>,
    pub delta: Vec<RuleDoc>,
}

/// A validated machine of either kind.
#[derive(Debug, Clone)]
pub enum Machine {
    OneTape(OneTapeMachine),
    MultiTape(MultiTapeMachine),
}

impl Machine {
    pub fn from_json(text: &str) -> Result<Machine, MachineError> {
        let doc: MachineDocument =
            serde_json::from_str(text).map_err(|e| MachineError::Json(e.to_string()))?;
        validate(&doc)
    }

    pub fn one_tape(self) -> Option<OneTapeMachine> {
        match self {
            Machine::OneTape(m) => Some(m),
            Machine::MultiTape(_) => None,
        }
    }

    pub fn multi_tape(self) -> Option<MultiTapeMachine> {
        match self {
            Machine::MultiTape(m) => Some(m),
            Machine::OneTape(_) => None,
        }
    }
}

/// Validate a machine document.
pub fn validate(doc: &MachineDocument) -> Result<Machine, MachineError> {
    let header = Header::build(doc)?;
    match doc.kind {
        MachineKind::OneTape => {
            if doc.tapes.is_some_and(|k| k != 1) {
                return Err(MachineError::Shape("one-tape", "`tapes` must be absent or 1".into()));
            }
            OneTapeMachine::from_header(header, &doc.delta).map(Machine::OneTape)
        }
        MachineKind::MultiTape => {
            let k = doc
                .tapes
                .ok_or_else(|| MachineError::Shape("multi-tape", "missing `tapes`".into()))?;
            if k < 2 {
                return Err(MachineError::TapeCount(k));
            }
            MultiTapeMachine::from_header(header, k, &doc.delta).map(Machine::MultiTape)
        }
    }
}

/// Names and alphabets shared by both machine kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Header {
    states: Vec<String>,
    symbols: Vec<String>,
    input: Vec<Sym>,
    blank: Sym,
    start: StateId,
    accept: StateId,
    reject: StateId,
    state_index: HashMap<String, StateId>,
    symbol_index: HashMap<String, Sym>,
}

impl Header {
    fn build(doc: &MachineDocument) -> Result<Header, MachineError> {
        let mut state_index = HashMap::new();
        for (i, s) in doc.states.iter().enumerate() {
            if state_index.insert(s.clone(), StateId(i as u32)).is_some() {
                return Err(MachineError::DuplicateState(s.clone()));
            }
        }
        let mut symbol_index = HashMap::new();
        for (i, s) in doc.tape_alphabet.iter().enumerate() {
            if s.is_empty() {
                return Err(MachineError::EmptySymbol);
            }
            if symbol_index.insert(s.clone(), Sym(i as u32)).is_some() {
                return Err(MachineError::DuplicateSymbol(s.clone()));
            }
        }
        let state = |name: &str| {
            state_index
                .get(name)
                .copied()
                .ok_or_else(|| MachineError::UnknownState(name.to_string()))
        };
        let (start, accept, reject) = (state(&doc.start)?, state(&doc.accept)?, state(&doc.reject)?);
        if start == accept || start == reject || accept == reject {
            return Err(MachineError::HaltingStatesNotDistinct);
        }
        let blank = *symbol_index
            .get(&doc.blank)
            .ok_or_else(|| MachineError::BlankNotInTape(doc.blank.clone()))?;
        if doc.input_alphabet.is_empty() {
            return Err(MachineError::EmptyInputAlphabet);
        }
        let mut input = Vec::new();
        let mut seen = HashSet::new();
        for s in &doc.input_alphabet {
            if s == &doc.blank {
                return Err(MachineError::BlankInInput(s.clone()));
            }
            if !seen.insert(s) {
                return Err(MachineError::DuplicateSymbol(s.clone()));
            }
            let sym = *symbol_index
                .get(s)
                .ok_or_else(|| MachineError::InputNotInTape(s.clone()))?;
            input.push(sym);
        }
        Ok(Header {
            states: doc.states.clone(),
            symbols: doc.tape_alphabet.clone(),
            input,
            blank,
            start,
            accept,
            reject,
            state_index,
            symbol_index,
        })
    }

    fn state(&self, name: &str) -> Result<StateId, MachineError> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| MachineError::UnknownState(name.to_string()))
    }

    fn symbol(&self, name: &str) -> Result<Sym, MachineError> {
        self.symbol_index
            .get(name)
            .copied()
            .ok_or_else(|| MachineError::UnknownSymbol(name.to_string()))
    }

    fn is_halting(&self, s: StateId) -> bool {
        s == self.accept || s == self.reject
    }
}

fn parse_move(mv: &str, state: &str, read: &str) -> Result<Dir, MachineError> {
    match mv {
        "L" => Ok(Dir::L),
        "R" => Ok(Dir::R),
        other => Err(MachineError::StayMove {
            state: state.to_string(),
            read: read.to_string(),
            mv: other.to_string(),
        }),
    }
}

fn dir_name(d: Dir) -> String {
    match d {
        Dir::L => "L".into(),
        Dir::R => "R".into(),
    }
}

// ---------------------------------------------------------------------------
// One-tape machines

/// A validated deterministic one-tape machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneTapeMachine {
    header: Header,
    /// Row-major `[state][symbol]`; `None` exactly on halting rows.
    delta: Vec<Option<Transition>>,
}

impl OneTapeMachine {
    fn from_header(header: Header, rules: &[RuleDoc]) -> Result<Self, MachineError> {
        let width = header.symbols.len();
        let mut delta = vec![None; header.states.len() * width];
        for rule in rules {
            let (read, write, mv) = (rule.read.as_slice(), rule.write.as_slice(), rule.mv.as_slice());
            if read.len() != 1 || write.len() != 1 || mv.len() != 1 {
                return Err(MachineError::Shape(
                    "one-tape",
                    format!("transition for `{}` must use plain strings", rule.state),
                ));
            }
            let state = header.state(&rule.state)?;
            if header.is_halting(state) {
                return Err(MachineError::HaltingTransition(rule.state.clone()));
            }
            let sym = header.symbol(&read[0])?;
            let t = Transition {
                next: header.state(&rule.next)?,
                write: header.symbol(&write[0])?,
                dir: parse_move(&mv[0], &rule.state, &read[0])?,
            };
            let slot = &mut delta[state.index() * width + sym.index()];
            if slot.is_some() {
                return Err(MachineError::DuplicateTransition {
                    state: rule.state.clone(),
                    read: read[0].clone(),
                });
            }
            *slot = Some(t);
        }
        for (si, name) in header.states.iter().enumerate() {
            if header.is_halting(StateId(si as u32)) {
                continue;
            }
            for (yi, sym) in header.symbols.iter().enumerate() {
                if delta[si * width + yi].is_none() {
                    return Err(MachineError::MissingTransition {
                        state: name.clone(),
                        read: sym.clone(),
                    });
                }
            }
        }
        Ok(OneTapeMachine { header, delta })
    }

    /// Build a machine from already-indexed parts. `delta` is called for every
    /// non-halting state and tape symbol.
    pub fn from_parts(
        states: Vec<String>,
        symbols: Vec<String>,
        input: Vec<Sym>,
        blank: Sym,
        (start, accept, reject): (StateId, StateId, StateId),
        mut delta: impl FnMut(StateId, Sym) -> Transition,
    ) -> Result<Self, MachineError> {
        let doc = MachineDocument {
            kind: MachineKind::OneTape,
            start: states[start.index()].clone(),
            accept: states[accept.index()].clone(),
            reject: states[reject.index()].clone(),
            input_alphabet: input.iter().map(|s| symbols[s.index()].clone()).collect(),
            blank: symbols[blank.index()].clone(),
            tapes: None,
            delta: Vec::new(),
            states,
            tape_alphabet: symbols,
        };
        let header = Header::build(&doc)?;
        let width = header.symbols.len();
        let mut table = vec![None; header.states.len() * width];
        for s in 0..header.states.len() {
            let state = StateId(s as u32);
            if header.is_halting(state) {
                continue;
            }
            for y in 0..width {
                table[s * width + y] = Some(delta(state, Sym(y as u32)));
            }
        }
        Ok(OneTapeMachine { header, delta: table })
    }

    pub fn state_count(&self) -> usize {
        self.header.states.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.header.symbols.len()
    }

    pub fn start(&self) -> StateId {
        self.header.start
    }

    pub fn accept(&self) -> StateId {
        self.header.accept
    }

    pub fn reject(&self) -> StateId {
        self.header.reject
    }

    pub fn blank(&self) -> Sym {
        self.header.blank
    }

    pub fn input_alphabet(&self) -> &[Sym] {
        &self.header.input
    }

    pub fn is_halting(&self, s: StateId) -> bool {
        self.header.is_halting(s)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.header.states[s.index()]
    }

    pub fn state_names(&self) -> &[String] {
        &self.header.states
    }

    pub fn symbol_name(&self, y: Sym) -> &str {
        &self.header.symbols[y.index()]
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.header.symbols
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.header.state_index.get(name).copied()
    }

    pub fn symbol_by_name(&self, name: &str) -> Option<Sym> {
        self.header.symbol_index.get(name).copied()
    }

    #[inline]
    pub fn transition(&self, state: StateId, read: Sym) -> Option<Transition> {
        self.delta[state.index() * self.header.symbols.len() + read.index()]
    }

    /// Parse a word written with this machine's input symbols.
    pub fn parse_word(&self, text: &str) -> Result<Word, MachineError> {
        parse_word(&self.header, text)
    }

    pub fn format_word(&self, w: &[Sym]) -> String {
        format_word(&self.header.symbols, w)
    }

    pub fn to_document(&self) -> MachineDocument {
        let h = &self.header;
        let mut delta = Vec::new();
        for s in 0..h.states.len() {
            for y in 0..h.symbols.len() {
                if let Some(t) = self.delta[s * h.symbols.len() + y] {
                    delta.push(RuleDoc {
                        state: h.states[s].clone(),
                        read: OneOrMany::One(h.symbols[y].clone()),
                        write: OneOrMany::One(h.symbols[t.write.index()].clone()),
                        mv: OneOrMany::One(dir_name(t.dir)),
                        next: h.states[t.next.index()].clone(),
                    });
                }
            }
        }
        header_document(h, MachineKind::OneTape, None, delta)
    }

    /// Start a simulation on `input` written at cells `0..|input|`.
    pub fn stepper(&self, input: &[Sym]) -> Stepper<'_> {
        Stepper::new(self, &Tape::from_word(self.blank(), input))
    }

    pub fn stepper_on(&self, tape: &Tape) -> Stepper<'_> {
        Stepper::new(self, tape)
    }

    /// Simulate at most `budget` steps on `input`.
    pub fn run(&self, input: &[Sym], budget: u64) -> RunOutcome {
        self.run_on_tape(&Tape::from_word(self.blank(), input), budget)
    }

    /// Simulate at most `budget` steps starting on an arbitrary tape.
    pub fn run_on_tape(&self, tape: &Tape, budget: u64) -> RunOutcome {
        let mut st = self.stepper_on(tape);
        #[cfg(debug_assertions)]
        let mut tally = BoundaryTally::default();
        while st.steps() < budget {
            match st.step() {
                Some(_step) => {
                    #[cfg(debug_assertions)]
                    tally.record(_step.boundary());
                }
                None => break,
            }
        }
        let outcome = st.outcome();
        #[cfg(debug_assertions)]
        if outcome.status != Status::BudgetExceeded {
            tally.check(outcome.steps);
        }
        outcome
    }
}

fn header_document(
    h: &Header,
    kind: MachineKind,
    tapes: Option<usize>,
    delta: Vec<RuleDoc>,
) -> MachineDocument {
    MachineDocument {
        kind,
        states: h.states.clone(),
        start: h.states[h.start.index()].clone(),
        accept: h.states[h.accept.index()].clone(),
        reject: h.states[h.reject.index()].clone(),
        input_alphabet: h.input.iter().map(|s| h.symbols[s.index()].clone()).collect(),
        tape_alphabet: h.symbols.clone(),
        blank: h.symbols[h.blank.index()].clone(),
        tapes,
        delta,
    }
}

fn parse_word(h: &Header, text: &str) -> Result<Word, MachineError> {
    let lookup = |tok: &str| -> Result<Sym, MachineError> {
        let sym = h.symbol(tok)?;
        if h.input.contains(&sym) {
            Ok(sym)
        } else {
            Err(MachineError::UnknownSymbol(tok.to_string()))
        }
    };
    let text = text.trim();
    if text.is_empty() || text == "ε" {
        return Ok(Vec::new());
    }
    if text.contains(|c: char| c.is_whitespace() || c == ',') {
        return text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(lookup)
            .collect();
    }
    // Greedy longest match over the input alphabet.
    let mut names: Vec<(&str, Sym)> =
        h.input.iter().map(|&s| (h.symbols[s.index()].as_str(), s)).collect();
    names.sort_by_key(|(n, _)| std::cmp::Reverse(n.len()));
    let mut out = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let (name, sym) = names
            .iter()
            .find(|(n, _)| rest.starts_with(n))
            .ok_or_else(|| MachineError::UnknownSymbol(rest.to_string()))?;
        out.push(*sym);
        rest = &rest[name.len()..];
    }
    Ok(out)
}

fn format_word(symbols: &[String], w: &[Sym]) -> String {
    if symbols.iter().all(|s| s.chars().count() == 1) {
        w.iter().map(|s| symbols[s.index()].as_str()).collect()
    } else {
        w.iter()
            .map(|s| symbols[s.index()].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

// ---------------------------------------------------------------------------
// Tapes and simulation

/// A both-way infinite tape stored sparsely; unlisted cells hold the blank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tape {
    blank: Sym,
    cells: BTreeMap<i64, Sym>,
}

impl Tape {
    pub fn blank(blank: Sym) -> Tape {
        Tape { blank, cells: BTreeMap::new() }
    }

    pub fn from_word(blank: Sym, word: &[Sym]) -> Tape {
        let mut t = Tape::blank(blank);
        for (i, &s) in word.iter().enumerate() {
            t.set(i as i64, s);
        }
        t
    }

    pub fn blank_symbol(&self) -> Sym {
        self.blank
    }

    pub fn get(&self, cell: i64) -> Sym {
        self.cells.get(&cell).copied().unwrap_or(self.blank)
    }

    pub fn set(&mut self, cell: i64, sym: Sym) {
        if sym == self.blank {
            self.cells.remove(&cell);
        } else {
            self.cells.insert(cell, sym);
        }
    }

    /// Smallest and largest non-blank cell, if any.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.cells.keys().next()?;
        let hi = *self.cells.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn non_blank(&self) -> impl Iterator<Item = (i64, Sym)> + '_ {
        self.cells.iter().map(|(&c, &s)| (c, s))
    }
}

/// Dense working copy of a tape that grows in both directions.
#[derive(Debug, Clone)]
struct DenseTape {
    blank: Sym,
    origin: i64,
    cells: Vec<Sym>,
}

impl DenseTape {
    fn from_tape(t: &Tape) -> DenseTape {
        let (lo, hi) = t.support().map_or((0, 0), |(lo, hi)| (lo.min(0), hi.max(0)));
        let mut cells = vec![t.blank; (hi - lo + 1) as usize];
        for (c, s) in t.non_blank() {
            cells[(c - lo) as usize] = s;
        }
        DenseTape { blank: t.blank, origin: -lo, cells }
    }

    fn slot(&mut self, cell: i64) -> &mut Sym {
        let mut idx = cell + self.origin;
        if idx < 0 {
            let grow = (-idx) as usize + self.cells.len().max(8);
            let mut fresh = vec![self.blank; grow];
            fresh.extend_from_slice(&self.cells);
            self.cells = fresh;
            self.origin += grow as i64;
            idx = cell + self.origin;
        }
        let idx = idx as usize;
        if idx >= self.cells.len() {
            let target = (idx + 1).max(self.cells.len() * 2);
            self.cells.resize(target, self.blank);
        }
        &mut self.cells[idx]
    }

    fn get(&self, cell: i64) -> Sym {
        let idx = cell + self.origin;
        if idx < 0 || idx as usize >= self.cells.len() {
            self.blank
        } else {
            self.cells[idx as usize]
        }
    }

    fn to_tape(&self) -> Tape {
        let mut t = Tape::blank(self.blank);
        for (i, &s) in self.cells.iter().enumerate() {
            t.set(i as i64 - self.origin, s);
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Accepted,
    Rejected,
    BudgetExceeded,
}

impl Status {
    pub fn halted(self) -> bool {
        self != Status::BudgetExceeded
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunOutcome {
    pub status: Status,
    pub steps: u64,
    pub leftmost: i64,
    pub rightmost: i64,
}

/// One executed transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub from: i64,
    pub to: i64,
    pub read: Sym,
    pub wrote: Sym,
    pub state: StateId,
}

impl Step {
    /// The boundary crossed by this step; boundary `i` separates cells `i-1` and `i`.
    pub fn boundary(&self) -> i64 {
        self.from.max(self.to)
    }
}

/// An in-progress simulation of a one-tape machine.
#[derive(Debug, Clone)]
pub struct Stepper<'m> {
    machine: &'m OneTapeMachine,
    tape: DenseTape,
    head: i64,
    state: StateId,
    steps: u64,
    leftmost: i64,
    rightmost: i64,
}

impl<'m> Stepper<'m> {
    fn new(machine: &'m OneTapeMachine, tape: &Tape) -> Self {
        Stepper {
            machine,
            tape: DenseTape::from_tape(tape),
            head: 0,
            state: machine.start(),
            steps: 0,
            leftmost: 0,
            rightmost: 0,
        }
    }

    pub fn state(&self) -> StateId {
        self.state
    }

    pub fn head(&self) -> i64 {
        self.head
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn read(&self, cell: i64) -> Sym {
        self.tape.get(cell)
    }

    pub fn tape(&self) -> Tape {
        self.tape.to_tape()
    }

    pub fn halted(&self) -> bool {
        self.machine.is_halting(self.state)
    }

    /// Execute one transition, or return `None` once halted.
    pub fn step(&mut self) -> Option<Step> {
        let read = self.tape.get(self.head);
        let t = self.machine.transition(self.state, read)?;
        *self.tape.slot(self.head) = t.write;
        let from = self.head;
        self.head += t.dir.delta();
        self.state = t.next;
        self.steps += 1;
        self.leftmost = self.leftmost.min(self.head);
        self.rightmost = self.rightmost.max(self.head);
        Some(Step { from, to: self.head, read, wrote: t.write, state: t.next })
    }

    pub fn outcome(&self) -> RunOutcome {
        let status = if self.state == self.machine.accept() {
            Status::Accepted
        } else if self.state == self.machine.reject() {
            Status::Rejected
        } else {
            Status::BudgetExceeded
        };
        RunOutcome { status, steps: self.steps, leftmost: self.leftmost, rightmost: self.rightmost }
    }
}

static STEP_SUM_CHECKS: AtomicU64 = AtomicU64::new(0);

/// Number of halting one-tape simulations whose per-boundary crossing counts
/// were checked against the step counter (debug builds only).
pub fn step_sum_checks() -> u64 {
    STEP_SUM_CHECKS.load(Ordering::Relaxed)
}

/// Per-boundary crossing counter used to check that every step crosses
/// exactly one boundary.
#[derive(Debug, Default)]
pub(crate) struct BoundaryTally {
    counts: HashMap<i64, u64>,
}

impl BoundaryTally {
    pub(crate) fn record(&mut self, boundary: i64) {
        *self.counts.entry(boundary).or_insert(0) += 1;
    }

    pub(crate) fn check(&self, steps: u64) {
        let total: u64 = self.counts.values().sum();
        assert_eq!(total, steps, "step-sum identity violated");
        STEP_SUM_CHECKS.fetch_add(1, Ordering::Relaxed);
    }
}

// ---------------------------------------------------------------------------
// Multi-tape machines

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiTransition {
    pub next: StateId,
    pub write: Vec<Sym>,
    pub dirs: Vec<Dir>,
}

/// A validated deterministic multi-tape machine. Tape 0 is the read-only input tape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTapeMachine {
    header: Header,
    tapes: usize,
    /// Indexed by `state * |Γ|^k + mixed-radix(read)`.
    delta: Vec<Option<MultiTransition>>,
}

impl MultiTapeMachine {
    fn from_header(header: Header, k: usize, rules: &[RuleDoc]) -> Result<Self, MachineError> {
        let width = header.symbols.len();
        let combos = width
            .checked_pow(k as u32)
            .filter(|c| c.saturating_mul(header.states.len()) <= 1 << 26)
            .ok_or_else(|| MachineError::Shape("multi-tape", "transition table too large".into()))?;
        let mut delta: Vec<Option<MultiTransition>> = vec![None; header.states.len() * combos];
        for rule in rules {
            let (read, write, mv) = (rule.read.as_slice(), rule.write.as_slice(), rule.mv.as_slice());
            if read.len() != k || write.len() != k || mv.len() != k {
                return Err(MachineError::Shape(
                    "multi-tape",
                    format!("transition for `{}` must list {k} read/write/move entries", rule.state),
                ));
            }
            let state = header.state(&rule.state)?;
            if header.is_halting(state) {
                return Err(MachineError::HaltingTransition(rule.state.clone()));
            }
            let read_syms = read.iter().map(|s| header.symbol(s)).collect::<Result<Vec<_>, _>>()?;
            let write_syms = write.iter().map(|s| header.symbol(s)).collect::<Result<Vec<_>, _>>()?;
            let read_label = read.join(",");
            if write_syms[0] != read_syms[0] {
                return Err(MachineError::ReadOnlyInput {
                    state: rule.state.clone(),
                    read: read_label,
                    write: write[0].clone(),
                });
            }
            let dirs = mv
                .iter()
                .map(|m| parse_move(m, &rule.state, &read_label))
                .collect::<Result<Vec<_>, _>>()?;
            let idx = state.index() * combos + mixed_radix(&read_syms, width);
            if delta[idx].is_some() {
                return Err(MachineError::DuplicateTransition { state: rule.state.clone(), read: read_label });
            }
            delta[idx] = Some(MultiTransition { next: header.state(&rule.next)?, write: write_syms, dirs });
        }
        for (si, name) in header.states.iter().enumerate() {
            if header.is_halting(StateId(si as u32)) {
                continue;
            }
            for c in 0..combos {
                if delta[si * combos + c].is_none() {
                    let read = unmix(c, width, k)
                        .iter()
                        .map(|s| header.symbols[s.index()].as_str())
                        .collect::<Vec<_>>()
                        .join(",");
                    return Err(MachineError::MissingTransition { state: name.clone(), read });
                }
            }
        }
        Ok(MultiTapeMachine { header, tapes: k, delta })
    }

    /// Build from indexed parts; `delta` is called for every non-halting state
    /// and every combination of read symbols.
    pub fn from_parts(
        states: Vec<String>,
        symbols: Vec<String>,
        input: Vec<Sym>,
        blank: Sym,
        (start, accept, reject): (StateId, StateId, StateId),
        tapes: usize,
        mut delta: impl FnMut(StateId, &[Sym]) -> MultiTransition,
    ) -> Result<Self, MachineError> {
        let width = symbols.len();
        let combos = width.pow(tapes as u32);
        let mut rules = Vec::new();
        for s in 0..states.len() {
            let state = StateId(s as u32);
            if state == accept || state == reject {
                continue;
            }
            for c in 0..combos {
                let read = unmix(c, width, tapes);
                let t = delta(state, &read);
                rules.push(RuleDoc {
                    state: states[s].clone(),
                    read: OneOrMany::Many(read.iter().map(|y| symbols[y.index()].clone()).collect()),
                    write: OneOrMany::Many(t.write.iter().map(|y| symbols[y.index()].clone()).collect()),
                    mv: OneOrMany::Many(t.dirs.iter().map(|&d| dir_name(d)).collect()),
                    next: states[t.next.index()].clone(),
                });
            }
        }
        let doc = MachineDocument {
            kind: MachineKind::MultiTape,
            start: states[start.index()].clone(),
            accept: states[accept.index()].clone(),
            reject: states[reject.index()].clone(),
            input_alphabet: input.iter().map(|s| symbols[s.index()].clone()).collect(),
            blank: symbols[blank.index()].clone(),
            tapes: Some(tapes),
            delta: rules,
            states,
            tape_alphabet: symbols,
        };
        match validate(&doc)? {
            Machine::MultiTape(m) => Ok(m),
            Machine::OneTape(_) => unreachable!(),
        }
    }

    pub fn tapes(&self) -> usize {
        self.tapes
    }

    pub fn state_count(&self) -> usize {
        self.header.states.len()
    }

    pub fn input_alphabet(&self) -> &[Sym] {
        &self.header.input
    }

    pub fn blank(&self) -> Sym {
        self.header.blank
    }

    pub fn start(&self) -> StateId {
        self.header.start
    }

    pub fn accept(&self) -> StateId {
        self.header.accept
    }

    pub fn reject(&self) -> StateId {
        self.header.reject
    }

    pub fn state_names(&self) -> &[String] {
        &self.header.states
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.header.symbols
    }

    pub fn is_halting(&self, s: StateId) -> bool {
        self.header.is_halting(s)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, MachineError> {
        parse_word(&self.header, text)
    }

    pub fn format_word(&self, w: &[Sym]) -> String {
        format_word(&self.header.symbols, w)
    }

    pub fn transition(&self, state: StateId, read: &[Sym]) -> Option<&MultiTransition> {
        let combos = self.header.symbols.len().pow(self.tapes as u32);
        self.delta[state.index() * combos + mixed_radix(read, self.header.symbols.len())].as_ref()
    }

    pub fn to_document(&self) -> MachineDocument {
        let h = &self.header;
        let width = h.symbols.len();
        let combos = width.pow(self.tapes as u32);
        let names = |v: &[Sym]| v.iter().map(|y| h.symbols[y.index()].clone()).collect();
        let mut delta = Vec::new();
        for s in 0..h.states.len() {
            for c in 0..combos {
                if let Some(t) = &self.delta[s * combos + c] {
                    delta.push(RuleDoc {
                        state: h.states[s].clone(),
                        read: OneOrMany::Many(names(&unmix(c, width, self.tapes))),
                        write: OneOrMany::Many(names(&t.write)),
                        mv: OneOrMany::Many(t.dirs.iter().map(|&d| dir_name(d)).collect()),
                        next: h.states[t.next.index()].clone(),
                    });
                }
            }
        }
        header_document(h, MachineKind::MultiTape, Some(self.tapes), delta)
    }

    /// Simulate at most `budget` steps on `input`. The reported extent covers
    /// every cell visited on any tape.
    pub fn run(&self, input: &[Sym], budget: u64) -> RunOutcome {
        let mut tapes: Vec<DenseTape> = (0..self.tapes)
            .map(|i| {
                let t = if i == 0 {
                    Tape::from_word(self.blank(), input)
                } else {
                    Tape::blank(self.blank())
                };
                DenseTape::from_tape(&t)
            })
            .collect();
        let mut heads = vec![0i64; self.tapes];
        let mut state = self.start();
        let (mut steps, mut leftmost, mut rightmost) = (0u64, 0i64, 0i64);
        let mut read = vec![self.blank(); self.tapes];
        while steps < budget && !self.is_halting(state) {
            for (i, t) in tapes.iter().enumerate() {
                read[i] = t.get(heads[i]);
            }
            let t = self.transition(state, &read).expect("validated machine is total");
            for i in 0..self.tapes {
                if i > 0 {
                    *tapes[i].slot(heads[i]) = t.write[i];
                }
                heads[i] += t.dirs[i].delta();
                leftmost = leftmost.min(heads[i]);
                rightmost = rightmost.max(heads[i]);
            }
            state = t.next;
            steps += 1;
        }
        let status = if state == self.accept() {
            Status::Accepted
        } else if state == self.reject() {
            Status::Rejected
        } else {
            Status::BudgetExceeded
        };
        RunOutcome { status, steps, leftmost, rightmost }
    }
}

fn mixed_radix(read: &[Sym], width: usize) -> usize {
    read.iter().fold(0, |acc, s| acc * width + s.index())
}

fn unmix(mut c: usize, width: usize, k: usize) -> Vec<Sym> {
    let mut out = vec![Sym(0); k];
    for slot in out.iter_mut().rev() {
        *slot = Sym((c % width) as u32);
        c /= width;
    }
    out
}

// ---------------------------------------------------------------------------
// Input enumeration

/// Every word over `alphabet` of length `0..=max_len`, in shortlex order.
pub fn enumerate_inputs(alphabet: &[Sym], max_len: usize) -> ShortLex {
    assert!(!alphabet.is_empty(), "alphabet must be non-empty");
    ShortLex { alphabet: alphabet.to_vec(), max_len, digits: Some(Vec::new()) }
}

#[derive(Debug, Clone)]
pub struct ShortLex {
    alphabet: Vec<Sym>,
    max_len: usize,
    digits: Option<Vec<usize>>,
}

impl Iterator for ShortLex {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let digits = self.digits.as_mut()?;
        let word = digits.iter().map(|&d| self.alphabet[d]).collect();
        // Advance the odometer; roll over into the next length.
        let mut i = digits.len();
        loop {
            if i == 0 {
                if digits.len() == self.max_len {
                    self.digits = None;
                } else {
                    let n = digits.len() + 1;
                    *digits = vec![0; n];
                }
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < self.alphabet.len() {
                break;
            }
            digits[i] = 0;
        }
        Some(word)
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dir::L => "L",
            Dir::R => "R",
        })
    }
}
