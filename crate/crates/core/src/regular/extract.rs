use std::collections::HashMap;

use crate::bounds::LinearBound;
use crate::decision::{check_time_one_tape, Effort, Limits, Verdict};
use crate::machine::{OneTapeMachine, Status, Sym};

use super::{Dfa, LanguageBuilder, RegularError};

/// A DFA accepting exactly the inputs `machine` accepts, for a machine that
/// runs in time `C·n + D`.
///
/// The machine is first analysed under `limits`; anything but
/// [`Verdict::RunsInTime`] is an error. With `C = 0` the machine reads at
/// most `D` cells, so acceptance depends on the first `D` letters and the
/// automaton is a trie. Otherwise it is the coverage language restricted to
/// accepted base words: an input and its base word end in the same halting
/// state.
pub fn extract_dfa(machine: &OneTapeMachine, c: u64, d: u64, limits: &Limits) -> Result<Dfa, RegularError> {
    if d == 0 {
        return Err(RegularError::ZeroOffset);
    }
    let analysis = check_time_one_tape(machine, &LinearBound::new(c, d), limits)?;
    if analysis.verdict != Verdict::RunsInTime {
        return Err(RegularError::NotInTime(Box::new(analysis.verdict)));
    }
    let alphabet: Vec<String> = machine.input_alphabet().iter().map(|&s| machine.symbol_name(s).to_string()).collect();
    let mut effort = Effort::new(limits.effort);
    match analysis.tables {
        None => trie(machine, &alphabet, d, &mut effort),
        Some(tables) => {
            let mut builder = LanguageBuilder::new(&tables, alphabet, machine.input_alphabet());
            builder.coverage(|i| tables.base[i].status == Status::Accepted, false, &mut effort)
        }
    }
}

fn trie(machine: &OneTapeMachine, alphabet: &[String], depth: u64, effort: &mut Effort) -> Result<Dfa, RegularError> {
    let letters = machine.input_alphabet();
    let k = letters.len();
    let mut words: Vec<Vec<Sym>> = vec![Vec::new()];
    let mut index: HashMap<Vec<Sym>, usize> = HashMap::from([(Vec::new(), 0)]);
    let mut delta = Vec::new();
    let mut accepting = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let w = words[i].clone();
        let out = machine.run(&w, depth + 1);
        if !effort.spend(out.steps + k as u64) {
            return Err(RegularError::Effort);
        }
        accepting.push(out.status == Status::Accepted);
        for &a in letters {
            if w.len() as u64 >= depth {
                delta.push(i);
                continue;
            }
            let mut v = w.clone();
            v.push(a);
            let id = *index.entry(v.clone()).or_insert_with(|| {
                words.push(v);
                words.len() - 1
            });
            delta.push(id);
        }
        i += 1;
    }
    Ok(Dfa::from_parts(alphabet.to_vec(), 0, accepting, delta)?.minimize())
}
