use crate::machine::{Dir, MultiTapeMachine, MultiTransition, OneTapeMachine, StateId, Sym};

use super::GadgetError;

/// Two-tape machine that runs `H` on the empty input on its work tape while
/// stepping its input head right once per step.
///
/// It halts after exactly `|w| + 1` steps, when the input head reaches the
/// blank after `w`, unless `H` halted strictly earlier; then it moves right
/// forever. So it runs in time `n + 1` iff `H` never halts on the empty input.
///
/// States are `H`'s non-halting states (prefixed `h.`), `loop`, `accept` and
/// `reject`.
pub fn build_counting_gadget(h: &OneTapeMachine) -> Result<MultiTapeMachine, GadgetError> {
    let symbols: Vec<String> = h.symbol_names().to_vec();
    let inner: Vec<StateId> = (0..h.state_count() as u32).map(StateId).filter(|&s| !h.is_halting(s)).collect();
    let mut states: Vec<String> = inner.iter().map(|&s| format!("h.{}", h.state_name(s))).collect();
    let lp = StateId(states.len() as u32);
    states.push("loop".into());
    let accept = StateId(states.len() as u32);
    states.push("accept".into());
    let reject = StateId(states.len() as u32);
    states.push("reject".into());
    let ours = |s: StateId| StateId(inner.iter().position(|&t| t == s).unwrap() as u32);
    // An H that starts halted has halted before step 1 on every input.
    let start = if h.is_halting(h.start()) { lp } else { ours(h.start()) };
    let blank = h.blank();

    let delta = |state: StateId, read: &[Sym]| -> MultiTransition {
        let keep = |next: StateId, work: Sym, dir: Dir| MultiTransition {
            next,
            write: vec![read[0], work],
            dirs: vec![Dir::R, dir],
        };
        if state == lp {
            return keep(lp, read[1], Dir::R);
        }
        let hs = inner[state.index()];
        let t = h.transition(hs, read[1]).expect("validated machine is total");
        if read[0] == blank {
            // Step |w| + 1: H got this far, stop here.
            keep(accept, t.write, t.dir)
        } else if h.is_halting(t.next) {
            keep(lp, t.write, t.dir)
        } else {
            keep(ours(t.next), t.write, t.dir)
        }
    };
    Ok(MultiTapeMachine::from_parts(
        states,
        symbols,
        h.input_alphabet().to_vec(),
        blank,
        (start, accept, reject),
        2,
        delta,
    )?)
}
