//! One-tape reduction machine built from head passes.
//!
//! On input `w` of length `n`:
//!
//! 1. If `n < n0`, accept after reading the input (`n + 1` steps).
//!    Otherwise rewrite the tape to `#1^{n−1}#` and step back onto the last
//!    `1` (also `n + 1` steps).
//! 2. From here the head only ever runs from one `#` to the other and never
//!    rewrites a `#`. Each rightward pass blanks the first non-blank cell and
//!    turns `C − 1` of every `C` ones into zeros; leftward passes change
//!    nothing. When a rightward pass keeps no `1`, one more leftward pass and
//!    one rightward pass turn the two cells after the blanks into `⊔'⊔`.
//!    There are now `j` blanks with `C^j > n − 2`.
//! 3. The marked cell is `H`'s head on `H`'s empty tape. Every pass blanks
//!    `C − 1` of every `C` zeros, and performs one step of `H` if `H`'s head
//!    moves the way the pass goes. Zeros and blanks both read as blank to `H`.
//! 4. A pass that keeps no zero ends in accept. If `H` halts first, the
//!    machine bounces between the `#`s forever.
//!
//! State names: `read{i}` and `ones` (phase 1), `conv.*` and `ins.*` (phase
//! 2), `sim.{L|R}.{count}.{kept}.{done}.{pending}.{H state}` (phase 3),
//! `loop.{L|R}`, `accept`, `reject`.

use std::collections::HashMap;

use crate::machine::{Dir, OneTapeMachine, StateId, Sym, Transition};

use super::{GadgetError, GadgetParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Ctl {
    Read(u64),
    ConvL,
    ConvSkip,
    Conv { count: u64, kept: bool },
    InsL,
    InsSkip,
    InsSecond,
    InsRest,
    Sim { right: bool, count: u64, kept: bool, done: bool, pending: bool, p: usize },
    Loop { right: bool },
    Accept,
    Reject,
}

/// Symbol names the gadget added to `H`'s tape alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassNames {
    pub zero: String,
    pub one: String,
    pub hash: String,
}

impl PassNames {
    /// The names used for `machine`, a pass gadget.
    pub fn of(machine: &OneTapeMachine) -> PassNames {
        let names = machine.symbol_names();
        let n = names.len();
        PassNames { zero: names[n - 3].clone(), one: names[n - 2].clone(), hash: names[n - 1].clone() }
    }
}

fn fresh(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('~');
    }
    name
}

/// Compile `H` into the pass gadget for the given constants.
pub fn build_pass_gadget(h: &OneTapeMachine, params: &GadgetParams) -> Result<OneTapeMachine, GadgetError> {
    let c = params.c;
    let n0 = params.n0;
    if n0 < c {
        return Err(GadgetError::ThresholdTooSmall(n0));
    }

    // Symbols: Γ, then Γ', then 0, 1, #.
    let gamma: Vec<String> = h.symbol_names().to_vec();
    let g = gamma.len();
    let mut symbols = gamma.clone();
    for name in &gamma {
        let mut primed = format!("{name}'");
        while symbols.contains(&primed) {
            primed.push('\'');
        }
        symbols.push(primed);
    }
    for base in ["0", "1", "#"] {
        let name = fresh(base, &symbols);
        symbols.push(name);
    }
    let zero = Sym(2 * g as u32);
    let one = Sym(2 * g as u32 + 1);
    let hash = Sym(2 * g as u32 + 2);
    let primed = |a: Sym| Sym(a.0 + g as u32);
    let is_gamma = |a: Sym| (a.index()) < g;
    let is_primed = |a: Sym| (g..2 * g).contains(&a.index());
    let blank = h.blank();
    let input: Vec<Sym> = h.input_alphabet().to_vec();

    // States.
    let inner: Vec<StateId> = (0..h.state_count() as u32).map(StateId).filter(|&s| !h.is_halting(s)).collect();
    let mut ctls: Vec<Ctl> = Vec::new();
    for i in 0..=n0 {
        ctls.push(Ctl::Read(i));
    }
    ctls.extend([Ctl::ConvL, Ctl::ConvSkip]);
    for count in 0..c {
        for kept in [false, true] {
            ctls.push(Ctl::Conv { count, kept });
        }
    }
    ctls.extend([Ctl::InsL, Ctl::InsSkip, Ctl::InsSecond, Ctl::InsRest]);
    for p in 0..inner.len() {
        for right in [false, true] {
            for count in 0..c {
                for kept in [false, true] {
                    for done in [false, true] {
                        for pending in [false, true] {
                            ctls.push(Ctl::Sim { right, count, kept, done, pending, p });
                        }
                    }
                }
            }
        }
    }
    ctls.extend([Ctl::Loop { right: false }, Ctl::Loop { right: true }, Ctl::Accept, Ctl::Reject]);
    let lr = |right: bool| if right { "R" } else { "L" };
    let names: Vec<String> = ctls
        .iter()
        .map(|ctl| match *ctl {
            Ctl::Read(i) if i == n0 => "ones".to_string(),
            Ctl::Read(i) => format!("read{i}"),
            Ctl::ConvL => "conv.L".into(),
            Ctl::ConvSkip => "conv.skip".into(),
            Ctl::Conv { count, kept } => format!("conv.R.{count}.{}", kept as u8),
            Ctl::InsL => "ins.L".into(),
            Ctl::InsSkip => "ins.skip".into(),
            Ctl::InsSecond => "ins.second".into(),
            Ctl::InsRest => "ins.rest".into(),
            Ctl::Sim { right, count, kept, done, pending, p } => format!(
                "sim.{}.{count}.{}.{}.{}.{}",
                lr(right),
                kept as u8,
                done as u8,
                pending as u8,
                h.state_name(inner[p])
            ),
            Ctl::Loop { right } => format!("loop.{}", lr(right)),
            Ctl::Accept => "accept".into(),
            Ctl::Reject => "reject".into(),
        })
        .collect();
    let id: HashMap<Ctl, StateId> = ctls.iter().enumerate().map(|(i, &k)| (k, StateId(i as u32))).collect();
    let sid = |k: Ctl| id[&k];
    let accept = sid(Ctl::Accept);
    let reject = sid(Ctl::Reject);

    let go = |next: Ctl, write: Sym, dir: Dir| Transition { next: sid(next), write, dir };
    let dir_of = |right: bool| if right { Dir::R } else { Dir::L };
    // Where the simulation starts, or a permanent loop if H starts halted.
    let sim_start = |right: bool| match inner.iter().position(|&s| s == h.start()) {
        Some(p) => Ctl::Sim { right, count: 0, kept: false, done: false, pending: false, p },
        None => Ctl::Loop { right },
    };

    let delta = |state: StateId, x: Sym| -> Transition {
        match ctls[state.index()] {
            Ctl::Read(i) => {
                if x == blank {
                    if i < n0 {
                        go(Ctl::Accept, blank, Dir::R)
                    } else {
                        // Cell n: close the zone and step back onto the last 1.
                        go(Ctl::ConvL, hash, Dir::L)
                    }
                } else if input.contains(&x) {
                    let write = if i == 0 { hash } else { one };
                    go(Ctl::Read((i + 1).min(n0)), write, Dir::R)
                } else {
                    go(Ctl::Reject, x, Dir::R)
                }
            }
            Ctl::ConvL => {
                if x == hash {
                    go(Ctl::ConvSkip, hash, Dir::R)
                } else {
                    go(Ctl::ConvL, x, Dir::L)
                }
            }
            Ctl::ConvSkip => {
                if x == hash {
                    go(Ctl::InsL, hash, Dir::L)
                } else if x == one || x == zero {
                    go(Ctl::Conv { count: 0, kept: false }, blank, Dir::R)
                } else {
                    go(Ctl::ConvSkip, x, Dir::R)
                }
            }
            Ctl::Conv { count, kept } => {
                if x == hash {
                    go(if kept { Ctl::ConvL } else { Ctl::InsL }, hash, Dir::L)
                } else if x == one {
                    if count + 1 == c {
                        go(Ctl::Conv { count: 0, kept: true }, one, Dir::R)
                    } else {
                        go(Ctl::Conv { count: count + 1, kept }, zero, Dir::R)
                    }
                } else {
                    go(Ctl::Conv { count, kept }, x, Dir::R)
                }
            }
            Ctl::InsL => {
                if x == hash {
                    go(Ctl::InsSkip, hash, Dir::R)
                } else {
                    go(Ctl::InsL, x, Dir::L)
                }
            }
            Ctl::InsSkip => {
                if x == hash {
                    go(Ctl::Accept, hash, Dir::L)
                } else if x == zero || x == one {
                    go(Ctl::InsSecond, primed(blank), Dir::R)
                } else {
                    go(Ctl::InsSkip, x, Dir::R)
                }
            }
            Ctl::InsSecond => {
                if x == hash {
                    go(Ctl::Accept, hash, Dir::L)
                } else {
                    go(Ctl::InsRest, blank, Dir::R)
                }
            }
            Ctl::InsRest => {
                if x == hash {
                    go(sim_start(false), hash, Dir::L)
                } else {
                    go(Ctl::InsRest, x, Dir::R)
                }
            }
            Ctl::Sim { right, count, kept, done, pending, p } => {
                let dir = dir_of(right);
                let same = Ctl::Sim { right, count, kept, done, pending, p };
                if x == hash {
                    if pending || !kept {
                        return go(Ctl::Accept, hash, dir.reverse());
                    }
                    let next = Ctl::Sim { right: !right, count: 0, kept: false, done: false, pending: false, p };
                    return go(next, hash, dir.reverse());
                }
                if pending {
                    // H's head arrives here; a zero under it is lost.
                    let under = if x == zero || x == one { blank } else if is_gamma(x) { x } else { blank };
                    return go(Ctl::Sim { right, count, kept, done, pending: false, p }, primed(under), dir);
                }
                if is_primed(x) {
                    if done {
                        return go(same, x, dir);
                    }
                    let a = Sym(x.0 - g as u32);
                    let t = h.transition(inner[p], a).expect("validated machine is total");
                    if t.dir != dir {
                        return go(same, x, dir);
                    }
                    if h.is_halting(t.next) {
                        return go(Ctl::Loop { right }, t.write, dir);
                    }
                    let q = inner.iter().position(|&s| s == t.next).unwrap();
                    return go(Ctl::Sim { right, count, kept, done: true, pending: true, p: q }, t.write, dir);
                }
                if x == zero {
                    if count + 1 == c {
                        return go(Ctl::Sim { right, count: 0, kept: true, done, pending, p }, zero, dir);
                    }
                    return go(Ctl::Sim { right, count: count + 1, kept, done, pending, p }, blank, dir);
                }
                go(same, x, dir)
            }
            Ctl::Loop { right } => {
                if x == hash {
                    go(Ctl::Loop { right: !right }, hash, dir_of(right).reverse())
                } else {
                    go(Ctl::Loop { right }, x, dir_of(right))
                }
            }
            Ctl::Accept | Ctl::Reject => unreachable!("halting states have no transitions"),
        }
    };

    Ok(OneTapeMachine::from_parts(names, symbols, h.input_alphabet().to_vec(), blank, (sid(Ctl::Read(0)), accept, reject), delta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::machine::Status;

    fn params() -> GadgetParams {
        GadgetParams { c: 6, n0: 10, bound: "n^2".into() }
    }

    #[test]
    fn short_inputs_accept_after_reading() {
        let g = build_pass_gadget(&fixtures::h_immediate(), &params()).unwrap();
        let a = g.parse_word("a").unwrap()[0];
        for n in 0..10u64 {
            let out = g.run(&vec![a; n as usize], 1000);
            assert_eq!((out.status, out.steps), (Status::Accepted, n + 1));
        }
    }

    #[test]
    fn looping_h_halts_within_square() {
        let g = build_pass_gadget(&fixtures::h_loop(), &params()).unwrap();
        let a = g.parse_word("a").unwrap()[0];
        for n in 10..=60u64 {
            let out = g.run(&vec![a; n as usize], n * n + 1);
            assert_eq!(out.status, Status::Accepted, "n = {n}");
            assert!(out.steps <= n * n, "n = {n}: {} steps", out.steps);
        }
    }

    #[test]
    fn halting_h_loops_at_forty() {
        let g = build_pass_gadget(&fixtures::h_immediate(), &params()).unwrap();
        let a = g.parse_word("a").unwrap()[0];
        let out = g.run(&[a; 40], 1601);
        assert_eq!(out.status, Status::BudgetExceeded);
    }

    #[test]
    fn marker_names() {
        let g = build_pass_gadget(&fixtures::h_loop(), &params()).unwrap();
        let names = PassNames::of(&g);
        assert_eq!((names.zero.as_str(), names.one.as_str(), names.hash.as_str()), ("0", "1", "#"));
    }
}
