use tmtime::gadgets::PassNames;
use tmtime::machine::{OneTapeMachine, Status};

/// Run the pass gadget on `a^n` for up to `budget` steps, checking that no
/// `#` is ever rewritten, that after setup the head stays between the two
/// markers, and that the number of `0`/`1` cells never grows from one pass to the
/// next.
pub fn traced_run(g: &OneTapeMachine, n: usize, budget: u64) -> (Status, u64) {
    let names = PassNames::of(g);
    let hash = g.symbol_by_name(&names.hash).unwrap();
    let zero = g.symbol_by_name(&names.zero).unwrap();
    let one = g.symbol_by_name(&names.one).unwrap();
    let w = vec![g.input_alphabet()[0]; n];
    let mut st = g.stepper(&w);
    let setup = n as u64 + 1;
    let mut work = usize::MAX;
    let mut markers = None;
    while st.steps() < budget {
        let Some(step) = st.step() else { break };
        if step.read == hash {
            assert_eq!(step.wrote, hash, "n = {n}: marker rewritten at step {}", st.steps());
        }
        if st.steps() >= setup && n >= 10 {
            let (lo, hi) = *markers.get_or_insert_with(|| {
                let at: Vec<i64> = st.tape().non_blank().filter(|&(_, s)| s == hash).map(|(c, _)| c).collect();
                assert_eq!(at.len(), 2, "n = {n}: expected two markers after setup");
                (at[0], at[1])
            });
            assert!((lo..=hi).contains(&st.head()), "n = {n}: head at {} outside [{lo}, {hi}]", st.head());
            // Compare at pass ends only; a full tape scan per step is too slow.
            if st.head() == lo || st.head() == hi {
                let now = (lo..=hi).filter(|&c| st.read(c) == zero || st.read(c) == one).count();
                assert!(now <= work, "n = {n}: work cells grew from {work} to {now}");
                work = now;
            }
        }
    }
    let out = st.outcome();
    (out.status, out.steps)
}
