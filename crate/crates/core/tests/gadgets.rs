mod support;

use support::gadget::traced_run;
use tmtime::bounds::{TableBound, TimeBound};
use tmtime::fixtures;
use tmtime::gadgets::{build_counting_gadget, build_pass_gadget, gadget_params, GadgetParams};
use tmtime::machine::Status;

fn square_params() -> GadgetParams {
    let t = TableBound::polynomial(vec![0, 0, 1]).with_superlinear_witness(10);
    gadget_params(&t, 10_000).unwrap()
}

#[test]
fn square_bound_gives_threshold_ten() {
    let p = square_params();
    assert_eq!((p.c, p.n0), (6, 10));
}

#[test]
fn counting_gadget_exact_times() {
    let g = build_counting_gadget(&fixtures::h_immediate()).unwrap();
    let out = g.run(&[], 10_000);
    assert_eq!((out.status, out.steps), (Status::Accepted, 1));
    for n in 1..=4 {
        let w = g.parse_word(&"a".repeat(n)).unwrap();
        assert_eq!(g.run(&w, 10_000).status, Status::BudgetExceeded, "n = {n}");
    }

    let g = build_counting_gadget(&fixtures::h_loop()).unwrap();
    for n in 0..=6 {
        let w = g.parse_word(&"a".repeat(n)).unwrap();
        let out = g.run(&w, 10_000);
        assert_eq!((out.status, out.steps), (Status::Accepted, n as u64 + 1));
    }
}

#[test]
fn counting_gadget_follows_halting_time() {
    // H_TWO halts after two steps, so inputs of length two or more never stop.
    let g = build_counting_gadget(&fixtures::h_two()).unwrap();
    for n in 0..=6 {
        let w = g.parse_word(&"a".repeat(n)).unwrap();
        let out = g.run(&w, 10_000);
        if n < 2 {
            assert_eq!((out.status, out.steps), (Status::Accepted, n as u64 + 1));
        } else {
            assert_eq!(out.status, Status::BudgetExceeded, "n = {n}");
        }
    }
}

#[test]
fn pass_gadget_short_inputs() {
    let g = build_pass_gadget(&fixtures::h_immediate(), &square_params()).unwrap();
    for n in 0..10 {
        assert_eq!(traced_run(&g, n, 1000), (Status::Accepted, n as u64 + 1));
    }
}

#[test]
fn pass_gadget_with_looping_h_fits_the_square() {
    let g = build_pass_gadget(&fixtures::h_loop(), &square_params()).unwrap();
    for n in 10..=60usize {
        let (status, steps) = traced_run(&g, n, (n * n) as u64 + 1);
        assert_eq!(status, Status::Accepted, "n = {n}");
        assert!(steps <= (n * n) as u64, "n = {n}: {steps} steps");
    }
}

#[test]
fn pass_gadget_with_halting_h_overruns() {
    let g = build_pass_gadget(&fixtures::h_immediate(), &square_params()).unwrap();
    assert_eq!(traced_run(&g, 40, 1601).0, Status::BudgetExceeded);
}

#[test]
fn pass_gadget_separates_by_halting() {
    // H_TWO needs a few passes before it halts; from some length on there
    // are enough passes, and the gadget then overruns n^2.
    let t = TableBound::polynomial(vec![0, 0, 1]);
    let p = square_params();
    let halting = build_pass_gadget(&fixtures::h_two(), &p).unwrap();
    let looping = build_pass_gadget(&fixtures::h_loop(), &p).unwrap();
    let over = (10..=400usize)
        .find(|&n| halting.run(&vec![halting.input_alphabet()[0]; n], t.floor_eval(n as u64) as u64 + 1).status == Status::BudgetExceeded)
        .expect("halting H never overran");
    for n in [over, over + 1, 2 * over] {
        let budget = t.floor_eval(n as u64) as u64;
        assert_eq!(traced_run(&halting, n, budget + 1).0, Status::BudgetExceeded, "n = {n}");
        let (status, steps) = traced_run(&looping, n, budget + 1);
        assert!(status == Status::Accepted && steps <= budget, "n = {n}");
    }
}
