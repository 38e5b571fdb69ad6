mod support;

use astro_float::Consts;
use support::oracle::{high_precision_violations, holds_hp};
use tmtime::bounds::{kobayashi_constant, LinearBound, TimeBound, DEFAULT_SEARCH_EFFORT};

#[test]
fn constant_for_two_states_survives_high_precision_scan() {
    let bound = LinearBound::new(2, 2);
    let k = kobayashi_constant(2, &bound, DEFAULT_SEARCH_EFFORT).unwrap();
    assert!(k.c >= 4, "c = {}", k.c);
    assert!(k.c as u128 >= bound.floor_eval(0).max(bound.floor_eval(1)));
    let (violations, checked) = high_precision_violations(2, &bound, k.c, 1_000_000);
    assert!(violations.is_empty(), "c = {} fails at {:?}", k.c, &violations[..violations.len().min(10)]);
    assert!(checked > 1000);
}

#[test]
fn high_precision_check_detects_a_short_constant() {
    // Guard against an oracle that accepts everything: c = 0 must fail
    // somewhere early for the same bound.
    let bound = LinearBound::new(2, 2);
    let mut cc = Consts::new().unwrap();
    assert!((2..200).any(|n| !holds_hp(2, bound.floor_eval(n), 0, n, &mut cc)));
}

#[test]
fn constant_grows_with_state_count() {
    let bound = LinearBound::new(2, 2);
    let cs: Vec<u64> =
        (2..=6).map(|q| kobayashi_constant(q, &bound, DEFAULT_SEARCH_EFFORT).unwrap().c).collect();
    assert!(cs.windows(2).all(|w| w[0] <= w[1]), "{cs:?}");
}
