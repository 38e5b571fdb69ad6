mod support;

use support::hennie::{pump_trials, swap_trials};

#[test]
fn swapping_segments_preserves_the_run() {
    let trials = swap_trials(400).unwrap();
    assert!(trials >= 200, "only {trials} premise-satisfying swap trials");
}

#[test]
fn pumping_between_equal_sequences_preserves_the_result() {
    let trials = pump_trials(1500).unwrap();
    assert!(trials >= 100, "only {trials} premise-satisfying pump trials");
}
