use tmtime::bounds::{LinearBound, TimeBound};
use tmtime::crossing::{insert, record_word};
use tmtime::decision::{
    check_family_inequality, check_time_multi_tape, check_time_one_tape, realizable, BaseWord, DecisionError,
    Exhausted, Limits, Part, Verdict, ViolationDetail,
};
use tmtime::fixtures;
use tmtime::machine::{enumerate_inputs, OneTapeMachine, Status, Sym};

fn replays_over(m: &OneTapeMachine, bound: &dyn TimeBound, w: &[Sym]) -> bool {
    let allowed = bound.floor_eval(w.len() as u64);
    let out = m.run(w, allowed as u64 + 1);
    out.steps as u128 > allowed
}

#[test]
fn m_right_runs_in_linear_time() {
    let m = fixtures::m_right();
    let a = check_time_one_tape(&m, &LinearBound::new(1, 1), &Limits::certified()).unwrap();
    assert_eq!(a.verdict, Verdict::RunsInTime);
    assert!(a.crossing_cap_certified && a.length_cap_certified);
    let tables = a.tables.unwrap();
    let eps = tables.base_word(&[]).unwrap();
    assert_eq!(eps.steps, 1);
    let letter = m.input_alphabet()[0];
    assert_eq!(tables.base_word(&[letter]).unwrap().steps, 2);
    assert!(!tables.has_base(&[letter, letter]));
}

#[test]
fn trivial_branch_catches_the_first_step() {
    let m = fixtures::m_right();
    let a = check_time_one_tape(&m, &LinearBound::new(1, 0), &Limits::certified()).unwrap();
    assert_eq!(a.trivial_n0, Some(0));
    match a.verdict {
        Verdict::Violation { witness, detail: ViolationDetail::Overrun { steps, .. }, .. } => {
            assert!(witness.is_empty());
            assert_eq!(steps, 1);
        }
        v => panic!("unexpected {v:?}"),
    }
}

#[test]
fn looping_machine_overruns_under_caps() {
    let m = fixtures::m_loop();
    let bound = LinearBound::new(3, 5);
    let a = check_time_one_tape(&m, &bound, &Limits::capped(2, 4)).unwrap();
    let w = a.verdict.witness().expect("violation").clone();
    assert!(replays_over(&m, &bound, &w));
}

#[test]
fn zero_cap_is_inconclusive() {
    let m = fixtures::m_parity();
    let limits = Limits { cap_c: Some(0), ..Limits::default() };
    let a = check_time_one_tape(&m, &LinearBound::new(1, 1), &limits).unwrap();
    assert!(matches!(a.verdict, Verdict::Inconclusive { exhausted: Exhausted::CrossingCap, .. }));
    assert_eq!(a.verdict.exit_code(), 2);
}

#[test]
fn parity_runs_in_linear_time() {
    let m = fixtures::m_parity();
    let a = check_time_one_tape(&m, &LinearBound::new(1, 1), &Limits::certified()).unwrap();
    assert_eq!(a.verdict, Verdict::RunsInTime);
}

#[test]
fn parity_under_tight_bound_is_violated() {
    // n steps are never enough: the machine always reads the blank after w.
    let m = fixtures::m_parity();
    let bound = LinearBound::new(1, 0);
    let a = check_time_one_tape(&m, &bound, &Limits::certified()).unwrap();
    let w = a.verdict.witness().unwrap();
    assert!(replays_over(&m, &bound, w));
}

#[test]
fn multi_tape_trivial_branch() {
    let m = fixtures::constant_two_tape();
    assert_eq!(
        check_time_multi_tape(&m, &LinearBound::new(0, 5), &Limits::default()).unwrap(),
        Verdict::RunsInTime
    );
    assert!(matches!(
        check_time_multi_tape(&m, &LinearBound::new(1, 1), &Limits::default()),
        Err(DecisionError::OutsideDecidableRange { .. })
    ));
    assert_eq!(
        check_time_multi_tape(&m, &LinearBound::new(0, 2), &Limits::default()).unwrap().exit_code(),
        1
    );
}

#[test]
fn family_inequality_examples() {
    let m = fixtures::m_right();
    let a = m.input_alphabet()[0];
    let x = BaseWord { word: vec![a], sequences: vec![0], steps: 2, status: Status::Accepted };
    let y = Part { word: vec![a], internal: vec![], time: 1 };
    assert!(check_family_inequality(&LinearBound::new(1, 1), &x, &[&y]).unwrap());
    let bumped = BaseWord { steps: 3, ..x.clone() };
    assert!(!check_family_inequality(&LinearBound::new(1, 1), &bumped, &[&y]).unwrap());
    assert!(check_family_inequality(&LinearBound::new(1, 1), &x, &[]).unwrap());
    assert!(!check_family_inequality(&LinearBound::new(1, 0), &x, &[]).unwrap());
}

#[test]
fn realizable_examples() {
    let m = fixtures::m_right();
    let a = check_time_one_tape(&m, &LinearBound::new(1, 1), &Limits::certified()).unwrap();
    let tables = a.tables.unwrap();
    let x = tables.base_word(&[m.input_alphabet()[0]]).unwrap();
    let pair = tables.pairs()[0];
    assert!(realizable(&tables, &x.sequences, &[pair]));
    assert!(!realizable(&tables, &[], &[pair]));
}

/// Every way to order the family that keeps each sequence available.
fn brute_realizable(
    tables: &tmtime::decision::AnalysisTables,
    start: &[usize],
    family: &[(usize, usize)],
) -> bool {
    fn go(tables: &tmtime::decision::AnalysisTables, avail: &mut Vec<usize>, rest: &mut Vec<(usize, usize)>) -> bool {
        if rest.is_empty() {
            return true;
        }
        for i in 0..rest.len() {
            let p = rest[i];
            if avail.contains(&p.0) {
                rest.remove(i);
                let before = avail.len();
                avail.extend(tables.part(p).internal.iter().copied());
                let ok = go(tables, avail, rest);
                avail.truncate(before);
                rest.insert(i, p);
                if ok {
                    return true;
                }
            }
        }
        false
    }
    go(tables, &mut start.to_vec(), &mut family.to_vec())
}

#[test]
fn realizable_agrees_with_order_search() {
    for m in [fixtures::m_parity(), fixtures::m_right()] {
        let limits = Limits { cap_c: Some(3), max_len: Some(3), ..Limits::default() };
        let a = check_time_one_tape(&m, &LinearBound::new(2, 2), &limits).unwrap();
        let tables = a.tables.unwrap();
        let pairs = tables.pairs().to_vec();
        for x in &tables.base {
            for mask in 0u32..(1 << pairs.len().min(4)) {
                let family: Vec<_> = (0..pairs.len().min(4)).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
                assert_eq!(
                    realizable(&tables, &x.sequences, &family),
                    brute_realizable(&tables, &x.sequences, &family)
                );
            }
        }
    }
}

#[test]
fn pump_consistency_on_m_right() {
    let m = fixtures::m_right();
    let a = check_time_one_tape(&m, &LinearBound::new(1, 1), &Limits::certified()).unwrap();
    let tables = a.tables.unwrap();
    let mut checked = 0;
    for x in &tables.base {
        for (b, &s) in x.sequences.iter().enumerate() {
            for y in &tables.parts[s] {
                for k in 1..=3u64 {
                    let w = insert(&x.word, b + 1, &y.word, k as usize);
                    let out = m.run(&w, 10_000);
                    assert_eq!(out.steps, x.steps + k * y.time);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

/// Exhaustive check of a RunsInTime answer up to a length covering the tables.
fn check_yes(m: &OneTapeMachine, bound: &dyn TimeBound, limits: &Limits) {
    let a = check_time_one_tape(m, bound, limits).unwrap();
    assert_eq!(a.verdict, Verdict::RunsInTime);
    let tables = a.tables.unwrap();
    let longest_x = tables.base.iter().map(|b| b.word.len()).max().unwrap_or(0);
    let longest_y = tables.sizes().longest_part;
    let horizon = (2 * longest_x + 2 * longest_y).max(10).min(12);
    for w in enumerate_inputs(m.input_alphabet(), horizon) {
        assert!(!replays_over(m, bound, &w), "{}", m.format_word(&w));
    }
}

#[test]
fn yes_answers_survive_exhaustive_replay() {
    check_yes(&fixtures::m_right(), &LinearBound::new(1, 1), &Limits::certified());
    check_yes(&fixtures::m_parity(), &LinearBound::new(1, 1), &Limits::certified());
}

#[test]
fn witnesses_are_real_overruns() {
    let m = fixtures::m_parity();
    let w = m.parse_word("ab").unwrap();
    let (out, rec) = record_word(&m, &w, 100);
    assert_eq!(out.steps, rec.total_length());
}

#[test]
fn verdicts_round_trip_through_json() {
    for allowed in [5u128, u64::MAX as u128 + 1, u128::MAX] {
        let v = Verdict::Violation {
            witness: vec![Sym(0)],
            witness_text: "a".into(),
            detail: ViolationDetail::Overrun { length: 1, allowed, steps: 7 },
        };
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<Verdict>(&text).unwrap(), v);
        let value = serde_json::to_value(&v).unwrap();
        assert_eq!(serde_json::from_value::<Verdict>(value).unwrap(), v);
    }
    let v = Verdict::Inconclusive { exhausted: Exhausted::LengthCap, note: "x".into() };
    assert_eq!(serde_json::from_str::<Verdict>(&serde_json::to_string(&v).unwrap()).unwrap(), v);
}
