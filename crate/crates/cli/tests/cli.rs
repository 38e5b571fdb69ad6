use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tmtime::bounds::LinearBound;
use tmtime::decision::{check_time_one_tape, Limits, Verdict};
use tmtime::machine::Machine;
use tmtime::regular::{Dfa, DfaDocument};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn tmtime(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmtime")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    tmtime(args).status.code().expect("exit code")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = tmtime(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), v)
}

#[test]
fn exit_codes() {
    let right = fixture("m_right.json");
    let parity = fixture("m_parity.json");
    assert_eq!(code(&["check", "--machine", &right, "--bound", "1,1"]), 0);
    assert_eq!(code(&["check", "--machine", &right, "--bound", "1,0"]), 1);
    assert_eq!(code(&["check", "--machine", &parity, "--bound", "1,1", "--cap-c", "0"]), 2);
    // Usage and input errors.
    assert_eq!(code(&["check", "--machine", &right]), 3);
    assert_eq!(code(&["check", "--machine", &right, "--bound", "1,1", "--frobnicate"]), 3);
    assert_eq!(code(&["check", "--machine", "/nonexistent.json", "--bound", "1,1"]), 3);
    assert_eq!(code(&["check", "--machine", &right, "--bound", "one,1"]), 3);
    assert_eq!(code(&["bogus"]), 3);
    // A steep slope pushes the crossing-length scan out of reach.
    assert_eq!(code(&["check", "--machine", &right, "--bound", "1000,1"]), 4);
    let multi = fixture("constant_two_tape.json");
    assert_eq!(code(&["check-multi", "--machine", &multi, "--bound", "0,5"]), 0);
    assert_eq!(code(&["check-multi", "--machine", &multi, "--bound", "1,1"]), 5);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let path_s = path.to_string_lossy().into_owned();
    let loops = fixture("m_loop.json");
    let (c, printed) =
        report(&["check", "--machine", &loops, "--bound", "3,5", "--cap-c", "2", "--max-len", "4", "--report", &path_s]);
    assert_eq!(c, 1);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, printed);

    let verdict: Verdict = serde_json::from_value(written["verdict"].clone()).unwrap();
    let m = Machine::from_json(&std::fs::read_to_string(&loops).unwrap()).unwrap().one_tape().unwrap();
    let direct = check_time_one_tape(&m, &LinearBound::new(3, 5), &Limits::capped(2, 4)).unwrap();
    assert_eq!(verdict, direct.verdict);
    assert_eq!(serde_json::to_value(&verdict).unwrap(), written["verdict"]);
    assert_eq!(written["machine_sha256"].as_str().unwrap().len(), 64);
    assert!(written["wall_time_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn simulate_example() {
    let (c, v) = report(&["simulate", "--machine", &fixture("m_right.json"), "--input", "aaa", "--budget", "100"]);
    assert_eq!(c, 0);
    assert_eq!(v["payload"]["outcome"]["steps"], 4);
    assert_eq!(v["payload"]["outcome"]["status"], "Accepted");
}

#[test]
fn crossings_example() {
    let (_, v) = report(&["crossings", "--machine", &fixture("m_right.json"), "--input", "aa"]);
    let b = &v["payload"]["boundaries"];
    assert_eq!(b["1"], serde_json::json!(["q0"]));
    assert_eq!(b["2"], serde_json::json!(["q0"]));
    assert_eq!(b["3"], serde_json::json!(["qa"]));
    assert_eq!(v["payload"]["steps"], 3);
}

/// `check` saying yes implies the brute-force oracle passes at every length.
#[test]
fn oracle_contains_check() {
    let mut yes = 0;
    for name in ["m_right.json", "m_loop.json", "m_parity.json"] {
        let m = fixture(name);
        for bound in ["1,1", "1,2", "2,2", "3,5"] {
            let limits = ["--cap-c", "3", "--max-len", "4"];
            let checked = code(&[&["check", "--machine", &m, "--bound", bound][..], &limits[..]].concat());
            let certified = code(&["check", "--machine", &m, "--bound", bound]);
            for c in [checked, certified] {
                if c == 0 {
                    yes += 1;
                    for len in 0..=6 {
                        let l = len.to_string();
                        assert_eq!(code(&["oracle", "--machine", &m, "--bound", bound, "--max-len", &l]), 0, "{name} {bound} {len}");
                    }
                }
            }
        }
    }
    assert!(yes > 0);
}

#[test]
fn oracle_finds_the_loop() {
    let (c, v) = report(&["oracle", "--machine", &fixture("m_loop.json"), "--bound", "3,5", "--max-len", "3"]);
    assert_eq!(c, 1);
    assert_eq!(v["verdict"]["kind"], "Violation");
    assert_eq!(v["verdict"]["detail"]["type"], "overrun");
}

#[test]
fn extract_dfa_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dfa.json");
    let dot = dir.path().join("dfa.dot");
    let args = [
        "extract-dfa",
        "--machine",
        &fixture("m_parity.json"),
        "--C",
        "1",
        "--D",
        "1",
        "--out",
        &out.to_string_lossy(),
        "--dot",
        &dot.to_string_lossy(),
    ]
    .map(|s| s.to_string());
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(code(&args), 0);
    let doc: DfaDocument = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let dfa = Dfa::from_document(&doc).unwrap();
    let reference = Dfa::from_parts(vec!["a".into(), "b".into()], 0, vec![true, false], vec![1, 0, 0, 1]).unwrap();
    assert!(dfa.equivalent(&reference).unwrap().0);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    // A machine that is not in time reports the verdict instead.
    assert_eq!(code(&["extract-dfa", "--machine", &fixture("m_right.json"), "--bound", "0,1"]), 1);
}

#[test]
fn gadgets_are_loadable_machines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let out_s = out.to_string_lossy().into_owned();
    let h = dir.path().join("h_loop.json");
    std::fs::write(&h, serde_json::to_string(&tmtime::fixtures::h_loop().to_document()).unwrap()).unwrap();
    let h = h.to_string_lossy().into_owned();
    assert_eq!(code(&["gadget", "--kind", "counting", "--machine", &h, "--out", &out_s]), 0);
    let g = Machine::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(g.multi_tape().is_some());

    let table = dir.path().join("square.json");
    std::fs::write(&table, r#"{ "pieces": [ { "from": 0, "coeffs": [0, 0, 1] } ], "omega_nlogn_from": 10 }"#).unwrap();
    let (c, v) = report(&[
        "gadget",
        "--kind",
        "pass",
        "--machine",
        &h,
        "--bound-table",
        &table.to_string_lossy(),
        "--horizon",
        "1000",
        "--out",
        &out_s,
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["payload"]["params"]["n0"], 10);
    let g = Machine::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(g.one_tape().is_some());
    // The pass gadget needs a superlinear table.
    assert_eq!(code(&["gadget", "--kind", "pass", "--machine", &h]), 3);
}
