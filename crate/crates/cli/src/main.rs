//! `tmtime`: check time bounds of Turing machines from the command line.
//!
//! Exit codes: 0 runs in time, 1 violation, 2 inconclusive, 3 usage or input
//! error, 4 infeasible bound, 5 outside the decidable range.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tmtime::bounds::{parse_linear, BoundError, LinearBound, TableBound, TimeBound};
use tmtime::crossing::record_word;
use tmtime::decision::{
    check_time_multi_tape, check_time_one_tape, Analysis, DecisionError, Limits, TableSizes, Verdict, ViolationDetail,
    DEFAULT_EFFORT,
};
use tmtime::gadgets::{build_counting_gadget, build_pass_gadget, gadget_params, DEFAULT_HORIZON};
use tmtime::machine::{enumerate_inputs, Machine, MultiTapeMachine, OneTapeMachine, Sym};
use tmtime::regular::{extract_dfa, RegularError};

const EXIT_USAGE: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;
const EXIT_UNDECIDABLE: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "tmtime", version, about = "Decide whether a one-tape Turing machine runs in time Cn+D")]
struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a one-tape machine runs in time T(n).
    Check {
        #[command(flatten)]
        machine: MachineArg,
        #[command(flatten)]
        bound: BoundArgs,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Decide a multi-tape machine under a bound with T(n0) < n0 + 1.
    CheckMulti {
        #[command(flatten)]
        machine: MachineArg,
        #[command(flatten)]
        bound: BoundArgs,
        #[arg(long)]
        effort: Option<u64>,
    },
    /// Run a machine on one input.
    Simulate {
        #[command(flatten)]
        machine: MachineArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a one-tape machine on one input and record its crossing sequences.
    Crossings {
        #[command(flatten)]
        machine: MachineArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Build a DFA for the language of a machine that runs in time Cn+D.
    ExtractDfa {
        #[command(flatten)]
        machine: MachineArg,
        /// The bound as `C,D`.
        #[arg(long, conflicts_with_all = ["c", "d"])]
        bound: Option<String>,
        #[arg(long = "C", id = "c", requires = "d")]
        c: Option<u64>,
        #[arg(long = "D", id = "d", requires = "c")]
        d: Option<u64>,
        #[command(flatten)]
        limits: LimitArgs,
        /// Write the DFA as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the DFA as Graphviz DOT here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Compile a reduction machine from a machine H.
    Gadget {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long, value_enum)]
        kind: GadgetKind,
        /// Superlinear bound for the pass gadget.
        #[arg(long)]
        bound_table: Option<PathBuf>,
        /// How far to check the pass inequality explicitly.
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u64,
        /// Write the machine document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate every input up to --max-len under budget ⌊T(n)⌋ + 1.
    ///
    /// A necessary condition only: passing does not prove the bound.
    Oracle {
        #[command(flatten)]
        machine: MachineArg,
        #[command(flatten)]
        bound: BoundArgs,
        #[arg(long)]
        max_len: usize,
        /// Extra random inputs with lengths in (max-len, 2·max-len].
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct MachineArg {
    /// Machine document (JSON).
    #[arg(long)]
    machine: PathBuf,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Linear bound `C,D` meaning T(n) = Cn + D.
    #[arg(long, conflicts_with = "bound_table", required_unless_present = "bound_table")]
    bound: Option<String>,
    /// Piecewise-polynomial bound table (JSON).
    #[arg(long)]
    bound_table: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LimitArgs {
    /// Crossing-length cap; skips certification.
    #[arg(long)]
    cap_c: Option<u64>,
    /// Longest gap word to search; skips certification unless it covers the bound.
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_EFFORT)]
    effort: u64,
    /// Worker threads for table construction.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Input word: letters run together, or separated by spaces or commas.
    #[arg(long, default_value = "")]
    input: String,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GadgetKind {
    Counting,
    Pass,
}

/// What every subcommand prints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the machine document as read.
    pub machine_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<Caps>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<TableSizes>,
    pub wall_time_ms: f64,
    pub exit_code: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Caps {
    pub crossing_cap: Option<u64>,
    pub crossing_cap_certified: bool,
    pub length_cap: Option<String>,
    pub length_cap_certified: bool,
    pub trivial_n0: Option<u64>,
    pub effort: u64,
    pub effort_used: u64,
}

fn classify(e: &anyhow::Error) -> u8 {
    let infeasible = |b: &BoundError| matches!(b, BoundError::Infeasible(_));
    for cause in e.chain() {
        let decision = cause.downcast_ref::<DecisionError>().or_else(|| match cause.downcast_ref::<RegularError>() {
            Some(RegularError::Decision(d)) => Some(d),
            _ => None,
        });
        if let Some(d) = decision {
            match d {
                DecisionError::OutsideDecidableRange { .. } => return EXIT_UNDECIDABLE,
                DecisionError::Bound(b) if infeasible(b) => return EXIT_INFEASIBLE,
                _ => {}
            }
        }
        if let Some(b) = cause.downcast_ref::<BoundError>() {
            if infeasible(b) {
                return EXIT_INFEASIBLE;
            }
        }
    }
    EXIT_USAGE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let start = Instant::now();
    match run(&cli.command) {
        Ok(mut report) => {
            report.wall_time_ms = start.elapsed().as_secs_f64() * 1000.0;
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            println!("{text}");
            if let Some(path) = &cli.report {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            }
            ExitCode::from(report.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify(&e))
        }
    }
}

fn run(command: &Command) -> anyhow::Result<Report> {
    match command {
        Command::Check { machine, bound, limits } => {
            let (m, digest) = load_one_tape(&machine.machine)?;
            let bound = load_bound(bound)?;
            let limits = limits.to_limits();
            let a = check_time_one_tape(&m, bound.as_ref(), &limits)?;
            Ok(analysis_report("check", digest, bound.as_ref(), a, &limits))
        }
        Command::CheckMulti { machine, bound, effort } => {
            let (m, digest) = load_multi_tape(&machine.machine)?;
            let bound = load_bound(bound)?;
            let limits = Limits { effort: effort.unwrap_or(DEFAULT_EFFORT), ..Limits::default() };
            let verdict = check_time_multi_tape(&m, bound.as_ref(), &limits)?;
            let mut r = Report::new("check-multi", digest);
            r.bound = Some(bound.describe());
            r.exit_code = verdict.exit_code() as u8;
            r.verdict = Some(verdict);
            Ok(r)
        }
        Command::Simulate { machine, run } => {
            let (text, digest) = read(&machine.machine)?;
            let payload = match Machine::from_json(&text)? {
                Machine::OneTape(m) => {
                    let w = m.parse_word(&run.input)?;
                    let out = m.run(&w, run.budget);
                    json!({ "input": m.format_word(&w), "outcome": out })
                }
                Machine::MultiTape(m) => {
                    let w = m.parse_word(&run.input)?;
                    let out = m.run(&w, run.budget);
                    json!({ "input": m.format_word(&w), "outcome": out })
                }
            };
            let mut r = Report::new("simulate", digest);
            r.payload = Some(payload);
            Ok(r)
        }
        Command::Crossings { machine, run } => {
            let (m, digest) = load_one_tape(&machine.machine)?;
            let w = m.parse_word(&run.input)?;
            let (out, rec) = record_word(&m, &w, run.budget);
            let boundaries: BTreeMap<i64, Vec<&str>> = rec
                .boundaries
                .iter()
                .map(|(&i, seq)| (i, seq.iter().map(|&s| m.state_name(s)).collect()))
                .collect();
            let mut r = Report::new("crossings", digest);
            r.payload = Some(json!({
                "input": m.format_word(&w),
                "outcome": out,
                "steps": rec.total_steps,
                "boundaries": boundaries,
            }));
            Ok(r)
        }
        Command::ExtractDfa { machine, bound, c, d, limits, out, dot } => {
            let (m, digest) = load_one_tape(&machine.machine)?;
            let lin = match (bound, c, d) {
                (Some(text), _, _) => parse_linear(text)?,
                (None, Some(c), Some(d)) => LinearBound::new(*c, *d),
                _ => bail!("give the bound as --bound C,D or as --C and --D"),
            };
            let limits = limits.to_limits();
            let mut r = Report::new("extract-dfa", digest);
            r.bound = Some(lin.describe());
            match extract_dfa(&m, lin.c, lin.d, &limits) {
                Ok(dfa) => {
                    let doc = dfa.to_document();
                    if let Some(path) = out {
                        write(path, &serde_json::to_string_pretty(&doc)?)?;
                    }
                    if let Some(path) = dot {
                        write(path, &dfa.to_dot())?;
                    }
                    r.verdict = Some(Verdict::RunsInTime);
                    r.payload = Some(json!({ "states": dfa.state_count(), "dfa": doc }));
                }
                Err(RegularError::NotInTime(v)) => {
                    r.exit_code = v.exit_code() as u8;
                    r.verdict = Some(*v);
                }
                Err(e) => return Err(e.into()),
            }
            Ok(r)
        }
        Command::Gadget { machine, kind, bound_table, horizon, out } => {
            let (h, digest) = load_one_tape(&machine.machine)?;
            let mut r = Report::new("gadget", digest);
            let doc = match kind {
                GadgetKind::Counting => {
                    let g = build_counting_gadget(&h)?;
                    r.payload = Some(json!({ "kind": "counting", "states": g.state_count(), "tapes": g.tapes() }));
                    serde_json::to_value(g.to_document())?
                }
                GadgetKind::Pass => {
                    let path = bound_table.as_ref().ok_or_else(|| anyhow!("the pass gadget needs --bound-table"))?;
                    let t = TableBound::from_json(&read(path)?.0)?;
                    let params = gadget_params(&t, *horizon)?;
                    let g = build_pass_gadget(&h, &params)?;
                    r.bound = Some(t.describe());
                    r.payload = Some(json!({ "kind": "pass", "params": params, "states": g.state_count() }));
                    serde_json::to_value(g.to_document())?
                }
            };
            match out {
                Some(path) => write(path, &serde_json::to_string_pretty(&doc)?)?,
                None => {
                    if let Some(Value::Object(p)) = r.payload.as_mut() {
                        p.insert("machine".into(), doc);
                    }
                }
            }
            Ok(r)
        }
        Command::Oracle { machine, bound, max_len, random, seed } => {
            let (m, digest) = load_one_tape(&machine.machine)?;
            let bound = load_bound(bound)?;
            let mut r = Report::new("oracle", digest);
            r.bound = Some(bound.describe());
            let mut checked = 0u64;
            let mut witness = None;
            for w in enumerate_inputs(m.input_alphabet(), *max_len) {
                checked += 1;
                if let Some(v) = overrun(&m, bound.as_ref(), &w) {
                    witness = Some(v);
                    break;
                }
            }
            if witness.is_none() && *random > 0 && !m.input_alphabet().is_empty() {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let letters = m.input_alphabet();
                for _ in 0..*random {
                    let len = rng.gen_range(max_len + 1..=2 * max_len + 1);
                    let w: Vec<Sym> = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
                    checked += 1;
                    if let Some(v) = overrun(&m, bound.as_ref(), &w) {
                        witness = Some(v);
                        break;
                    }
                }
            }
            r.payload = Some(json!({ "inputs_checked": checked, "max_len": max_len, "seed": seed, "passed": witness.is_none() }));
            if let Some(v) = witness {
                r.exit_code = 1;
                r.verdict = Some(v);
            }
            Ok(r)
        }
    }
}

impl Report {
    fn new(command: &str, digest: String) -> Report {
        Report {
            command: command.into(),
            machine_sha256: digest,
            bound: None,
            verdict: None,
            payload: None,
            caps: None,
            tables: None,
            wall_time_ms: 0.0,
            exit_code: 0,
        }
    }
}

impl LimitArgs {
    fn to_limits(&self) -> Limits {
        Limits { cap_c: self.cap_c, max_len: self.max_len, effort: self.effort, jobs: self.jobs, ..Limits::default() }
    }
}

fn analysis_report(
    command: &str,
    digest: String,
    bound: &dyn TimeBound,
    a: Analysis,
    limits: &Limits,
) -> Report {
    let mut r = Report::new(command, digest);
    r.bound = Some(bound.describe());
    r.exit_code = a.verdict.exit_code() as u8;
    r.caps = Some(Caps {
        crossing_cap: a.crossing_cap,
        crossing_cap_certified: a.crossing_cap_certified,
        length_cap: a.length_cap.clone(),
        length_cap_certified: a.length_cap_certified,
        trivial_n0: a.trivial_n0,
        effort: limits.effort,
        effort_used: a.effort_used,
    });
    r.tables = a.sizes;
    r.verdict = Some(a.verdict);
    r
}

/// An overrun verdict if `w` takes more than ⌊T(|w|)⌋ steps.
fn overrun(m: &OneTapeMachine, bound: &dyn TimeBound, w: &[Sym]) -> Option<Verdict> {
    let allowed = bound.floor_eval(w.len() as u64);
    let out = m.run(w, u64::try_from(allowed).unwrap_or(u64::MAX - 1) + 1);
    (out.steps as u128 > allowed).then(|| Verdict::Violation {
        witness: w.to_vec(),
        witness_text: m.format_word(w),
        detail: ViolationDetail::Overrun { length: w.len() as u64, allowed, steps: out.steps },
    })
}

fn read(path: &Path) -> anyhow::Result<(String, String)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let digest = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    Ok((text, digest))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))
}

fn load_one_tape(path: &Path) -> anyhow::Result<(OneTapeMachine, String)> {
    let (text, digest) = read(path)?;
    let m = Machine::from_json(&text)
        .with_context(|| format!("loading {}", path.display()))?
        .one_tape()
        .ok_or_else(|| anyhow!("{} is not a one-tape machine", path.display()))?;
    Ok((m, digest))
}

fn load_multi_tape(path: &Path) -> anyhow::Result<(MultiTapeMachine, String)> {
    let (text, digest) = read(path)?;
    let m = Machine::from_json(&text)
        .with_context(|| format!("loading {}", path.display()))?
        .multi_tape()
        .ok_or_else(|| anyhow!("{} is not a multi-tape machine", path.display()))?;
    Ok((m, digest))
}

fn load_bound(args: &BoundArgs) -> anyhow::Result<Box<dyn TimeBound>> {
    match (&args.bound, &args.bound_table) {
        (Some(text), None) => Ok(Box::new(parse_linear(text)?)),
        (None, Some(path)) => Ok(Box::new(TableBound::from_json(&read(path)?.0)?)),
        _ => bail!("give exactly one of --bound and --bound-table"),
    }
}
