//! Command-line driver: single trajectory runs in either number domain,
//! certificate emission and checking, reverse walks, graph exports, a
//! stratum table, and parallel range sweeps.
//!
//! Exit codes are a contract: 0 = ok, 1 = verification failure,
//! 2 = fuel exhausted, 3 = input error.  Stdout is byte-deterministic for
//! fixed flags; anything timing-dependent goes to stderr.

use std::io::Read as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;

use collatz_core::{
    build_tree, certify, check_invariant, hotel_dot, hotel_json, ic_run, recover_n,
    roundtrip_check, run_cl, run_gr, run_gr1, run_gr2, run_gr3, stratum, tree_dot, tree_json,
    verify, verify_detailed, Certificate, CertifyError, DomainElement, HotelGraph, JElem, Nat, Rat,
    StrataTable, Trace,
};

const DEFAULT_FUEL: u64 = 1_000_000;

/// Environment guard for the graph commands: `tree` accepts depths up to
/// this bound, `hotel` and `strata` accept ranges up to 2^bound.
const DEPTH_GUARD_VAR: &str = "COLLATZ_LAB_MAX_DEPTH";
const DEFAULT_MAX_DEPTH: u64 = 30;

const EXIT_OK: u8 = 0;
const EXIT_VERIFICATION: u8 = 1;
const EXIT_FUEL: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "collatz-lab",
    version,
    about = "Exact Collatz trajectory toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one trajectory and print its trace.
    Run(RunArgs),
    /// Emit the halting certificate for n as one JSON line.
    Certify(CertifyArgs),
    /// Check a certificate read from a file or standard input.
    VerifyCert(VerifyCertArgs),
    /// Walk a certificate triple backwards, one state per output line.
    Reverse(ReverseArgs),
    /// Print the inverse-map tree down to a given depth.
    Tree(TreeArgs),
    /// Print the tower/floor window over 1..=max.
    Hotel(HotelArgs),
    /// Print the stratum table for 1..=max.
    Strata(StrataArgs),
    /// Run property checks over a range of starts.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Cl,
    Gr,
    Gr1,
    Gr2,
    Gr3,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainKind {
    Nat,
    Jaskowski,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Executor granularity; all five agree on every observable.
    #[arg(long, value_enum, default_value_t = Algo::Cl)]
    algo: Algo,
    #[arg(long, value_enum, default_value_t = DomainKind::Nat)]
    domain: DomainKind,
    /// Start value in the natural domain, decimal.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// Integer part of a pair start, decimal (may be negative).
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Weight part of a pair start, "num/den" or a plain integer.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    #[arg(long, value_enum, default_value_t = TraceFormat::Text)]
    format: TraceFormat,
}

#[derive(Args)]
struct CertifyArgs {
    /// Start value, decimal, at least 1.
    #[arg(long)]
    n: String,
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
}

#[derive(Args)]
struct VerifyCertArgs {
    /// Certificate JSON; standard input when omitted.
    #[arg(long)]
    file: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct ReverseArgs {
    #[arg(long)]
    x: u64,
    /// Decimal, unbounded.
    #[arg(long)]
    y: String,
    #[arg(long)]
    z: u64,
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
}

#[derive(Args)]
struct TreeArgs {
    #[arg(long)]
    depth: u64,
    #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
    format: GraphFormat,
}

#[derive(Args)]
struct HotelArgs {
    #[arg(long)]
    max: u64,
    #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
    format: GraphFormat,
}

#[derive(Args)]
struct StrataArgs {
    #[arg(long)]
    max: u64,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

#[derive(Args)]
struct SweepArgs {
    /// First start, at least 1.
    #[arg(long)]
    from: u64,
    /// Last start, inclusive.
    #[arg(long)]
    to: u64,
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Subset of halting,invariant,cert-roundtrip,reverse-roundtrip,strata;
    /// all five when omitted.
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    /// Worker threads for the range fan-out; 0 = all available.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

fn main() -> ExitCode {
    // clap's own error exit code (2) would collide with the fuel-exhausted
    // code, so flag errors are remapped onto the input-error code here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            err.print().expect("clap error output is writable");
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Certify(args) => cmd_certify(&args),
        Command::VerifyCert(args) => cmd_verify_cert(&args),
        Command::Reverse(args) => cmd_reverse(&args),
        Command::Tree(args) => cmd_tree(&args),
        Command::Hotel(args) => cmd_hotel(&args),
        Command::Strata(args) => cmd_strata(&args),
        Command::Sweep(args) => cmd_sweep(&args),
    };
    ExitCode::from(code)
}

fn input_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_INPUT
}

fn parse_nat(text: &str) -> Result<Nat, u8> {
    text.parse::<Nat>()
        .map_err(|err| input_error(&format!("bad natural number '{text}': {err}")))
}

enum StartValue {
    Natural(Nat),
    Pair(JElem),
}

fn parse_start(args: &RunArgs) -> Result<StartValue, u8> {
    match args.domain {
        DomainKind::Nat => {
            if args.k.is_some() || args.w.is_some() {
                return Err(input_error("--k/--w apply only to --domain jaskowski"));
            }
            let text = args
                .n
                .as_deref()
                .ok_or_else(|| input_error("--domain nat requires --n"))?;
            Ok(StartValue::Natural(parse_nat(text)?))
        }
        DomainKind::Jaskowski => {
            if args.n.is_some() {
                return Err(input_error("--n applies only to --domain nat"));
            }
            let (k_text, w_text) = match (args.k.as_deref(), args.w.as_deref()) {
                (Some(k), Some(w)) => (k, w),
                _ => return Err(input_error("--domain jaskowski requires --k and --w")),
            };
            let k: BigInt = k_text
                .parse()
                .map_err(|err| input_error(&format!("bad integer part '{k_text}': {err}")))?;
            let w: Rat = w_text
                .parse()
                .map_err(|err| input_error(&format!("bad weight '{w_text}': {err}")))?;
            let elem = JElem::new(k, w).map_err(|err| input_error(&err.to_string()))?;
            Ok(StartValue::Pair(elem))
        }
    }
}

fn print_trace(trace: &Trace, format: TraceFormat) -> u8 {
    match format {
        TraceFormat::Text => print!("{}", trace.to_text()),
        TraceFormat::Json => println!("{}", trace.to_json()),
    }
    if trace.halted() {
        EXIT_OK
    } else {
        EXIT_FUEL
    }
}

fn cmd_run(args: &RunArgs) -> u8 {
    let start = match parse_start(args) {
        Ok(start) => start,
        Err(code) => return code,
    };
    let trace = match (args.algo, start) {
        (Algo::Cl, start) => run_cl(&start.into_element(), args.fuel),
        (Algo::Gr, start) => run_gr(&start.into_element(), args.fuel),
        (Algo::Gr1, start) => run_gr1(&start.into_element(), args.fuel),
        (Algo::Gr2, StartValue::Natural(n)) => run_gr2(&n, args.fuel),
        (Algo::Gr3, StartValue::Natural(n)) => run_gr3(&n, args.fuel),
        (Algo::Gr2 | Algo::Gr3, StartValue::Pair(_)) => {
            return input_error("--algo gr2/gr3 track accumulators over naturals only");
        }
    };
    print_trace(&trace, args.format)
}

impl StartValue {
    fn into_element(self) -> DomainElement {
        match self {
            StartValue::Natural(n) => DomainElement::from(n),
            StartValue::Pair(elem) => DomainElement::from(elem),
        }
    }
}

fn cmd_certify(args: &CertifyArgs) -> u8 {
    let n = match parse_nat(&args.n) {
        Ok(n) => n,
        Err(code) => return code,
    };
    if n == Nat::from(0u32) {
        return input_error("--n must be at least 1");
    }
    match certify(&n, args.fuel) {
        Ok(cert) => {
            println!("{}", cert.canonical_json());
            EXIT_OK
        }
        Err(CertifyError::FuelExhausted { fuel, .. }) => {
            eprintln!("error: no halt within fuel {fuel}");
            EXIT_FUEL
        }
    }
}

fn cmd_verify_cert(args: &VerifyCertArgs) -> u8 {
    let text = match &args.file {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => text,
            Err(err) => return input_error(&format!("cannot read {}: {err}", path.display())),
        },
        None => {
            let mut buf = String::new();
            if let Err(err) = std::io::stdin().read_to_string(&mut buf) {
                return input_error(&format!("cannot read standard input: {err}"));
            }
            buf
        }
    };
    let cert: Certificate = match serde_json::from_str(text.trim()) {
        Ok(cert) => cert,
        Err(err) => return input_error(&format!("bad certificate JSON: {err}")),
    };
    match verify_detailed(&cert) {
        Ok(()) => {
            println!("valid");
            EXIT_OK
        }
        Err(violation) => {
            println!("invalid: {violation}");
            EXIT_VERIFICATION
        }
    }
}

fn cmd_reverse(args: &ReverseArgs) -> u8 {
    let y = match parse_nat(&args.y) {
        Ok(y) => y,
        Err(code) => return code,
    };
    let states = ic_run(args.x, &y, args.z, args.fuel);
    for state in &states {
        // Fixed schema, hand-rendered: x and z are machine words, y crosses
        // the boundary as a decimal string like every unbounded number.
        let mut line = format!(
            "{{\"x\":{},\"y\":\"{}\",\"z\":{}",
            state.x, state.y, state.z
        );
        if state.err {
            line.push_str(",\"err\":true");
        }
        line.push('}');
        println!("{line}");
    }
    let last = states
        .last()
        .expect("the walk always yields its seed state");
    if last.err {
        EXIT_VERIFICATION
    } else if last.is_done() {
        EXIT_OK
    } else {
        EXIT_FUEL
    }
}

fn guard_limit() -> Result<u64, u8> {
    match std::env::var(DEPTH_GUARD_VAR) {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| input_error(&format!("bad {DEPTH_GUARD_VAR} value '{text}'"))),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_DEPTH),
        Err(err) => Err(input_error(&format!("bad {DEPTH_GUARD_VAR}: {err}"))),
    }
}

/// Largest `--max` the window commands accept under the guard: 2^limit,
/// clamped to the coordinate-arithmetic bound.
fn guard_cap(limit: u64) -> u64 {
    1u64 << limit.min(62)
}

fn cmd_tree(args: &TreeArgs) -> u8 {
    let limit = match guard_limit() {
        Ok(limit) => limit,
        Err(code) => return code,
    };
    if args.depth > limit {
        return input_error(&format!(
            "--depth {} exceeds the {DEPTH_GUARD_VAR} bound {limit}",
            args.depth
        ));
    }
    let tree = build_tree(args.depth);
    match args.format {
        GraphFormat::Dot => print!("{}", tree_dot(&tree)),
        GraphFormat::Json => println!("{}", tree_json(&tree)),
    }
    EXIT_OK
}

fn cmd_hotel(args: &HotelArgs) -> u8 {
    let limit = match guard_limit() {
        Ok(limit) => limit,
        Err(code) => return code,
    };
    if args.max < 1 || args.max > guard_cap(limit) {
        return input_error(&format!(
            "--max {} is outside 1..=2^{} ({DEPTH_GUARD_VAR})",
            args.max,
            limit.min(62)
        ));
    }
    let graph = HotelGraph::new(args.max);
    match args.format {
        GraphFormat::Dot => print!("{}", hotel_dot(&graph)),
        GraphFormat::Json => println!("{}", hotel_json(&graph)),
    }
    EXIT_OK
}

fn cmd_strata(args: &StrataArgs) -> u8 {
    let limit = match guard_limit() {
        Ok(limit) => limit,
        Err(code) => return code,
    };
    if args.max < 1 || args.max > guard_cap(limit) {
        return input_error(&format!(
            "--max {} is outside 1..=2^{} ({DEPTH_GUARD_VAR})",
            args.max,
            limit.min(62)
        ));
    }
    let table = StrataTable::build(args.max);
    match args.format {
        TableFormat::Csv => print!("{}", table.to_csv()),
    }
    EXIT_OK
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Check {
    Halting,
    Invariant,
    CertRoundtrip,
    ReverseRoundtrip,
    Strata,
}

const ALL_CHECKS: [Check; 5] = [
    Check::Halting,
    Check::Invariant,
    Check::CertRoundtrip,
    Check::ReverseRoundtrip,
    Check::Strata,
];

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::Halting => "halting",
            Check::Invariant => "invariant",
            Check::CertRoundtrip => "cert-roundtrip",
            Check::ReverseRoundtrip => "reverse-roundtrip",
            Check::Strata => "strata",
        }
    }

    fn from_name(name: &str) -> Option<Check> {
        ALL_CHECKS.iter().copied().find(|c| c.name() == name)
    }
}

/// Per-start verdicts, parallel to the selected check list; `None` marks a
/// check that does not apply to this start (reverse round trips are an
/// odd-start property).
fn sweep_item(n: u64, fuel: u64, checks: &[Check]) -> (Option<u64>, Vec<Option<bool>>) {
    let start = Nat::from(n);
    let trace = run_cl(&DomainElement::from(start.clone()), fuel);
    let needs_cert = checks
        .iter()
        .any(|c| matches!(c, Check::CertRoundtrip | Check::Strata));
    let cert = if needs_cert {
        Some(certify(&start, fuel))
    } else {
        None
    };
    let verdicts = checks
        .iter()
        .map(|check| match check {
            Check::Halting => Some(trace.halted()),
            Check::Invariant => {
                let instrumented = run_gr3(&start, fuel);
                Some(instrumented.halted() && check_invariant(&instrumented).ok())
            }
            Check::CertRoundtrip => Some(match cert.as_ref().unwrap() {
                Ok(cert) => {
                    verify(cert) && recover_n(cert.x, &cert.y, cert.z).as_ref() == Ok(&start)
                }
                Err(_) => false,
            }),
            Check::ReverseRoundtrip => {
                if n % 2 == 0 {
                    None
                } else {
                    Some(roundtrip_check(&start, fuel).ok())
                }
            }
            Check::Strata => Some(match cert.as_ref().unwrap() {
                Ok(cert) => cert.x == stratum(&start),
                Err(_) => false,
            }),
        })
        .collect();
    let length = trace.halted().then(|| trace.steps());
    (length, verdicts)
}

struct CheckTally {
    checked: u64,
    passed: u64,
    first_fail: Option<u64>,
}

fn cmd_sweep(args: &SweepArgs) -> u8 {
    if args.from < 1 || args.from > args.to {
        return input_error(&format!("bad range {}..{}", args.from, args.to));
    }
    let checks: Vec<Check> = if args.checks.is_empty() {
        ALL_CHECKS.to_vec()
    } else {
        let mut selected = Vec::new();
        for name in &args.checks {
            match Check::from_name(name) {
                Some(check) if !selected.contains(&check) => selected.push(check),
                Some(_) => {}
                None => return input_error(&format!("unknown check '{name}'")),
            }
        }
        selected
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers)
        .build()
    {
        Ok(pool) => pool,
        Err(err) => return input_error(&format!("cannot start {} workers: {err}", args.workers)),
    };

    let clock = Instant::now();
    // collect() keeps index order, so the merge is by n no matter which
    // worker finishes first.
    let items: Vec<(Option<u64>, Vec<Option<bool>>)> = pool.install(|| {
        (args.from..=args.to)
            .into_par_iter()
            .map(|n| sweep_item(n, args.fuel, &checks))
            .collect()
    });
    eprintln!("wall-time-ms {}", clock.elapsed().as_millis());

    let mut tallies: Vec<CheckTally> = checks
        .iter()
        .map(|_| CheckTally {
            checked: 0,
            passed: 0,
            first_fail: None,
        })
        .collect();
    let mut longest: Option<(u64, u64)> = None;
    for (offset, (length, verdicts)) in items.iter().enumerate() {
        let n = args.from + offset as u64;
        if let Some(steps) = length {
            if longest.map_or(true, |(best, _)| *steps > best) {
                longest = Some((*steps, n));
            }
        }
        for (tally, verdict) in tallies.iter_mut().zip(verdicts) {
            if let Some(ok) = verdict {
                tally.checked += 1;
                if *ok {
                    tally.passed += 1;
                } else if tally.first_fail.is_none() {
                    tally.first_fail = Some(n);
                }
            }
        }
    }

    println!("sweep from={} to={} fuel={}", args.from, args.to, args.fuel);
    let names: Vec<&str> = checks.iter().map(|c| c.name()).collect();
    println!("checks {}", names.join(","));
    let mut all_pass = true;
    for (check, tally) in checks.iter().zip(&tallies) {
        let failed = tally.checked - tally.passed;
        let mut line = format!(
            "{} checked={} passed={} failed={}",
            check.name(),
            tally.checked,
            tally.passed,
            failed
        );
        if let Some(n) = tally.first_fail {
            line.push_str(&format!(" first-fail={n}"));
            all_pass = false;
        }
        println!("{line}");
    }
    match longest {
        Some((steps, n)) => println!("max-trajectory-length {steps} n={n}"),
        None => println!("max-trajectory-length none"),
    }
    if all_pass {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}
