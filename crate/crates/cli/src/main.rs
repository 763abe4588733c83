use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use liouville_core::certify::{self, CertifyOptions, UltraWitness, DEFAULT_SEED};
use liouville_core::construct::{seed_bits, FunctionState, FIRST_FREE};
use liouville_core::dyadic::parse_decimal;
use liouville_core::enumeration::Enumeration;
use liouville_core::par::Exec;
use liouville_core::poly::IntPolynomial;
use liouville_core::realroots::AlgebraicNumber;
use liouville_core::report::{Report, Status};
use liouville_core::rigor::Schedule;
use liouville_core::Error;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "liouville", version, about = "Certified construction of Liouville-valued functions")]
struct Cli {
    /// Initial working precision in bits.
    #[arg(long, global = true, default_value_t = 64)]
    precision_start: u32,
    /// Precision cap in bits.
    #[arg(long, global = true, env = "LIOUVILLE_PRECISION_CAP", default_value_t = 65536)]
    precision_cap: u32,
    /// Run every stage on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    F,
    Phi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Lemmas,
    Enumeration,
    Heights,
    Construction,
    Fuzz,
}

#[derive(Subcommand)]
enum Command {
    /// Export the first COUNT numbers of degree m in [0, 1/2], ordered by height.
    Enumerate {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Choose c_6..c_TERMS and write the state file.
    Construct {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        terms: usize,
        /// Hex string; bit n - 6 (most significant first) picks the candidate for c_n.
        #[arg(long)]
        seed_bits: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate f or phi at a point, printed as `mid ± rad`.
    Eval {
        #[arg(long)]
        state: PathBuf,
        /// Rational point (`a/b` or decimal).
        #[arg(long, conflicts_with = "minpoly", allow_hyphen_values = true)]
        at: Option<String>,
        /// Comma-separated integer coefficients, constant term first.
        #[arg(long, requires = "interval", allow_hyphen_values = true)]
        minpoly: Option<String>,
        /// Isolating interval `lo,hi` for the root of --minpoly.
        #[arg(long)]
        interval: Option<String>,
        #[arg(long, value_enum, default_value = "phi")]
        function: Function,
        /// Requested radius, as bits below one.
        #[arg(long, default_value_t = 64)]
        bits: u32,
    },
    /// Run a check suite and write a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// State file for the construction suite.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Certify the Liouville chain of phi(xi) from a witness for xi.
    CertifyLiouville {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        /// Drop witness entries whose height is below max(m, 8).
        #[arg(long)]
        trim: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write a synthetic witness with heights max(m, 8), max(m, 8) + 1, ...
    Witness {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        count: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Check(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceCap { .. } | Error::RefinementCap { .. } => Failure::Resource(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return t;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn load_state(path: &Path) -> Result<FunctionState, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(FunctionState::from_json(&text)?)
}

fn value_string(a: &AlgebraicNumber) -> String {
    match a.as_rational() {
        Some(r) => r.to_string(),
        None => format!("{:.17}", a.to_f64()),
    }
}

fn enumerate(m: usize, count: usize, format: Format, exec: Exec, output: Option<&Path>) -> Outcome {
    let e = Enumeration::build_with(m, count, liouville_core::polyenum::DEFAULT_GRID_BUDGET, exec)?.prefix(count);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&e.records()).expect("records serialize") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "height", "value", "minpoly", "lo", "hi"]).map_err(io::Error::other)?;
            for (r, a) in e.records().iter().zip(e.items()) {
                let poly = r.minpoly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
                w.write_record([&r.index.to_string(), &r.height, &value_string(a), &poly, &r.lo, &r.hi])
                    .map_err(io::Error::other)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| io::Error::other(e.to_string()))?).expect("csv is utf-8")
        }
    };
    emit(output, &text)
}

fn construct(m: usize, terms: usize, seed: Option<&str>, schedule: Schedule, output: Option<&Path>) -> Outcome {
    if terms < FIRST_FREE - 1 {
        return Err(Failure::Usage(format!("--terms must be at least {}", FIRST_FREE - 1)));
    }
    let needed = terms + 1 - FIRST_FREE;
    let bits = match seed {
        Some(s) => seed_bits(s)?,
        None => vec![0; needed],
    };
    if bits.len() < needed {
        return Err(Failure::Usage(format!("--seed-bits has {} bits, {needed} are needed", bits.len())));
    }
    let state = FunctionState::construct(m, terms, &bits, schedule)?;
    for o in state.overrides() {
        eprintln!("c_{}: candidate {} requested, {} used", o.n, o.requested, o.used);
    }
    emit(output, &state.to_json(timestamp()))
}

fn parse_point(s: &str) -> Result<BigRational, Failure> {
    parse_decimal(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_algebraic(minpoly: &str, interval: &str) -> Result<AlgebraicNumber, Failure> {
    let coeffs = minpoly
        .split(',')
        .map(|c| c.trim().parse::<BigInt>().map_err(|_| Failure::Usage(format!("bad coefficient `{c}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let (lo, hi) = interval
        .split_once(',')
        .ok_or_else(|| Failure::Usage("--interval expects `lo,hi`".into()))?;
    let (lo, hi) = (parse_point(lo.trim())?, parse_point(hi.trim())?);
    let p = IntPolynomial::new(coeffs).normalized();
    Ok(AlgebraicNumber::from_enclosure(p, &lo, &hi)?)
}

#[allow(clippy::too_many_arguments)]
fn eval(
    state: &Path,
    at: Option<&str>,
    minpoly: Option<&str>,
    interval: Option<&str>,
    function: Function,
    bits: u32,
) -> Outcome {
    let s = load_state(state)?;
    let (ball, exact) = match (at, minpoly, interval) {
        (Some(x), None, _) => {
            let x = parse_point(x)?;
            match function {
                Function::Phi => {
                    let v = s.evaluate_phi(&x, bits)?;
                    (v.ball, v.exact)
                }
                Function::F => {
                    let a = AlgebraicNumber::from_rational(&x);
                    let exact = if x >= BigRational::from_integer(0.into()) { s.exact_at(&a)? } else { None };
                    (s.evaluate_f_rational(&x, bits)?, exact)
                }
            }
        }
        (None, Some(p), Some(iv)) => {
            let a = parse_algebraic(p, iv)?;
            match function {
                Function::Phi => {
                    let v = s.evaluate_phi_algebraic(&a, bits)?;
                    (v.ball, v.exact)
                }
                Function::F => (s.evaluate_f(&a.to_ball(bits + 32), bits)?, s.exact_at(&a)?),
            }
        }
        _ => return Err(Failure::Usage("give --at or --minpoly with --interval".into())),
    };
    let mut out = format!("{}\n", ball.to_exact_string());
    if let Some(v) = exact {
        out.push_str(&format!("exact: {v}\n"));
    }
    emit(None, &out)
}

fn finish_report(report: &Report, output: Option<&Path>) -> Outcome {
    let text = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    emit(output, &text)?;
    match report.status {
        Status::Pass => Ok(()),
        Status::Fail => Err(Failure::Check(format!("{} failed", report.check))),
        Status::Undecided => Err(Failure::Resource(format!("{} undecided at the precision cap", report.check))),
    }
}

#[allow(clippy::too_many_arguments)]
fn verify(
    suite: Suite,
    m: usize,
    samples: u64,
    seed: u64,
    state: Option<&Path>,
    schedule: Schedule,
    exec: Exec,
    output: Option<&Path>,
) -> Outcome {
    let report = match suite {
        Suite::Lemmas => certify::lemma_suite(m, samples, seed, schedule, exec)?,
        Suite::Enumeration => {
            let mut parts = Vec::new();
            for mm in 1..=m.min(3) {
                parts.push(certify::tk_bound_check(mm, 8, exec)?);
                let e = Enumeration::build_with(mm, 200, liouville_core::polyenum::DEFAULT_GRID_BUDGET, exec)?;
                parts.push(certify::height_bounds_check(&e));
            }
            Report::merge("enumeration", parts)
        }
        Suite::Heights => certify::q_le_exp3_suite(20, schedule)?,
        Suite::Construction => {
            let path = state.ok_or_else(|| Failure::Usage("the construction suite needs --state".into()))?;
            certify::verify_state(&load_state(path)?, exec)?
        }
        Suite::Fuzz => certify::ball_fuzz(samples, 64, seed, exec)?,
    };
    finish_report(&report, output)
}

fn certify_liouville(state: &Path, witness: &Path, trim: bool, schedule: Schedule, output: Option<&Path>) -> Outcome {
    let s = load_state(state)?;
    let text = fs::read_to_string(witness).map_err(|e| Failure::Usage(format!("{}: {e}", witness.display())))?;
    let w = UltraWitness::from_json(&text)?;
    match certify::liouville_certificate(&s, &w, CertifyOptions { schedule, trim })? {
        Ok(cert) => emit(output, &(serde_json::to_string_pretty(&cert).expect("certificate serializes") + "\n")),
        Err(r) => {
            emit(output, &(serde_json::to_string_pretty(&r).expect("rejection serializes") + "\n"))?;
            Err(Failure::Check(format!("rejected at {:?}: {}", r.step, r.reason)))
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if cli.precision_start == 0 || cli.precision_start > cli.precision_cap {
        return Err(Failure::Usage("--precision-start must be positive and at most the cap".into()));
    }
    let schedule = Schedule::new(cli.precision_start, cli.precision_cap);
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match cli.command {
        Command::Enumerate { m, count, format, output } => enumerate(m, count, format, exec, output.as_deref()),
        Command::Construct { m, terms, seed_bits, output } => {
            construct(m, terms, seed_bits.as_deref(), schedule, output.as_deref())
        }
        Command::Eval { state, at, minpoly, interval, function, bits } => {
            eval(&state, at.as_deref(), minpoly.as_deref(), interval.as_deref(), function, bits)
        }
        Command::Verify { suite, m, samples, seed, state, output } => {
            verify(suite, m, samples, seed, state.as_deref(), schedule, exec, output.as_deref())
        }
        Command::CertifyLiouville { state, witness, trim, output } => {
            certify_liouville(&state, &witness, trim, schedule, output.as_deref())
        }
        Command::Witness { m, count, output } => emit(output.as_deref(), &UltraWitness::synthetic(m, count)?.to_json()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("resource cap: {m}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}
