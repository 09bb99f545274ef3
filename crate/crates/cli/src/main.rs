mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use unitary_testers::bounds::{classify, estimate_bound, BoundRecord, SearchConfig};
use unitary_testers::muub::{are_muub, build_named_basis, BasisSpec, UnitaryBasis, BASIS_NAMES, KAPPA_TOL};
use unitary_testers::qkd::{
    simulate, ConfigDoc, EveStrategy, ProbePolicy, Protocol, ProtocolConfig, RoundRecord,
};
use unitary_testers::tester::{named_tester, Tester, TesterLiteral, TesterSpec, TESTER_NAMES};
use unitary_testers::verify::{run_suites, SUITES};
use unitary_testers::{Error, RngHandle};

use report::{round_floats, CommandReport, Status};

#[derive(Parser)]
#[command(name = "utester", version, about = "Unitary testers: verification, entropic bounds, MUUB checks and QKD simulation")]
struct Cli {
    /// Print only the JSON report.
    #[arg(long, global = true)]
    json_only: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run built-in verification suites.
    Verify {
        #[arg(long, default_value = "all", value_parser = suite_names())]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Estimate the entropic bound of a tester pair.
    Bound {
        /// Tester name or path to a tester JSON file.
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
        #[arg(long, default_value_t = 32)]
        starts: usize,
        #[arg(long, default_value_t = 4000)]
        iters: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Check whether two unitary bases are mutually unbiased.
    MuubCheck {
        /// Basis name or path to a basis JSON file.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// List named bases and testers, or dump one as JSON.
    Basis {
        #[command(subcommand)]
        action: BasisAction,
    },
    /// Simulate a two-way QKD protocol.
    Qkd {
        #[arg(value_enum)]
        protocol: ProtocolArg,
        /// Read the whole run from a JSON document instead of flags.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        rounds: u64,
        #[arg(long, default_value_t = 0.0)]
        control_fraction: f64,
        #[arg(long, value_enum, default_value = "none")]
        eve: EveArg,
        #[arg(long, value_enum, default_value = "fixed")]
        eve_policy: PolicyArg,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long = "D", default_value_t = 2)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write a per-round CSV log.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BasisAction {
    List,
    Dump {
        name: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Lm05,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum EveArg {
    None,
    Qmm,
    Intercept,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Fixed,
    Random,
}

fn suite_names() -> clap::builder::PossibleValuesParser {
    let mut names = SUITES.to_vec();
    names.push("all");
    clap::builder::PossibleValuesParser::new(names)
}

struct Outcome {
    status: Status,
    payload: Value,
}

impl Outcome {
    fn new(pass: bool, payload: Value) -> Self {
        Self { status: Status::from_pass(pass), payload }
    }
}

struct Log {
    quiet: bool,
}

impl Log {
    fn line(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let log = Log { quiet: cli.json_only };
    let started = Instant::now();
    let name = command_name(&cli.command);
    let outcome = run(cli.command, &log).unwrap_or_else(|e| {
        log.line(format!("error: {e}"));
        Outcome {
            status: Status::Error,
            payload: json!({ "error": e.to_string() }),
        }
    });
    let mut payload = outcome.payload;
    round_floats(&mut payload);
    let report = CommandReport {
        command: name.into(),
        status: outcome.status,
        payload,
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    let line = serde_json::to_string(&report).expect("report serializes");
    // a closed stdout (e.g. piped into `head`) is not an error worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{line}");
    ExitCode::from(outcome.status.exit_code())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Bound { .. } => "bound",
        Command::MuubCheck { .. } => "muub-check",
        Command::Basis { .. } => "basis",
        Command::Qkd { .. } => "qkd",
    }
}

fn run(command: Command, log: &Log) -> Result<Outcome, Error> {
    match command {
        Command::Verify { suite, seed } => {
            let reports = run_suites(&suite, seed)?;
            for r in &reports {
                log.line(format!("{:<8} {}/{}", r.suite, r.passed, r.total));
                for c in r.checks.iter().filter(|c| !c.pass) {
                    log.line(format!("  FAIL {}: {}", c.name, c.detail));
                }
            }
            let pass = reports.iter().all(|r| r.all_pass());
            let passed: usize = reports.iter().map(|r| r.passed).sum();
            let total: usize = reports.iter().map(|r| r.total).sum();
            Ok(Outcome::new(
                pass,
                json!({ "seed": seed, "suites": reports, "passed": passed, "total": total }),
            ))
        }
        Command::Bound { t1, t2, starts, iters, tol, seed } => {
            let (t1, t2) = (load_tester(&t1)?, load_tester(&t2)?);
            let cfg = SearchConfig { starts, max_iters: iters, tol, rng: RngHandle::new(seed) };
            let est = estimate_bound(&t1, &t2, &cfg)?;
            log.line(format!("bound({}, {}) ≈ {:.9} bits", t1.label(), t2.label(), est.value));
            let saturation = classify(est.value, t1.outcome_count());
            let mut payload = serde_json::to_value(BoundRecord::from(&est))?;
            payload["t1"] = json!(t1.label());
            payload["t2"] = json!(t2.label());
            payload["saturation"] = serde_json::to_value(saturation)?;
            Ok(Outcome::new(true, payload))
        }
        Command::MuubCheck { a, b, d } => {
            let (a, b) = (load_basis(&a, d)?, load_basis(&b, d)?);
            let report = are_muub(&a, &b, KAPPA_TOL)?;
            log.line(format!("kappa = {:?}, verdict = {}", report.kappa, report.verdict));
            Ok(Outcome::new(report.verdict, serde_json::to_value(report)?))
        }
        Command::Basis { action: BasisAction::List } => {
            for n in BASIS_NAMES {
                log.line(*n);
            }
            Ok(Outcome::new(true, json!({ "bases": BASIS_NAMES, "testers": TESTER_NAMES })))
        }
        Command::Basis { action: BasisAction::Dump { name, d } } => {
            // tester names dump as tester literals, a template for tester files
            match build_named_basis(&name, d) {
                Err(Error::UnknownName(_)) => {
                    let t = named_tester(&name)?;
                    Ok(Outcome::new(true, json!({ "name": name, "tester": TesterLiteral::from(&t) })))
                }
                b => Ok(Outcome::new(true, json!({ "name": name, "basis": b? }))),
            }
        }
        Command::Qkd {
            protocol,
            config,
            rounds,
            control_fraction,
            eve,
            eve_policy,
            d,
            size,
            seed,
            trace,
        } => {
            let protocol = match protocol {
                ProtocolArg::Lm05 => Protocol::Lm05,
                ProtocolArg::Extended => Protocol::Extended,
            };
            let cfg = match config {
                Some(path) => {
                    let (doc_protocol, cfg) = ConfigDoc::from_json(&read(&path)?)?.into_config()?;
                    if doc_protocol != protocol {
                        return Err(Error::InvalidConfig("config protocol differs from the subcommand".into()));
                    }
                    cfg
                }
                None => {
                    let eve = match (eve, eve_policy) {
                        (EveArg::None, _) => EveStrategy::None,
                        (EveArg::Qmm, PolicyArg::Fixed) => EveStrategy::Qmm { probe: ProbePolicy::default() },
                        (EveArg::Qmm, PolicyArg::Random) => EveStrategy::Qmm { probe: ProbePolicy::Random },
                        (EveArg::Intercept, _) => EveStrategy::InterceptResend,
                    };
                    let rng = RngHandle::new(seed);
                    let mut cfg = match protocol {
                        Protocol::Lm05 => ProtocolConfig::lm05(rounds, control_fraction, eve, rng),
                        Protocol::Extended => ProtocolConfig::extended(size, rounds, eve, rng)?,
                    };
                    cfg.control_fraction = control_fraction;
                    if d != cfg.d {
                        return Err(Error::UnsupportedDimension { name: "qkd preset".into(), d });
                    }
                    cfg
                }
            };
            let (stats, records) = simulate(&cfg, protocol)?;
            if let Some(path) = trace {
                write_trace(&path, &records)?;
                log.line(format!("trace written to {}", path.display()));
            }
            log.line(format!(
                "sifted {}/{} encode rounds, bob error {:.4}, cm mismatch {:.4}",
                stats.sifted, stats.encode_rounds, stats.bob_error.rate, stats.cm_mismatch.rate
            ));
            if let Some(acc) = stats.eve_accuracy {
                log.line(format!("eve accuracy {:.4} ± {:.4}", acc.rate, acc.std_error));
            }
            let payload = json!({
                "d": cfg.d,
                "D": cfg.size,
                "eve": cfg.eve,
                "seed": cfg.rng.seed,
                "stream": cfg.rng.stream,
                "stats": stats,
            });
            Ok(Outcome::new(true, payload))
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

/// A registry name, or a path to a JSON tester literal.
fn load_tester(arg: &str) -> Result<Tester, Error> {
    match named_tester(arg) {
        Ok(t) => Ok(t),
        Err(Error::UnknownName(_)) if Path::new(arg).is_file() => {
            let spec: TesterSpec = serde_json::from_str(&read(Path::new(arg))?)?;
            spec.resolve()
        }
        Err(e) => Err(e),
    }
}

fn load_basis(arg: &str, d: usize) -> Result<UnitaryBasis, Error> {
    match build_named_basis(arg, d) {
        Err(Error::UnknownName(_)) if Path::new(arg).is_file() => {
            let spec: BasisSpec = serde_json::from_str(&read(Path::new(arg))?)?;
            spec.resolve(d)
        }
        other => other,
    }
}

fn write_trace(path: &Path, records: &[RoundRecord]) -> Result<(), Error> {
    let io = |e: csv::Error| Error::InvalidConfig(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for r in records {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}
