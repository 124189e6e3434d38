//! `tptri` command-line driver.
//!
//! Exit codes: 0 certified / pass, 1 refuted / mismatch, 2 partial,
//! 3 usage error, 4 runtime error.

mod config;
mod crosscheck;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use tptri::bijection::{partition_of_word, total_order, validate_word, word_of_partition, PathWord};
use tptri::network::{build_d, build_dprime, specialize_ace, specialize_ace_seq, PlanarNetwork};
use tptri::partition::SetPartition;
use tptri::poly::{Polynomial, VariableTable};
use tptri::tpcheck::{self, Budget, ReportBody, RunMeta, Status, TpOptions};
use tptri::triangle::FamilySpec;
use tptri::{Error, Triangle};

use config::*;

const EXIT_MISMATCH: u8 = 1;
const EXIT_PARTIAL: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_ERROR: u8 = 4;

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownFamily(_) | Error::BadParameter(_) | Error::MalformedSymbol(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Runtime(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_ERROR);
            }
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn family_triangle(f: &FamilyArgs, nmax: usize) -> Result<Triangle, Failure> {
    let t = VariableTable::new();
    let spec = FamilySpec::parse(&t, &f.family, &f.params)?;
    Ok(spec.generate(&t, nmax))
}

fn run(cfg: &RunConfig) -> Result<(String, u8), Failure> {
    match cfg {
        RunConfig::Triangle(a) => {
            let tri = family_triangle(&a.family, a.nmax)?;
            let out = match a.format {
                TriangleFormat::Json => pretty(&tri.to_doc()),
                TriangleFormat::Csv => tri.to_csv().map_err(|e| Failure::Usage(e.to_string()))?,
                TriangleFormat::Text => tri.to_text(),
            };
            Ok((out, 0))
        }
        RunConfig::Check(a) => check(cfg, a),
        RunConfig::Crosscheck(a) => {
            let summary = crosscheck::run(a)?;
            let code = if summary.passed() { 0 } else { EXIT_MISMATCH };
            Ok((pretty(&summary), code))
        }
        RunConfig::Network(a) => network(a),
        RunConfig::Bijection(a) => bijection(a),
    }
}

/// Deterministic `report` first; timings and the invocation go under `meta`.
#[derive(Serialize)]
struct CheckOutput<'a> {
    report: &'a ReportBody,
    meta: Meta<'a>,
}

#[derive(Serialize)]
struct Meta<'a> {
    #[serde(flatten)]
    run: &'a RunMeta,
    config: &'a RunConfig,
}

fn check(cfg: &RunConfig, a: &CheckArgs) -> Result<(String, u8), Failure> {
    if a.n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let tri = family_triangle(&a.family, a.n - 1)?;
    let jobs = a
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(Failure::Usage("--jobs must be positive".into()));
    }
    let opts = TpOptions {
        rmax: a.rmax,
        jobs,
        chunk_size: a.chunk_size,
        checkpoint: a.checkpoint.clone(),
        budget: Budget { seconds: a.budget_seconds, chunks: a.budget_chunks },
    };
    let report = if a.resume {
        let path = a.checkpoint.as_ref().expect("clap enforces --checkpoint");
        tpcheck::resume(path, &tri, &opts)?
    } else {
        tpcheck::check_total_positivity(&tri, a.n, &opts)?
    };
    let code = match report.status() {
        Status::Certified => 0,
        Status::Refuted => EXIT_MISMATCH,
        Status::Partial => EXIT_PARTIAL,
    };
    let out = CheckOutput {
        report: &report.report,
        meta: Meta { run: &report.meta, config: cfg },
    };
    Ok((pretty(&out), code))
}

fn network(a: &NetworkArgs) -> Result<(String, u8), Failure> {
    let t = VariableTable::new();
    let net: PlanarNetwork = match a.net {
        NetworkKind::D => build_d(&t, a.nmax, |_, _| Polynomial::one(&t), |_, l| {
            Polynomial::constant(&t, l as i64)
        }),
        NetworkKind::Dprime => {
            if a.nmax > crosscheck::MAX_NETWORK_NMAX {
                return Err(Error::GuardExceeded {
                    what: "network nmax",
                    got: a.nmax,
                    limit: crosscheck::MAX_NETWORK_NMAX,
                }
                .into());
            }
            build_dprime(&t, a.nmax)
        }
    };
    if a.specialize != Specialize::None && a.format != NetworkFormat::Matrix {
        return Err(Failure::Usage("--specialize applies to --format matrix only".into()));
    }
    let out = match a.format {
        NetworkFormat::Json => pretty(&net.to_doc()),
        NetworkFormat::Dot => net.to_dot(),
        NetworkFormat::Matrix => {
            let pm = net.path_matrix(a.nmax)?;
            let pm = match a.specialize {
                Specialize::None => pm,
                Specialize::Ace => specialize_ace(&pm)?,
                Specialize::AceSeq => specialize_ace_seq(&pm)?,
            };
            pretty(&pm.to_doc())
        }
    };
    Ok((out, 0))
}

#[derive(Serialize, Default)]
struct BijectionOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<Vec<u32>>,
    word: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    letters: Option<PathWord>,
    n: usize,
    k: usize,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    round_trip: Option<bool>,
}

#[derive(Serialize)]
struct Violation {
    position: usize,
    condition: &'static str,
}

fn bijection(a: &BijectionArgs) -> Result<(String, u8), Failure> {
    let (pi, w, n, k) = match (&a.input.partition, &a.input.word) {
        (Some(p), _) => {
            let pi: SetPartition = p.parse()?;
            if pi.n() == 0 {
                return Err(Failure::Usage("partition of the empty set has no path".into()));
            }
            let (w, n, k) = word_of_partition(&pi);
            (pi, w, n, k)
        }
        (None, Some(w)) => {
            let w: PathWord = w.parse()?;
            let (n, k) = (a.n.expect("clap requires --n"), a.k.expect("clap requires --k"));
            if let Err(v) = validate_word(&w, n, k) {
                let out = BijectionOutput {
                    word: w.to_string(),
                    n,
                    k,
                    violation: Some(Violation { position: v.position, condition: v.condition.label() }),
                    ..Default::default()
                };
                return Ok((pretty(&out), EXIT_MISMATCH));
            }
            (partition_of_word(&w, n, k)?, w, n, k)
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    // both directions must agree whichever side was given
    let ok = partition_of_word(&w, n, k)? == pi && word_of_partition(&pi).0 == w;
    let out = BijectionOutput {
        partition: Some(pi.to_string()),
        order: Some(total_order(&pi)),
        word: w.to_string(),
        letters: Some(w),
        n,
        k,
        valid: true,
        violation: None,
        round_trip: Some(ok),
    };
    Ok((pretty(&out), if ok { 0 } else { EXIT_MISMATCH }))
}
