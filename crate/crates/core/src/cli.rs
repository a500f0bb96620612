//! Command-line front end. Results go to stdout (or --output), diagnostics
//! to stderr. Exit status: 0 success, 1 I/O failure, 2 invalid input,
//! 3 an oracle check failed.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::decomp::{AmbientParams, FactorData};
use crate::dual::{count_self_dual, dual_code, dual_code_nu, enumerate_self_dual};
use crate::error::Error;
use crate::gf::FieldCtx;
use crate::ideals::{count_codes, enumerate_codes};
use crate::json;
use crate::oracle::{self, Level};
use crate::poly::DEFAULT_SEED;

#[derive(Parser, Debug)]
#[command(
    name = "ccring",
    version,
    about = "Constacyclic codes over F_{p^m} + uF_{p^m}"
)]
struct Cli {
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RingArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long)]
    s: u32,
    #[arg(long)]
    n: u64,
    /// Field element: an integer for m = 1, a JSON array for m > 1; -1 means p - 1.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Modulus of F_{p^m} as little-endian coefficients, e.g. [1,0,1] or 1,0,1.
    #[arg(long)]
    modulus: Option<String>,
    /// Seed for polynomial factorization (overrides CCRING_SEED).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factors, idempotents, pairing and total count.
    Info(RingArgs),
    /// The primitive idempotents ε_j.
    Idempotents(RingArgs),
    /// Number of λ-constacyclic codes.
    Count(RingArgs),
    /// Every code as NDJSON.
    Enumerate {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Dual of a code read as JSON.
    Dual {
        /// Code JSON file; stdin if omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        /// For λ = ±1, report the dual as a code of the same ring.
        #[arg(long)]
        same_ring: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Self-dual codes for λ = ±1 (λ defaults to -1).
    Selfdual {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Run the brute-force oracle comparisons.
    Verify {
        #[arg(long, value_enum, default_value_t = VerifyLevel::Quick)]
        level: VerifyLevel,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VerifyLevel {
    Quick,
    Full,
}

enum Failure {
    Input(Error),
    Io(io::Error),
    Oracle(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}
impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}
impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(Error::Parse(e.to_string()))
    }
}

type Out = BufWriter<Box<dyn Write>>;

fn seed(explicit: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = explicit {
        return Ok(s);
    }
    match std::env::var("CCRING_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("CCRING_SEED={v:?} is not an integer")).into()),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn parse_modulus(s: &str) -> Result<Vec<u32>, Error> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad modulus coefficient {c:?}")))
        })
        .collect()
}

fn parse_lambda(k: &FieldCtx, s: &str) -> Result<crate::gf::FieldElem, Error> {
    if s.trim() == "-1" {
        return Ok(k.from_int(-1));
    }
    let v: Value =
        serde_json::from_str(s).map_err(|_| Error::Parse(format!("bad lambda {s:?}")))?;
    json::elem_from_json(k, &v)
}

fn factor_data(r: &RingArgs, default_lambda: Option<&str>) -> Result<FactorData, Failure> {
    let modulus = r.modulus.as_deref().map(parse_modulus).transpose()?;
    let k = FieldCtx::new(r.p, r.m, modulus.as_deref())?;
    let lam = r
        .lambda
        .as_deref()
        .or(default_lambda)
        .ok_or_else(|| Error::Parse("--lambda is required".into()))?;
    let lam = parse_lambda(&k, lam)?;
    let params = AmbientParams::new(k, r.s, r.n, lam)?;
    Ok(FactorData::build_with_seed(&params, seed(r.seed)?)?)
}

fn nu_of(fd: &FactorData) -> Result<i8, Error> {
    let k = fd.field();
    let l = fd.params.lambda;
    if l == k.one() {
        Ok(1)
    } else if l == k.from_int(-1) {
        Ok(-1)
    } else {
        Err(Error::NotSelfPairedLambda)
    }
}

fn pretty(out: &mut Out, v: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

fn execute(cmd: Command, out: &mut Out) -> Result<(), Failure> {
    match cmd {
        Command::Info(r) => pretty(out, &json::factor_data_to_json(&factor_data(&r, None)?))?,
        Command::Idempotents(r) => {
            pretty(out, &json::idempotents_to_json(&factor_data(&r, None)?))?
        }
        Command::Count(r) => writeln!(out, "{}", count_codes(&factor_data(&r, None)?))?,
        Command::Enumerate { ring, limit } => {
            let fd = factor_data(&ring, None)?;
            for code in enumerate_codes(&fd, limit) {
                writeln!(out, "{}", json::code_to_json(&fd, &code))?;
            }
        }
        Command::Dual {
            input,
            same_ring,
            seed: s,
        } => {
            let mut text = String::new();
            match input {
                Some(path) => {
                    File::open(path)?.read_to_string(&mut text)?;
                }
                None => {
                    io::stdin().read_to_string(&mut text)?;
                }
            }
            let v: Value = serde_json::from_str(&text)?;
            let params = json::code_params_from_json(&v)?;
            let fd = FactorData::build_with_seed(&params, seed(s)?)?;
            let code = json::code_from_json(&fd, &v)?;
            if same_ring {
                pretty(out, &json::code_to_json(&fd, &dual_code_nu(&fd, &code)?))?;
            } else {
                pretty(out, &json::dual_to_json(&dual_code(&fd, &code)?)?)?;
            }
        }
        Command::Selfdual {
            ring,
            count_only,
            limit,
        } => {
            let fd = factor_data(&ring, Some("-1"))?;
            let nu = nu_of(&fd)?;
            if count_only {
                writeln!(out, "{}", count_self_dual(&fd, nu)?)?;
            } else {
                let it = enumerate_self_dual(&fd, nu)?;
                for code in it.take(limit.map_or(usize::MAX, |l| l.min(usize::MAX as u64) as usize))
                {
                    writeln!(out, "{}", json::code_to_json(&fd, &code))?;
                }
            }
        }
        Command::Verify { level } => {
            let level = match level {
                VerifyLevel::Quick => Level::Quick,
                VerifyLevel::Full => Level::Full,
            };
            let results = oracle::suite(level);
            let mut failed = 0;
            for r in &results {
                writeln!(
                    out,
                    "{}  {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name
                )?;
                if !r.passed {
                    failed += 1;
                    eprintln!("{}: {}", r.name, r.detail);
                }
            }
            writeln!(
                out,
                "{} of {} checks passed",
                results.len() - failed,
                results.len()
            )?;
            out.flush()?;
            if failed > 0 {
                return Err(Failure::Oracle(failed));
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let sink: Box<dyn Write> = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(f),
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return 1;
            }
        },
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    let res = execute(cli.command, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match res {
        Ok(()) => 0,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            2
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            1
        }
        Err(Failure::Oracle(n)) => {
            eprintln!("error: {n} oracle check(s) failed");
            3
        }
    }
}
