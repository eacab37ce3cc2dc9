use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use numfield_gcd::bench::{run_bench, run_engine, write_csv, Engine, Family};
use numfield_gcd::field::is_prime;
use numfield_gcd::modgcd::{classify_prime, PrimeClass};
use numfield_gcd::{
    modular_gcd, parse_poly, parse_tower, trial_divide, Error, GcdOptions, GcdOutcome, ReconMode, RingSpec,
    Schedule,
};

#[derive(Parser)]
#[command(name = "nfgcd", version, about = "Polynomial GCDs over towers of number fields")]
struct Cli {
    /// Log each prime and reconstruction attempt to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monic gcd of two polynomials.
    Gcd {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        opts: OptArgs,
        #[arg(long, value_enum, default_value_t = EngineArg::Modular)]
        engine: EngineArg,
        /// Print a JSON record instead of plain text.
        #[arg(long)]
        json: bool,
        f1: String,
        f2: String,
    },
    /// Exact quotient `a / b`.
    Divide {
        #[command(flatten)]
        ring: RingArgs,
        a: String,
        b: String,
    },
    /// Norm of a tower element down to the rationals.
    Norm {
        #[command(flatten)]
        ring: RingArgs,
        a: String,
    },
    /// Classify each prime below a bound for a pair.
    Classify {
        #[command(flatten)]
        ring: RingArgs,
        /// Examine primes below this bound.
        #[arg(long, default_value_t = 100)]
        below: u64,
        f1: String,
        f2: String,
    },
    /// Run the degree-24 benchmark family.
    Bench {
        #[command(flatten)]
        opts: OptArgs,
        #[arg(short, default_value_t = 10)]
        n: u32,
        /// Values of k, e.g. `0..=10` or `3`; defaults to `0..=n`.
        #[arg(long)]
        k: Option<String>,
        /// Engines to run; repeatable.
        #[arg(long = "engine", value_enum)]
        engines: Vec<EngineArg>,
        /// Per-run limit in seconds; slower runs are reported as NA.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RingArgs {
    /// Extension polynomial, innermost first; repeatable.
    #[arg(long = "ext")]
    exts: Vec<String>,
    /// Main variable.
    #[arg(long = "var", default_value = "x")]
    var: String,
}

impl RingArgs {
    fn build(&self) -> Result<Arc<RingSpec>, Error> {
        parse_tower(&self.exts, &self.var)
    }
}

#[derive(Args)]
struct OptArgs {
    #[arg(long, default_value_t = 31)]
    prime_bits: u32,
    #[arg(long, default_value_t = GcdOptions::default().seed)]
    seed: u64,
    /// Also reconstruct the cofactor of the smaller input.
    #[arg(long)]
    cofactor: bool,
    /// Reserved prime for the division pre-test.
    #[arg(long, alias = "reserved-prime")]
    precheck_prime: Option<u64>,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Every)]
    schedule: ScheduleArg,
    #[arg(long, value_enum, default_value_t = ReconArg::Mqrr)]
    recon: ReconArg,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl OptArgs {
    fn options(&self) -> GcdOptions {
        GcdOptions {
            prime_bits: self.prime_bits,
            seed: self.seed,
            cofactor_mode: self.cofactor,
            precheck_prime: self.precheck_prime,
            schedule: match self.schedule {
                ScheduleArg::Every => Schedule::EveryPrime,
                ScheduleArg::Fib => Schedule::Fibonacci,
            },
            recon: match self.recon {
                ReconArg::Wang => ReconMode::Wang,
                ReconArg::Mqrr => ReconMode::Mqrr,
            },
            threads: self.threads.max(1),
            ..GcdOptions::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    Every,
    Fib,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReconArg {
    Wang,
    Mqrr,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Modular,
    Pff,
    MonicEa,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Modular => Engine::Modular,
            EngineArg::Pff => Engine::Pff,
            EngineArg::MonicEa => Engine::MonicEa,
        }
    }
}

#[derive(Serialize)]
struct Record {
    engine: &'static str,
    outcome: &'static str,
    result: String,
    level: Option<usize>,
    primes_used: Option<usize>,
    primes_tried: Option<usize>,
    wall_seconds: f64,
}

const EXIT_ZERO_DIVISOR: u8 = 2;

fn parse_ks(s: &str, n: u32) -> Result<Vec<u32>, Error> {
    let bad = || Error::Usage(format!("bad k range '{s}'"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    let ks: Vec<u32> = if let Some((lo, hi)) = s.split_once("..=") {
        (num(lo)?..=num(hi)?).collect()
    } else if let Some((lo, hi)) = s.split_once("..") {
        (num(lo)?..num(hi)?).collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    if ks.iter().any(|&k| k > n) {
        return Err(bad());
    }
    Ok(ks)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let mut out = io::stdout().lock();
    let io_err = |e: io::Error| Error::Io(e.to_string());
    match cli.cmd {
        Cmd::Gcd { ring, opts, engine, json, f1, f2 } => {
            let ring = ring.build()?;
            let (f1, f2) = (parse_poly(&f1, &ring)?, parse_poly(&f2, &ring)?);
            let engine = Engine::from(engine);
            let start = Instant::now();
            let run = run_engine(engine, &f1, &f2, &opts.options())?;
            let wall_seconds = start.elapsed().as_secs_f64();
            let (outcome, result, level, code) = match &run.outcome {
                GcdOutcome::Gcd(g) => ("gcd", g.to_string(), None, ExitCode::SUCCESS),
                GcdOutcome::ZeroDivisor(zd) => {
                    ("zero-divisor", zd.factor.to_string(), Some(zd.level), ExitCode::from(EXIT_ZERO_DIVISOR))
                }
            };
            if json {
                let rec = Record {
                    engine: engine.name(),
                    outcome,
                    result,
                    level,
                    primes_used: run.primes_used,
                    primes_tried: run.primes_tried,
                    wall_seconds,
                };
                writeln!(out, "{}", serde_json::to_string(&rec).map_err(|e| Error::Io(e.to_string()))?).map_err(io_err)?;
            } else {
                match level {
                    Some(l) => writeln!(out, "zero divisor at extension {l}: {result}"),
                    None => writeln!(out, "{result}"),
                }
                .map_err(io_err)?;
            }
            Ok(code)
        }
        Cmd::Divide { ring, a, b } => {
            let ring = ring.build()?;
            let (a, b) = (parse_poly(&a, &ring)?, parse_poly(&b, &ring)?);
            match trial_divide(&a, &b)? {
                Some(q) => {
                    writeln!(out, "{q}").map_err(io_err)?;
                    Ok(ExitCode::SUCCESS)
                }
                None => Err(Error::Usage("divisor does not divide exactly".into())),
            }
        }
        Cmd::Norm { ring, a } => {
            let ring = ring.build()?;
            let a = parse_poly(&a, &ring)?;
            writeln!(out, "{}", a.norm()?).map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify { ring, below, f1, f2 } => {
            let ring = ring.build()?;
            let (f1, f2) = (parse_poly(&f1, &ring)?, parse_poly(&f2, &ring)?);
            let g = match modular_gcd(&f1, &f2, &GcdOptions::default())? {
                GcdOutcome::Gcd(g) => g,
                GcdOutcome::ZeroDivisor(zd) => {
                    return Err(Error::Usage(format!("tower is not a field: {zd}")));
                }
            };
            let deg = g.degree().unwrap_or(0);
            for p in (2..below).filter(|&p| is_prime(p)) {
                let class = classify_prime(&f1, &f2, p, deg)?;
                let detail = match &class {
                    PrimeClass::LcBad => String::new(),
                    PrimeClass::Fail(zd) => format!("level {} factor {zd}", zd.level),
                    PrimeClass::Unlucky(g) | PrimeClass::Good(g) => g.to_string(),
                };
                writeln!(out, "{p}\t{}\t{detail}", class.name()).map_err(io_err)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bench { opts, n, k, engines, timeout, csv } => {
            let ks = match k {
                Some(s) => parse_ks(&s, n)?,
                None => (0..=n).collect(),
            };
            let engines: Vec<Engine> =
                if engines.is_empty() { vec![Engine::Modular] } else { engines.into_iter().map(Engine::from).collect() };
            let family = Family::new();
            let rows = run_bench(&family, n, ks, &engines, &opts.options(), timeout.map(Duration::from_secs_f64))?;
            writeln!(out, "{:>3}  {:<9} {:>10} {:>7}  verified", "k", "engine", "seconds", "primes").map_err(io_err)?;
            let na = |v: Option<String>| v.unwrap_or_else(|| "NA".into());
            for r in &rows {
                writeln!(
                    out,
                    "{:>3}  {:<9} {:>10} {:>7}  {}",
                    r.k,
                    r.engine,
                    na(r.seconds.map(|s| format!("{s:.3}"))),
                    na(r.primes_used.map(|p| p.to_string())),
                    na(r.verified.map(|v| v.to_string())),
                )
                .map_err(io_err)?;
            }
            if let Some(path) = csv {
                write_csv(&rows, File::create(&path).map_err(io_err)?)?;
            }
            let ok = rows.iter().all(|r| r.verified != Some(false));
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "debug" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("nfgcd: {e}");
            ExitCode::FAILURE
        }
    }
}
