//! The degree-24 benchmark family `f1 = g^k a^(n-k)`, `f2 = g^k b^(n-k)`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{parse_poly, parse_tower};
use crate::ffgcd::{monic_ea_char0, pff_gcd};
use crate::modgcd::{modular_gcd_with_stats, GcdOptions, GcdOutcome};
use crate::tower::{RPoly, RingSpec};

pub const EXT_ALPHA: &str = "a^8-40*a^6+352*a^4-960*a^2+576";
pub const EXT_BETA: &str = "b^3-11*b-13";
pub const G: &str = "x^2+123*b*x+a*x/13+531*a^3-199";
pub const A: &str = "x^2+a*x/12+123*b-25*a^3+251";
pub const B: &str = "x^2+b/21+123*a*x+17*a^3-173";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Modular,
    Pff,
    MonicEa,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Modular, Engine::Pff, Engine::MonicEa];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Modular => "modular",
            Engine::Pff => "pff",
            Engine::MonicEa => "monic-ea",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Engine::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| format!("unknown engine '{s}'"))
    }
}

/// Outcome of one engine run, with the number of good primes when modular.
#[derive(Clone, Debug)]
pub struct EngineRun {
    pub outcome: GcdOutcome,
    pub primes_used: Option<usize>,
    pub primes_tried: Option<usize>,
}

/// Runs `engine` on the pair; `pff` output is made monic.
pub fn run_engine(engine: Engine, f1: &RPoly, f2: &RPoly, opts: &GcdOptions) -> Result<EngineRun> {
    let plain = |r: crate::tower::ZdResult<RPoly>| -> Result<GcdOutcome> {
        Ok(match r {
            Ok(g) => match g.monic() {
                Ok(g) => GcdOutcome::Gcd(g),
                Err(zd) => GcdOutcome::ZeroDivisor(zd),
            },
            Err(zd) => GcdOutcome::ZeroDivisor(zd),
        })
    };
    match engine {
        Engine::Modular => {
            let (outcome, stats) = modular_gcd_with_stats(f1, f2, opts)?;
            Ok(EngineRun { outcome, primes_used: Some(stats.primes_used), primes_tried: Some(stats.primes_tried) })
        }
        Engine::Pff => Ok(EngineRun {
            outcome: plain(pff_gcd(f1, f2, opts.deadline)?)?,
            primes_used: None,
            primes_tried: None,
        }),
        Engine::MonicEa => Ok(EngineRun {
            outcome: plain(monic_ea_char0(f1, f2, opts.deadline)?)?,
            primes_used: None,
            primes_tried: None,
        }),
    }
}

/// The benchmark field together with `g`, `a` and `b`.
#[derive(Clone, Debug)]
pub struct Family {
    pub ring: Arc<RingSpec>,
    pub g: RPoly,
    pub a: RPoly,
    pub b: RPoly,
}

impl Family {
    pub fn new() -> Self {
        let ring = parse_tower(&[EXT_ALPHA, EXT_BETA], "x").expect("benchmark tower");
        let p = |s: &str| parse_poly(s, &ring).expect("benchmark polynomial");
        Family { g: p(G), a: p(A), b: p(B), ring }
    }

    /// `(g^k a^(n-k), g^k b^(n-k))`.
    pub fn pair(&self, n: u32, k: u32) -> (RPoly, RPoly) {
        assert!(k <= n);
        let gk = self.g.pow(k);
        (&gk * &self.a.pow(n - k), &gk * &self.b.pow(n - k))
    }

    /// The expected gcd `g^k` (already monic).
    pub fn expected(&self, k: u32) -> RPoly {
        self.g.pow(k)
    }
}

impl Default for Family {
    fn default() -> Self {
        Self::new()
    }
}

/// One CSV row; `None` prints as `NA`.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub k: u32,
    pub engine: String,
    #[serde(serialize_with = "na")]
    pub seconds: Option<f64>,
    #[serde(serialize_with = "na")]
    pub primes_used: Option<usize>,
    #[serde(serialize_with = "na")]
    pub verified: Option<bool>,
}

fn na<T: fmt::Display, S: serde::Serializer>(v: &Option<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_str("NA"),
    }
}

/// Runs every engine on every `k` in `ks`; a run past `timeout` yields an `NA` row.
pub fn run_bench(
    family: &Family,
    n: u32,
    ks: impl IntoIterator<Item = u32>,
    engines: &[Engine],
    opts: &GcdOptions,
    timeout: Option<Duration>,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for k in ks {
        if k > n {
            return Err(Error::Usage(format!("k = {k} exceeds n = {n}")));
        }
        let (f1, f2) = family.pair(n, k);
        let want = family.expected(k);
        for &engine in engines {
            let opts = GcdOptions { deadline: timeout.map(|t| Instant::now() + t), ..opts.clone() };
            let start = Instant::now();
            match run_engine(engine, &f1, &f2, &opts) {
                Ok(run) => rows.push(BenchRow {
                    k,
                    engine: engine.name().into(),
                    seconds: Some(start.elapsed().as_secs_f64()),
                    primes_used: run.primes_used,
                    verified: Some(run.outcome.gcd() == Some(&want)),
                }),
                Err(Error::Timeout) => rows.push(BenchRow {
                    k,
                    engine: engine.name().into(),
                    seconds: None,
                    primes_used: None,
                    verified: None,
                }),
                Err(err) => return Err(err),
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_family_all_engines_agree() {
        let fam = Family::new();
        let rows = run_bench(&fam, 2, [1], &Engine::ALL, &GcdOptions::default(), None).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.verified == Some(true)), "{rows:?}");
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,engine,seconds,primes_used,verified\n"));
        assert!(text.contains(",pff,") && text.contains(",NA,true"));
    }
}
