//! Acceptance criteria 1-6, one PASS/FAIL line each.
//!
//! Lines go to the process stdout directly, so they show up without `--nocapture`.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use numfield_gcd::bench::{run_bench, Engine, Family};
use numfield_gcd::ffgcd::prim_pseudo_divrem;
use numfield_gcd::field::is_prime;
use numfield_gcd::modgcd::{classify_prime, PrimeClass};
use numfield_gcd::modp::{reduce_mod_p, ModRing};
use numfield_gcd::primes::{LcData, LcStatus, PrimeStream};
use numfield_gcd::reconstruct::{mqrr, mqrr_threshold, ratrecon, CrtAccumulator, ReconMode};
use numfield_gcd::{
    modular_gcd, modular_gcd_with_stats, monic_ea_char0, parse_tower, pff_gcd, trial_divide, GcdOptions, GcdOutcome,
    RPoly,
};

use common::{parse, planted, random_field_tower, random_poly, random_poly_rational_lc, random_rational};

/// Good-prime counts of the reference modular implementation for k = 0..=10.
const REFERENCE_PRIMES: [usize; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12];
const PRIME_SLACK: usize = 2;

fn say(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
}

struct Check {
    failures: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { failures: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn report(self, id: u32, name: &str, elapsed: Duration, limit: Duration) -> bool {
        let mut fails = self.failures;
        if elapsed > limit {
            fails.push(format!("took {:.2?}, limit {:.0?}", elapsed, limit));
        }
        let verdict = if fails.is_empty() { "PASS" } else { "FAIL" };
        say(format!("criterion {id} [{verdict}] {name} ({elapsed:.2?}, limit {limit:.0?})"));
        for f in fails.iter().take(5) {
            say(format!("    {f}"));
        }
        fails.is_empty()
    }
}

fn gcd_of(f1: &RPoly, f2: &RPoly) -> GcdOutcome {
    modular_gcd(f1, f2, &GcdOptions::default()).unwrap()
}

fn worked_examples() -> bool {
    let start = Instant::now();
    let mut c = Check::new();

    let q23 = parse_tower(&["a^2-2", "b^2-3"], "x").unwrap();
    let got = gcd_of(&parse(&q23, "x^2+(a*b-a-1)*x-a*b-2*b"), &parse(&q23, "x^2+(a*b-4*a+1)*x+a*b-8*b"));
    c.expect(got == GcdOutcome::Gcd(parse(&q23, "x+a*b")), || format!("sqrt2/sqrt3 pair gave {got:?}"));

    let cubic = parse_tower(&["a^3+3*a^2-46*a+1"], "x").unwrap();
    let got = gcd_of(
        &parse(&cubic, "x^3-2*x^2+(-2*a^2+8*a+2)*x-a^2+11*a-1"),
        &parse(&cubic, "x^3-2*x^2-x+1"),
    );
    let want = parse(&cubic, "x-1/91*a^2-23/91*a-50/91");
    c.expect(got == GcdOutcome::Gcd(want.clone()), || format!("den-91 example gave {got:?}"));
    c.expect(want.den() == BigInt::from(91), || "den(g) != 91".into());

    let w = parse_tower(&["a^2-2", "b^2-3", "c^2-6"], "x").unwrap();
    match gcd_of(&parse(&w, "x^2+a*b*x+1"), &parse(&w, "(c-a*b)*x+1")) {
        GcdOutcome::ZeroDivisor(zd) => {
            let f = zd.factor_rec();
            c.expect(zd.level == 3, || format!("zero divisor at level {}", zd.level));
            c.expect(f.degree() == Some(1), || format!("factor degree {:?}", f.degree()));
            c.expect(f.lc().is_some_and(|l| l.constant_value().is_some_and(|v| v.is_one())), || "factor not monic".into());
            c.expect(zd.is_valid(), || "factor does not divide c^2-6".into());
        }
        o => c.expect(false, || format!("expected a zero divisor, got {o:?}")),
    }
    c.report(1, "worked examples", start.elapsed(), Duration::from_secs(1))
}

fn prime_classification() -> bool {
    let start = Instant::now();
    let mut c = Check::new();

    let r5 = parse_tower(&["a^5-2"], "x").unwrap();
    let (f1, f2) = (parse(&r5, "x^2-1"), parse(&r5, "(a+5)*x-(a+5)"));
    let fails: Vec<u64> = (2..100)
        .filter(|&p| is_prime(p))
        .filter(|&p| matches!(classify_prime(&f1, &f2, p, 1).unwrap(), PrimeClass::Fail(_)))
        .collect();
    c.expect(fails == [53, 59], || format!("fail primes {fails:?}"));
    c.expect(parse(&r5, "a+5").norm().unwrap() == BigRational::from_integer(BigInt::from(53 * 59)), || {
        "N(a+5) != 53*59".into()
    });

    let s5 = parse_tower(&["s^2-5"], "x").unwrap();
    let f2 = parse(&s5, "x^2-x-1");
    match classify_prime(&parse(&s5, "x^2+(2*s+1)*x+3"), &f2, 2, 0).unwrap() {
        PrimeClass::Unlucky(img) => c.expect(img.to_string() == "x^2 + x + 1", || format!("unlucky image {img}")),
        o => c.expect(false, || format!("p=2 classified {}", o.name())),
    }
    let o = classify_prime(&parse(&s5, "x^2+s*x+1"), &f2, 2, 0).unwrap();
    c.expect(matches!(o, PrimeClass::Fail(_)), || format!("p=2 classified {}", o.name()));
    c.report(2, "prime classification", start.elapsed(), Duration::from_secs(1))
}

fn benchmark_family() -> bool {
    let start = Instant::now();
    let mut c = Check::new();
    let fam = Family::new();
    c.expect(fam.ring.dimension() == 24, || format!("field degree {}", fam.ring.dimension()));
    let rows = run_bench(&fam, 10, 0..=10, &[Engine::Modular], &GcdOptions::default(), None).unwrap();
    let mut counts = Vec::new();
    for r in &rows {
        c.expect(r.verified == Some(true), || format!("k={} not verified", r.k));
        let used = r.primes_used.unwrap_or(usize::MAX);
        counts.push(used);
        let limit = REFERENCE_PRIMES[r.k as usize] + PRIME_SLACK;
        c.expect(used <= limit, || format!("k={} used {used} primes, limit {limit}", r.k));
    }
    say(format!("    good primes per k: {counts:?}"));
    c.report(3, "benchmark family n=10", start.elapsed(), Duration::from_secs(300))
}

fn oracle_equivalence() -> bool {
    let start = Instant::now();
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut instances = 0;
    let mut samples = 0;
    while instances < 100 {
        let ring = random_field_tower(&mut rng, 3, 4, 12);
        let inst = planted(&mut rng, &ring, 12, 1000);
        instances += 1;
        let m = gcd_of(&inst.f1, &inst.f2);
        let Some(g) = m.gcd().cloned() else {
            c.expect(false, || format!("zero divisor over a field tower {:?}", ring.ext_vars()));
            continue;
        };
        let pff = pff_gcd(&inst.f1, &inst.f2, None).unwrap().unwrap().monic().unwrap();
        let ea = monic_ea_char0(&inst.f1, &inst.f2, None).unwrap().unwrap();
        c.expect(g == pff && g == ea, || format!("engines disagree: {g} / {pff} / {ea}"));
        c.expect(trial_divide(&g, &inst.g).unwrap().is_some(), || format!("planted {} does not divide {g}", inst.g));

        // non-lc-bad primes: the image fails or has degree >= deg g, and equals g when degrees match
        let f1s = inst.f1.semi_associate().0;
        let f2s = inst.f2.semi_associate().0;
        let lc = LcData::new(&f1s, &f2s);
        let dg = g.degree().unwrap();
        let mut stream = PrimeStream::new(rng.gen_range(10..=16), rng.gen(), None).unwrap();
        let mut taken = 0;
        while taken < 6 {
            let p = stream.next_prime().unwrap();
            if lc.status(p) == LcStatus::Bad {
                continue;
            }
            taken += 1;
            samples += 1;
            match classify_prime(&inst.f1, &inst.f2, p, dg).unwrap() {
                PrimeClass::LcBad => c.expect(false, || format!("p={p} lc-bad despite status")),
                PrimeClass::Fail(_) | PrimeClass::Unlucky(_) => {}
                PrimeClass::Good(img) => {
                    c.expect(img.degree() == Some(dg), || format!("p={p}: image degree below deg g"));
                    let mr = ModRing::new(&ring, p).unwrap();
                    let gp = reduce_mod_p(&g, &mr).unwrap();
                    c.expect(img == gp, || format!("p={p}: image {img} != g mod p {gp}"));
                }
            }
        }
    }
    say(format!("    {instances} instances, {samples} (instance, prime) samples"));
    c.expect(samples >= 500, || format!("only {samples} prime samples"));
    c.report(4, "oracle equivalence and degree property", start.elapsed(), Duration::from_secs(120))
}

fn reconstruction() -> bool {
    let start = Instant::now();
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let mut wang_failures = 0;
    for _ in 0..10_000 {
        let n: i64 = rng.gen_range(-(1 << 40)..=(1 << 40));
        let d: i64 = rng.gen_range(1..=(1 << 40));
        let q = BigRational::new(BigInt::from(n), BigInt::from(d));
        let mut acc = CrtAccumulator::new(1);
        let mut stream = PrimeStream::new(31, rng.gen(), None).unwrap();
        let bound = BigInt::from(2) * (q.numer() * q.numer()).max(q.denom() * q.denom());
        while acc.modulus() <= &bound {
            let p = stream.next_prime().unwrap();
            let pb = BigInt::from(p);
            let u = (q.numer().mod_floor(&pb) * q.denom().modpow(&(&pb - 2u32), &pb)).mod_floor(&pb);
            acc.add_image(&[u.try_into().unwrap()], p).unwrap();
        }
        let got = ratrecon(&acc.coeffs()[0].mod_floor(acc.modulus()), acc.modulus(), ReconMode::Wang);
        if got.as_ref() != Some(&q) {
            wang_failures += 1;
        }
    }
    c.expect(wang_failures == 0, || format!("{wang_failures} Wang round-trip failures"));

    let m = BigInt::from((1u64 << 62) - 57);
    let t = mqrr_threshold(&m);
    let false_accepts = (0..10_000)
        .filter(|_| mqrr(&BigInt::from(rng.gen_range(0..(1u64 << 62) - 57)), &m, &t).is_some())
        .count();
    c.expect(false_accepts == 0, || format!("{false_accepts} MQRR false accepts"));

    let b = |x: i64| BigInt::from(x);
    c.expect(ratrecon(&b(4), &b(19), ReconMode::Wang).is_none(), || "ratrecon(4, 19) succeeded".into());
    c.expect(ratrecon(&b(17), &b(35), ReconMode::Wang) == Some(BigRational::new(b(-1), b(2))), || {
        "ratrecon(17, 35) != -1/2".into()
    });
    c.report(5, "reconstruction", start.elapsed(), Duration::from_secs(30))
}

fn division_identity() -> bool {
    let start = Instant::now();
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let towers: Vec<_> = (0..10).map(|_| random_field_tower(&mut rng, 3, 3, 12)).collect();
    for i in 0..1000 {
        let ring = &towers[i % towers.len()];
        let db = rng.gen_range(1..=3);
        let b = random_poly_rational_lc(&mut rng, ring, db, 50, 4);
        let (dq, monic) = (rng.gen_range(0..=3), rng.gen_bool(0.5));
        let q = random_poly(&mut rng, ring, dq, monic, 50, 4);
        let a = &b * &q;
        let got = trial_divide(&a, &b).unwrap();
        c.expect(got.as_ref() == Some(&q), || format!("trial division lost quotient {q}"));

        let noise = RPoly::constant(ring, random_rational(&mut rng, 9, 3));
        let a2 = &a + &(&noise * &RPoly::x(ring).pow(rng.gen_range(0..db) as u32));
        if !noise.is_zero() {
            c.expect(trial_divide(&a2, &b).unwrap().is_none(), || "false exact division".into());
        }
        let pd = prim_pseudo_divrem(&a2, &b).unwrap();
        let lhs = a2.scale(&BigRational::from_integer(pd.multiplier.clone()));
        let rhs = &(&b * &pd.quotient) + &pd.remainder;
        c.expect(lhs == rhs, || format!("mu A != B q + r for A = {a2}"));
        c.expect(pd.multiplier > BigInt::zero(), || "non-positive multiplier".into());
        c.expect(pd.remainder.degree() < b.degree(), || "remainder degree too high".into());
    }
    c.report(6, "fraction-free division", start.elapsed(), Duration::from_secs(60))
}

#[test]
fn acceptance() {
    let results = [
        worked_examples(),
        prime_classification(),
        benchmark_family(),
        oracle_equivalence(),
        reconstruction(),
        division_identity(),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn determinism_same_seed_same_primes() {
    let fam = Family::new();
    let (f1, f2) = fam.pair(4, 2);
    let run = |seed| modular_gcd_with_stats(&f1, &f2, &GcdOptions { seed, ..Default::default() }).unwrap();
    let (o1, s1) = run(11);
    let (o2, s2) = run(11);
    assert_eq!(o1, o2);
    assert_eq!(s1, s2);
}
