//! The multi-prime GCD driver.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use log::{debug, trace};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffgcd::exact_quotient;
use crate::modp::{monic_ea_mod_p, reduce_mod_p, ModPoly, ModRing, ZeroDivisorReport};
use crate::primes::{LcData, LcStatus, PrimeStream};
use crate::rec::{flatten, shape, unflatten, Rec};
use crate::reconstruct::{CrtAccumulator, ReconMode};
use crate::tower::{QRec, RPoly, RingSpec, ZeroDivisorChar0};

/// When to attempt rational reconstruction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// After every good prime, resuming at the last failing coefficient.
    #[default]
    EveryPrime,
    /// After 1, 2, 3, 5, 8, ... good primes.
    Fibonacci,
}

#[derive(Clone, Debug)]
pub struct GcdOptions {
    /// Primes are drawn from `(2^(bits-1), 2^bits)`; must lie in `10..=62`.
    pub prime_bits: u32,
    pub seed: u64,
    /// Also reconstruct the cofactor of the smaller input and stop on whichever succeeds first.
    pub cofactor_mode: bool,
    /// Prime withheld from the stream and used to pre-test candidate divisions.
    pub precheck_prime: Option<u64>,
    pub schedule: Schedule,
    pub recon: ReconMode,
    /// Worker threads for per-prime images; 1 runs inline.
    pub threads: usize,
    /// Upper bound on primes drawn before giving up.
    pub max_primes: usize,
    pub deadline: Option<Instant>,
}

impl Default for GcdOptions {
    fn default() -> Self {
        GcdOptions {
            prime_bits: 31,
            seed: 0x5eed,
            cofactor_mode: false,
            precheck_prime: None,
            schedule: Schedule::EveryPrime,
            recon: ReconMode::Mqrr,
            threads: 1,
            max_primes: 100_000,
            deadline: None,
        }
    }
}

/// Result of a GCD computation.
#[derive(Clone, Debug, PartialEq)]
pub enum GcdOutcome {
    /// The monic gcd.
    Gcd(RPoly),
    /// The tower is not a field; the factor splits one of its extensions.
    ZeroDivisor(ZeroDivisorChar0),
}

impl GcdOutcome {
    pub fn gcd(&self) -> Option<&RPoly> {
        match self {
            GcdOutcome::Gcd(g) => Some(g),
            GcdOutcome::ZeroDivisor(_) => None,
        }
    }
}

/// Counters describing one run of [`modular_gcd_with_stats`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GcdStats {
    /// Primes drawn from the stream and examined.
    pub primes_tried: usize,
    pub lc_bad: usize,
    pub fail: usize,
    /// Images discarded because their degree was too high.
    pub unlucky: usize,
    /// Images behind the returned answer.
    pub primes_used: usize,
    pub reconstructions: usize,
    pub trial_divisions: usize,
    /// The answer came from the cofactor.
    pub via_cofactor: bool,
}

/// Image of the inputs modulo one prime.
#[derive(Clone, Debug)]
pub enum PrimeImage {
    LcBad,
    Fail(ZeroDivisorReport),
    Image { p: u64, gcd: ModPoly, cofactor: Option<ModPoly> },
}

/// What happened to an image offered to an [`ImageAccumulator`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Offer {
    /// First image, or lower degree than before: the accumulator restarted.
    Restarted,
    /// Same degree as the current images: combined.
    Combined,
    /// Higher degree: discarded.
    Unlucky,
}

/// Keeps the CRT image of the lowest-degree gcd images seen so far.
#[derive(Clone, Debug)]
pub struct ImageAccumulator {
    sub_degrees: Vec<usize>,
    degree: Option<usize>,
    acc: Option<CrtAccumulator>,
}

impl ImageAccumulator {
    pub fn new(ring: &RingSpec) -> Self {
        ImageAccumulator { sub_degrees: ring.degrees().to_vec(), degree: None, acc: None }
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn count(&self) -> usize {
        self.acc.as_ref().map_or(0, CrtAccumulator::count)
    }

    pub fn crt(&self) -> Option<&CrtAccumulator> {
        self.acc.as_ref()
    }

    /// Offers a monic gcd image modulo `p`.
    pub fn offer(&mut self, p: u64, image: &Rec<u64>) -> Result<Offer> {
        let deg = image.degree().expect("gcd image is nonzero");
        let dims = shape(&self.sub_degrees, deg + 1);
        let flat = flatten(image, &dims, &0);
        let outcome = match self.degree {
            Some(d) if deg > d => return Ok(Offer::Unlucky),
            Some(d) if deg == d => Offer::Combined,
            _ => {
                self.degree = Some(deg);
                self.acc = Some(CrtAccumulator::new(flat.len()));
                Offer::Restarted
            }
        };
        self.acc.as_mut().unwrap().add_image(&flat, p)?;
        Ok(outcome)
    }

    /// Rational reconstruction of the combined image.
    pub fn reconstruct(&mut self, mode: ReconMode) -> Option<QRec> {
        let deg = self.degree?;
        let leaves = self.acc.as_mut()?.reconstruct(mode)?;
        let dims = shape(&self.sub_degrees, deg + 1);
        Some(unflatten(&leaves, &dims, &|q: &BigRational| q.is_zero()))
    }
}

/// `A / B` when `B` divides `A` exactly; `lc(B)` must be rational.
pub fn trial_divide(a: &RPoly, b: &RPoly) -> Result<Option<RPoly>> {
    exact_quotient(a, b)
}

/// Monic gcd of `f1` and `f2` over their tower.
pub fn modular_gcd(f1: &RPoly, f2: &RPoly, opts: &GcdOptions) -> Result<GcdOutcome> {
    modular_gcd_with_stats(f1, f2, opts).map(|(o, _)| o)
}

/// How a prime behaves for a pair whose gcd has degree `gcd_degree`.
#[derive(Clone, Debug)]
pub enum PrimeClass {
    LcBad,
    Fail(ZeroDivisorReport),
    /// Image of higher degree than the gcd.
    Unlucky(ModPoly),
    Good(ModPoly),
}

impl PrimeClass {
    pub fn name(&self) -> &'static str {
        match self {
            PrimeClass::LcBad => "lc-bad",
            PrimeClass::Fail(_) => "fail",
            PrimeClass::Unlucky(_) => "unlucky",
            PrimeClass::Good(_) => "good",
        }
    }
}

/// Classifies `p` for the pair `(f1, f2)`, both nonzero.
pub fn classify_prime(f1: &RPoly, f2: &RPoly, p: u64, gcd_degree: usize) -> Result<PrimeClass> {
    if f1.ring() != f2.ring() {
        return Err(Error::RingMismatch);
    }
    if f1.is_zero() || f2.is_zero() {
        return Err(Error::Usage("inputs must be nonzero".into()));
    }
    let f = [f1.semi_associate().0, f2.semi_associate().0];
    let ctx = Ctx { ring: f1.ring().clone(), lc: LcData::new(&f[0], &f[1]), f, cof_input: None };
    Ok(match ctx.image(p)? {
        PrimeImage::LcBad => PrimeClass::LcBad,
        PrimeImage::Fail(zd) => PrimeClass::Fail(zd),
        PrimeImage::Image { gcd, .. } if gcd.degree() > Some(gcd_degree) => PrimeClass::Unlucky(gcd),
        PrimeImage::Image { gcd, .. } => PrimeClass::Good(gcd),
    })
}

fn is_fib(n: usize) -> bool {
    let (mut a, mut b) = (1usize, 2usize);
    while a < n {
        (a, b) = (b, a + b);
    }
    a == n
}

/// For a Fibonacci count `F_k`, the previous term `F_{k-1}` (1 for 1 and 2).
fn fib_prev(n: usize) -> usize {
    let (mut a, mut b) = (1usize, 1usize);
    while b < n {
        (a, b) = (b, a + b);
    }
    a
}

struct Ctx {
    ring: Arc<RingSpec>,
    f: [RPoly; 2],
    lc: LcData,
    /// Input whose cofactor is reconstructed.
    cof_input: Option<usize>,
}

impl Ctx {
    fn image(&self, p: u64) -> Result<PrimeImage> {
        let order = match self.lc.status(p) {
            LcStatus::Bad => return Ok(PrimeImage::LcBad),
            LcStatus::Ok => [0, 1],
            LcStatus::Swap => [1, 0],
        };
        let mr = match ModRing::new(&self.ring, p) {
            Ok(r) => r,
            Err(Error::ExtensionDenominator(_)) => return Ok(PrimeImage::LcBad),
            Err(e) => return Err(e),
        };
        let img = |i: usize| reduce_mod_p(&self.f[i], &mr);
        let (a, b) = match (img(order[0]), img(order[1])) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(Error::NotReducible(_)), _) | (_, Err(Error::NotReducible(_))) => {
                return Ok(PrimeImage::LcBad)
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let g = match monic_ea_mod_p(&a, &b)? {
            Ok(g) => g,
            Err(zd) => return Ok(PrimeImage::Fail(zd)),
        };
        let cofactor = match self.cof_input {
            Some(j) => {
                let fj = if order[0] == j { &a } else { &b };
                if fj.degree() == self.f[j].degree() {
                    let (q, r) = fj.divrem_by_monic(&g)?;
                    debug_assert!(r.is_zero());
                    Some(q)
                } else {
                    None
                }
            }
            None => None,
        };
        Ok(PrimeImage::Image { p, gcd: g, cofactor })
    }
}

/// Flattened factor images with their primes, in arrival order.
type ReportClass = Vec<(u64, Vec<u64>)>;

/// Zero-divisor reports grouped by (level, factor degree).
#[derive(Default)]
struct ZdClasses {
    classes: HashMap<(usize, usize), ReportClass>,
}

impl ZdClasses {
    /// Records a report; returns the class key when its size is a Fibonacci number.
    fn push(&mut self, ring: &RingSpec, p: u64, zd: &ZeroDivisorReport) -> Option<(usize, usize)> {
        let f = zd.factor_rec();
        let e = f.degree().unwrap();
        let dims = shape(&ring.degrees()[..zd.level - 1], e + 1);
        let key = (zd.level, e);
        let v = self.classes.entry(key).or_default();
        v.push((p, flatten(&f, &dims, &0)));
        is_fib(v.len()).then_some(key)
    }

    /// Reconstructs from the last `F_{k-1}` reports of a class of size `F_k`.
    fn attempt(&self, ring: &Arc<RingSpec>, key: (usize, usize), mode: ReconMode) -> Option<(ZeroDivisorChar0, usize)> {
        let (level, e) = key;
        let v = &self.classes[&key];
        let window = &v[v.len() - fib_prev(v.len())..];
        let mut acc = CrtAccumulator::new(window[0].1.len());
        for (p, img) in window {
            acc.add_image(img, *p).ok()?;
        }
        let leaves = acc.reconstruct(mode)?;
        let dims = shape(&ring.degrees()[..level - 1], e + 1);
        let f = unflatten(&leaves, &dims, &|q: &BigRational| q.is_zero());
        let zd = ZeroDivisorChar0 { level, factor: RPoly::new(ring.clone(), f.embed(ring.top() - level)) };
        zd.is_valid().then_some((zd, window.len()))
    }
}

/// Checks `h | f1` and `h | f2` modulo the reserved prime.
fn precheck(q: u64, h: &RPoly, f: &[RPoly; 2]) -> bool {
    let Ok(mr) = ModRing::new(h.ring(), q) else {
        return true;
    };
    let (Ok(hb), Ok(a), Ok(b)) = (reduce_mod_p(h, &mr), reduce_mod_p(&f[0], &mr), reduce_mod_p(&f[1], &mr)) else {
        return true;
    };
    [a, b].iter().all(|x| x.divrem_by_monic(&hb).map_or(true, |(_, r)| r.is_zero()))
}

/// [`modular_gcd`] together with prime counters.
pub fn modular_gcd_with_stats(f1: &RPoly, f2: &RPoly, opts: &GcdOptions) -> Result<(GcdOutcome, GcdStats)> {
    if f1.ring() != f2.ring() {
        return Err(Error::RingMismatch);
    }
    if !(10..=62).contains(&opts.prime_bits) {
        return Err(Error::PrimeBits(opts.prime_bits));
    }
    let ring = f1.ring().clone();
    let mut stats = GcdStats::default();
    if f1.is_zero() || f2.is_zero() {
        let f = if f1.is_zero() { f2 } else { f1 };
        if f.is_zero() {
            return Err(Error::BothZero);
        }
        return Ok(match f.monic() {
            Ok(g) => (GcdOutcome::Gcd(g), stats),
            Err(zd) => (GcdOutcome::ZeroDivisor(zd), stats),
        });
    }
    let f = [f1.semi_associate().0, f2.semi_associate().0];
    let cof_input = opts
        .cofactor_mode
        .then(|| {
            let mut c: Vec<usize> = (0..2).filter(|&i| f[i].lc().as_rational().is_some()).collect();
            c.sort_by_key(|&i| f[i].degree());
            c.first().copied()
        })
        .flatten();
    let ctx = Ctx { ring: ring.clone(), lc: LcData::new(&f[0], &f[1]), f, cof_input };
    let mut stream = PrimeStream::new(opts.prime_bits, opts.seed, opts.precheck_prime)?;
    let mut gcd_acc = ImageAccumulator::new(&ring);
    let mut cof_acc: Option<ImageAccumulator> = None;
    let mut zds = ZdClasses::default();
    let pool = (opts.threads > 1)
        .then(|| rayon::ThreadPoolBuilder::new().num_threads(opts.threads).build().ok())
        .flatten();
    let mut batch = 1usize;

    loop {
        if stats.primes_tried >= opts.max_primes {
            return Err(Error::PrimeBudget(stats.primes_tried));
        }
        if opts.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::Timeout);
        }
        let primes: Vec<u64> = (0..batch).map(|_| stream.next_prime()).collect::<Result<_>>()?;
        let images: Vec<Result<PrimeImage>> = match &pool {
            Some(pool) => pool.install(|| primes.par_iter().map(|&p| ctx.image(p)).collect()),
            None => primes.iter().map(|&p| ctx.image(p)).collect(),
        };
        for (p, img) in primes.into_iter().zip(images) {
            stats.primes_tried += 1;
            match img? {
                PrimeImage::LcBad => {
                    stats.lc_bad += 1;
                    debug!("p={p}: lc-bad");
                }
                PrimeImage::Fail(zd) => {
                    stats.fail += 1;
                    debug!("p={p}: fail, zero divisor at level {}: {}", zd.level, zd);
                    if let Some(key) = zds.push(&ring, p, &zd) {
                        stats.reconstructions += 1;
                        if let Some((found, used)) = zds.attempt(&ring, key, opts.recon) {
                            stats.primes_used = used;
                            debug!("factor of extension {} reconstructed from {used} primes", found.level);
                            return Ok((GcdOutcome::ZeroDivisor(found), stats));
                        }
                    }
                }
                PrimeImage::Image { p, gcd, cofactor } => {
                    let deg = gcd.degree().unwrap();
                    if deg == 0 {
                        stats.primes_used = 1;
                        debug!("p={p}: gcd image is 1");
                        return Ok((GcdOutcome::Gcd(RPoly::one(&ring)), stats));
                    }
                    let before = gcd_acc.count();
                    match gcd_acc.offer(p, gcd.data())? {
                        Offer::Unlucky => {
                            stats.unlucky += 1;
                            debug!("p={p}: unlucky, degree {deg}");
                            continue;
                        }
                        Offer::Restarted => {
                            stats.unlucky += before;
                            cof_acc = cof_input.map(|_| ImageAccumulator::new(&ring));
                            debug!("p={p}: good candidate, degree {deg}");
                        }
                        Offer::Combined => debug!("p={p}: combined, {} primes", gcd_acc.count()),
                    }
                    if let (Some(acc), Some(c)) = (cof_acc.as_mut(), cofactor.as_ref()) {
                        if acc.degree().is_none_or(|d| d == c.degree().unwrap_or(0)) {
                            acc.offer(p, c.data())?;
                        }
                    }
                    let k = gcd_acc.count();
                    if opts.schedule == Schedule::Fibonacci && !is_fib(k) {
                        continue;
                    }
                    if let Some(g) = try_finish(&ctx, &mut gcd_acc, cof_acc.as_mut(), opts, &mut stats)? {
                        stats.primes_used = k;
                        return Ok((GcdOutcome::Gcd(g), stats));
                    }
                }
            }
        }
        batch = (batch * 2).min(opts.threads.max(1));
    }
}

fn try_finish(
    ctx: &Ctx,
    gcd_acc: &mut ImageAccumulator,
    cof_acc: Option<&mut ImageAccumulator>,
    opts: &GcdOptions,
    stats: &mut GcdStats,
) -> Result<Option<RPoly>> {
    let ring = &ctx.ring;
    if let (Some(acc), Some(j)) = (cof_acc, ctx.cof_input) {
        if acc.count() == gcd_acc.count() {
            stats.reconstructions += 1;
            if let Some(c) = acc.reconstruct(opts.recon) {
                let c = RPoly::new(ring.clone(), c);
                stats.trial_divisions += 1;
                if let Some(h) = trial_divide(&ctx.f[j], &c)? {
                    if h.lc().is_one() {
                        stats.trial_divisions += 1;
                        if trial_divide(&ctx.f[1 - j], &h)?.is_some() {
                            trace!("cofactor reconstruction succeeded");
                            stats.via_cofactor = true;
                            return Ok(Some(h));
                        }
                    }
                }
            }
        }
    }
    stats.reconstructions += 1;
    let Some(h) = gcd_acc.reconstruct(opts.recon) else {
        trace!("reconstruction failed with {} primes", gcd_acc.count());
        return Ok(None);
    };
    let h = RPoly::new(ring.clone(), h);
    if let Some(q) = opts.precheck_prime {
        if !precheck(q, &h, &ctx.f) {
            debug!("candidate rejected modulo reserved prime {q}");
            return Ok(None);
        }
    }
    for fi in &ctx.f {
        stats.trial_divisions += 1;
        if trial_divide(fi, &h)?.is_none() {
            debug!("trial division failed with {} primes", gcd_acc.count());
            return Ok(None);
        }
    }
    Ok(Some(h))
}
