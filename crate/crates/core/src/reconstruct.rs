//! Chinese remaindering and rational number reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::invmod;

/// Rational reconstruction variant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReconMode {
    /// Extended Euclid with balanced `sqrt(m/2)` bounds.
    Wang,
    /// Maximal-quotient reconstruction; fails with high probability on non-images.
    #[default]
    Mqrr,
}

/// Log2 of the factor by which the maximal quotient must exceed `log2 m`.
pub const MQRR_SLACK_BITS: u32 = 20;

/// Default maximal-quotient threshold `2^20 * ceil(log2 m)`.
pub fn mqrr_threshold(m: &BigInt) -> BigInt {
    BigInt::from(m.bits()) << MQRR_SLACK_BITS
}

/// Reconstructs `n/d ≡ u (mod m)` with `0 <= u < m`, or `None`.
pub fn ratrecon(u: &BigInt, m: &BigInt, mode: ReconMode) -> Option<BigRational> {
    match mode {
        ReconMode::Wang => wang(u, m),
        ReconMode::Mqrr => mqrr(u, m, &mqrr_threshold(m)),
    }
}

fn finish(n: BigInt, d: BigInt) -> Option<BigRational> {
    if d.is_zero() || !n.gcd(&d).is_one() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Wang's reconstruction: the first remainder `r` with `2r^2 < m` must come
/// with a cofactor `t` satisfying `2t^2 < m`.
pub fn wang(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    let two = BigInt::from(2);
    while &two * &r1 * &r1 >= *m {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        let t = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    if &two * &t1 * &t1 >= *m {
        return None;
    }
    finish(r1, t1)
}

/// Maximal-quotient reconstruction with explicit threshold `t`.
pub fn mqrr(u: &BigInt, m: &BigInt, t: &BigInt) -> Option<BigRational> {
    let u = u.mod_floor(m);
    if u.is_zero() {
        return (m > t).then(BigRational::zero);
    }
    let (mut r0, mut r1) = (m.clone(), u);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    let mut best = t.clone();
    let mut cand: Option<(BigInt, BigInt)> = None;
    while !r1.is_zero() && r0 > best {
        let q = &r0 / &r1;
        if q > best {
            cand = Some((r1.clone(), t1.clone()));
            best = q.clone();
        }
        let r = &r0 - &q * &r1;
        let tt = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, tt);
    }
    cand.and_then(|(n, d)| finish(n, d))
}

/// Coefficientwise CRT image `c mod m` of a flattened polynomial.
///
/// Leaves are kept in the symmetric range `(-m/2, m/2]`.
#[derive(Clone, Debug)]
pub struct CrtAccumulator {
    c: Vec<BigInt>,
    m: BigInt,
    primes: Vec<u64>,
    failed_at: Option<usize>,
}

impl CrtAccumulator {
    /// Empty accumulator for flattened images of length `len`.
    pub fn new(len: usize) -> Self {
        CrtAccumulator { c: vec![BigInt::zero(); len], m: BigInt::one(), primes: Vec::new(), failed_at: None }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn modulus(&self) -> &BigInt {
        &self.m
    }

    /// Number of primes combined.
    pub fn count(&self) -> usize {
        self.primes.len()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn failed_at(&self) -> Option<usize> {
        self.failed_at
    }

    /// Combines an image modulo a new prime `p`.
    pub fn add_image(&mut self, image: &[u64], p: u64) -> Result<()> {
        if image.len() != self.c.len() {
            return Err(Error::ShapeMismatch);
        }
        if self.primes.contains(&p) {
            return Err(Error::RepeatedPrime(p));
        }
        let pb = BigInt::from(p);
        let m_mod_p = (&self.m % &pb).to_u64().unwrap();
        let inv = invmod(m_mod_p, p).ok_or(Error::RepeatedPrime(p))?;
        let m_new = &self.m * &pb;
        let half = &m_new >> 1u32;
        for (c, &d) in self.c.iter_mut().zip(image) {
            let cp = c.mod_floor(&pb).to_u64().unwrap();
            let delta = if d >= cp { d - cp } else { d + p - cp };
            if delta == 0 {
                continue;
            }
            let v = ((delta as u128 * inv as u128) % p as u128) as u64;
            *c += &self.m * v;
            if *c > half {
                *c -= &m_new;
            }
        }
        self.m = m_new;
        self.primes.push(p);
        Ok(())
    }

    /// Reconstructs every leaf, starting where the previous attempt failed.
    pub fn reconstruct(&mut self, mode: ReconMode) -> Option<Vec<BigRational>> {
        let n = self.c.len();
        let start = self.failed_at.unwrap_or(0);
        let threshold = mqrr_threshold(&self.m);
        let mut out = vec![BigRational::zero(); n];
        for off in 0..n {
            let i = (start + off) % n;
            let u = self.c[i].mod_floor(&self.m);
            let r = match mode {
                ReconMode::Wang => wang(&u, &self.m),
                ReconMode::Mqrr => mqrr(&u, &self.m, &threshold),
            };
            match r {
                Some(q) => out[i] = q,
                None => {
                    self.failed_at = Some(i);
                    return None;
                }
            }
        }
        self.failed_at = None;
        Some(out)
    }

    /// Largest leaf magnitude, for diagnostics.
    pub fn max_abs(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}
