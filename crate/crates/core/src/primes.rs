//! Seeded prime streams and the lc-bad test.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::tower::RPoly;

/// Bit lengths at or below this use an explicit shuffled pool.
const POOL_BITS: u32 = 22;

/// Deterministic stream of distinct primes `p` with `2^(b-1) < p < 2^b`.
#[derive(Clone, Debug)]
pub struct PrimeStream {
    bits: u32,
    reserved: Option<u64>,
    emitted: usize,
    rng: ChaCha8Rng,
    seen: HashSet<u64>,
    pool: Option<Vec<u64>>,
}

impl PrimeStream {
    /// `bits` must lie in `3..=63`.
    pub fn new(bits: u32, seed: u64, reserved: Option<u64>) -> Result<Self> {
        if !(3..=63).contains(&bits) {
            return Err(Error::PrimeBits(bits));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = (bits <= POOL_BITS).then(|| {
            let lo = 1u64 << (bits - 1);
            let mut v: Vec<u64> = (lo + 1..lo << 1).filter(|&q| is_prime(q)).collect();
            v.shuffle(&mut rng);
            v.reverse();
            v
        });
        Ok(PrimeStream { bits, reserved, emitted: 0, rng, seen: HashSet::new(), pool })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    pub fn reserved(&self) -> Option<u64> {
        self.reserved
    }

    /// Next fresh prime; never the reserved one, never a repeat.
    pub fn next_prime(&mut self) -> Result<u64> {
        let p = match &mut self.pool {
            Some(pool) => loop {
                match pool.pop() {
                    None => return Err(Error::PrimesExhausted(self.bits)),
                    Some(q) if Some(q) == self.reserved => continue,
                    Some(q) => break q,
                }
            },
            None => {
                let lo = 1u64 << (self.bits - 1);
                let hi = (lo << 1) - 1;
                loop {
                    let mut q = self.rng.gen_range(lo + 1..=hi) | 1;
                    while q <= hi && !is_prime(q) {
                        q += 2;
                    }
                    if q <= hi && Some(q) != self.reserved && self.seen.insert(q) {
                        break q;
                    }
                }
            }
        };
        self.emitted += 1;
        Ok(p)
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        self.next_prime().ok()
    }
}

/// Integer data deciding lc-badness for an ordered input pair.
#[derive(Clone, Debug)]
pub struct LcData {
    /// `den(f1) den(f2) l_*`.
    den_product: BigInt,
    /// Integer leaves of `lc(f̌1)` and `lc(f̌2)`.
    lc1: Vec<BigInt>,
    lc2: Vec<BigInt>,
}

/// Outcome of the lc-bad test for the pair `(f1, f2)` and its swap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcStatus {
    Ok,
    /// Only the swapped order `(f2, f1)` avoids lc-badness.
    Swap,
    Bad,
}

impl LcData {
    pub fn new(f1: &RPoly, f2: &RPoly) -> Self {
        let leaves = |f: &RPoly| {
            let lc = f.semi_associate().0.lc();
            let mut v = Vec::new();
            lc.data().for_each_leaf(&mut |q| v.push(q.numer().clone()));
            v
        };
        LcData {
            den_product: f1.den() * f2.den() * f1.ring().ext_den_product(),
            lc1: leaves(f1),
            lc2: leaves(f2),
        }
    }

    fn vanishes(v: &[BigInt], p: &BigInt) -> bool {
        v.iter().all(|c| c.is_multiple_of(p))
    }

    pub fn status(&self, p: u64) -> LcStatus {
        let p = BigInt::from(p);
        if self.den_product.is_multiple_of(&p) {
            LcStatus::Bad
        } else if !Self::vanishes(&self.lc2, &p) {
            LcStatus::Ok
        } else if !Self::vanishes(&self.lc1, &p) {
            LcStatus::Swap
        } else {
            LcStatus::Bad
        }
    }
}

/// True when `p` divides `den(f1)`, `den(f2)` or some `l_i`, or `lc(f̌2) ≡ 0 mod p`.
pub fn is_lc_bad(p: u64, f1: &RPoly, f2: &RPoly) -> bool {
    if f2.is_zero() {
        return true;
    }
    let d = LcData::new(f1, f2);
    let p = BigInt::from(p);
    d.den_product.is_multiple_of(&p) || LcData::vanishes(&d.lc2, &p)
}
