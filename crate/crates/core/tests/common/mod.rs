#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use numfield_gcd::{parse_poly, parse_tower, RPoly, RingSpec};

const VARS: [&str; 3] = ["a", "b", "c"];
const RADICANDS: [i64; 3] = [2, 3, 5];

/// A random field tower of height `1..=max_height`.
///
/// Level `i` is `(z_i - s_i)^d_i - p_i` with distinct primes `p_i` and a small
/// shift `s_i` in the lower variables; real radicals of distinct primes keep it a field.
pub fn random_field_tower<R: Rng>(rng: &mut R, max_height: usize, max_degree: usize, max_dim: usize) -> Arc<RingSpec> {
    loop {
        let n = rng.gen_range(1..=max_height);
        let degs: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_degree)).collect();
        if degs.iter().product::<usize>() > max_dim {
            continue;
        }
        let exts: Vec<String> = (0..n)
            .map(|i| {
                let mut shift = format!("{}", rng.gen_range(-3..=3));
                for v in &VARS[..i] {
                    shift += &format!("{:+}*{v}", rng.gen_range(-2..=2));
                }
                format!("({}-({shift}))^{}-{}", VARS[i], degs[i], RADICANDS[i])
            })
            .collect();
        return parse_tower(&exts, "x").expect("generated tower");
    }
}

pub fn random_rational<R: Rng>(rng: &mut R, height: i64, max_den: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-height..=height)), BigInt::from(rng.gen_range(1..=max_den)))
}

/// A random tower element with about `density` of its coefficients nonzero.
pub fn random_scalar<R: Rng>(rng: &mut R, ring: &Arc<RingSpec>, height: i64, max_den: i64, density: f64) -> RPoly {
    let mut acc = RPoly::zero(ring);
    let dims = ring.degrees().to_vec();
    let total: usize = dims.iter().product();
    for idx in 0..total {
        if !rng.gen_bool(density) {
            continue;
        }
        let mut term = RPoly::constant(ring, random_rational(rng, height, max_den));
        let mut rest = idx;
        for (i, &d) in dims.iter().enumerate() {
            let e = rest % d;
            rest /= d;
            if e > 0 {
                term = &term * &RPoly::generator(ring, i + 1).pow(e as u32);
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// A random polynomial of degree exactly `deg`; monic when asked.
pub fn random_poly<R: Rng>(rng: &mut R, ring: &Arc<RingSpec>, deg: usize, monic: bool, height: i64, max_den: i64) -> RPoly {
    let x = RPoly::x(ring);
    let mut f = if monic {
        x.pow(deg as u32)
    } else {
        let mut lc = RPoly::zero(ring);
        while lc.is_zero() {
            lc = random_scalar(rng, ring, height, max_den, 0.5);
        }
        &lc * &x.pow(deg as u32)
    };
    for i in 0..deg {
        let c = random_scalar(rng, ring, height, max_den, 0.6);
        f = &f + &(&c * &x.pow(i as u32));
    }
    f
}

/// A random polynomial whose leading coefficient is a nonzero rational.
pub fn random_poly_rational_lc<R: Rng>(rng: &mut R, ring: &Arc<RingSpec>, deg: usize, height: i64, max_den: i64) -> RPoly {
    let mut lc = BigRational::from_integer(BigInt::from(0));
    while lc == BigRational::from_integer(BigInt::from(0)) {
        lc = random_rational(rng, height, max_den);
    }
    random_poly(rng, ring, deg, true, height, max_den).scale(&lc)
}

/// A gcd instance `(g a, g b, g)` with monic `g`.
pub struct Planted {
    pub ring: Arc<RingSpec>,
    pub f1: RPoly,
    pub f2: RPoly,
    pub g: RPoly,
}

pub fn planted<R: Rng>(rng: &mut R, ring: &Arc<RingSpec>, max_total: usize, height: i64) -> Planted {
    let dg = rng.gen_range(0..=3.min(max_total - 1));
    let da = rng.gen_range(1..=(max_total - dg).min(4));
    let db = rng.gen_range(1..=(max_total - dg).min(4));
    let g = random_poly(rng, ring, dg, true, height, 3);
    let (ma, mb) = (rng.gen_bool(0.5), rng.gen_bool(0.5));
    let a = random_poly(rng, ring, da, ma, height, 3);
    let b = random_poly(rng, ring, db, mb, height, 3);
    Planted { ring: ring.clone(), f1: &g * &a, f2: &g * &b, g }
}

pub fn parse(ring: &Arc<RingSpec>, s: &str) -> RPoly {
    parse_poly(s, ring).unwrap()
}
