mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use numfield_gcd::ffgcd::{prim_pseudo_divrem, quasi_inverse};
use numfield_gcd::modgcd::{ImageAccumulator, Offer};
use numfield_gcd::modp::{inv_mod_p, monic_ea_mod_p, norm_mod_p, reduce_mod_p, ModPoly, ModRing};
use numfield_gcd::primes::PrimeStream;
use numfield_gcd::reconstruct::{ratrecon, wang, CrtAccumulator, ReconMode};
use numfield_gcd::{
    modular_gcd, modular_gcd_with_stats, monic_ea_char0, parse_poly, parse_tower, pff_gcd, GcdOptions, GcdOutcome,
    RPoly, RingSpec, Schedule,
};

use common::{planted, random_field_tower, random_poly, random_poly_rational_lc, random_scalar};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_tower(r: &mut ChaCha8Rng) -> Arc<RingSpec> {
    random_field_tower(r, 2, 3, 6)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn ring_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let a = random_poly(&mut r, &ring, 2, false, 20, 3);
        let b = random_poly(&mut r, &ring, 2, false, 20, 3);
        let c = random_scalar(&mut r, &ring, 20, 3, 0.7);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&a * &RPoly::one(&ring), a);
    }

    #[test]
    fn semi_associate_is_integral(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let f = random_poly(&mut r, &ring, 3, false, 50, 7);
        let (s, scale) = f.semi_associate();
        prop_assert!(s.den().is_one());
        prop_assert_eq!(f.scale(&scale), s);
        let d = BigRational::from_integer(f.den());
        prop_assert!(f.scale(&d).den().is_one());
    }

    #[test]
    fn norm_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let a = random_scalar(&mut r, &ring, 9, 2, 0.7);
        let b = random_scalar(&mut r, &ring, 9, 2, 0.7);
        prop_assert_eq!((&a * &b).norm().unwrap(), a.norm().unwrap() * b.norm().unwrap());
        if !a.is_zero() {
            prop_assert!(!a.norm().unwrap().is_zero());
        }
    }

    #[test]
    fn reduction_mod_p_is_a_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let a = random_poly(&mut r, &ring, 2, false, 30, 5);
        let b = random_poly(&mut r, &ring, 3, true, 30, 5);
        let mut primes = PrimeStream::new(12, r.gen(), None).unwrap();
        let p = loop {
            let p = primes.next_prime().unwrap();
            let den = a.den() * b.den() * ring.ext_den_product();
            if !den.is_multiple_of(&BigInt::from(p)) {
                break p;
            }
        };
        let mr = ModRing::new(&ring, p).unwrap();
        let red = |f: &RPoly| reduce_mod_p(f, &mr).unwrap();
        prop_assert_eq!(red(&(&a * &b)), red(&a).mul(&red(&b)).unwrap());
        prop_assert_eq!(red(&(&a + &b)), red(&a).add(&red(&b)).unwrap());
        let (q, rem) = a.divrem_by_monic(&b).unwrap();
        let (qp, rp) = red(&a).divrem_by_monic(&red(&b)).unwrap();
        prop_assert_eq!((red(&q), red(&rem)), (qp, rp));
    }

    #[test]
    fn inverse_mod_p_implies_nonzero_norm(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let a = random_scalar(&mut r, &ring, 40, 1, 0.6);
        let p = PrimeStream::new(rng(seed ^ 1).gen_range(5..=8), seed, None).unwrap().next_prime().unwrap();
        let Ok(mr) = ModRing::new(&ring, p) else { return Ok(()) };
        let ap = reduce_mod_p(&a, &mr).unwrap();
        if ap.is_zero() {
            return Ok(());
        }
        if let Ok(inv) = inv_mod_p(&ap).unwrap() {
            prop_assert!(norm_mod_p(&ap).unwrap() != 0);
            prop_assert_eq!(ap.mul(&inv).unwrap(), ModPoly::one(&mr));
        }
    }

    #[test]
    fn quasi_inverse_exactness(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let u = random_scalar(&mut r, &ring, 30, 4, 0.7);
        prop_assume!(!u.is_zero());
        let qi = quasi_inverse(&u).unwrap().unwrap();
        prop_assert!(qi.r.is_positive());
        prop_assert!(qi.v.den().is_one());
        prop_assert_eq!(&qi.v * &u, RPoly::constant(&ring, BigRational::from_integer(qi.r.clone())));
    }

    #[test]
    fn pseudo_division_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let (da, db) = (r.gen_range(0..=5), r.gen_range(0..=3));
        let a = random_poly(&mut r, &ring, da, false, 40, 5);
        let b = random_poly_rational_lc(&mut r, &ring, db, 40, 5);
        let pd = prim_pseudo_divrem(&a, &b).unwrap();
        prop_assert!(pd.multiplier.is_positive());
        prop_assert_eq!(a.scale(&BigRational::from_integer(pd.multiplier)), &(&b * &pd.quotient) + &pd.remainder);
        prop_assert!(pd.remainder.is_zero() || pd.remainder.degree() < b.degree());
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let deg = r.gen_range(0..=4);
        let f = random_poly(&mut r, &ring, deg, false, 1000, 20);
        let text = f.to_string();
        let back = parse_poly(&text, &ring).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn wang_round_trip(n in -(1i64 << 30)..(1i64 << 30), d in 1i64..(1 << 30)) {
        let q = BigRational::new(BigInt::from(n), BigInt::from(d));
        let m = BigInt::from((1u128 << 127) - 1);
        let u = (q.numer() * q.denom().modpow(&(&m - 2u32), &m)).mod_floor(&m);
        prop_assert_eq!(wang(&u, &m), Some(q.clone()));
        prop_assert_eq!(ratrecon(&u, &m, ReconMode::Mqrr), Some(q));
    }

    #[test]
    fn crt_recovers_integers(vals in proptest::collection::vec(-(1i64 << 62)..(1i64 << 62), 1..6), seed in any::<u64>()) {
        let mut acc = CrtAccumulator::new(vals.len());
        let mut s = PrimeStream::new(31, seed, None).unwrap();
        for _ in 0..3 {
            let p = s.next_prime().unwrap();
            let img: Vec<u64> = vals.iter().map(|v| v.rem_euclid(p as i64) as u64).collect();
            acc.add_image(&img, p).unwrap();
        }
        let want: Vec<BigInt> = vals.iter().map(|&v| BigInt::from(v)).collect();
        prop_assert_eq!(acc.coeffs(), &want[..]);
    }

    #[test]
    fn resume_matches_fresh_scan(nums in proptest::collection::vec((-(1i64 << 40)..(1i64 << 40), 1i64..(1 << 40)), 2..6), seed in any::<u64>()) {
        let qs: Vec<BigRational> = nums.iter().map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d))).collect();
        let mut resumed = CrtAccumulator::new(qs.len());
        let mut images = Vec::new();
        let mut s = PrimeStream::new(20, seed, None).unwrap();
        for _ in 0..8 {
            let p = loop {
                let p = s.next_prime().unwrap();
                if qs.iter().all(|q| !q.denom().is_multiple_of(&BigInt::from(p))) {
                    break p;
                }
            };
            let pb = BigInt::from(p);
            let img: Vec<u64> = qs
                .iter()
                .map(|q| (q.numer() * q.denom().modpow(&(&pb - 2u32), &pb)).mod_floor(&pb).try_into().unwrap())
                .collect();
            resumed.add_image(&img, p).unwrap();
            images.push((p, img));
            let mut fresh = CrtAccumulator::new(qs.len());
            for (q, im) in &images {
                fresh.add_image(im, *q).unwrap();
            }
            for mode in [ReconMode::Wang, ReconMode::Mqrr] {
                let a = resumed.clone().reconstruct(mode);
                let b = fresh.clone().reconstruct(mode);
                prop_assert_eq!(&a, &b);
            }
            let _ = resumed.reconstruct(ReconMode::Mqrr);
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn modular_matches_char0_engines(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let inst = planted(&mut r, &ring, 7, 100);
        let opts = GcdOptions {
            seed,
            cofactor_mode: r.gen_bool(0.5),
            schedule: if r.gen_bool(0.5) { Schedule::Fibonacci } else { Schedule::EveryPrime },
            recon: if r.gen_bool(0.5) { ReconMode::Wang } else { ReconMode::Mqrr },
            prime_bits: r.gen_range(20..=62),
            ..Default::default()
        };
        let g = match modular_gcd(&inst.f1, &inst.f2, &opts).unwrap() {
            GcdOutcome::Gcd(g) => g,
            o => return Err(TestCaseError::fail(format!("{o:?}"))),
        };
        prop_assert!(g.lc().is_one());
        prop_assert_eq!(&g, &pff_gcd(&inst.f1, &inst.f2, None).unwrap().unwrap().monic().unwrap());
        prop_assert_eq!(&g, &monic_ea_char0(&inst.f1, &inst.f2, None).unwrap().unwrap());
        prop_assert!(numfield_gcd::trial_divide(&g, &inst.g).unwrap().is_some());
    }

    #[test]
    fn modular_is_deterministic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let inst = planted(&mut r, &ring, 6, 100);
        let opts = GcdOptions { seed, ..Default::default() };
        let a = modular_gcd_with_stats(&inst.f1, &inst.f2, &opts).unwrap();
        let b = modular_gcd_with_stats(&inst.f1, &inst.f2, &GcdOptions { threads: 3, ..opts }).unwrap();
        prop_assert_eq!(&a, &modular_gcd_with_stats(&inst.f1, &inst.f2, &opts).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn unlucky_images_never_change_the_result(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let inst = planted(&mut r, &ring, 6, 50);
        let g = match modular_gcd(&inst.f1, &inst.f2, &GcdOptions::default()).unwrap() {
            GcdOutcome::Gcd(g) => g,
            o => return Err(TestCaseError::fail(format!("{o:?}"))),
        };
        let mut s = PrimeStream::new(31, seed, None).unwrap();
        let mut clean = ImageAccumulator::new(&ring);
        let mut noisy = ImageAccumulator::new(&ring);
        let junk = random_poly(&mut r, &ring, g.degree().unwrap() + 1, true, 1000, 1);
        let mut good = 0;
        while good < 12 {
            let p = s.next_prime().unwrap();
            let Ok(mr) = ModRing::new(&ring, p) else { continue };
            let Ok(gp) = reduce_mod_p(&g, &mr) else { continue };
            if r.gen_bool(0.3) {
                let jp = reduce_mod_p(&junk, &mr).unwrap();
                let started = noisy.degree().is_some();
                prop_assert_eq!(noisy.offer(p, jp.data()).unwrap() == Offer::Unlucky, started);
            }
            clean.offer(p, gp.data()).unwrap();
            noisy.offer(p, gp.data()).unwrap();
            good += 1;
        }
        let want = clean.reconstruct(ReconMode::Mqrr);
        prop_assert!(want.is_some());
        prop_assert_eq!(noisy.reconstruct(ReconMode::Mqrr), want.clone());
        prop_assert_eq!(RPoly::new(ring.clone(), want.unwrap()), g);
    }

    #[test]
    fn degree_property_mod_p(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = small_tower(&mut r);
        let inst = planted(&mut r, &ring, 6, 100);
        let g = modular_gcd(&inst.f1, &inst.f2, &GcdOptions::default()).unwrap();
        let g = g.gcd().unwrap();
        let p = PrimeStream::new(r.gen_range(8..=12), seed, None).unwrap().next_prime().unwrap();
        let Ok(mr) = ModRing::new(&ring, p) else { return Ok(()) };
        let (Ok(a), Ok(b)) = (reduce_mod_p(&inst.f1.semi_associate().0, &mr), reduce_mod_p(&inst.f2.semi_associate().0, &mr)) else {
            return Ok(());
        };
        if b.degree() != inst.f2.degree() || a.is_zero() {
            return Ok(());
        }
        if let Ok(d) = monic_ea_mod_p(&a, &b).unwrap() {
            prop_assert!(d.degree() >= g.degree());
            if d.degree() == g.degree() {
                prop_assert_eq!(d, reduce_mod_p(g, &mr).unwrap());
            }
        }
    }
}

#[test]
fn zero_divisor_factors_divide_the_extension() {
    for s in 1..=4i64 {
        let ext = format!("c^2-{}", 2 * s * s);
        let ring = parse_tower(&["a^2-2", ext.as_str()], "x").unwrap();
        let p = |t: &str| parse_poly(t, &ring).unwrap();
        let f1 = p("x^2+a*x+1");
        let f2 = p(&format!("(c-{s}*a)*x+1"));
        match modular_gcd(&f1, &f2, &GcdOptions::default()).unwrap() {
            GcdOutcome::ZeroDivisor(zd) => {
                assert_eq!(zd.level, 2);
                assert!(zd.is_valid());
                assert_eq!(zd.factor_rec().degree(), Some(1));
            }
            o => panic!("{o:?}"),
        }
        for zd in [pff_gcd(&f1, &f2, None).unwrap().unwrap_err(), monic_ea_char0(&f1, &f2, None).unwrap().unwrap_err()] {
            assert!(zd.is_valid(), "{zd}");
        }
    }
}

#[test]
fn zero_input_and_rational_only() {
    let ring = parse_tower::<&str>(&[], "x").unwrap();
    let p = |t: &str| parse_poly(t, &ring).unwrap();
    let g = modular_gcd(&p("x^2-1"), &p("x^2-2*x+1"), &GcdOptions::default()).unwrap();
    assert_eq!(g, GcdOutcome::Gcd(p("x-1")));
    let g = modular_gcd(&p("0"), &p("3*x+6"), &GcdOptions::default()).unwrap();
    assert_eq!(g, GcdOutcome::Gcd(p("x+2")));
    let g = modular_gcd(&p("x^2+1"), &p("x+1"), &GcdOptions::default()).unwrap();
    assert_eq!(g, GcdOutcome::Gcd(p("1")));
}
