//! Characteristic-0 algorithms without primes: quasi-inverses,
//! Z-primitive pseudo-division, the primitive fraction-free GCD, and the
//! monic Euclidean algorithm over the tower.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rec::Rec;
use crate::tower::{ConstantRemainder, RPoly, RingSpec, ZdResult, ZeroDivisorChar0};
use crate::zarith::{self, IntTower, ZRec};

/// `v u = r` with `den(v) = 1` and `r > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiInverse {
    pub v: RPoly,
    pub r: BigInt,
}

/// Integer factor of `m̌_level` found by a vanishing pseudo-remainder.
pub(crate) type IntZeroDivisor = (usize, ZRec);

fn one_at(level: usize) -> ZRec {
    Rec::Leaf(BigInt::one()).embed(level)
}

/// Reduces the coefficients of two same-level polynomials with one multiplier.
fn reduce_pair(t: &IntTower, level: usize, a: ZRec, b: ZRec, upto: usize) -> (ZRec, ZRec, BigInt) {
    let na = a.coeffs().len();
    let mut items = a.into_coeffs();
    items.extend(b.into_coeffs());
    let (mut items, nu) = t.reduce_all(level - 1, items, upto);
    let bb = items.split_off(na);
    (Rec::from_coeffs(items), Rec::from_coeffs(bb), nu)
}

/// Divides both by their joint integer content.
fn strip_pair(a: ZRec, b: ZRec) -> (ZRec, ZRec) {
    let g = zarith::content(&a).gcd(&zarith::content(&b));
    if g.is_one() || g.is_zero() {
        (a, b)
    } else {
        (zarith::div_exact(&a, &g), zarith::div_exact(&b, &g))
    }
}

/// Quasi-inverse of a nonzero reduced integer element at `level`.
pub(crate) fn quasi_inverse_int(
    t: &IntTower,
    level: usize,
    u: &ZRec,
) -> std::result::Result<(ZRec, BigInt), IntZeroDivisor> {
    if level == 0 {
        let n = u.constant_value().expect("nonzero leaf");
        return Ok((Rec::Leaf(n.signum()), n.abs()));
    }
    let (c, u1) = zarith::primitive(u);
    let mut r0 = t.semi[level - 1].clone();
    let mut r1 = u1;
    let mut t0: ZRec = Rec::Zero;
    let mut t1 = one_at(level);
    while r1.degree().unwrap() > 0 {
        let (i, _) = quasi_inverse_int(t, level - 1, r1.lc().unwrap())?;
        let a = zarith::mul_coeffs_free(&r1, &i);
        let b = zarith::mul_coeffs_free(&t1, &i);
        let (a, b, _) = reduce_pair(t, level, a, b, level - 1);
        (r1, t1) = strip_pair(a, b);
        let (q, pr, mu) = t.ff_divrem(level, &r0, &r1, level - 1);
        if pr.is_zero() {
            return Err((level, r1));
        }
        let tn = zarith::sub(&zarith::scale(&t0, &mu), &zarith::mul_free(&q, &t1));
        let (tn, nu) = t.ff_reduce(level, tn, level - 1);
        let pr = zarith::scale(&pr, &nu);
        r0 = std::mem::replace(&mut r1, Rec::Zero);
        t0 = std::mem::replace(&mut t1, Rec::Zero);
        (r1, t1) = strip_pair(pr, tn);
    }
    let (v, r) = quasi_inverse_int(t, level - 1, &r1.coeffs()[0])?;
    let (w, nu) = t.ff_reduce(level, zarith::mul_coeffs_free(&t1, &v), level);
    let big_r = r * nu * c;
    let g = zarith::content(&w).gcd(&big_r);
    Ok((zarith::div_exact(&w, &g), big_r / g))
}

fn int_zd(ring: &Arc<RingSpec>, (level, f): IntZeroDivisor) -> ZeroDivisorChar0 {
    let lc = f.lc().and_then(Rec::constant_value).expect("integer leading coefficient").clone();
    let q = f.map_leaves(&mut |x| Some(BigRational::new(x.clone(), lc.clone())));
    let data = q.embed(ring.top() - level);
    ZeroDivisorChar0 { level, factor: RPoly::new(ring.clone(), data) }
}

/// Quasi-inverse `(v, r)` of a nonzero field element, or a zero divisor.
pub fn quasi_inverse(u: &RPoly) -> Result<ZdResult<QuasiInverse>> {
    let a = u.scalar_rec()?;
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let ring = u.ring();
    let (z, den) = zarith::from_rational(&a);
    let t = ring.int_tower();
    Ok(match quasi_inverse_int(t, ring.height(), &z) {
        Ok((v, r)) => {
            let v = zarith::scale(&v, &den);
            let g = zarith::content(&v).gcd(&r);
            let v = zarith::div_exact(&v, &g);
            Ok(QuasiInverse { v: RPoly::from_zrec(ring, &v.embed(1)), r: r / g })
        }
        Err(zd) => Err(int_zd(ring, zd)),
    })
}

/// `μ A = B q̄ + r̄` with minimal integer multipliers at each step.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoDivision {
    pub remainder: RPoly,
    pub multiplier: BigInt,
    pub quotient: RPoly,
}

fn rational_lc(b: &RPoly) -> Result<()> {
    match b.degree() {
        None => Err(Error::DivisionByZero),
        Some(_) if b.lc().as_rational().is_some() => Ok(()),
        Some(_) => Err(Error::NonRationalLeadingCoefficient),
    }
}

/// Z-primitive pseudo-division; `lc(B)` must be rational.
pub fn prim_pseudo_divrem(a: &RPoly, b: &RPoly) -> Result<PseudoDivision> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    rational_lc(b)?;
    let ring = a.ring();
    let (za, da) = zarith::from_rational(a.data());
    let (zb, db) = zarith::from_rational(b.data());
    let (q, r, mu) = ring.int_tower().ff_divrem(ring.top(), &za, &zb, ring.height());
    Ok(PseudoDivision {
        remainder: RPoly::from_zrec(ring, &r),
        multiplier: mu * da,
        quotient: RPoly::from_zrec(ring, &zarith::scale(&q, &db)),
    })
}

/// Exact quotient `A / B` for `lc(B)` rational, or `None` when `B ∤ A`.
pub(crate) fn exact_quotient(a: &RPoly, b: &RPoly) -> Result<Option<RPoly>> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    rational_lc(b)?;
    let ring = a.ring();
    if a.is_zero() {
        return Ok(Some(RPoly::zero(ring)));
    }
    let (sa, ra) = a.semi_associate();
    let (sb, rb) = b.semi_associate();
    let za = sa.to_zrec()?;
    let zb = sb.to_zrec()?;
    let (q, r, mu) = ring.int_tower().ff_divrem(ring.top(), &za, &zb, ring.height());
    if !r.is_zero() {
        return Ok(None);
    }
    // a = sa/ra, b = sb/rb and mu sa = sb q, so a/b = rb q / (ra mu)
    let s = rb / (ra * BigRational::from_integer(mu));
    let (num, den) = (s.numer().clone(), s.denom().clone());
    let q = zarith::scale(&q, &num);
    Ok(Some(RPoly::new(ring.clone(), zarith::to_rational(&q, &den))))
}

fn check_deadline(deadline: Option<Instant>) -> Result<()> {
    match deadline {
        Some(d) if Instant::now() >= d => Err(Error::Timeout),
        _ => Ok(()),
    }
}

/// Multiplies by a quasi-inverse of the leading coefficient and makes primitive.
fn normalize(ring: &Arc<RingSpec>, f: &ZRec) -> std::result::Result<ZRec, IntZeroDivisor> {
    let t = ring.int_tower();
    let (v, _) = quasi_inverse_int(t, ring.height(), f.lc().unwrap())?;
    let (g, _) = t.ff_reduce(ring.top(), zarith::mul_coeffs_free(f, &v), ring.height());
    Ok(zarith::primitive(&g).1)
}

/// Primitive fraction-free GCD.
///
/// Returns a Z-primitive associate of the monic gcd with a positive integer
/// leading coefficient, or the zero divisor that stopped the computation.
pub fn pff_gcd(f1: &RPoly, f2: &RPoly, deadline: Option<Instant>) -> Result<ZdResult<RPoly>> {
    if f1.ring() != f2.ring() {
        return Err(Error::RingMismatch);
    }
    if f1.is_zero() && f2.is_zero() {
        return Err(Error::BothZero);
    }
    let ring = f1.ring();
    let t = ring.int_tower();
    let pp = |f: &RPoly| f.semi_associate().0.to_zrec();
    let (mut r0, mut r1) = (pp(f1)?, pp(f2)?);
    if r0.is_zero() {
        std::mem::swap(&mut r0, &mut r1);
    }
    let out = (|| -> Result<std::result::Result<ZRec, IntZeroDivisor>> {
        r0 = match normalize(ring, &r0) {
            Ok(r) => r,
            Err(zd) => return Ok(Err(zd)),
        };
        loop {
            check_deadline(deadline)?;
            if r1.is_zero() {
                return Ok(Ok(r0));
            }
            r1 = match normalize(ring, &r1) {
                Ok(r) => r,
                Err(zd) => return Ok(Err(zd)),
            };
            let (_, r, _) = t.ff_divrem(ring.top(), &r0, &r1, ring.height());
            let r = zarith::primitive(&r).1;
            r0 = std::mem::replace(&mut r1, r);
        }
    })()?;
    Ok(match out {
        Ok(g) => {
            let neg = g.lc().and_then(Rec::constant_value).is_some_and(|c| c.is_negative());
            let g = if neg { zarith::neg(&g) } else { g };
            Ok(RPoly::from_zrec(ring, &g))
        }
        Err(zd) => Err(int_zd(ring, zd)),
    })
}

/// Monic Euclidean algorithm over the tower with exact rational arithmetic.
pub fn monic_ea_char0(f1: &RPoly, f2: &RPoly, deadline: Option<Instant>) -> Result<ZdResult<RPoly>> {
    if f1.ring() != f2.ring() {
        return Err(Error::RingMismatch);
    }
    if f1.is_zero() && f2.is_zero() {
        return Err(Error::BothZero);
    }
    let ring = f1.ring();
    let (a, b) = if f2.is_zero() { (f2, f1) } else { (f1, f2) };
    let r = ring.tower().monic_gcd(ring.top(), a.data(), b.data(), ConstantRemainder::Invert, || {
        deadline.is_none_or(|d| Instant::now() < d)
    });
    match r {
        Ok(Some(g)) => Ok(Ok(RPoly::new(ring.clone(), g))),
        Ok(None) => Err(Error::Timeout),
        Err(zd) => Ok(Err(ZeroDivisorChar0::from_tower(ring, zd))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_poly, parse_tower};

    #[test]
    fn quasi_inverse_examples() {
        let ring = parse_tower(&["a^2-2"], "x").unwrap();
        let p = |s: &str| parse_poly(s, &ring).unwrap();
        let qi = quasi_inverse(&p("a")).unwrap().unwrap();
        assert_eq!((qi.v, qi.r), (p("a"), BigInt::from(2)));
        let qi = quasi_inverse(&p("1+a")).unwrap().unwrap();
        assert_eq!((qi.v, qi.r), (p("a-1"), BigInt::from(1)));
    }

    #[test]
    fn pseudo_division_examples() {
        let ring = parse_tower(&["a^2-2"], "x").unwrap();
        let p = |s: &str| parse_poly(s, &ring).unwrap();
        let d = prim_pseudo_divrem(&p("x^2+1"), &p("2*x+1")).unwrap();
        assert_eq!((d.remainder, d.multiplier, d.quotient), (p("5"), BigInt::from(4), p("2*x-1")));
        let d = prim_pseudo_divrem(&p("x^2+a"), &p("x-a")).unwrap();
        assert_eq!((d.remainder, d.multiplier), (p("2+a"), BigInt::from(1)));
        let d = prim_pseudo_divrem(&p("x^2+a"), &p("x^2+a")).unwrap();
        assert_eq!((d.remainder, d.multiplier, d.quotient), (p("0"), BigInt::from(1), p("1")));
        assert_eq!(prim_pseudo_divrem(&p("x"), &p("a*x")), Err(Error::NonRationalLeadingCoefficient));
    }

    #[test]
    fn small_gcds() {
        let ring = parse_tower(&["a^2-2"], "x").unwrap();
        let p = |s: &str| parse_poly(s, &ring).unwrap();
        let g = pff_gcd(&p("x^2-2"), &p("x-a"), None).unwrap().unwrap();
        assert_eq!(g, p("x-a"));
        let g = monic_ea_char0(&p("x^2-2"), &p("x-a"), None).unwrap().unwrap();
        assert_eq!(g, p("x-a"));
        let g = monic_ea_char0(&p("x^2-2"), &p("x+1"), None).unwrap().unwrap();
        assert!(g.is_one());
    }
}
