//! Tower arithmetic modulo a word-sized prime.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::format_rec;
use crate::field::{is_prime, Zp};
use crate::rec::Rec;
use crate::tower::{ConstantRemainder, RPoly, RingSpec, Tower, ZeroDivisor};

/// A [`RingSpec`] tower reduced modulo a prime `p` with `p ∤ l_*`.
#[derive(Clone, Debug)]
pub struct ModRing {
    spec: Arc<RingSpec>,
    p: u64,
    tower: Tower<Zp>,
}

impl ModRing {
    /// Reduces the monic extensions of `spec` modulo `p`.
    pub fn new(spec: &Arc<RingSpec>, p: u64) -> Result<Arc<ModRing>> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let f = Zp::new(p);
        let mut exts = Vec::with_capacity(spec.height());
        for i in 1..=spec.height() {
            let m = spec
                .ext(i)
                .try_map_leaves(&mut |q| f.from_rational(q).map(|v| (v != 0).then_some(v)).ok_or(()))
                .map_err(|_| Error::ExtensionDenominator(p))?;
            exts.push(m);
        }
        Ok(Arc::new(ModRing { spec: spec.clone(), p, tower: Tower::new(f, exts) }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn tower(&self) -> &Tower<Zp> {
        &self.tower
    }

    pub fn top(&self) -> usize {
        self.spec.top()
    }
}

impl PartialEq for ModRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.spec == other.spec
    }
}

/// A polynomial over a [`ModRing`].
#[derive(Clone, Debug)]
pub struct ModPoly {
    ring: Arc<ModRing>,
    data: Rec<u64>,
}

impl PartialEq for ModPoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.data == other.data
    }
}

/// Monic nontrivial factor of `m̄_level` found while inverting mod p.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroDivisorReport {
    pub level: usize,
    /// Stored as an element of the coefficient field.
    pub factor: ModPoly,
}

impl ZeroDivisorReport {
    pub(crate) fn from_tower(ring: &Arc<ModRing>, zd: ZeroDivisor<u64>) -> Self {
        let up = ring.top() - zd.level;
        ZeroDivisorReport { level: zd.level, factor: ModPoly::from_canonical(ring, zd.factor.embed(up)) }
    }

    /// The factor as a polynomial in `z_level` over the level below.
    pub fn factor_rec(&self) -> Rec<u64> {
        let mut r = self.factor.data.clone();
        for _ in self.level..self.factor.ring.top() {
            r = r.coeffs().first().cloned().unwrap_or(Rec::Zero);
        }
        r
    }

    /// Monic, degree in `[1, d_level)`, and an exact divisor of `m̄_level`.
    pub fn is_valid(&self) -> bool {
        let ring = &self.factor.ring;
        let t = ring.tower();
        let f = self.factor_rec();
        let d = ring.spec.degrees()[self.level - 1];
        f.degree().is_some_and(|e| e >= 1 && e < d)
            && f.lc() == Some(&t.one(self.level - 1))
            && t.divrem_monic(self.level, t.ext(self.level), &f).1.is_zero()
    }
}

impl fmt::Display for ZeroDivisorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.factor)
    }
}

/// Zero-divisor-aware result of mod-p routines.
pub type ZdModResult<T> = std::result::Result<T, ZeroDivisorReport>;

impl ModPoly {
    pub(crate) fn from_canonical(ring: &Arc<ModRing>, data: Rec<u64>) -> Self {
        ModPoly { ring: ring.clone(), data }
    }

    /// Canonicalizes arbitrary level-`n+1` data.
    pub fn new(ring: &Arc<ModRing>, data: Rec<u64>) -> Self {
        let data = ring.tower.canonicalize(ring.top(), &data);
        ModPoly { ring: ring.clone(), data }
    }

    pub fn zero(ring: &Arc<ModRing>) -> Self {
        ModPoly { ring: ring.clone(), data: Rec::Zero }
    }

    pub fn one(ring: &Arc<ModRing>) -> Self {
        ModPoly { ring: ring.clone(), data: ring.tower.one(ring.top()) }
    }

    pub fn ring(&self) -> &Arc<ModRing> {
        &self.ring
    }

    pub fn data(&self) -> &Rec<u64> {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.data.degree()
    }

    pub fn lc(&self) -> ModPoly {
        let c = self.data.lc().cloned().unwrap_or(Rec::Zero);
        ModPoly { ring: self.ring.clone(), data: c.embed(1) }
    }

    fn check(&self, other: &ModPoly) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        Ok(ModPoly::from_canonical(&self.ring, self.ring.tower.add(&self.data, &other.data)))
    }

    pub fn sub(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        Ok(ModPoly::from_canonical(&self.ring, self.ring.tower.sub(&self.data, &other.data)))
    }

    pub fn mul(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        let top = self.ring.top();
        Ok(ModPoly::from_canonical(&self.ring, self.ring.tower.mul(top, &self.data, &other.data)))
    }

    pub fn neg(&self) -> ModPoly {
        ModPoly::from_canonical(&self.ring, self.ring.tower.neg(&self.data))
    }

    /// Division by a divisor with leading coefficient 1.
    pub fn divrem_by_monic(&self, g: &ModPoly) -> Result<(ModPoly, ModPoly)> {
        self.check(g)?;
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if g.data.lc() != Some(&self.ring.tower.one(self.ring.top() - 1)) {
            return Err(Error::NotMonicDivisor);
        }
        let (q, r) = self.ring.tower.divrem_monic(self.ring.top(), &self.data, &g.data);
        Ok((ModPoly::from_canonical(&self.ring, q), ModPoly::from_canonical(&self.ring, r)))
    }

    fn scalar_rec(&self) -> Result<Rec<u64>> {
        match self.degree() {
            None => Ok(Rec::Zero),
            Some(0) => Ok(self.data.coeffs()[0].clone()),
            Some(_) => Err(Error::NotScalar),
        }
    }

    /// Scales to leading coefficient 1.
    pub fn monic(&self) -> ZdModResult<ModPoly> {
        self.ring
            .tower
            .monic(self.ring.top(), &self.data)
            .map(|d| ModPoly::from_canonical(&self.ring, d))
            .map_err(|zd| ZeroDivisorReport::from_tower(&self.ring, zd))
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.ring.spec.var_names();
        f.write_str(&format_rec(&self.data, &names, &|v: &u64| (false, v.to_string(), *v == 1)))
    }
}

/// Image of `f` modulo `p`; fails when `p` divides a denominator of `f`.
pub fn reduce_mod_p(f: &RPoly, ring: &Arc<ModRing>) -> Result<ModPoly> {
    if !(Arc::ptr_eq(f.ring(), &ring.spec) || **f.ring() == *ring.spec) {
        return Err(Error::RingMismatch);
    }
    let zp = *ring.tower.field();
    let data = f
        .data()
        .try_map_leaves(&mut |q| zp.from_rational(q).map(|v| (v != 0).then_some(v)).ok_or(()))
        .map_err(|_| Error::NotReducible(ring.p))?;
    Ok(ModPoly::from_canonical(ring, data))
}

/// Inverse of a nonzero field element mod p, or the zero divisor met.
pub fn inv_mod_p(a: &ModPoly) -> Result<ZdModResult<ModPoly>> {
    let x = a.scalar_rec()?;
    if x.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let ring = &a.ring;
    Ok(match ring.tower.inverse(ring.spec.height(), &x) {
        Ok(v) => Ok(ModPoly::from_canonical(ring, v.embed(1))),
        Err(zd) => Err(ZeroDivisorReport::from_tower(ring, zd)),
    })
}

/// Full norm in F_p of a field element.
pub fn norm_mod_p(a: &ModPoly) -> Result<u64> {
    let x = a.scalar_rec()?;
    Ok(a.ring.tower.norm(a.ring.spec.height(), &x))
}

/// Monic gcd mod p, or the zero divisor that stopped the Euclidean algorithm.
///
/// A constant remainder ends the algorithm with 1 only after its norm
/// shows it is a unit.
pub fn monic_ea_mod_p(f1: &ModPoly, f2: &ModPoly) -> Result<ZdModResult<ModPoly>> {
    f1.check(f2)?;
    if f1.is_zero() && f2.is_zero() {
        return Err(Error::BothZero);
    }
    let ring = &f1.ring;
    let r = ring
        .tower
        .monic_gcd(ring.top(), &f1.data, &f2.data, ConstantRemainder::NormTest, || true);
    Ok(match r {
        Ok(g) => Ok(ModPoly::from_canonical(ring, g.expect("never aborted"))),
        Err(zd) => Err(ZeroDivisorReport::from_tower(ring, zd)),
    })
}
