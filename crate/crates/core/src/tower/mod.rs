//! Number-field towers over Q and polynomials over them.

mod berkowitz;
mod generic;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use generic::{ConstantRemainder, Tower, ZeroDivisor};

use crate::error::{Error, Result};
use crate::field::Rationals;
use crate::rec::Rec;
use crate::zarith::{self, IntTower, ZRec};

pub type QRec = Rec<BigRational>;

/// A tower `Q(α_1, ..., α_n)` together with the name of the polynomial variable.
///
/// Stores the monic `m_i`, their semi-associates `m̌_i = l_i m_i` and the
/// denominators `l_i`. Irreducibility is never checked, so the tower may be
/// a ring with zero divisors.
#[derive(Clone, Debug, PartialEq)]
pub struct RingSpec {
    ext_vars: Vec<String>,
    main_var: String,
    tower: Tower<Rationals>,
    int: IntTower,
}

impl RingSpec {
    /// Builds a tower from monic extensions.
    ///
    /// `exts[i]` is a level-`i+1` element: a polynomial in `z_{i+1}` whose
    /// coefficients involve only `z_1..z_i`. Coefficients are reduced here.
    pub fn new(ext_vars: Vec<String>, main_var: impl Into<String>, exts: Vec<QRec>) -> Result<Self> {
        let main_var = main_var.into();
        assert_eq!(ext_vars.len(), exts.len(), "one variable per extension");
        let mut names: Vec<&String> = ext_vars.iter().chain(std::iter::once(&main_var)).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVariable(w[0].clone()));
        }
        let mut reduced: Vec<QRec> = Vec::with_capacity(exts.len());
        for (i, m) in exts.iter().enumerate() {
            let level = i + 1;
            let sub = Tower::new(Rationals, reduced.clone());
            let m = sub.canonicalize(level, m);
            match m.degree() {
                None | Some(0) => return Err(Error::ConstantExtension { level }),
                Some(_) => {}
            }
            let lc = m.lc().unwrap();
            if *lc != sub.one(level - 1) {
                return Err(Error::NotMonic { level });
            }
            reduced.push(m);
        }
        let (semi, l): (Vec<ZRec>, Vec<BigInt>) = reduced.iter().map(zarith::from_rational).unzip();
        Ok(RingSpec {
            ext_vars,
            main_var,
            tower: Tower::new(Rationals, reduced),
            int: IntTower::new(semi, l),
        })
    }

    /// Number of extensions.
    pub fn height(&self) -> usize {
        self.tower.height()
    }

    pub fn ext_vars(&self) -> &[String] {
        &self.ext_vars
    }

    pub fn main_var(&self) -> &str {
        &self.main_var
    }

    /// Variable names from `z_1` up to the main variable.
    pub fn var_names(&self) -> Vec<&str> {
        self.ext_vars
            .iter()
            .map(String::as_str)
            .chain(std::iter::once(self.main_var.as_str()))
            .collect()
    }

    pub fn tower(&self) -> &Tower<Rationals> {
        &self.tower
    }

    pub(crate) fn int_tower(&self) -> &IntTower {
        &self.int
    }

    pub fn degrees(&self) -> &[usize] {
        self.tower.degrees()
    }

    /// `D = d_1 ... d_n`.
    pub fn dimension(&self) -> usize {
        self.tower.dimension()
    }

    /// Monic `m_i` (1-based).
    pub fn ext(&self, level: usize) -> &QRec {
        self.tower.ext(level)
    }

    /// Semi-associate `m̌_i` (1-based).
    pub fn semi_ext(&self, level: usize) -> &ZRec {
        &self.int.semi[level - 1]
    }

    /// `l_i = den(m_i)` (1-based).
    pub fn ext_den(&self, level: usize) -> &BigInt {
        &self.int.l[level - 1]
    }

    /// `l_* = l_1 ... l_n`.
    pub fn ext_den_product(&self) -> BigInt {
        self.int.l.iter().product()
    }

    /// Level of the main variable, `n + 1`.
    pub fn top(&self) -> usize {
        self.height() + 1
    }
}

/// Nontrivial monic factor of `m_level` found in characteristic 0.
///
/// The factor is stored as an element of the coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroDivisorChar0 {
    pub level: usize,
    pub factor: RPoly,
}

impl ZeroDivisorChar0 {
    pub(crate) fn from_tower(ring: &Arc<RingSpec>, zd: ZeroDivisor<BigRational>) -> Self {
        let up = ring.top() - zd.level;
        ZeroDivisorChar0 {
            level: zd.level,
            factor: RPoly::from_canonical(ring.clone(), zd.factor.embed(up)),
        }
    }

    /// The factor as a polynomial in `z_level` over `L_{level-1}`.
    pub fn factor_rec(&self) -> QRec {
        let mut r = self.factor.data.clone();
        for _ in self.level..self.factor.ring.top() {
            r = r.coeffs().first().cloned().unwrap_or(Rec::Zero);
        }
        r
    }

    /// True when the factor is monic, of degree in `[1, d_level)`, and divides `m_level`.
    pub fn is_valid(&self) -> bool {
        let ring = &self.factor.ring;
        let f = self.factor_rec();
        let t = ring.tower();
        let d = ring.degrees()[self.level - 1];
        let ok_deg = f.degree().is_some_and(|e| e >= 1 && e < d);
        ok_deg
            && f.lc() == Some(&t.one(self.level - 1))
            && t.divrem_monic(self.level, ring.ext(self.level), &f).1.is_zero()
    }
}

impl fmt::Display for ZeroDivisorChar0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.factor)
    }
}

/// Zero-divisor-aware result used by characteristic-0 routines.
pub type ZdResult<T> = std::result::Result<T, ZeroDivisorChar0>;

/// A polynomial in the main variable over a [`RingSpec`] tower.
///
/// Elements of the coefficient field are polynomials of degree at most 0.
#[derive(Clone, Debug)]
pub struct RPoly {
    ring: Arc<RingSpec>,
    data: QRec,
}

impl PartialEq for RPoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.data == other.data
    }
}

impl RPoly {
    /// Canonicalizes arbitrary level-`n+1` data.
    pub fn new(ring: Arc<RingSpec>, data: QRec) -> Self {
        let data = ring.tower().canonicalize(ring.top(), &data);
        RPoly { ring, data }
    }

    pub(crate) fn from_canonical(ring: Arc<RingSpec>, data: QRec) -> Self {
        RPoly { ring, data }
    }

    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        RPoly { ring: ring.clone(), data: Rec::Zero }
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::constant(ring, BigRational::one())
    }

    pub fn constant(ring: &Arc<RingSpec>, c: BigRational) -> Self {
        let data = ring.tower().constant(ring.top(), c);
        RPoly { ring: ring.clone(), data }
    }

    pub fn from_int(ring: &Arc<RingSpec>, n: i64) -> Self {
        Self::constant(ring, BigRational::from_integer(BigInt::from(n)))
    }

    /// The main variable.
    pub fn x(ring: &Arc<RingSpec>) -> Self {
        RPoly { ring: ring.clone(), data: ring.tower().var(ring.top(), ring.top()) }
    }

    /// The generator `α_i` (1-based).
    pub fn generator(ring: &Arc<RingSpec>, i: usize) -> Self {
        assert!(1 <= i && i <= ring.height());
        RPoly { ring: ring.clone(), data: ring.tower().var(ring.top(), i) }
    }

    /// Embeds a reduced level-`n` field element.
    pub fn scalar(ring: &Arc<RingSpec>, elem: QRec) -> Self {
        RPoly { ring: ring.clone(), data: elem.embed(1) }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn data(&self) -> &QRec {
        &self.data
    }

    pub fn into_data(self) -> QRec {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.data == self.ring.tower().one(self.ring.top())
    }

    /// Degree in the main variable; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.data.degree()
    }

    /// True for elements of the coefficient field (including zero).
    pub fn is_scalar(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    /// Coefficient of `x^i` as a field element.
    pub fn coeff(&self, i: usize) -> RPoly {
        let c = self.data.coeff(i).cloned().unwrap_or(Rec::Zero);
        RPoly::scalar(&self.ring, c)
    }

    /// Leading coefficient (zero for zero).
    pub fn lc(&self) -> RPoly {
        match self.degree() {
            Some(d) => self.coeff(d),
            None => RPoly::zero(&self.ring),
        }
    }

    /// The level-`n` element of a scalar.
    pub fn scalar_rec(&self) -> Result<QRec> {
        match self.degree() {
            None => Ok(Rec::Zero),
            Some(0) => Ok(self.data.coeffs()[0].clone()),
            Some(_) => Err(Error::NotScalar),
        }
    }

    /// Rational value when the polynomial is a rational constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        self.data.constant_value().cloned()
    }

    fn check(&self, other: &RPoly) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &RPoly) -> Result<RPoly> {
        self.check(other)?;
        Ok(RPoly::from_canonical(self.ring.clone(), self.ring.tower().add(&self.data, &other.data)))
    }

    pub fn sub(&self, other: &RPoly) -> Result<RPoly> {
        self.check(other)?;
        Ok(RPoly::from_canonical(self.ring.clone(), self.ring.tower().sub(&self.data, &other.data)))
    }

    pub fn neg(&self) -> RPoly {
        RPoly::from_canonical(self.ring.clone(), self.ring.tower().neg(&self.data))
    }

    /// Product, computed over the integers and rescaled.
    pub fn mul(&self, other: &RPoly) -> Result<RPoly> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(RPoly::zero(&self.ring));
        }
        let (a, da) = zarith::from_rational(&self.data);
        let (b, db) = zarith::from_rational(&other.data);
        let top = self.ring.top();
        let (p, mu) = self.ring.int_tower().mul(top, &a, &b, self.ring.height());
        let den = da * db * mu;
        Ok(RPoly::from_canonical(self.ring.clone(), zarith::to_rational(&p, &den)))
    }

    pub fn scale(&self, q: &BigRational) -> RPoly {
        RPoly::from_canonical(self.ring.clone(), self.ring.tower().scale(&self.data, q))
    }

    pub fn pow(&self, mut e: u32) -> RPoly {
        let mut r = RPoly::one(&self.ring);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).unwrap();
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).unwrap();
            }
        }
        r
    }

    /// Division by a divisor with leading coefficient exactly 1.
    pub fn divrem_by_monic(&self, g: &RPoly) -> Result<(RPoly, RPoly)> {
        self.check(g)?;
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !g.lc().is_one() {
            return Err(Error::NotMonicDivisor);
        }
        let (q, r) = self.ring.tower().divrem_monic(self.ring.top(), &self.data, &g.data);
        Ok((RPoly::from_canonical(self.ring.clone(), q), RPoly::from_canonical(self.ring.clone(), r)))
    }

    /// `den(f)`: the least positive integer making every leaf integral.
    pub fn den(&self) -> BigInt {
        let mut d = BigInt::one();
        self.data.for_each_leaf(&mut |q| d = d.lcm(q.denom()));
        d
    }

    /// Largest numerator or denominator magnitude; 0 for zero.
    pub fn height(&self) -> BigInt {
        let mut h = BigInt::zero();
        self.data.for_each_leaf(&mut |q| {
            h = h.clone().max(q.numer().abs()).max(q.denom().clone());
        });
        h
    }

    /// `(f̌, r)` with `f̌ = r f` integral and primitive, `r > 0` minimal.
    pub fn semi_associate(&self) -> (RPoly, BigRational) {
        if self.is_zero() {
            return (self.clone(), BigRational::one());
        }
        let (z, den) = zarith::from_rational(&self.data);
        let (c, pp) = zarith::primitive(&z);
        let r = BigRational::new(den, c);
        (RPoly::from_canonical(self.ring.clone(), zarith::to_rational(&pp, &BigInt::one())), r)
    }

    /// Integer content and primitive part of an integral polynomial.
    pub fn icontent_pp(&self) -> Result<(BigInt, RPoly)> {
        if !zarith::is_integral(&self.data) {
            return Err(Error::NotIntegral);
        }
        let (z, _) = zarith::from_rational(&self.data);
        let (c, pp) = zarith::primitive(&z);
        Ok((c, RPoly::from_canonical(self.ring.clone(), zarith::to_rational(&pp, &BigInt::one()))))
    }

    /// Integer-leaf form; errors unless `den(f) = 1`.
    pub(crate) fn to_zrec(&self) -> Result<ZRec> {
        if !zarith::is_integral(&self.data) {
            return Err(Error::NotIntegral);
        }
        Ok(zarith::from_rational(&self.data).0)
    }

    pub(crate) fn from_zrec(ring: &Arc<RingSpec>, z: &ZRec) -> RPoly {
        RPoly::from_canonical(ring.clone(), zarith::to_rational(z, &BigInt::one()))
    }

    /// Full norm `N(a) ∈ Q` of a field element.
    pub fn norm(&self) -> Result<BigRational> {
        let a = self.scalar_rec()?;
        Ok(self.ring.tower().norm(self.ring.height(), &a))
    }

    /// Relative norm `N^n_i(a)`, embedded back as a field element of `L_i`.
    pub fn norm_to(&self, i: usize) -> Result<RPoly> {
        let mut a = self.scalar_rec()?;
        let t = self.ring.tower();
        for l in (i + 1..=self.ring.height()).rev() {
            a = t.norm_down(l, &a);
        }
        let up = self.ring.height() - i;
        Ok(RPoly::scalar(&self.ring, a.embed(up)))
    }

    /// `1/a` for a nonzero field element, or the zero divisor met on the way.
    pub fn invert(&self) -> Result<ZdResult<RPoly>> {
        let a = self.scalar_rec()?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.ring.height();
        Ok(match self.ring.tower().inverse(n, &a) {
            Ok(v) => Ok(RPoly::scalar(&self.ring, v)),
            Err(zd) => Err(ZeroDivisorChar0::from_tower(&self.ring, zd)),
        })
    }

    /// Scales to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> ZdResult<RPoly> {
        let t = self.ring.tower();
        t.monic(self.ring.top(), &self.data)
            .map(|d| RPoly::from_canonical(self.ring.clone(), d))
            .map_err(|zd| ZeroDivisorChar0::from_tower(&self.ring, zd))
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident) => {
        impl std::ops::$tr<&RPoly> for &RPoly {
            type Output = RPoly;
            /// Panics when the operands live in different rings.
            fn $f(self, rhs: &RPoly) -> RPoly {
                RPoly::$f(self, rhs).expect("ring mismatch")
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl std::ops::Neg for &RPoly {
    type Output = RPoly;
    fn neg(self) -> RPoly {
        RPoly::neg(self)
    }
}
