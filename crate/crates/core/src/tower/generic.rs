//! Tower arithmetic over an arbitrary leaf field.

use super::berkowitz::{berkowitz_det, RingOps};
use crate::field::Field;
use crate::rec::Rec;

/// A zero divisor met while inverting: `factor` is a monic nontrivial
/// divisor of `m_level`, written as a level-`level` element.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroDivisor<E> {
    pub level: usize,
    pub factor: Rec<E>,
}

/// How the Euclidean algorithm treats a constant remainder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantRemainder {
    /// Return 1 once the norm certifies a unit.
    NormTest,
    /// Return 1 once the remainder is successfully inverted.
    Invert,
}

/// `L_n = F[z_1..z_n]/(m_1..m_n)` with monic `m_i` over `L_{i-1}`.
///
/// Elements at level `k <= n` are kept reduced. Levels above `n` are free
/// polynomial variables whose coefficients are reduced tower elements.
#[derive(Clone, Debug, PartialEq)]
pub struct Tower<F: Field> {
    field: F,
    exts: Vec<Rec<F::Elem>>,
    degrees: Vec<usize>,
}

impl<F: Field> Tower<F> {
    /// `exts[i]` must be monic in `z_{i+1}` with reduced coefficients.
    pub fn new(field: F, exts: Vec<Rec<F::Elem>>) -> Self {
        let degrees = exts
            .iter()
            .map(|m| m.degree().expect("zero extension polynomial"))
            .collect();
        Tower { field, exts, degrees }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Number of extensions `n`.
    pub fn height(&self) -> usize {
        self.exts.len()
    }

    /// `m_level`, 1-based.
    pub fn ext(&self, level: usize) -> &Rec<F::Elem> {
        &self.exts[level - 1]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// `[L_n : F]`.
    pub fn dimension(&self) -> usize {
        self.degrees.iter().product()
    }

    pub fn leaf(&self, c: F::Elem) -> Rec<F::Elem> {
        if self.field.is_zero(&c) {
            Rec::Zero
        } else {
            Rec::Leaf(c)
        }
    }

    pub fn constant(&self, level: usize, c: F::Elem) -> Rec<F::Elem> {
        self.leaf(c).embed(level)
    }

    pub fn one(&self, level: usize) -> Rec<F::Elem> {
        self.constant(level, self.field.one())
    }

    /// The variable of level `which` as an element of level `level`.
    pub fn var(&self, level: usize, which: usize) -> Rec<F::Elem> {
        assert!(1 <= which && which <= level);
        let v = Rec::Node(vec![Rec::Zero, self.one(which - 1)]);
        let v = if which <= self.height() { self.reduce(which, v) } else { v };
        v.embed(level - which)
    }

    pub fn add(&self, a: &Rec<F::Elem>, b: &Rec<F::Elem>) -> Rec<F::Elem> {
        match (a, b) {
            (Rec::Zero, _) => b.clone(),
            (_, Rec::Zero) => a.clone(),
            (Rec::Leaf(x), Rec::Leaf(y)) => self.leaf(self.field.add(x, y)),
            (Rec::Node(x), Rec::Node(y)) => {
                let n = x.len().max(y.len());
                Rec::from_coeffs(
                    (0..n)
                        .map(|i| match (x.get(i), y.get(i)) {
                            (Some(u), Some(v)) => self.add(u, v),
                            (Some(u), None) => u.clone(),
                            (None, Some(v)) => v.clone(),
                            (None, None) => unreachable!(),
                        })
                        .collect(),
                )
            }
            _ => panic!("level mismatch in add"),
        }
    }

    pub fn neg(&self, a: &Rec<F::Elem>) -> Rec<F::Elem> {
        a.map_leaves(&mut |x| Some(self.field.neg(x)))
    }

    pub fn sub(&self, a: &Rec<F::Elem>, b: &Rec<F::Elem>) -> Rec<F::Elem> {
        match (a, b) {
            (_, Rec::Zero) => a.clone(),
            (Rec::Zero, _) => self.neg(b),
            (Rec::Leaf(x), Rec::Leaf(y)) => self.leaf(self.field.sub(x, y)),
            (Rec::Node(x), Rec::Node(y)) => {
                let n = x.len().max(y.len());
                Rec::from_coeffs(
                    (0..n)
                        .map(|i| match (x.get(i), y.get(i)) {
                            (Some(u), Some(v)) => self.sub(u, v),
                            (Some(u), None) => u.clone(),
                            (None, Some(v)) => self.neg(v),
                            (None, None) => unreachable!(),
                        })
                        .collect(),
                )
            }
            _ => panic!("level mismatch in sub"),
        }
    }

    /// Multiplies every leaf by the scalar `c`.
    pub fn scale(&self, a: &Rec<F::Elem>, c: &F::Elem) -> Rec<F::Elem> {
        if self.field.is_zero(c) {
            return Rec::Zero;
        }
        a.map_leaves(&mut |x| Some(self.field.mul(x, c)))
    }

    /// Product at `level`, reduced when `level <= n`.
    pub fn mul(&self, level: usize, a: &Rec<F::Elem>, b: &Rec<F::Elem>) -> Rec<F::Elem> {
        let p = self.mul_free(level, a, b);
        if level >= 1 && level <= self.height() {
            self.reduce(level, p)
        } else {
            p
        }
    }

    /// Product at `level` without reducing the level-`level` variable.
    pub fn mul_free(&self, level: usize, a: &Rec<F::Elem>, b: &Rec<F::Elem>) -> Rec<F::Elem> {
        match (a, b) {
            (Rec::Zero, _) | (_, Rec::Zero) => Rec::Zero,
            (Rec::Leaf(x), Rec::Leaf(y)) => self.leaf(self.field.mul(x, y)),
            (Rec::Node(x), Rec::Node(y)) => {
                let mut acc = vec![Rec::Zero; x.len() + y.len() - 1];
                for (i, u) in x.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        let t = self.mul(level - 1, u, v);
                        acc[i + j] = self.add(&acc[i + j], &t);
                    }
                }
                Rec::from_coeffs(acc)
            }
            _ => panic!("level mismatch in mul"),
        }
    }

    /// Multiplies each level-`level` coefficient of `a` by the level-`level - 1` element `s`.
    pub fn mul_coeffs(&self, level: usize, a: &Rec<F::Elem>, s: &Rec<F::Elem>) -> Rec<F::Elem> {
        if s.is_zero() {
            return Rec::Zero;
        }
        Rec::from_coeffs(a.coeffs().iter().map(|c| self.mul(level - 1, c, s)).collect())
    }

    pub fn pow(&self, level: usize, a: &Rec<F::Elem>, mut e: u64) -> Rec<F::Elem> {
        let mut r = self.one(level);
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(level, &r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(level, &b, &b);
            }
        }
        r
    }

    /// Remainder modulo `m_level`; coefficients must already be reduced.
    pub fn reduce(&self, level: usize, a: Rec<F::Elem>) -> Rec<F::Elem> {
        let d = self.degrees[level - 1];
        match &a {
            Rec::Node(c) if c.len() > d => {}
            _ => return a,
        }
        let m = self.ext(level).coeffs();
        let mut c = a.into_coeffs();
        for k in (d..c.len()).rev() {
            let lead = std::mem::take(&mut c[k]);
            if lead.is_zero() {
                continue;
            }
            for j in 0..d {
                if m[j].is_zero() {
                    continue;
                }
                let t = self.mul(level - 1, &lead, &m[j]);
                c[k - d + j] = self.sub(&c[k - d + j], &t);
            }
        }
        c.truncate(d);
        Rec::from_coeffs(c)
    }

    /// Fully reduces an element whose every level may exceed its degree bound.
    pub fn canonicalize(&self, level: usize, a: &Rec<F::Elem>) -> Rec<F::Elem> {
        match a {
            Rec::Zero | Rec::Leaf(_) => a.clone(),
            Rec::Node(c) => {
                let c = c.iter().map(|x| self.canonicalize(level - 1, x)).collect();
                let r = Rec::from_coeffs(c);
                if level <= self.height() {
                    self.reduce(level, r)
                } else {
                    r
                }
            }
        }
    }

    /// Division by a monic `b` in the free level-`level` variable.
    pub fn divrem_monic(
        &self,
        level: usize,
        a: &Rec<F::Elem>,
        b: &Rec<F::Elem>,
    ) -> (Rec<F::Elem>, Rec<F::Elem>) {
        let db = b.degree().expect("division by zero");
        debug_assert!(b
            .lc()
            .and_then(Rec::constant_value)
            .is_some_and(|v| self.field.is_one(v)));
        let bc = b.coeffs();
        let mut r = a.coeffs().to_vec();
        if r.len() <= db {
            return (Rec::Zero, a.clone());
        }
        let mut q = vec![Rec::Zero; r.len() - db];
        for k in (db..r.len()).rev() {
            let lead = std::mem::take(&mut r[k]);
            if lead.is_zero() {
                continue;
            }
            for j in 0..db {
                if bc[j].is_zero() {
                    continue;
                }
                let t = self.mul(level - 1, &lead, &bc[j]);
                r[k - db + j] = self.sub(&r[k - db + j], &t);
            }
            q[k - db] = lead;
        }
        r.truncate(db);
        (Rec::from_coeffs(q), Rec::from_coeffs(r))
    }

    /// Inverse of a level-`level - 1` element; level 0 is the leaf field.
    fn inv_below(&self, level: usize, c: &Rec<F::Elem>) -> Result<Rec<F::Elem>, ZeroDivisor<F::Elem>> {
        if level == 0 {
            match c {
                Rec::Leaf(x) => Ok(Rec::Leaf(self.field.inv(x).expect("nonzero leaf"))),
                _ => panic!("inverting zero"),
            }
        } else {
            self.inverse(level, c)
        }
    }

    /// Inverse of a nonzero reduced element of `L_level`, `1 <= level <= n`.
    ///
    /// Level 0 inverts in the leaf field. On failure the report names the
    /// level whose extended gcd with `m_level` was nontrivial.
    pub fn inverse(&self, level: usize, a: &Rec<F::Elem>) -> Result<Rec<F::Elem>, ZeroDivisor<F::Elem>> {
        assert!(!a.is_zero(), "inverse of zero");
        if level == 0 {
            return self.inv_below(0, a);
        }
        let mut r0 = self.ext(level).clone();
        let mut r1 = a.clone();
        let mut t0 = Rec::Zero;
        let mut t1 = self.one(level);
        while !r1.is_zero() {
            let li = self.inv_below(level - 1, r1.lc().unwrap())?;
            r1 = self.mul_coeffs(level, &r1, &li);
            t1 = self.mul_coeffs(level, &t1, &li);
            let (q, r) = self.divrem_monic(level, &r0, &r1);
            let t = self.sub(&t0, &self.mul_free(level, &q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.degree() == Some(0) {
            Ok(self.reduce(level, t0))
        } else {
            Err(ZeroDivisor { level, factor: r0 })
        }
    }

    /// Scales a polynomial in the level-`level` variable to leading coefficient 1.
    pub fn monic(&self, level: usize, a: &Rec<F::Elem>) -> Result<Rec<F::Elem>, ZeroDivisor<F::Elem>> {
        match a.lc() {
            None => Ok(Rec::Zero),
            Some(l) => {
                let li = self.inv_below(level - 1, l)?;
                Ok(self.mul_coeffs(level, a, &li))
            }
        }
    }

    /// Monic Euclidean algorithm in the free level-`level` variable.
    ///
    /// `keep_going` is polled once per remainder; `Ok(None)` means it asked
    /// to stop. Both inputs zero gives zero.
    pub fn monic_gcd(
        &self,
        level: usize,
        a: &Rec<F::Elem>,
        b: &Rec<F::Elem>,
        constant: ConstantRemainder,
        mut keep_going: impl FnMut() -> bool,
    ) -> Result<Option<Rec<F::Elem>>, ZeroDivisor<F::Elem>> {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        if r1.is_zero() {
            return self.monic(level, &r0).map(Some);
        }
        loop {
            if !keep_going() {
                return Ok(None);
            }
            if r1.is_zero() {
                return Ok(Some(r0));
            }
            if r1.degree() == Some(0) {
                let c = &r1.coeffs()[0];
                match constant {
                    ConstantRemainder::NormTest => {
                        if !self.field.is_zero(&self.norm(level - 1, c)) {
                            return Ok(Some(self.one(level)));
                        }
                        // Not a unit: the inversion below reports the factor.
                    }
                    ConstantRemainder::Invert => {
                        self.inv_below(level - 1, c)?;
                        return Ok(Some(self.one(level)));
                    }
                }
            }
            r1 = self.monic(level, &r1)?;
            let (_, r) = self.divrem_monic(level, &r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
        }
    }

    /// `N^level_{level-1}(a) = res_{z_level}(m_level, a)`.
    pub fn norm_down(&self, level: usize, a: &Rec<F::Elem>) -> Rec<F::Elem> {
        let Some(e) = a.degree() else {
            return Rec::Zero;
        };
        let m = self.ext(level).coeffs();
        let d = m.len() - 1;
        let ac = a.coeffs();
        if e == 0 {
            return self.pow(level - 1, &ac[0], d as u64);
        }
        let n = d + e;
        let mut mat = vec![vec![Rec::Zero; n]; n];
        for i in 0..e {
            for (j, c) in m.iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..d {
            for (j, c) in ac.iter().rev().enumerate() {
                mat[e + i][i + j] = c.clone();
            }
        }
        berkowitz_det(mat, &LevelRing { tower: self, level: level - 1 })
    }

    /// Full norm `N^level_0(a)` as a leaf-field scalar.
    pub fn norm(&self, level: usize, a: &Rec<F::Elem>) -> F::Elem {
        let mut x = a.clone();
        for l in (1..=level).rev() {
            x = self.norm_down(l, &x);
        }
        match x {
            Rec::Zero => self.field.zero(),
            Rec::Leaf(v) => v,
            Rec::Node(_) => unreachable!("norm did not reach the base field"),
        }
    }
}

/// Ring operations on reduced elements of one level.
pub(crate) struct LevelRing<'a, F: Field> {
    pub tower: &'a Tower<F>,
    pub level: usize,
}

impl<F: Field> RingOps for LevelRing<'_, F> {
    type T = Rec<F::Elem>;
    fn zero(&self) -> Self::T {
        Rec::Zero
    }
    fn one(&self) -> Self::T {
        self.tower.one(self.level)
    }
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T {
        self.tower.add(a, b)
    }
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T {
        self.tower.mul(self.level, a, b)
    }
    fn neg(&self, a: &Self::T) -> Self::T {
        self.tower.neg(a)
    }
}
