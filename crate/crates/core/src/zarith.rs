//! Fraction-free arithmetic on integer-leaf recursive polynomials.
//!
//! Reduction modulo the semi-associate extensions `m̌_i` (leading coefficient
//! `l_i`) scales the running value by the smallest integer that keeps every
//! cancellation exact. Each routine returns that scale factor, so a result
//! `(r, mu)` for input `a` satisfies `mu * a ≡ r` modulo the tower.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rec::Rec;

pub type ZRec = Rec<BigInt>;

pub fn zleaf(n: BigInt) -> ZRec {
    if n.is_zero() {
        Rec::Zero
    } else {
        Rec::Leaf(n)
    }
}

pub fn add(a: &ZRec, b: &ZRec) -> ZRec {
    match (a, b) {
        (Rec::Zero, _) => b.clone(),
        (_, Rec::Zero) => a.clone(),
        (Rec::Leaf(x), Rec::Leaf(y)) => zleaf(x + y),
        (Rec::Node(x), Rec::Node(y)) => {
            let n = x.len().max(y.len());
            Rec::from_coeffs(
                (0..n)
                    .map(|i| match (x.get(i), y.get(i)) {
                        (Some(u), Some(v)) => add(u, v),
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

pub fn neg(a: &ZRec) -> ZRec {
    a.map_leaves(&mut |x| Some(-x))
}

pub fn sub(a: &ZRec, b: &ZRec) -> ZRec {
    add(a, &neg(b))
}

pub fn scale(a: &ZRec, c: &BigInt) -> ZRec {
    if c.is_zero() {
        return Rec::Zero;
    }
    if c.is_one() {
        return a.clone();
    }
    a.map_leaves(&mut |x| Some(x * c))
}

/// Divides every leaf by `c`, which must divide each exactly.
pub fn div_exact(a: &ZRec, c: &BigInt) -> ZRec {
    if c.is_one() {
        return a.clone();
    }
    a.map_leaves(&mut |x| {
        debug_assert!((x % c).is_zero());
        Some(x / c)
    })
}

/// Nonnegative gcd of all leaves; zero for the zero element.
pub fn content(a: &ZRec) -> BigInt {
    fn go(a: &ZRec, g: &mut BigInt) -> bool {
        match a {
            Rec::Zero => false,
            Rec::Leaf(x) => {
                *g = g.gcd(x);
                g.is_one()
            }
            Rec::Node(c) => c.iter().any(|x| go(x, g)),
        }
    }
    let mut g = BigInt::zero();
    go(a, &mut g);
    g
}

/// Divides out the positive integer content.
pub fn primitive(a: &ZRec) -> (BigInt, ZRec) {
    let c = content(a);
    if c.is_zero() {
        return (BigInt::one(), Rec::Zero);
    }
    let p = div_exact(a, &c);
    (c, p)
}

/// Plain product with no reduction at any level.
pub fn mul_free(a: &ZRec, b: &ZRec) -> ZRec {
    match (a, b) {
        (Rec::Zero, _) | (_, Rec::Zero) => Rec::Zero,
        (Rec::Leaf(x), Rec::Leaf(y)) => Rec::Leaf(x * y),
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
                    acc[i + j] = add(&acc[i + j], &mul_free(u, v));
                }
            }
            Rec::from_coeffs(acc)
        }
        _ => panic!("level mismatch in mul"),
    }
}

/// Multiplies each top-level coefficient of `a` by `s` (one level down), unreduced.
pub fn mul_coeffs_free(a: &ZRec, s: &ZRec) -> ZRec {
    if s.is_zero() {
        return Rec::Zero;
    }
    Rec::from_coeffs(a.coeffs().iter().map(|c| mul_free(c, s)).collect())
}

/// Clears denominators: returns `(z, den)` with `a = z / den`.
pub fn from_rational(a: &Rec<BigRational>) -> (ZRec, BigInt) {
    let mut den = BigInt::one();
    a.for_each_leaf(&mut |q| den = den.lcm(q.denom()));
    let z = a.map_leaves(&mut |q| Some(q.numer() * (&den / q.denom())));
    (z, den)
}

/// `a / den` with rational leaves.
pub fn to_rational(a: &ZRec, den: &BigInt) -> Rec<BigRational> {
    a.map_leaves(&mut |x| Some(BigRational::new(x.clone(), den.clone())))
}

pub fn is_integral(a: &Rec<BigRational>) -> bool {
    let mut ok = true;
    a.for_each_leaf(&mut |q| ok &= q.is_integer());
    ok
}

/// Integer semi-associate extensions of a tower.
#[derive(Clone, Debug, PartialEq)]
pub struct IntTower {
    /// `m̌_i = l_i m_i`, integer leaves, content 1.
    pub semi: Vec<ZRec>,
    /// `l_i = den(m_i)`, positive.
    pub l: Vec<BigInt>,
    monic: bool,
}

impl IntTower {
    pub fn new(semi: Vec<ZRec>, l: Vec<BigInt>) -> Self {
        let monic = l.iter().all(One::is_one);
        IntTower { semi, l, monic }
    }

    pub fn height(&self) -> usize {
        self.semi.len()
    }

    /// Fraction-free reduction of a level-`level` element modulo `m̌_1..m̌_upto`.
    pub fn ff_reduce(&self, level: usize, a: ZRec, upto: usize) -> (ZRec, BigInt) {
        if level == 0 || a.is_zero() {
            return (a, BigInt::one());
        }
        let mut c = a.into_coeffs();
        let mut mu = BigInt::one();
        if level <= upto.min(self.height()) {
            let m = self.semi[level - 1].coeffs();
            let d = m.len() - 1;
            let l = &self.l[level - 1];
            while c.len() > d {
                let k = c.len() - 1;
                let (lead, nu) = self.ff_reduce(level - 1, c.pop().unwrap(), upto);
                if !nu.is_one() {
                    c.iter_mut().for_each(|x| *x = scale(x, &nu));
                    mu *= &nu;
                }
                if !lead.is_zero() {
                    let t = if self.monic {
                        lead
                    } else {
                        let g = content(&lead).gcd(l);
                        let mult = l / &g;
                        if !mult.is_one() {
                            c.iter_mut().for_each(|x| *x = scale(x, &mult));
                            mu *= &mult;
                        }
                        div_exact(&lead, &g)
                    };
                    for j in 0..d {
                        if !m[j].is_zero() {
                            c[k - d + j] = sub(&c[k - d + j], &mul_free(&t, &m[j]));
                        }
                    }
                }
                while matches!(c.last(), Some(Rec::Zero)) {
                    c.pop();
                }
            }
        }
        let (c, nu) = self.reduce_all(level - 1, c, upto);
        (Rec::from_coeffs(c), mu * nu)
    }

    /// Reduces a list of same-level elements with one common multiplier.
    pub fn reduce_all(&self, level: usize, items: Vec<ZRec>, upto: usize) -> (Vec<ZRec>, BigInt) {
        let parts: Vec<(ZRec, BigInt)> =
            items.into_iter().map(|x| self.ff_reduce(level, x, upto)).collect();
        let nu = parts
            .iter()
            .filter(|(x, _)| !x.is_zero())
            .fold(BigInt::one(), |acc, (_, n)| acc.lcm(n));
        let out = parts.into_iter().map(|(x, n)| scale(&x, &(&nu / n))).collect();
        (out, nu)
    }

    /// Reduced product of two level-`level` elements.
    pub fn mul(&self, level: usize, a: &ZRec, b: &ZRec, upto: usize) -> (ZRec, BigInt) {
        self.ff_reduce(level, mul_free(a, b), upto)
    }

    /// Fraction-free division in the free level-`level` variable.
    ///
    /// `lc(b)` must be an integer constant. Returns `(q, r, mu)` with
    /// `mu * a ≡ b q + r` modulo `m̌_1..m̌_upto` and `deg r < deg b`, where
    /// `mu` is the product of the minimal integer multipliers used.
    pub fn ff_divrem(&self, level: usize, a: &ZRec, b: &ZRec, upto: usize) -> (ZRec, ZRec, BigInt) {
        let db = b.degree().expect("division by zero");
        let lb = b
            .lc()
            .and_then(Rec::constant_value)
            .expect("leading coefficient must be an integer")
            .clone();
        let lb_abs = lb.abs();
        let sign = lb.signum();
        let bc = b.coeffs();
        let mut r = a.clone();
        let mut q: Vec<ZRec> = Vec::new();
        let mut mu = BigInt::one();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let k = dr - db;
            let lr = r.lc().unwrap().clone();
            let g = content(&lr).gcd(&lb_abs);
            let mult = &lb_abs / &g;
            let t = scale(&div_exact(&lr, &g), &sign);
            let mut rc = scale(&r, &mult).into_coeffs();
            rc.pop();
            for j in 0..db {
                if !bc[j].is_zero() {
                    rc[k + j] = sub(&rc[k + j], &mul_free(&t, &bc[j]));
                }
            }
            let (rc, nu) = self.reduce_all(level - 1, rc, upto);
            r = Rec::from_coeffs(rc);
            let f = &mult * &nu;
            if !f.is_one() {
                q.iter_mut().for_each(|x| *x = scale(x, &f));
            }
            if q.len() <= k {
                q.resize(k + 1, Rec::Zero);
            }
            q[k] = scale(&t, &nu);
            mu *= f;
        }
        (Rec::from_coeffs(q), r, mu)
    }
}
