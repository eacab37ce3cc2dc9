//! Division-free determinants over commutative rings.

pub(crate) trait RingOps {
    type T: Clone;
    fn zero(&self) -> Self::T;
    fn one(&self) -> Self::T;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn neg(&self, a: &Self::T) -> Self::T;
}

/// Coefficients of `det(tI - M)`, highest degree first.
fn charpoly<R: RingOps>(m: &[Vec<R::T>], ring: &R) -> Vec<R::T> {
    let n = m.len();
    if n == 0 {
        return vec![ring.one()];
    }
    let a = &m[0][0];
    if n == 1 {
        return vec![ring.one(), ring.neg(a)];
    }
    let row = &m[0][1..];
    let sub: Vec<Vec<R::T>> = m[1..].iter().map(|r| r[1..].to_vec()).collect();
    let mut col: Vec<R::T> = m[1..].iter().map(|r| r[0].clone()).collect();

    // Toeplitz column: 1, -a, -(R C), -(R A C), ...
    let mut toep = Vec::with_capacity(n + 1);
    toep.push(ring.one());
    toep.push(ring.neg(a));
    for k in 0..n - 1 {
        if k > 0 {
            col = sub
                .iter()
                .map(|r| {
                    r.iter()
                        .zip(&col)
                        .fold(ring.zero(), |s, (x, y)| ring.add(&s, &ring.mul(x, y)))
                })
                .collect();
        }
        let dot = row
            .iter()
            .zip(&col)
            .fold(ring.zero(), |s, (x, y)| ring.add(&s, &ring.mul(x, y)));
        toep.push(ring.neg(&dot));
    }

    let inner = charpoly(&sub, ring);
    (0..=n)
        .map(|i| {
            (0..inner.len().min(i + 1)).fold(ring.zero(), |s, j| {
                ring.add(&s, &ring.mul(&toep[i - j], &inner[j]))
            })
        })
        .collect()
}

pub(crate) fn berkowitz_det<R: RingOps>(m: Vec<Vec<R::T>>, ring: &R) -> R::T {
    let n = m.len();
    let cp = charpoly(&m, ring);
    if n % 2 == 0 {
        cp[n].clone()
    } else {
        ring.neg(&cp[n])
    }
}
