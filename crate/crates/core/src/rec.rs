//! Recursive dense polynomials.
//!
//! A value at level `k >= 1` is a dense coefficient vector in the level-`k`
//! variable whose entries live at level `k - 1`; level 0 is a scalar leaf.
//! Levels are tracked by the caller. Zero at any level is [`Rec::Zero`] and
//! nonzero vectors never end in a zero coefficient.

/// Recursive dense element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[derive(Default)]
pub enum Rec<E> {
    #[default]
    Zero,
    Leaf(E),
    Node(Vec<Rec<E>>),
}


impl<E> Rec<E> {
    pub fn is_zero(&self) -> bool {
        matches!(self, Rec::Zero)
    }

    /// Builds a node, trimming trailing zeros.
    pub fn from_coeffs(mut c: Vec<Rec<E>>) -> Self {
        while matches!(c.last(), Some(Rec::Zero)) {
            c.pop();
        }
        if c.is_empty() {
            Rec::Zero
        } else {
            Rec::Node(c)
        }
    }

    /// Coefficients in the top variable; empty for zero.
    pub fn coeffs(&self) -> &[Rec<E>] {
        match self {
            Rec::Zero => &[],
            Rec::Node(c) => c,
            Rec::Leaf(_) => panic!("coeffs() on a leaf"),
        }
    }

    pub fn into_coeffs(self) -> Vec<Rec<E>> {
        match self {
            Rec::Zero => Vec::new(),
            Rec::Node(c) => c,
            Rec::Leaf(_) => panic!("into_coeffs() on a leaf"),
        }
    }

    /// Degree in the top variable; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        match self {
            Rec::Zero => None,
            Rec::Leaf(_) => Some(0),
            Rec::Node(c) => Some(c.len() - 1),
        }
    }

    pub fn lc(&self) -> Option<&Rec<E>> {
        match self {
            Rec::Node(c) => c.last(),
            _ => None,
        }
    }

    /// Coefficient of degree `i`, or `None` when it is zero or absent.
    pub fn coeff(&self, i: usize) -> Option<&Rec<E>> {
        match self {
            Rec::Node(c) => c.get(i).filter(|x| !x.is_zero()),
            _ => None,
        }
    }

    /// The scalar value when the element is a constant at every level.
    pub fn constant_value(&self) -> Option<&E> {
        match self {
            Rec::Zero => None,
            Rec::Leaf(e) => Some(e),
            Rec::Node(c) if c.len() == 1 => c[0].constant_value(),
            Rec::Node(_) => None,
        }
    }

    /// Wraps a level-`k` element as a constant at level `k + up`.
    pub fn embed(self, up: usize) -> Self {
        let mut a = self;
        for _ in 0..up {
            if a.is_zero() {
                return a;
            }
            a = Rec::Node(vec![a]);
        }
        a
    }

    /// Calls `f` on every leaf.
    pub fn for_each_leaf<'a>(&'a self, f: &mut impl FnMut(&'a E)) {
        match self {
            Rec::Zero => {}
            Rec::Leaf(e) => f(e),
            Rec::Node(c) => c.iter().for_each(|x| x.for_each_leaf(f)),
        }
    }

    pub fn leaf_count(&self) -> usize {
        let mut n = 0;
        self.for_each_leaf(&mut |_| n += 1);
        n
    }

    /// Maps leaves; `None` from `f` means zero and the result is re-canonicalized.
    pub fn map_leaves<T>(&self, f: &mut impl FnMut(&E) -> Option<T>) -> Rec<T> {
        match self {
            Rec::Zero => Rec::Zero,
            Rec::Leaf(e) => f(e).map_or(Rec::Zero, Rec::Leaf),
            Rec::Node(c) => Rec::from_coeffs(c.iter().map(|x| x.map_leaves(f)).collect()),
        }
    }

    /// Fallible variant of [`Rec::map_leaves`].
    pub fn try_map_leaves<T, Err>(
        &self,
        f: &mut impl FnMut(&E) -> Result<Option<T>, Err>,
    ) -> Result<Rec<T>, Err> {
        Ok(match self {
            Rec::Zero => Rec::Zero,
            Rec::Leaf(e) => f(e)?.map_or(Rec::Zero, Rec::Leaf),
            Rec::Node(c) => Rec::from_coeffs(
                c.iter()
                    .map(|x| x.try_map_leaves(f))
                    .collect::<Result<Vec<_>, Err>>()?,
            ),
        })
    }

    /// Multiplies by the top variable to the power `k`.
    pub fn shift(self, k: usize) -> Self
    where
        E: Clone,
    {
        match self {
            Rec::Zero => Rec::Zero,
            Rec::Node(mut c) => {
                let mut v = vec![Rec::Zero; k];
                v.append(&mut c);
                Rec::Node(v)
            }
            Rec::Leaf(_) => panic!("shift() on a leaf"),
        }
    }
}

/// Number of dense slots in a flattened level-`dims.len()` element.
pub fn flat_len(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Flattens a level-`dims.len()` element into a dense vector.
///
/// `dims[0]` is the slot count of the lowest variable; the index of the
/// monomial with exponents `(e_1, ..., e_k)` is `e_1 + dims[0]*(e_2 + ...)`.
pub fn flatten<E: Clone>(a: &Rec<E>, dims: &[usize], zero: &E) -> Vec<E> {
    let mut out = vec![zero.clone(); flat_len(dims)];
    flatten_into(a, dims, &mut out);
    out
}

fn flatten_into<E: Clone>(a: &Rec<E>, dims: &[usize], out: &mut [E]) {
    match a {
        Rec::Zero => {}
        Rec::Leaf(e) => {
            debug_assert!(dims.is_empty());
            out[0] = e.clone();
        }
        Rec::Node(c) => {
            let (&top, lower) = dims.split_last().expect("level mismatch");
            assert!(c.len() <= top, "element exceeds shape");
            let stride = flat_len(lower);
            for (j, x) in c.iter().enumerate() {
                flatten_into(x, lower, &mut out[j * stride..(j + 1) * stride]);
            }
        }
    }
}

/// Inverse of [`flatten`]; `is_zero` decides which slots are zero.
pub fn unflatten<E: Clone>(v: &[E], dims: &[usize], is_zero: &impl Fn(&E) -> bool) -> Rec<E> {
    match dims.split_last() {
        None => {
            if is_zero(&v[0]) {
                Rec::Zero
            } else {
                Rec::Leaf(v[0].clone())
            }
        }
        Some((&top, lower)) => {
            let stride = flat_len(lower);
            Rec::from_coeffs(
                (0..top)
                    .map(|j| unflatten(&v[j * stride..(j + 1) * stride], lower, is_zero))
                    .collect(),
            )
        }
    }
}

/// Slot counts of an element's shape: `d_1, ..., d_k` followed by `top`.
pub fn shape(sub_degrees: &[usize], top: usize) -> Vec<usize> {
    let mut v = sub_degrees.to_vec();
    v.push(top);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(n: i64) -> Rec<i64> {
        if n == 0 {
            Rec::Zero
        } else {
            Rec::Leaf(n)
        }
    }

    #[test]
    fn trims_and_degrees() {
        let a = Rec::from_coeffs(vec![leaf(1), leaf(2), Rec::Zero]);
        assert_eq!(a.degree(), Some(1));
        assert_eq!(Rec::<i64>::from_coeffs(vec![Rec::Zero]), Rec::Zero);
        assert_eq!(a.lc(), Some(&leaf(2)));
        assert_eq!(leaf(5).embed(2).constant_value(), Some(&5));
    }

    #[test]
    fn flatten_round_trip() {
        // (1 + 2u) + (3v)x over degrees [2, 2], x-length 2
        let c0 = Rec::from_coeffs(vec![Rec::from_coeffs(vec![leaf(1), leaf(2)])]);
        let c1 = Rec::from_coeffs(vec![Rec::Zero, Rec::from_coeffs(vec![leaf(3)])]);
        let a = Rec::from_coeffs(vec![c0, c1]);
        let dims = [2, 2, 2];
        let v = flatten(&a, &dims, &0);
        assert_eq!(v, vec![1, 2, 0, 0, 0, 0, 3, 0]);
        assert_eq!(unflatten(&v, &dims, &|x| *x == 0), a);
    }

    #[test]
    fn map_to_zero_canonicalizes() {
        let a = Rec::from_coeffs(vec![leaf(1), leaf(5)]);
        let b = a.map_leaves(&mut |x| if x % 5 == 0 { None } else { Some(*x) });
        assert_eq!(b, Rec::from_coeffs(vec![leaf(1)]));
    }
}
