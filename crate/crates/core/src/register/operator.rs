use crate::algebra::{GaussianRational, Scalar};

/// A one- or two-qubit operator as a row-major matrix. For two-qubit
/// operators the first target is the high bit of the row/column index.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator<S> {
    arity: usize,
    m: Vec<S>,
}

fn g(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

impl<S: Scalar> LocalOperator<S> {
    pub fn single(m: [[S; 2]; 2]) -> Self {
        Self { arity: 1, m: m.into_iter().flatten().collect() }
    }

    pub fn pair(m: [[S; 4]; 4]) -> Self {
        Self { arity: 2, m: m.into_iter().flatten().collect() }
    }

    pub fn from_gaussian(arity: usize, m: &[GaussianRational]) -> Self {
        assert_eq!(m.len(), 1 << (2 * arity));
        Self { arity, m: m.iter().map(S::from_gaussian).collect() }
    }

    pub fn diagonal(entries: Vec<S>) -> Self {
        let dim = entries.len();
        let arity = match dim {
            2 => 1,
            4 => 2,
            _ => panic!("diagonal operator must be 2x2 or 4x4"),
        };
        let mut m = vec![S::zero(); dim * dim];
        for (i, e) in entries.into_iter().enumerate() {
            m[i * dim + i] = e;
        }
        Self { arity, m }
    }

    pub fn identity() -> Self {
        Self::from_gaussian(1, &[g(1), g(0), g(0), g(1)])
    }

    pub fn x() -> Self {
        Self::from_gaussian(1, &[g(0), g(1), g(1), g(0)])
    }

    pub fn y() -> Self {
        let i = GaussianRational::i();
        Self::from_gaussian(1, &[g(0), -&i, i, g(0)])
    }

    pub fn z() -> Self {
        Self::from_gaussian(1, &[g(1), g(0), g(0), g(-1)])
    }

    pub fn s() -> Self {
        Self::from_gaussian(1, &[g(1), g(0), g(0), GaussianRational::i()])
    }

    pub fn s_dagger() -> Self {
        Self::from_gaussian(1, &[g(1), g(0), g(0), -GaussianRational::i()])
    }

    /// Amplitude weights of an imperfect polarizing beam splitter on a
    /// photon pair: `diag(1-α, α, α, 1-α)`.
    pub fn pbs_weight(alpha: &S) -> Self {
        let keep = S::one().sub(alpha);
        Self::diagonal(vec![keep.clone(), alpha.clone(), alpha.clone(), keep])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn entry(&self, row: usize, col: usize) -> &S {
        &self.m[row * self.dim() + col]
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.arity, rhs.arity);
        let d = self.dim();
        let mut m = vec![S::zero(); d * d];
        for r in 0..d {
            for c in 0..d {
                let mut acc = S::zero();
                for k in 0..d {
                    acc.add_assign(&self.entry(r, k).mul(rhs.entry(k, c)));
                }
                m[r * d + c] = acc;
            }
        }
        Self { arity: self.arity, m }
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        let mut m = vec![S::zero(); d * d];
        for r in 0..d {
            for c in 0..d {
                m[c * d + r] = self.entry(r, c).conj();
            }
        }
        Self { arity: self.arity, m }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { arity: self.arity, m: self.m.iter().map(|e| e.mul(c)).collect() }
    }

    /// Nonzero entries as `(row, col, value)`.
    pub(crate) fn nonzero(&self) -> Vec<(usize, usize, S)> {
        let d = self.dim();
        self.m
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k / d, k % d, v.clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Op = LocalOperator<GaussianRational>;

    #[test]
    fn pauli_algebra_is_exact() {
        let (i, x, y, z) = (Op::identity(), Op::x(), Op::y(), Op::z());
        assert_eq!(x.compose(&x), i);
        assert_eq!(y.compose(&y), i);
        assert_eq!(z.compose(&z), i);
        assert_eq!(x.compose(&y), z.scale(&GaussianRational::i()));
        assert_eq!(Op::s().compose(&Op::s()), z);
        assert_eq!(Op::s().compose(&Op::s_dagger()), i);
        assert_eq!(y.adjoint(), y);
    }

    #[test]
    fn pbs_weight_is_diagonal() {
        let a = GaussianRational::from_ratio(1, 10);
        let w = Op::pbs_weight(&a);
        assert_eq!(w.entry(0, 0), &GaussianRational::from_ratio(9, 10));
        assert_eq!(w.entry(1, 1), &a);
        assert_eq!(w.entry(2, 2), &a);
        assert_eq!(w.entry(3, 3), &GaussianRational::from_ratio(9, 10));
        assert_eq!(w.nonzero().len(), 4);
    }
}
