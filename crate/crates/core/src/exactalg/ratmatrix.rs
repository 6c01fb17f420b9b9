use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{AlgError, IntMatrix};

/// Square matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    dim: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, AlgError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(AlgError::Empty);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(AlgError::NotSquare { rows: dim, cols: bad.len() });
        }
        Ok(Self { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_int(a: &IntMatrix) -> Self {
        Self { dim: a.dim(), entries: a.entries().iter().cloned().map(BigRational::from_integer).collect() }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self { dim, entries: vec![BigRational::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::zeros(dim).add_scalar_identity(&BigRational::from_integer(BigInt::from(1)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        self.entries.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix, AlgError> {
        if self.dim != rhs.dim {
            return Err(AlgError::DimensionMismatch { left: self.dim, right: rhs.dim });
        }
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `self + c * I`
    pub fn add_scalar_identity(mut self, c: &BigRational) -> Self {
        for i in 0..self.dim {
            self.entries[i * self.dim + i] += c;
        }
        self
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        debug_assert_eq!(v.len(), self.dim);
        self.entries.chunks(self.dim).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Rank by Gauss-Jordan elimination, taking the first nonzero entry in each column as pivot.
    pub fn rank(&self) -> usize {
        let d = self.dim;
        let mut m = self.rows();
        let mut rank = 0;
        for col in 0..d {
            let Some(p) = (rank..d).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][col].clone();
            for r in rank + 1..d {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &pivot;
                let (upper, lower) = m.split_at_mut(r);
                for (x, p) in lower[0][col..].iter_mut().zip(&upper[rank][col..]) {
                    *x -= &factor * p;
                }
            }
            rank += 1;
        }
        rank
    }
}

pub fn rank(a: &RatMatrix) -> usize {
    a.rank()
}
