use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{serde_int, AlgError, RatMatrix, RatPoly};

/// Square matrix of arbitrary-precision integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, AlgError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(AlgError::Empty);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(AlgError::NotSquare { rows: dim, cols: bad.len() });
        }
        Ok(Self { dim, entries: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for literals. Panics on ragged or empty input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
            .expect("literal matrix must be square and nonempty")
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self { dim, entries: vec![BigInt::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.entries[j * d + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, AlgError> {
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

    /// `A^n` by binary exponentiation; `A^0 = I` for every `A`.
    pub fn pow(&self, mut n: u64) -> IntMatrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same dimension");
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, AlgError> {
        if v.len() != self.dim {
            return Err(AlgError::DimensionMismatch { left: self.dim, right: v.len() });
        }
        Ok((0..self.dim).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let d = self.dim;
        let mut m: Vec<Vec<BigInt>> = self.rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..d {
            if m[k][k].is_zero() {
                match (k + 1..d).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    // Bareiss quotients are exact.
                    debug_assert!(num.is_multiple_of(&prev));
                    m[i][j] = num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[d - 1][d - 1]
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix::from_int(self)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigInt {
        self.entries.iter().map(Signed::abs).max().unwrap_or_default()
    }
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix, AlgError> {
    a.mul(b)
}

pub fn mat_pow(a: &IntMatrix, n: u64) -> IntMatrix {
    a.pow(n)
}

/// Characteristic polynomial `det(xI - A)` by the Faddeev-LeVerrier recurrence.
///
/// With `M_1 = I`, `M_k = A M_{k-1} + c_{d-k+1} I` and `c_{d-k} = -tr(A M_k) / k`.
/// Every quotient is exact over the integers, so the whole computation stays in `BigInt`.
pub fn char_poly(a: &IntMatrix) -> RatPoly {
    let d = a.dim();
    let mut coeffs = vec![BigInt::zero(); d + 1];
    coeffs[d] = BigInt::one();
    let mut m = IntMatrix::zeros(d);
    for k in 1..=d {
        let mut next = a.mul(&m).expect("same dimension");
        for i in 0..d {
            next.entries[i * d + i] += &coeffs[d - k + 1];
        }
        m = next;
        let am = a.mul(&m).expect("same dimension");
        let trace: BigInt = (0..d).map(|i| am.get(i, i)).sum();
        let (q, r) = trace.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev-LeVerrier trace must be divisible by k");
        coeffs[d - k] = -q;
    }
    RatPoly::from_coeffs(coeffs.into_iter().map(num_rational::BigRational::from_integer).collect())
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", v)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Serialized as a list of rows of JSON integers (strings for entries outside `i64`).
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_int::Int>> =
            (0..self.dim).map(|i| self.row(i).iter().cloned().map(serde_int::Int).collect()).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<serde_int::Int>>::deserialize(deserializer)?;
        IntMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|v| v.0).collect()).collect())
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn construction_errors() {
        assert_eq!(IntMatrix::from_rows(vec![]), Err(AlgError::Empty));
        let ragged = vec![vec![BigInt::one(), BigInt::one()]];
        assert_eq!(IntMatrix::from_rows(ragged), Err(AlgError::NotSquare { rows: 1, cols: 2 }));
    }

    #[test]
    fn mul_examples() {
        let i2 = IntMatrix::identity(2);
        assert_eq!(mat_mul(&i2, &i2).unwrap(), i2);
        let rot = m(&[&[0, -1], &[1, 0]]);
        assert_eq!(mat_mul(&rot, &rot).unwrap(), m(&[&[-1, 0], &[0, -1]]));
        let shear = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(mat_mul(&shear, &shear).unwrap(), m(&[&[1, 2], &[0, 1]]));
        assert_eq!(mat_mul(&i2, &IntMatrix::identity(3)), Err(AlgError::DimensionMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn pow_examples() {
        let cat = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(mat_pow(&cat, 0), IntMatrix::identity(2));
        assert_eq!(mat_pow(&m(&[&[1, 1], &[0, 1]]), 5), m(&[&[1, 5], &[0, 1]]));
        assert_eq!(mat_pow(&cat, 3), m(&[&[13, 8], &[8, 5]]));
        // A^0 = I even for the zero matrix.
        assert_eq!(mat_pow(&IntMatrix::zeros(3), 0), IntMatrix::identity(3));
    }

    #[test]
    fn powers_do_not_overflow() {
        let cat = m(&[&[2, 1], &[1, 1]]);
        let big = mat_pow(&cat, 200);
        // Entries are Fibonacci numbers F(401), F(400), F(399); det stays 1.
        assert_eq!(big.determinant(), BigInt::one());
        assert!(big.max_abs().bits() > 200);
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&IntMatrix::identity(2)), RatPoly::from_ints(&[1, -2, 1]));
        assert_eq!(char_poly(&m(&[&[2, 1], &[1, 1]])), RatPoly::from_ints(&[1, -3, 1]));
        assert_eq!(char_poly(&m(&[&[0, -1], &[1, 1]])), RatPoly::from_ints(&[1, -1, 1]));
        assert_eq!(char_poly(&m(&[&[7]])), RatPoly::from_ints(&[-7, 1]));
        assert_eq!(char_poly(&IntMatrix::zeros(3)), RatPoly::from_ints(&[0, 0, 0, 1]));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).determinant(), BigInt::one());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), BigInt::zero());
        assert_eq!(m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]).determinant(), BigInt::from(-1));
    }

    #[test]
    fn serde_round_trip_with_huge_entries() {
        let big = mat_pow(&m(&[&[2, 1], &[1, 1]]), 100);
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<IntMatrix>(&s).unwrap(), big);
        assert_eq!(serde_json::to_string(&m(&[&[1, -2], &[0, 3]])).unwrap(), "[[1,-2],[0,3]]");
    }

    fn small_matrix(d: usize) -> impl Strategy<Value = IntMatrix> {
        prop::collection::vec(-3i64..=3, d * d).prop_map(move |v| {
            IntMatrix::from_rows(v.chunks(d).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
        })
    }

    /// Leibniz expansion; independent of the Bareiss path.
    fn det_by_permutations(a: &IntMatrix) -> BigInt {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let d = a.dim();
        perms(d)
            .into_iter()
            .map(|p| {
                let inversions =
                    (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                let prod: BigInt = (0..d).map(|i| a.get(i, p[i]).clone()).product();
                if inversions % 2 == 0 {
                    prod
                } else {
                    -prod
                }
            })
            .sum()
    }

    proptest! {
        #[test]
        fn pow_is_additive(a in small_matrix(3), x in 0u64..6, y in 0u64..6) {
            prop_assert_eq!(mat_pow(&a, x + y), mat_mul(&mat_pow(&a, x), &mat_pow(&a, y)).unwrap());
        }

        #[test]
        fn determinant_matches_leibniz(a in small_matrix(4)) {
            prop_assert_eq!(a.determinant(), det_by_permutations(&a));
        }

        #[test]
        fn char_poly_is_monic_integral_and_matches_det(a in small_matrix(3)) {
            let f = char_poly(&a);
            prop_assert_eq!(f.degree(), Some(3));
            prop_assert!(f.is_monic());
            prop_assert!(f.is_integral());
            // f(0) = det(-A) = -det(A) for d = 3
            prop_assert_eq!(f.coeff(0), num_rational::BigRational::from_integer(-a.determinant()));
            // Cayley-Hamilton
            prop_assert!(f.eval_matrix(&a.to_rational()).is_zero());
        }
    }
}
