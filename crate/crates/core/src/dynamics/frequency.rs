use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::DynamicsError;
use crate::exactalg::{serde_int, IntMatrix};

/// Frequencies `(A^T)^n u` for `n = 0..=N`: composing `e_u` with `x -> Ax + b`
/// gives a phase times `e_{A^T u}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyOrbit {
    #[serde(with = "serde_int::vec")]
    pub u: Vec<BigInt>,
    #[serde(with = "serde_int::vecvec")]
    pub terms: Vec<Vec<BigInt>>,
}

pub fn frequency_orbit(a: &IntMatrix, u: &[BigInt], n: usize) -> Result<FrequencyOrbit, DynamicsError> {
    if u.len() != a.dim() {
        return Err(DynamicsError::DimensionMismatch { expected: a.dim(), found: u.len() });
    }
    let at = a.transpose();
    let mut terms = Vec::with_capacity(n + 1);
    terms.push(u.to_vec());
    for _ in 0..n {
        let next = at.mul_vec(terms.last().expect("nonempty")).expect("dimension checked");
        terms.push(next);
    }
    Ok(FrequencyOrbit { u: u.to_vec(), terms })
}

/// `e_j` as an integer vector.
pub fn basis_vector(d: usize, j: usize) -> Vec<BigInt> {
    (0..d).map(|i| BigInt::from(u8::from(i == j))).collect()
}

pub fn sup_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(Signed::abs).max().unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeReport {
    pub escaped: bool,
    pub first_n: Option<usize>,
}

/// First index whose term has sup-norm strictly above `bound`.
pub fn escape_probe(fo: &FrequencyOrbit, bound: &BigInt) -> EscapeReport {
    let first_n = fo.terms.iter().position(|t| sup_norm(t) > *bound);
    EscapeReport { escaped: first_n.is_some(), first_n }
}

/// Average of `e^{i(lambda, x)}` over the uniform grid with `n` points per axis.
///
/// Phases are reduced modulo `n` in exact integer arithmetic before any
/// floating-point step, and the sum runs in grid order (last axis fastest).
pub fn grid_average_exponential(lambda: &[BigInt], n: usize) -> Complex64 {
    assert!(n >= 1, "grid needs at least one point per axis");
    let modulus = BigInt::from(n);
    let reduced: Vec<usize> =
        lambda.iter().map(|l| l.mod_floor(&modulus).to_usize().expect("reduced below n")).collect();
    let roots: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64)).collect();
    let d = lambda.len();
    let total = n.pow(d as u32);
    let mut idx = vec![0usize; d];
    let mut sum = Complex64::zero();
    for _ in 0..total {
        let phase = idx.iter().zip(&reduced).map(|(k, l)| k * l).sum::<usize>() % n;
        sum += roots[phase];
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
    sum / total as f64
}

/// Distance between the grid average and its exact value (1 when every
/// component of `lambda` is divisible by `n`, else 0).
pub fn fourier_identity_error(lambda: &[BigInt], n: usize) -> f64 {
    let modulus = BigInt::from(n);
    let aliased = lambda.iter().all(|l| l.mod_floor(&modulus).is_zero());
    let expected = if aliased { Complex64::new(1.0, 0.0) } else { Complex64::zero() };
    (grid_average_exponential(lambda, n) - expected).norm()
}
