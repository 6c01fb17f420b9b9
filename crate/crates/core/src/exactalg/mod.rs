//! Exact integer and rational linear algebra: big-integer matrices, rational
//! polynomials, characteristic and minimal polynomials. Nothing in here rounds.

mod matrix;
mod minpoly;
mod poly;
mod ratmatrix;
pub mod serde_int;

use thiserror::Error;

pub use matrix::{char_poly, mat_mul, mat_pow, IntMatrix};
pub use minpoly::{min_poly, vector_min_poly};
pub use poly::{poly_divmod, poly_gcd, strip_x_factor, RatPoly};
pub use ratmatrix::{rank, RatMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not square: {rows} rows but a row of length {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must have dimension at least 1")]
    Empty,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
}
