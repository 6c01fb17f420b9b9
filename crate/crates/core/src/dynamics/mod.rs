//! Floating-point side of the crate: orbits of affine torus maps, the
//! convergence probe on iterate families, frequency orbits and the brute-force
//! independence checker. Matrix powers and frequencies stay exact here too;
//! only angles are `f64`.

mod frequency;
mod independence;
mod probe;
mod torus;

use thiserror::Error;

pub use frequency::{
    basis_vector, escape_probe, fourier_identity_error, frequency_orbit, grid_average_exponential, sup_norm,
    EscapeReport, FrequencyOrbit,
};
pub use independence::{independence_check, rademacher_family, IndependenceQuery, INDEPENDENCE_CAP};
pub use probe::{convergence_probe, ConvergenceReport};
pub use torus::{
    angle_distance, apply, default_grid_per_axis, orbit, reduce_angle, uniform_grid, AffineMap, TorusPoint,
    GRID_POINT_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{n} functions exceed the brute-force cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
}
