//! Tameness of the semicascade and cascade generated by `x -> Ax + b` on the
//! d-torus. Only the integer matrix `A` matters: the semicascade is tame iff
//! `A^p = A^q` for some `p != q`, and the cascade is tame iff `A^m = I` for some
//! `m > 0`.
//!
//! The decider never factors polynomials. It strips the power of `x` off the
//! minimal polynomial, checks that the rest is squarefree, and searches for the
//! multiplicative order of `x` modulo it up to a bound that depends only on `d`.

mod bound;
mod check;
mod decide;
mod sweep;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::RatPoly;

pub use bound::{euler_phi, inverse_phi, order_bound, OrderBoundTable};
pub use check::{certificate_check, oracle_semicascade, OracleResult};
pub use decide::{decide_cascade, decide_semicascade, order_of_x_mod};
pub use sweep::{enumerate_matrices, sweep, SweepEntry, SweepSummary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TamenessError {
    #[error("cascade is undefined: |det A| = |{det}| is not 1")]
    DeterminantNotUnit { det: BigInt },
    #[error("polynomial has a zero constant term")]
    ZeroConstantTerm,
    #[error("sweep would enumerate more than {cap} matrices")]
    SweepTooLarge { cap: u128 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Tame,
    Untame,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SystemKind {
    Semicascade,
    Cascade,
}

/// Why a matrix generates an untame system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum UntameWitness {
    /// The part of the minimal polynomial coprime to `x` has a repeated factor,
    /// so it cannot divide the squarefree `x^s - 1`.
    NotSquarefree { stripped_min_poly: RatPoly, repeated_part: RatPoly },
    /// `x^s mod g != 1` for every `1 <= s <= s_max`.
    OrderBoundExhausted { stripped_min_poly: RatPoly, s_max: u64 },
    /// `x` divides the minimal polynomial, so no positive power of `A` is `I`.
    NilpotentPart { index_k: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TamenessCertificate {
    pub verdict: Verdict,
    pub kind: SystemKind,
    pub min_poly: RatPoly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_s: Option<u64>,
    /// `(p, q)` with `A^p = A^q`, least `q` and then least `p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_pair: Option<(u64, u64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_order_m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<UntameWitness>,
}

impl TamenessCertificate {
    pub fn is_tame(&self) -> bool {
        self.verdict == Verdict::Tame
    }
}
