//! Infinite Sidon subsets of unbounded frequency streams.
//!
//! Extraction uses the norm-growth rule: a vector is kept when its l1-norm is
//! strictly larger than the sum of l1-norms of everything kept so far. In any
//! {-1, 0, 1}-combination of kept vectors, the last one used then outweighs all
//! the others, so no nontrivial combination vanishes (quasi-independence), and
//! quasi-independent sets are Sidon.

use std::collections::HashSet;
use std::f64::consts::TAU;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{serde_int, IntMatrix};

/// Largest list `verify_quasi_independence` will search exhaustively (3^12 patterns).
pub const QUASI_INDEPENDENCE_CAP: usize = 12;

/// How many stream items `extract_sidon` inspects before giving up.
pub const DEFAULT_SCAN_LIMIT: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SidonError {
    #[error("stream exhausted: found {found} of {wanted} vectors after scanning {scanned} items")]
    StreamExhausted { found: usize, wanted: usize, scanned: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{n} vectors exceed the exhaustive-check cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("frequency list is empty")]
    Empty,
    #[error("frequencies must be pairwise distinct")]
    NotDistinct,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A source of integer vectors of one fixed dimension.
pub struct FrequencyStream {
    dim: usize,
    source: Box<dyn Iterator<Item = Vec<BigInt>> + Send>,
}

impl FrequencyStream {
    pub fn new(dim: usize, source: impl Iterator<Item = Vec<BigInt>> + Send + 'static) -> Self {
        Self { dim, source: Box::new(source) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(k, k^2, ..., k^d)` for `k = 1, 2, ...`.
    pub fn moment_curve(dim: usize) -> Self {
        Self::new(dim, (1u64..).map(move |k| (1..=dim as u32).map(|e| BigInt::from(k).pow(e)).collect()))
    }

    /// The frequency orbit `u, A^T u, (A^T)^2 u, ...` (unbounded).
    pub fn frequency_orbit(a: &IntMatrix, u: Vec<BigInt>) -> Result<Self, SidonError> {
        if u.len() != a.dim() {
            return Err(SidonError::DimensionMismatch { expected: a.dim(), found: u.len() });
        }
        let at = a.transpose();
        let iter = std::iter::successors(Some(u), move |v| Some(at.mul_vec(v).expect("dimension checked")));
        Ok(Self::new(a.dim(), iter))
    }

    /// One vector per line, whitespace-separated integer components. Blank
    /// lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, SidonError> {
        let mut vectors = Vec::new();
        let mut dim = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v = line
                .split_whitespace()
                .map(|t| t.parse::<BigInt>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| SidonError::Parse { line: i + 1, message: e.to_string() })?;
            match dim {
                None => dim = Some(v.len()),
                Some(d) if d != v.len() => {
                    return Err(SidonError::Parse {
                        line: i + 1,
                        message: format!("expected {d} components, found {}", v.len()),
                    })
                }
                _ => {}
            }
            vectors.push(v);
        }
        let dim = dim.ok_or(SidonError::Empty)?;
        Ok(Self::new(dim, vectors.into_iter()))
    }
}

impl Iterator for FrequencyStream {
    type Item = Vec<BigInt>;

    fn next(&mut self) -> Option<Vec<BigInt>> {
        self.source.next()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidonReport {
    #[serde(with = "serde_int::vecvec")]
    pub selected: Vec<Vec<BigInt>>,
    /// Stream items inspected during extraction.
    pub scanned: usize,
    /// Length of the prefix of `selected` checked exhaustively for quasi-independence.
    pub quasi_independence_checked_up_to: usize,
    pub quasi_independent: bool,
    /// Floating-point diagnostic; `None` until estimated.
    pub estimated_ratio: Option<f64>,
    pub trials: usize,
}

pub fn l1_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(Signed::abs).sum()
}

/// Greedy extraction under the norm-growth rule, inspecting at most
/// `DEFAULT_SCAN_LIMIT` stream items.
pub fn extract_sidon(stream: FrequencyStream, count: usize) -> Result<SidonReport, SidonError> {
    extract_sidon_with_limit(stream, count, DEFAULT_SCAN_LIMIT)
}

pub fn extract_sidon_with_limit(
    stream: FrequencyStream,
    count: usize,
    scan_limit: usize,
) -> Result<SidonReport, SidonError> {
    if count == 0 {
        return Err(SidonError::InvalidArgument("count must be positive".into()));
    }
    let dim = stream.dim();
    let mut selected: Vec<Vec<BigInt>> = Vec::with_capacity(count);
    let mut running = BigInt::zero();
    let mut scanned = 0;
    for v in stream.take(scan_limit) {
        scanned += 1;
        if v.len() != dim {
            return Err(SidonError::DimensionMismatch { expected: dim, found: v.len() });
        }
        let norm = l1_norm(&v);
        if norm > running {
            running += norm;
            selected.push(v);
            if selected.len() == count {
                break;
            }
        }
    }
    if selected.len() < count {
        return Err(SidonError::StreamExhausted { found: selected.len(), wanted: count, scanned });
    }
    let checked = selected.len().min(QUASI_INDEPENDENCE_CAP);
    let quasi_independent = verify_quasi_independence(&selected[..checked])?;
    Ok(SidonReport {
        selected,
        scanned,
        quasi_independence_checked_up_to: checked,
        quasi_independent,
        estimated_ratio: None,
        trials: 0,
    })
}

/// Exhaustively checks that `sum eps_i v_i = 0` with `eps_i` in {-1, 0, 1}
/// only for `eps = 0`.
pub fn verify_quasi_independence(vectors: &[Vec<BigInt>]) -> Result<bool, SidonError> {
    if vectors.len() > QUASI_INDEPENDENCE_CAP {
        return Err(SidonError::CapExceeded { n: vectors.len(), cap: QUASI_INDEPENDENCE_CAP });
    }
    let Some(first) = vectors.first() else {
        return Ok(true);
    };
    let dim = first.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
        return Err(SidonError::DimensionMismatch { expected: dim, found: bad.len() });
    }
    // Any partial sum is bounded by the total l1-norm; use i128 when that fits.
    let total: BigInt = vectors.iter().map(|v| l1_norm(v)).sum();
    if total.to_i128().is_some() {
        let small: Vec<Vec<i128>> =
            vectors.iter().map(|v| v.iter().map(|x| x.to_i128().expect("bounded by total")).collect()).collect();
        Ok(!has_vanishing_combination(&small, vec![0i128; dim], 0, false))
    } else {
        Ok(!has_vanishing_combination(vectors, vec![BigInt::zero(); dim], 0, false))
    }
}

fn has_vanishing_combination<T>(vectors: &[Vec<T>], acc: Vec<T>, next: usize, used: bool) -> bool
where
    T: Clone + Zero + for<'a> Add<&'a T, Output = T> + for<'a> Sub<&'a T, Output = T>,
{
    if next == vectors.len() {
        return used && acc.iter().all(Zero::is_zero);
    }
    let v = &vectors[next];
    if has_vanishing_combination(vectors, acc.clone(), next + 1, used) {
        return true;
    }
    let plus: Vec<T> = acc.iter().zip(v).map(|(a, b)| a.clone() + b).collect();
    if has_vanishing_combination(vectors, plus, next + 1, true) {
        return true;
    }
    let minus: Vec<T> = acc.into_iter().zip(v).map(|(a, b)| a - b).collect();
    has_vanishing_combination(vectors, minus, next + 1, true)
}

fn validate_frequencies(vectors: &[Vec<BigInt>]) -> Result<usize, SidonError> {
    let first = vectors.first().ok_or(SidonError::Empty)?;
    let dim = first.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
        return Err(SidonError::DimensionMismatch { expected: dim, found: bad.len() });
    }
    let distinct: HashSet<&Vec<BigInt>> = vectors.iter().collect();
    if distinct.len() != vectors.len() {
        return Err(SidonError::NotDistinct);
    }
    Ok(dim)
}

/// `sum |c_k| / max |P|` for `P(x) = sum c_k e^{i(lambda_k, x)}`, with the max
/// taken over the uniform grid of `grid_per_axis^d` points.
pub fn sidon_ratio_for(vectors: &[Vec<BigInt>], coeffs: &[Complex64], grid_per_axis: usize) -> Result<f64, SidonError> {
    let dim = validate_frequencies(vectors)?;
    if coeffs.len() != vectors.len() {
        return Err(SidonError::DimensionMismatch { expected: vectors.len(), found: coeffs.len() });
    }
    if grid_per_axis == 0 {
        return Err(SidonError::InvalidArgument("grid needs at least one point per axis".into()));
    }
    let n = grid_per_axis;
    let modulus = BigInt::from(n);
    // Phases are computed exactly mod n, then looked up in a table of roots of unity.
    let reduced: Vec<Vec<usize>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| x.mod_floor(&modulus).to_usize().expect("below n")).collect())
        .collect();
    let roots: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64)).collect();
    let total = n.checked_pow(dim as u32).ok_or_else(|| SidonError::InvalidArgument("grid too large".into()))?;
    let mut idx = vec![0usize; dim];
    let mut sup = 0.0f64;
    for _ in 0..total {
        let mut value = Complex64::zero();
        for (lam, c) in reduced.iter().zip(coeffs) {
            let phase = lam.iter().zip(&idx).map(|(l, k)| l * k).sum::<usize>() % n;
            value += c * roots[phase];
        }
        sup = sup.max(value.norm());
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
    let l1: f64 = coeffs.iter().map(|c| c.norm()).sum();
    Ok(l1 / sup)
}

/// Randomized probe of the Sidon constant: for each trial draws unit-modulus
/// coefficients with independent uniform phases and records `sum |c_k| / max |P|`
/// over the grid; returns the largest ratio.
///
/// Trial `t` draws from the ChaCha8 stream `t` of `seed`, so results are
/// bit-reproducible and adding trials never lowers the estimate. The grid max
/// understates the true sup-norm, so this is a diagnostic, not a bound.
pub fn estimate_sidon_ratio(
    vectors: &[Vec<BigInt>],
    trials: usize,
    grid_per_axis: usize,
    seed: u64,
) -> Result<f64, SidonError> {
    validate_frequencies(vectors)?;
    if trials == 0 {
        return Err(SidonError::InvalidArgument("trials must be positive".into()));
    }
    let ratios = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let coeffs: Vec<Complex64> =
                vectors.iter().map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))).collect();
            sidon_ratio_for(vectors, &coeffs, grid_per_axis)
        })
        .collect::<Result<Vec<f64>, SidonError>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn powers_of_two() -> FrequencyStream {
        FrequencyStream::new(1, (0u32..).map(|k| vec![BigInt::from(2).pow(k)]))
    }

    #[test]
    fn powers_of_two_all_pass_the_rule() {
        let r = extract_sidon(powers_of_two(), 5).unwrap();
        assert_eq!(r.selected, vec![v(&[1]), v(&[2]), v(&[4]), v(&[8]), v(&[16])]);
        assert_eq!(r.scanned, 5);
        assert!(r.quasi_independent);
    }

    #[test]
    fn moment_curve_skips_until_norm_dominates() {
        // norms k + k^2: 2, 6, 12, 20, 30; 20 is not > 2 + 6 + 12
        let r = extract_sidon(FrequencyStream::moment_curve(2), 4).unwrap();
        assert_eq!(r.selected, vec![v(&[1, 1]), v(&[2, 4]), v(&[3, 9]), v(&[5, 25])]);
    }

    #[test]
    fn bounded_stream_is_exhausted() {
        let alternating = (0..).map(|k| if k % 2 == 0 { v(&[1, 0]) } else { v(&[-1, 0]) });
        let stream = FrequencyStream::new(2, alternating);
        let err = extract_sidon_with_limit(stream, 3, 1000).unwrap_err();
        assert_eq!(err, SidonError::StreamExhausted { found: 1, wanted: 3, scanned: 1000 });

        let finite = FrequencyStream::new(1, vec![v(&[1]), v(&[5])].into_iter());
        assert!(matches!(extract_sidon(finite, 3), Err(SidonError::StreamExhausted { found: 2, .. })));
    }

    #[test]
    fn zero_vectors_are_never_selected() {
        let s = FrequencyStream::new(1, vec![v(&[0]), v(&[0]), v(&[3])].into_iter());
        assert_eq!(extract_sidon(s, 1).unwrap().selected, vec![v(&[3])]);
    }

    #[test]
    fn quasi_independence_examples() {
        assert!(verify_quasi_independence(&[v(&[1, 0])]).unwrap());
        assert!(!verify_quasi_independence(&[v(&[1, 0]), v(&[2, 0]), v(&[3, 0])]).unwrap());
        assert!(verify_quasi_independence(&[v(&[1]), v(&[2]), v(&[4]), v(&[8])]).unwrap());
        assert!(!verify_quasi_independence(&[v(&[0, 0])]).unwrap());
        assert!(verify_quasi_independence(&[]).unwrap());
        let too_many: Vec<Vec<BigInt>> = (0..13).map(|k| v(&[1 << k])).collect();
        assert!(matches!(verify_quasi_independence(&too_many), Err(SidonError::CapExceeded { .. })));
    }

    #[test]
    fn quasi_independence_with_huge_entries() {
        let big = BigInt::from(i128::MAX);
        let vs = vec![vec![big.clone()], vec![&big * 3], vec![&big * 2]];
        assert!(!verify_quasi_independence(&vs).unwrap());
        let vs = vec![vec![big.clone()], vec![&big * 3]];
        assert!(verify_quasi_independence(&vs).unwrap());
    }

    #[test]
    fn single_frequency_ratio_is_one() {
        let r = estimate_sidon_ratio(&[v(&[3, -1])], 10, 16, 7).unwrap();
        assert!((r - 1.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn cosine_ratio_is_one() {
        let c = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let r = sidon_ratio_for(&[v(&[1]), v(&[-1])], &c, 32).unwrap();
        assert!((r - 1.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn dyadic_set_has_small_ratio() {
        let r = extract_sidon(powers_of_two(), 5).unwrap();
        let ratio = estimate_sidon_ratio(&r.selected, 200, 64, 1).unwrap();
        assert!((1.0..10.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn estimate_errors() {
        assert_eq!(estimate_sidon_ratio(&[], 1, 8, 0), Err(SidonError::Empty));
        assert_eq!(estimate_sidon_ratio(&[v(&[1]), v(&[1])], 1, 8, 0), Err(SidonError::NotDistinct));
        assert!(estimate_sidon_ratio(&[v(&[1])], 0, 8, 0).is_err());
    }

    #[test]
    fn stream_file_format() {
        let s = FrequencyStream::parse("# header\n1 0\n\n2 -3\n").unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.collect::<Vec<_>>(), vec![v(&[1, 0]), v(&[2, -3])]);
        assert!(matches!(FrequencyStream::parse("1 2\n3\n"), Err(SidonError::Parse { line: 2, .. })));
        assert!(matches!(FrequencyStream::parse("1 x\n"), Err(SidonError::Parse { line: 1, .. })));
        assert!(matches!(FrequencyStream::parse("\n"), Err(SidonError::Empty)));
    }

    #[test]
    fn orbit_stream_feeds_extraction() {
        let cat = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let s = FrequencyStream::frequency_orbit(&cat, v(&[1, 0])).unwrap();
        let r = extract_sidon(s, 6).unwrap();
        assert!(r.quasi_independent);
    }

    proptest! {
        #[test]
        fn extraction_obeys_growth_rule(seq in prop::collection::vec(prop::collection::vec(-50i64..50, 2), 1..60)) {
            let vs: Vec<Vec<BigInt>> = seq.iter().map(|x| v(x)).collect();
            let stream = FrequencyStream::new(2, vs.into_iter());
            if let Ok(r) = extract_sidon(stream, 3) {
                let mut sum = BigInt::zero();
                for s in &r.selected {
                    prop_assert!(l1_norm(s) > sum);
                    sum += l1_norm(s);
                }
                prop_assert!(verify_quasi_independence(&r.selected).unwrap());
            }
        }

        #[test]
        fn estimate_is_reproducible_and_monotone(seed in any::<u64>(), t in 1usize..6) {
            let vs = vec![v(&[1]), v(&[3]), v(&[7])];
            let a = estimate_sidon_ratio(&vs, t, 16, seed).unwrap();
            prop_assert_eq!(a.to_bits(), estimate_sidon_ratio(&vs, t, 16, seed).unwrap().to_bits());
            prop_assert!(estimate_sidon_ratio(&vs, t + 3, 16, seed).unwrap() >= a);
        }
    }
}
