use std::collections::BTreeSet;

use super::DynamicsError;

/// Largest family the brute-force checker accepts; 3^12 sign patterns.
pub const INDEPENDENCE_CAP: usize = 12;

/// Sampled functions on a common grid together with thresholds `a < b`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceQuery {
    functions: Vec<Vec<f64>>,
    a: f64,
    b: f64,
}

impl IndependenceQuery {
    pub fn new(functions: Vec<Vec<f64>>, a: f64, b: f64) -> Result<Self, DynamicsError> {
        if a.is_nan() || b.is_nan() || a >= b {
            return Err(DynamicsError::InvalidArgument(format!("thresholds need a < b, got {a} and {b}")));
        }
        if let Some(first) = functions.first() {
            if let Some(bad) = functions.iter().find(|f| f.len() != first.len()) {
                return Err(DynamicsError::DimensionMismatch { expected: first.len(), found: bad.len() });
            }
        }
        Ok(Self { functions, a, b })
    }

    pub fn functions(&self) -> &[Vec<f64>] {
        &self.functions
    }

    /// The same query without function `k`.
    pub fn without(&self, k: usize) -> Self {
        let mut functions = self.functions.clone();
        functions.remove(k);
        Self { functions, ..self.clone() }
    }
}

/// True iff for every pair of disjoint index sets `P`, `Q` some grid point has
/// `f_p < a` for all `p` in `P` and `f_q > b` for all `q` in `Q`.
///
/// Each grid point is summarized by its (below-a, above-b) bitmasks; every one
/// of the `3^n` patterns is then tested against the distinct summaries.
pub fn independence_check(q: &IndependenceQuery) -> Result<bool, DynamicsError> {
    let n = q.functions.len();
    if n > INDEPENDENCE_CAP {
        return Err(DynamicsError::CapExceeded { n, cap: INDEPENDENCE_CAP });
    }
    if n == 0 {
        return Ok(true);
    }
    let points = q.functions[0].len();
    let summaries: BTreeSet<(u32, u32)> = (0..points)
        .map(|x| {
            let mut below = 0u32;
            let mut above = 0u32;
            for (k, f) in q.functions.iter().enumerate() {
                if f[x] < q.a {
                    below |= 1 << k;
                }
                if f[x] > q.b {
                    above |= 1 << k;
                }
            }
            (below, above)
        })
        .collect();
    let summaries: Vec<(u32, u32)> = summaries.into_iter().collect();

    let patterns = 3usize.pow(n as u32);
    for code in 0..patterns {
        let (mut p, mut qm) = (0u32, 0u32);
        let mut c = code;
        for k in 0..n {
            match c % 3 {
                1 => p |= 1 << k,
                2 => qm |= 1 << k,
                _ => {}
            }
            c /= 3;
        }
        let realized = summaries.iter().any(|&(below, above)| below & p == p && above & qm == qm);
        if !realized {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `n` functions on `2^n` points where `f_k(x_j) = +1` if bit `k` of `j` is set
/// and `-1` otherwise, so every sign pattern has a witness point.
pub fn rademacher_family(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|k| (0..1usize << n).map(|j| if j >> k & 1 == 1 { 1.0 } else { -1.0 }).collect()).collect()
}
