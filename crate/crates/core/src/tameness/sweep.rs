use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{certificate_check, decide_cascade, decide_semicascade, oracle_semicascade, TamenessError, Verdict};
use crate::exactalg::IntMatrix;

/// Largest number of matrices a sweep will enumerate.
pub const SWEEP_CAP: u128 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub matrix: IntMatrix,
    pub verdict: Verdict,
    pub minimal_pair: Option<(u64, u64)>,
    pub oracle_verdict: Verdict,
    pub oracle_pair: Option<(u64, u64)>,
    pub agree: bool,
    pub certificate_ok: bool,
    /// Cascade order for unimodular matrices with a tame cascade.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cascade_order: Option<u64>,
    pub unimodular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub d: usize,
    pub lo: i64,
    pub hi: i64,
    pub count: usize,
    pub tame_count: usize,
    pub all_agree: bool,
    pub all_certificates_ok: bool,
    /// Distinct minimal orders `m` among tame cascades.
    pub cascade_orders: BTreeSet<u64>,
    pub entries: Vec<SweepEntry>,
}

/// Every `d x d` matrix with entries in `lo..=hi`, in row-major odometer order
/// (last entry varies fastest).
pub fn enumerate_matrices(d: usize, lo: i64, hi: i64) -> Result<Vec<IntMatrix>, TamenessError> {
    assert!(d >= 1 && lo <= hi, "empty sweep range");
    let width = (hi - lo + 1) as u128;
    let cells = (d * d) as u32;
    let count = width.checked_pow(cells).filter(|&c| c <= SWEEP_CAP);
    let Some(count) = count else {
        return Err(TamenessError::SweepTooLarge { cap: SWEEP_CAP });
    };
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![lo; d * d];
    for _ in 0..count {
        let rows = digits.chunks(d).map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        out.push(IntMatrix::from_rows(rows).expect("square by construction"));
        for slot in digits.iter_mut().rev() {
            if *slot < hi {
                *slot += 1;
                break;
            }
            *slot = lo;
        }
    }
    Ok(out)
}

fn evaluate(a: IntMatrix) -> SweepEntry {
    let cert = decide_semicascade(&a);
    let oracle = oracle_semicascade(&a);
    let certificate_ok = certificate_check(&a, &cert);
    let cascade = decide_cascade(&a).ok();
    let cascade_ok = cascade.as_ref().is_none_or(|c| certificate_check(&a, c));
    SweepEntry {
        verdict: cert.verdict,
        minimal_pair: cert.minimal_pair,
        agree: oracle.verdict == cert.verdict && oracle.minimal_pair == cert.minimal_pair,
        oracle_verdict: oracle.verdict,
        oracle_pair: oracle.minimal_pair,
        certificate_ok: certificate_ok && cascade_ok,
        unimodular: cascade.is_some(),
        cascade_order: cascade.and_then(|c| c.minimal_order_m),
        matrix: a,
    }
}

/// Runs the decider, the oracle and the certificate checker on every matrix of
/// the range. Work is spread over threads; output order is enumeration order.
pub fn sweep(d: usize, lo: i64, hi: i64) -> Result<SweepSummary, TamenessError> {
    let entries: Vec<SweepEntry> = enumerate_matrices(d, lo, hi)?.into_par_iter().map(evaluate).collect();
    Ok(SweepSummary {
        d,
        lo,
        hi,
        count: entries.len(),
        tame_count: entries.iter().filter(|e| e.verdict == Verdict::Tame).count(),
        all_agree: entries.iter().all(|e| e.agree),
        all_certificates_ok: entries.iter().all(|e| e.certificate_ok),
        cascade_orders: entries.iter().filter_map(|e| e.cascade_order).collect(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_and_order() {
        let all = enumerate_matrices(2, -1, 1).unwrap();
        assert_eq!(all.len(), 81);
        assert_eq!(all[0], IntMatrix::from_i64(&[&[-1, -1], &[-1, -1]]));
        assert_eq!(all[1], IntMatrix::from_i64(&[&[-1, -1], &[-1, 0]]));
        assert_eq!(all[80], IntMatrix::from_i64(&[&[1, 1], &[1, 1]]));
        assert_eq!(enumerate_matrices(1, 0, 0).unwrap().len(), 1);
        assert!(matches!(enumerate_matrices(4, -5, 5), Err(TamenessError::SweepTooLarge { .. })));
    }

    #[test]
    fn small_sweep_agrees() {
        let s = sweep(2, -1, 1).unwrap();
        assert_eq!(s.count, 81);
        assert!(s.all_agree);
        assert!(s.all_certificates_ok);
        assert_eq!(s.cascade_orders, BTreeSet::from([1, 2, 3, 4, 6]));
    }

    #[test]
    fn sweep_is_deterministic() {
        assert_eq!(sweep(1, -3, 3).unwrap(), sweep(1, -3, 3).unwrap());
    }
}
