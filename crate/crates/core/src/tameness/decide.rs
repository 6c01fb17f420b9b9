use num_traits::{Signed, Zero};

use super::{certificate_check, order_bound, SystemKind, TamenessCertificate, TamenessError, UntameWitness, Verdict};
use crate::exactalg::{min_poly, IntMatrix, RatPoly};

/// Least `s` in `1..=s_max` with `x^s = 1` in `Q[x] / (g)`, or `None`.
///
/// A constant `g` gives the zero ring, where `x = 1` already, so the answer is 1.
pub fn order_of_x_mod(g: &RatPoly, s_max: u64) -> Result<Option<u64>, TamenessError> {
    if g.coeff(0).is_zero() {
        return Err(TamenessError::ZeroConstantTerm);
    }
    let g = g.monic();
    let one = RatPoly::one().rem(&g).expect("g is nonzero");
    let x = RatPoly::x();
    let mut power = x.rem(&g).expect("g is nonzero");
    for s in 1..=s_max {
        if power == one {
            return Ok(Some(s));
        }
        power = (&power * &x).rem(&g).expect("g is nonzero");
    }
    Ok(None)
}

enum Structure {
    Periodic { index_k: u64, period_s: u64 },
    Untame(UntameWitness),
}

fn power_structure(a: &IntMatrix, mu: &RatPoly) -> Structure {
    let (k, g) = mu.strip_x_factor().expect("minimal polynomial is nonzero");
    let repeated = g.gcd(&g.derivative()).expect("g is nonzero");
    if !repeated.is_one() {
        return Structure::Untame(UntameWitness::NotSquarefree { stripped_min_poly: g, repeated_part: repeated });
    }
    let s_max = order_bound(a.dim()).s_max;
    match order_of_x_mod(&g, s_max).expect("g(0) != 0 after stripping x") {
        Some(s) => Structure::Periodic { index_k: k as u64, period_s: s },
        None => Structure::Untame(UntameWitness::OrderBoundExhausted { stripped_min_poly: g, s_max }),
    }
}

fn untame(kind: SystemKind, mu: RatPoly, witness: UntameWitness) -> TamenessCertificate {
    TamenessCertificate {
        verdict: Verdict::Untame,
        kind,
        min_poly: mu,
        index_k: None,
        period_s: None,
        minimal_pair: None,
        minimal_order_m: None,
        witness: Some(witness),
    }
}

/// Tameness of the semicascade `{phi^n : n >= 0}`.
///
/// `A^p = A^q` (p < q) holds iff `p >= k` and `s | q - p`, where `k` is the
/// multiplicity of `x` in the minimal polynomial and `s` the order of `x` modulo
/// the rest. The least pair is therefore `(k, k + s)`.
pub fn decide_semicascade(a: &IntMatrix) -> TamenessCertificate {
    let mu = min_poly(a);
    let cert = match power_structure(a, &mu) {
        Structure::Periodic { index_k, period_s } => TamenessCertificate {
            verdict: Verdict::Tame,
            kind: SystemKind::Semicascade,
            min_poly: mu,
            index_k: Some(index_k),
            period_s: Some(period_s),
            minimal_pair: Some((index_k, index_k + period_s)),
            minimal_order_m: None,
            witness: None,
        },
        Structure::Untame(w) => untame(SystemKind::Semicascade, mu, w),
    };
    if cert.is_tame() {
        assert!(certificate_check(a, &cert), "decider produced an invalid certificate for {a}");
    }
    cert
}

/// Tameness of the cascade `{phi^n : n in Z}`. Requires `|det A| = 1`.
pub fn decide_cascade(a: &IntMatrix) -> Result<TamenessCertificate, TamenessError> {
    let det = a.determinant();
    if det.abs() != num_bigint::BigInt::from(1) {
        return Err(TamenessError::DeterminantNotUnit { det });
    }
    let mu = min_poly(a);
    let (k, _) = mu.strip_x_factor().expect("minimal polynomial is nonzero");
    if k > 0 {
        // Unreachable for unit determinant; kept so the verdict never depends on that.
        return Ok(untame(SystemKind::Cascade, mu, UntameWitness::NilpotentPart { index_k: k as u64 }));
    }
    let cert = match power_structure(a, &mu) {
        Structure::Periodic { index_k: 0, period_s } => TamenessCertificate {
            verdict: Verdict::Tame,
            kind: SystemKind::Cascade,
            min_poly: mu,
            index_k: Some(0),
            period_s: Some(period_s),
            minimal_pair: None,
            minimal_order_m: Some(period_s),
            witness: None,
        },
        Structure::Periodic { index_k, .. } => {
            untame(SystemKind::Cascade, mu, UntameWitness::NilpotentPart { index_k })
        }
        Structure::Untame(w) => untame(SystemKind::Cascade, mu, w),
    };
    if cert.is_tame() {
        assert!(certificate_check(a, &cert), "decider produced an invalid certificate for {a}");
    }
    Ok(cert)
}
