use std::collections::HashMap;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{order_bound, order_of_x_mod, SystemKind, TamenessCertificate, UntameWitness, Verdict};
use crate::exactalg::{min_poly, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub verdict: Verdict,
    pub minimal_pair: Option<(u64, u64)>,
}

/// Brute-force semicascade decision by enumerating `A^0, ..., A^Q` with
/// `Q = d + s_max` and looking for the first repeated power.
///
/// The bound is complete: if the power semigroup is finite, its index is the
/// multiplicity of `x` in the minimal polynomial (at most `d`) and its period is
/// the lcm of distinct root-of-unity orders whose cyclotomic degrees sum to at
/// most `d`, which is at most `s_max`.
pub fn oracle_semicascade(a: &IntMatrix) -> OracleResult {
    let limit = a.dim() as u64 + order_bound(a.dim()).s_max;
    let mut seen: HashMap<IntMatrix, u64> = HashMap::new();
    let mut power = IntMatrix::identity(a.dim());
    for q in 0..=limit {
        if let Some(&p) = seen.get(&power) {
            return OracleResult { verdict: Verdict::Tame, minimal_pair: Some((p, q)) };
        }
        let next = power.mul(a).expect("same dimension");
        seen.insert(power, q);
        power = next;
    }
    OracleResult { verdict: Verdict::Untame, minimal_pair: None }
}

/// Re-derives every claim of `cert` from exact matrix powers (or, for untame
/// witnesses, from the minimal polynomial). Returns false on any mismatch.
pub fn certificate_check(a: &IntMatrix, cert: &TamenessCertificate) -> bool {
    match cert.verdict {
        Verdict::Tame => match cert.kind {
            SystemKind::Semicascade => check_tame_semicascade(a, cert),
            SystemKind::Cascade => check_tame_cascade(a, cert),
        },
        Verdict::Untame => check_untame(a, cert),
    }
}

fn check_tame_semicascade(a: &IntMatrix, cert: &TamenessCertificate) -> bool {
    let Some((p, q)) = cert.minimal_pair else {
        return false;
    };
    if p >= q {
        return false;
    }
    if cert.index_k.is_some_and(|k| k != p) || cert.period_s.is_some_and(|s| s != q - p) {
        return false;
    }
    // A^0..A^{q-1} pairwise distinct rules out every pair with smaller q, and
    // then A^q = A^p pins p since no other earlier power equals A^p.
    let mut seen = HashSet::new();
    let mut power = IntMatrix::identity(a.dim());
    let mut at_p = None;
    for n in 0..q {
        if n == p {
            at_p = Some(power.clone());
        }
        let next = power.mul(a).expect("same dimension");
        if !seen.insert(power) {
            return false;
        }
        power = next;
    }
    at_p.is_some_and(|ap| ap == power)
}

fn check_tame_cascade(a: &IntMatrix, cert: &TamenessCertificate) -> bool {
    let Some(m) = cert.minimal_order_m else {
        return false;
    };
    if m == 0 || cert.period_s.is_some_and(|s| s != m) || cert.index_k.is_some_and(|k| k != 0) {
        return false;
    }
    let mut power = a.clone();
    for _ in 1..m {
        if power.is_identity() {
            return false;
        }
        power = power.mul(a).expect("same dimension");
    }
    power.is_identity()
}

fn check_untame(a: &IntMatrix, cert: &TamenessCertificate) -> bool {
    let mu = min_poly(a);
    if mu != cert.min_poly {
        return false;
    }
    let (k, g) = mu.strip_x_factor().expect("minimal polynomial is nonzero");
    match &cert.witness {
        None => false,
        Some(UntameWitness::NotSquarefree { stripped_min_poly, repeated_part }) => {
            let repeated = g.gcd(&g.derivative()).expect("g is nonzero");
            *stripped_min_poly == g && *repeated_part == repeated && !repeated.is_one()
        }
        Some(UntameWitness::OrderBoundExhausted { stripped_min_poly, s_max }) => {
            *stripped_min_poly == g
                && *s_max >= order_bound(a.dim()).s_max
                && order_of_x_mod(&g, *s_max).is_ok_and(|o| o.is_none())
        }
        Some(UntameWitness::NilpotentPart { index_k }) => {
            cert.kind == SystemKind::Cascade && *index_k == k as u64 && k > 0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::RatPoly;
    use crate::tameness::{decide_cascade, decide_semicascade};

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            oracle_semicascade(&IntMatrix::identity(2)),
            OracleResult { verdict: Verdict::Tame, minimal_pair: Some((0, 1)) }
        );
        assert_eq!(oracle_semicascade(&m(&[&[0, -1], &[1, 0]])).minimal_pair, Some((0, 4)));
        assert_eq!(
            oracle_semicascade(&m(&[&[2, 1], &[1, 1]])),
            OracleResult { verdict: Verdict::Untame, minimal_pair: None }
        );
        assert_eq!(oracle_semicascade(&m(&[&[0, 1], &[0, 0]])).minimal_pair, Some((2, 3)));
    }

    #[test]
    fn check_accepts_decider_output() {
        let id = IntMatrix::identity(2);
        assert!(certificate_check(&id, &decide_semicascade(&id)));
        let rot = m(&[&[0, -1], &[1, 0]]);
        let c = decide_cascade(&rot).unwrap();
        assert_eq!(c.minimal_order_m, Some(4));
        assert!(certificate_check(&rot, &c));
    }

    #[test]
    fn check_rejects_wrong_claims() {
        let rot = m(&[&[0, -1], &[1, 0]]);
        let mut c = decide_cascade(&rot).unwrap();
        c.minimal_order_m = Some(2);
        c.period_s = Some(2);
        assert!(!certificate_check(&rot, &c));
        // m = 8 works (A^8 = I) but is not minimal.
        c.minimal_order_m = Some(8);
        c.period_s = Some(8);
        assert!(!certificate_check(&rot, &c));

        let mut s = decide_semicascade(&rot);
        s.minimal_pair = Some((1, 5));
        s.index_k = Some(1);
        assert!(!certificate_check(&rot, &s));
        s.minimal_pair = Some((0, 4));
        s.index_k = Some(0);
        assert!(certificate_check(&rot, &s));
        s.minimal_pair = Some((4, 0));
        assert!(!certificate_check(&rot, &s));
    }

    #[test]
    fn check_untame_witnesses() {
        let shear = m(&[&[1, 1], &[0, 1]]);
        let c = decide_semicascade(&shear);
        assert!(certificate_check(&shear, &c));
        let cat = m(&[&[2, 1], &[1, 1]]);
        let c = decide_semicascade(&cat);
        assert!(certificate_check(&cat, &c));

        // Claiming the rotation is untame must fail.
        let rot = m(&[&[0, -1], &[1, 0]]);
        let forged = TamenessCertificate {
            verdict: Verdict::Untame,
            kind: SystemKind::Semicascade,
            min_poly: RatPoly::from_ints(&[1, 0, 1]),
            index_k: None,
            period_s: None,
            minimal_pair: None,
            minimal_order_m: None,
            witness: Some(UntameWitness::OrderBoundExhausted {
                stripped_min_poly: RatPoly::from_ints(&[1, 0, 1]),
                s_max: 6,
            }),
        };
        assert!(!certificate_check(&rot, &forged));
        // A too-small exhausted bound is not a proof either.
        let mut weak = c.clone();
        weak.witness =
            Some(UntameWitness::OrderBoundExhausted { stripped_min_poly: RatPoly::from_ints(&[1, -3, 1]), s_max: 3 });
        assert!(!certificate_check(&cat, &weak));
    }
}
