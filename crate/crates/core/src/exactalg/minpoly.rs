use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{IntMatrix, RatMatrix, RatPoly};

/// Monic minimal polynomial of `v` with respect to `a`: the least-degree monic
/// `f` with `f(a) v = 0`.
///
/// Krylov vectors `v, av, a^2 v, ...` are reduced against an echelon basis while
/// tracking which combination of powers produced each basis vector; the first
/// Krylov vector that reduces to zero yields the relation.
pub fn vector_min_poly(a: &RatMatrix, v: &[BigRational]) -> RatPoly {
    if v.iter().all(Zero::is_zero) {
        return RatPoly::one();
    }
    // (reduced vector, pivot column, combination of Krylov powers)
    let mut basis: Vec<(Vec<BigRational>, usize, Vec<BigRational>)> = Vec::new();
    let mut krylov = v.to_vec();
    for k in 0..=a.dim() {
        let mut w = krylov.clone();
        let mut combo = vec![BigRational::zero(); k + 1];
        combo[k] = BigRational::one();
        for (bv, pivot, bcombo) in &basis {
            if w[*pivot].is_zero() {
                continue;
            }
            let factor = &w[*pivot] / &bv[*pivot];
            for (wi, bi) in w.iter_mut().zip(bv) {
                *wi -= &factor * bi;
            }
            for (ci, bi) in combo.iter_mut().zip(bcombo) {
                *ci -= &factor * bi;
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => return RatPoly::from_coeffs(combo),
            Some(pivot) => basis.push((w, pivot, combo)),
        }
        krylov = a.mul_vec(&krylov);
    }
    unreachable!("more than d linearly independent Krylov vectors in dimension d")
}

/// Monic minimal polynomial of `a` over the rationals, as the lcm of the
/// minimal polynomials of the standard basis vectors.
pub fn min_poly(a: &IntMatrix) -> RatPoly {
    let r = a.to_rational();
    let d = a.dim();
    (0..d)
        .map(|j| {
            let mut e = vec![BigRational::zero(); d];
            e[j] = BigRational::one();
            vector_min_poly(&r, &e)
        })
        .fold(RatPoly::one(), |acc, f| acc.lcm(&f))
}
