//! Univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending degree order with no trailing zero
//! coefficients, so the zero polynomial is the empty vector and its degree is
//! `None`. Arithmetic never normalizes to monic form; only `gcd` and the
//! explicit `monic` call do.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgError, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`; zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    /// Scales to leading coefficient one. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &RatMatrix) -> RatMatrix {
        let d = a.dim();
        let mut acc = RatMatrix::zeros(d);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a).expect("square operands of equal size").add_scalar_identity(c);
        }
        acc
    }

    /// Long division: `self = q * g + r` with `deg r < deg g`.
    pub fn divmod(&self, g: &RatPoly) -> Result<(RatPoly, RatPoly), AlgError> {
        let g_deg = g.degree().ok_or(AlgError::ZeroDivisor)?;
        let g_lead_inv = g.coeffs[g_deg].recip();
        let mut rem = self.coeffs.clone();
        let q_len = rem.len().saturating_sub(g_deg);
        let mut quot = vec![BigRational::zero(); q_len];
        for shift in (0..q_len).rev() {
            let top = &rem[shift + g_deg];
            if top.is_zero() {
                continue;
            }
            let factor = top * &g_lead_inv;
            for (i, gc) in g.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * gc;
            }
            quot[shift] = factor;
        }
        rem.truncate(g_deg);
        Ok((RatPoly::from_coeffs(quot), RatPoly::from_coeffs(rem)))
    }

    pub fn rem(&self, g: &RatPoly) -> Result<RatPoly, AlgError> {
        self.divmod(g).map(|(_, r)| r)
    }

    /// True when `g` divides `self` exactly.
    pub fn is_divisible_by(&self, g: &RatPoly) -> Result<bool, AlgError> {
        Ok(self.rem(g)?.is_zero())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RatPoly) -> Result<RatPoly, AlgError> {
        if self.is_zero() && other.is_zero() {
            return Err(AlgError::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            // Keeping the remainder monic bounds coefficient growth.
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Monic least common multiple. `lcm(0, f) = 0`.
    pub fn lcm(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let g = self.gcd(other).expect("operands are nonzero");
        let (q, _) = self.divmod(&g).expect("gcd is nonzero");
        (&q * other).monic()
    }

    /// Splits off the largest power of `x`: `self = x^k * g` with `g(0) != 0`.
    pub fn strip_x_factor(&self) -> Result<(usize, RatPoly), AlgError> {
        let k = self.coeffs.iter().position(|c| !c.is_zero()).ok_or(AlgError::ZeroPolynomial)?;
        Ok((k, RatPoly::from_coeffs(self.coeffs[k..].to_vec())))
    }
}

pub fn poly_divmod(f: &RatPoly, g: &RatPoly) -> Result<(RatPoly, RatPoly), AlgError> {
    f.divmod(g)
}

pub fn poly_gcd(f: &RatPoly, g: &RatPoly) -> Result<RatPoly, AlgError> {
    f.gcd(g)
}

pub fn strip_x_factor(f: &RatPoly) -> Result<(usize, RatPoly), AlgError> {
    f.strip_x_factor()
}

impl Add for &RatPoly {
    type Output = RatPoly;

    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;

    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;

    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;

    fn neg(self) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag)?;
                } else {
                    write!(f, "({})", mag)?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{}", i)?,
            }
        }
        Ok(())
    }
}

/// Serialized as ascending coefficient strings, e.g. `["1", "-3", "1"]` or `["1/2"]`.
impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let coeffs =
            raw.iter().map(|s| s.parse::<BigRational>().map_err(D::Error::custom)).collect::<Result<Vec<_>, _>>()?;
        Ok(RatPoly::from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(RatPoly::zero().degree(), None);
        assert_eq!(p(&[0, 0, 0]).degree(), None);
        assert_eq!(p(&[5]).degree(), Some(0));
        assert_eq!(p(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn divmod_examples() {
        // (x^2 - 1) / (x - 1)
        assert_eq!(p(&[-1, 0, 1]).divmod(&p(&[-1, 1])).unwrap(), (p(&[1, 1]), RatPoly::zero()));
        // x^3 / x^2
        assert_eq!(p(&[0, 0, 0, 1]).divmod(&p(&[0, 0, 1])).unwrap(), (p(&[0, 1]), RatPoly::zero()));
        // (x^3 + 1) / (x^2 + 1) = x rem (1 - x)
        assert_eq!(p(&[1, 0, 0, 1]).divmod(&p(&[1, 0, 1])).unwrap(), (p(&[0, 1]), p(&[1, -1])));
    }

    #[test]
    fn divmod_by_zero_is_an_error() {
        assert_eq!(p(&[1, 1]).divmod(&RatPoly::zero()), Err(AlgError::ZeroDivisor));
    }

    #[test]
    fn gcd_examples() {
        let f = p(&[3, 0, 6]);
        assert_eq!(f.gcd(&f).unwrap(), f.monic());
        // gcd((x-1)^2, 2x-2) = x-1
        assert_eq!(p(&[1, -2, 1]).gcd(&p(&[-2, 2])).unwrap(), p(&[-1, 1]));
        // gcd(x^2+1, x^2-1) = 1
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[-1, 0, 1])).unwrap(), RatPoly::one());
        assert_eq!(RatPoly::zero().gcd(&p(&[0, 2])).unwrap(), p(&[0, 1]));
        assert_eq!(RatPoly::zero().gcd(&RatPoly::zero()), Err(AlgError::BothZero));
    }

    #[test]
    fn strip_x_examples() {
        assert_eq!(p(&[0, 0, 1]).strip_x_factor().unwrap(), (2, RatPoly::one()));
        assert_eq!(p(&[1, -3, 1]).strip_x_factor().unwrap(), (0, p(&[1, -3, 1])));
        assert_eq!(p(&[0, 0, -1, 1]).strip_x_factor().unwrap(), (2, p(&[-1, 1])));
        assert_eq!(RatPoly::zero().strip_x_factor(), Err(AlgError::ZeroPolynomial));
    }

    #[test]
    fn lcm_of_coprime_is_product() {
        let a = p(&[-1, 1]);
        let b = p(&[1, 1]);
        assert_eq!(a.lcm(&b), p(&[-1, 0, 1]));
        assert_eq!(a.lcm(&a), a);
    }

    #[test]
    fn display_forms() {
        assert_eq!(p(&[1, -2, 1]).to_string(), "x^2 - 2x + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        assert_eq!(RatPoly::zero().to_string(), "0");
        let half = RatPoly::constant(BigRational::new(1.into(), 2.into()));
        assert_eq!((&half * &RatPoly::x()).to_string(), "(1/2)x");
    }

    #[test]
    fn serde_uses_coefficient_strings() {
        let f = p(&[1, -3, 1]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"["1","-3","1"]"#);
        assert_eq!(serde_json::from_str::<RatPoly>(&s).unwrap(), f);
    }

    /// Every monic divisor of `f` (of degree <= 2) with coefficients drawn from `set`.
    fn small_divisors(f: &RatPoly, set: &[i64]) -> Vec<RatPoly> {
        let mut out = vec![RatPoly::one()];
        for &a in set {
            out.push(p(&[a, 1]));
            for &b in set {
                out.push(p(&[a, b, 1]));
            }
        }
        out.into_iter().filter(|d| f.is_divisible_by(d).unwrap()).collect()
    }

    fn small_poly() -> impl Strategy<Value = RatPoly> {
        prop::collection::vec(-3i64..=3, 1..5).prop_map(|c| RatPoly::from_ints(&c))
    }

    proptest! {
        #[test]
        fn divmod_reconstructs(f in small_poly(), g in small_poly()) {
            prop_assume!(!g.is_zero());
            let (q, r) = f.divmod(&g).unwrap();
            prop_assert_eq!(&(&q * &g) + &r, f);
            prop_assert!(r.degree() < g.degree());
        }

        #[test]
        fn gcd_divides_and_is_greatest(a in small_poly(), b in small_poly(), c in small_poly()) {
            // Build inputs with a guaranteed shared factor c.
            let f = &a * &c;
            let g = &b * &c;
            prop_assume!(!(f.is_zero() && g.is_zero()));
            let h = f.gcd(&g).unwrap();
            prop_assert!(h.is_monic());
            prop_assert!(f.is_divisible_by(&h).unwrap());
            prop_assert!(g.is_divisible_by(&h).unwrap());
            let set = [-2, -1, 0, 1, 2];
            let nonzero = if f.is_zero() { &g } else { &f };
            for d in small_divisors(nonzero, &set) {
                if g.is_divisible_by(&d).unwrap() && f.is_divisible_by(&d).unwrap() {
                    prop_assert!(h.is_divisible_by(&d).unwrap(), "{} does not divide gcd {}", d, h);
                }
            }
        }
    }
}
