use std::f64::consts::TAU;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::DynamicsError;
use crate::exactalg::IntMatrix;

/// Reduces an angle into `[0, 2pi)`.
pub fn reduce_angle(v: f64) -> f64 {
    let r = v.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Circular distance between two angles.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let diff = (a - b).abs().rem_euclid(TAU);
    diff.min(TAU - diff)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords: coords.into_iter().map(reduce_angle).collect() }
    }

    pub fn zero(d: usize) -> Self {
        Self { coords: vec![0.0; d] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Sup over coordinates of the circular distance.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(&a, &b)| angle_distance(a, b)).fold(0.0, f64::max)
    }
}

/// `x -> A x + b` on `R^d / (2 pi Z)^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    a: IntMatrix,
    b: TorusPoint,
}

impl AffineMap {
    pub fn new(a: IntMatrix, b: Vec<f64>) -> Result<Self, DynamicsError> {
        if b.len() != a.dim() {
            return Err(DynamicsError::DimensionMismatch { expected: a.dim(), found: b.len() });
        }
        Ok(Self { a, b: TorusPoint::new(b) })
    }

    pub fn linear(a: IntMatrix) -> Self {
        let d = a.dim();
        Self { a, b: TorusPoint::zero(d) }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn translation(&self) -> &TorusPoint {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

pub(crate) fn matrix_to_f64(a: &IntMatrix) -> Vec<f64> {
    a.entries().iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
}

/// `A x + t` reduced mod 2pi, with `A` given as row-major floats.
pub(crate) fn affine_eval(a: &[f64], t: &[f64], x: &[f64]) -> TorusPoint {
    let d = t.len();
    TorusPoint {
        coords: (0..d)
            .map(|i| {
                let lin: f64 = a[i * d..(i + 1) * d].iter().zip(x).map(|(m, v)| m * v).sum();
                reduce_angle(lin + t[i])
            })
            .collect(),
    }
}

pub fn apply(phi: &AffineMap, x: &TorusPoint) -> Result<TorusPoint, DynamicsError> {
    if x.dim() != phi.dim() {
        return Err(DynamicsError::DimensionMismatch { expected: phi.dim(), found: x.dim() });
    }
    Ok(affine_eval(&matrix_to_f64(&phi.a), phi.b.coords(), x.coords()))
}

/// `[x0, phi(x0), ..., phi^n(x0)]`.
pub fn orbit(phi: &AffineMap, x0: &TorusPoint, n: usize) -> Result<Vec<TorusPoint>, DynamicsError> {
    if n == 0 {
        return Err(DynamicsError::InvalidArgument("orbit length must be positive".into()));
    }
    if x0.dim() != phi.dim() {
        return Err(DynamicsError::DimensionMismatch { expected: phi.dim(), found: x0.dim() });
    }
    let a = matrix_to_f64(&phi.a);
    let mut out = Vec::with_capacity(n + 1);
    out.push(x0.clone());
    for _ in 0..n {
        let next = affine_eval(&a, phi.b.coords(), out.last().expect("nonempty").coords());
        out.push(next);
    }
    Ok(out)
}

/// Total-point budget for grids in dimension above 3.
pub const GRID_POINT_CAP: usize = 32 * 32 * 32;

/// 32 points per axis up to d = 3; above that, the largest per-axis count
/// whose d-th power stays within `GRID_POINT_CAP`, but never fewer than 2.
pub fn default_grid_per_axis(d: usize) -> usize {
    if d <= 3 {
        return 32;
    }
    let mut n = 2usize;
    while (n + 1).checked_pow(d as u32).is_some_and(|p| p <= GRID_POINT_CAP) {
        n += 1;
    }
    n
}

/// Points `2 pi (k_1, ..., k_d) / n` for `0 <= k_j < n`, last coordinate fastest.
pub fn uniform_grid(d: usize, per_axis: usize) -> Vec<TorusPoint> {
    assert!(per_axis >= 1, "grid needs at least one point per axis");
    let total = per_axis.pow(d as u32);
    let step = TAU / per_axis as f64;
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        out.push(TorusPoint { coords: idx.iter().map(|&k| k as f64 * step).collect() });
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < per_axis {
                break;
            }
            *slot = 0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn apply_examples() {
        let id = AffineMap::linear(IntMatrix::identity(2));
        let x = TorusPoint::new(vec![0.3, 5.0]);
        assert_eq!(apply(&id, &x).unwrap(), x);

        let half_turn = AffineMap::new(IntMatrix::identity(2), vec![PI, 0.0]).unwrap();
        let y = apply(&half_turn, &TorusPoint::new(vec![PI, 0.0])).unwrap();
        assert_eq!(y.coords(), &[0.0, 0.0]);

        let shear = AffineMap::linear(IntMatrix::from_i64(&[&[1, 1], &[0, 1]]));
        let z = apply(&shear, &TorusPoint::new(vec![1.0, 2.0])).unwrap();
        assert_eq!(z.coords(), &[3.0, 2.0]);

        assert_eq!(
            apply(&shear, &TorusPoint::zero(3)),
            Err(DynamicsError::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn orbit_examples() {
        let id = AffineMap::linear(IntMatrix::identity(2));
        let x = TorusPoint::new(vec![1.0, 2.0]);
        assert!(orbit(&id, &x, 5).unwrap().iter().all(|p| *p == x));

        let neg = AffineMap::linear(IntMatrix::from_i64(&[&[-1]]));
        let o = orbit(&neg, &TorusPoint::new(vec![1.0]), 2).unwrap();
        assert_eq!(o.len(), 3);
        assert!((o[1].coords()[0] - (TAU - 1.0)).abs() < 1e-12);
        assert!((o[2].coords()[0] - 1.0).abs() < 1e-12);

        let rot = AffineMap::linear(IntMatrix::from_i64(&[&[0, -1], &[1, 0]]));
        let o = orbit(&rot, &TorusPoint::new(vec![1.0, 0.0]), 8).unwrap();
        for k in 1..4 {
            assert!(o[k].distance(&o[0]) > 0.5);
        }
        assert!(o[4].distance(&o[0]) < 1e-12);
        assert!(o[8].distance(&o[0]) < 1e-12);

        assert!(orbit(&rot, &TorusPoint::zero(2), 0).is_err());
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(default_grid_per_axis(2), 32);
        assert_eq!(default_grid_per_axis(4), 13);
        assert!(default_grid_per_axis(20) >= 2);
        let g = uniform_grid(2, 4);
        assert_eq!(g.len(), 16);
        assert_eq!(g[1].coords(), &[0.0, TAU / 4.0]);
        assert_eq!(g[4].coords(), &[TAU / 4.0, 0.0]);
    }

    #[test]
    fn distance_wraps() {
        let a = TorusPoint::new(vec![0.1]);
        let b = TorusPoint::new(vec![TAU - 0.1]);
        assert!((a.distance(&b) - 0.2).abs() < 1e-12);
    }

    /// Exact evaluation in units of full turns: angle = 2 pi * r with r rational.
    fn exact_turns(a: &IntMatrix, b: &[BigRational], x: &[BigRational]) -> Vec<f64> {
        let d = a.dim();
        (0..d)
            .map(|i| {
                let mut acc = b[i].clone();
                for (j, xj) in x.iter().enumerate() {
                    acc += BigRational::from_integer(a.get(i, j).clone()) * xj;
                }
                let frac = &acc - acc.floor();
                let (n, q) = (frac.numer().clone(), frac.denom().clone());
                TAU * (n.to_f64().unwrap() / q.to_f64().unwrap())
            })
            .collect()
    }

    proptest! {
        #[test]
        fn apply_matches_exact_rational_evaluation(
            entries in prop::collection::vec(-3i64..=3, 4),
            num in prop::collection::vec(0i64..12, 4),
            den in prop::collection::vec(1i64..12, 4),
        ) {
            let a = IntMatrix::from_rows(entries.chunks(2).map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()).unwrap();
            let rat = |i: usize| BigRational::new(BigInt::from(num[i] % den[i]), BigInt::from(den[i]));
            let b = vec![rat(0), rat(1)];
            let x = vec![rat(2), rat(3)];
            let to_angle = |r: &BigRational| TAU * r.to_f64().unwrap();
            let phi = AffineMap::new(a.clone(), b.iter().map(to_angle).collect()).unwrap();
            let y = apply(&phi, &TorusPoint::new(x.iter().map(to_angle).collect())).unwrap();
            let exact = exact_turns(&a, &b, &x);
            for (got, want) in y.coords().iter().zip(&exact) {
                prop_assert!(angle_distance(*got, *want) < 1e-12, "{got} vs {want}");
            }
        }
    }
}
