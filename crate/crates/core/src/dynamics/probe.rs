use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::torus::{affine_eval, matrix_to_f64};
use super::{AffineMap, DynamicsError, TorusPoint};
use crate::exactalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Selected iterate indices, ascending.
    pub subsequence: Vec<u64>,
    /// Largest torus distance between any two selected iterates at any grid point.
    pub max_deviation: f64,
}

struct Iterate {
    index: u64,
    matrix: IntMatrix,
    translation: TorusPoint,
}

/// Looks for iterates `phi^n`, `n` in `indices`, that agree pointwise on `grid`.
///
/// Iterates are grouped by their exact linear part `A^n`. Inside each group
/// the translation parts `phi^n(0)` are linked whenever their torus distance is
/// below `tol`, and the largest linked cluster over all groups is returned
/// (ties go to the cluster with the smallest first index). Its deviation is
/// then measured at every grid point.
pub fn convergence_probe(
    phi: &AffineMap,
    indices: &[u64],
    grid: &[TorusPoint],
    tol: f64,
) -> Result<ConvergenceReport, DynamicsError> {
    if indices.is_empty() {
        return Err(DynamicsError::InvalidArgument("indices must be nonempty".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(DynamicsError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if grid.is_empty() {
        return Err(DynamicsError::InvalidArgument("grid must be nonempty".into()));
    }
    if let Some(p) = grid.iter().find(|p| p.dim() != phi.dim()) {
        return Err(DynamicsError::DimensionMismatch { expected: phi.dim(), found: p.dim() });
    }

    let iterates = collect_iterates(phi, indices);

    // Group by exact matrix, keeping first-appearance order.
    let mut group_of: HashMap<&IntMatrix, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (pos, it) in iterates.iter().enumerate() {
        let g = *group_of.entry(&it.matrix).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(pos);
    }

    let mut best: Vec<usize> = Vec::new();
    for group in &groups {
        for cluster in link_clusters(group, &iterates, tol) {
            let better = cluster.len() > best.len()
                || (cluster.len() == best.len()
                    && iterates[cluster[0]].index < best.first().map_or(u64::MAX, |&b| iterates[b].index));
            if better {
                best = cluster;
            }
        }
    }

    let max_deviation = grid_deviation(&best, &iterates, grid);
    let mut subsequence: Vec<u64> = best.iter().map(|&p| iterates[p].index).collect();
    subsequence.sort_unstable();
    Ok(ConvergenceReport { subsequence, max_deviation })
}

fn collect_iterates(phi: &AffineMap, indices: &[u64]) -> Vec<Iterate> {
    let max = *indices.iter().max().expect("nonempty");
    let a = matrix_to_f64(phi.matrix());
    let mut wanted: HashMap<u64, (IntMatrix, TorusPoint)> = HashMap::new();
    let mut power = IntMatrix::identity(phi.dim());
    let mut shift = TorusPoint::zero(phi.dim());
    let needed: std::collections::HashSet<u64> = indices.iter().copied().collect();
    for n in 0..=max {
        if needed.contains(&n) {
            wanted.insert(n, (power.clone(), shift.clone()));
        }
        if n < max {
            power = power.mul(phi.matrix()).expect("same dimension");
            // phi^{n+1}(0) = phi(phi^n(0))
            shift = affine_eval(&a, phi.translation().coords(), shift.coords());
        }
    }
    indices
        .iter()
        .map(|&index| {
            let (matrix, translation) = wanted[&index].clone();
            Iterate { index, matrix, translation }
        })
        .collect()
}

/// Connected components of the "distance below tol" graph, each sorted by position.
fn link_clusters(group: &[usize], iterates: &[Iterate], tol: f64) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; group.len()];
    let mut out = Vec::new();
    for start in 0..group.len() {
        if assigned[start] {
            continue;
        }
        assigned[start] = true;
        let mut stack = vec![start];
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            members.push(group[i]);
            for j in 0..group.len() {
                if !assigned[j] && iterates[group[i]].translation.distance(&iterates[group[j]].translation) < tol {
                    assigned[j] = true;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

fn grid_deviation(selected: &[usize], iterates: &[Iterate], grid: &[TorusPoint]) -> f64 {
    if selected.len() < 2 {
        return 0.0;
    }
    // All selected iterates share one matrix.
    let a = matrix_to_f64(&iterates[selected[0]].matrix);
    let mut worst = 0.0f64;
    for x in grid {
        let images: Vec<TorusPoint> =
            selected.iter().map(|&p| affine_eval(&a, iterates[p].translation.coords(), x.coords())).collect();
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                worst = worst.max(images[i].distance(&images[j]));
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::uniform_grid;
    use std::f64::consts::TAU;

    fn grid() -> Vec<TorusPoint> {
        uniform_grid(2, 8)
    }

    #[test]
    fn identity_keeps_everything() {
        let phi = AffineMap::linear(IntMatrix::identity(2));
        let idx: Vec<u64> = (0..10).collect();
        let r = convergence_probe(&phi, &idx, &grid(), 1e-9).unwrap();
        assert_eq!(r.subsequence, idx);
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn rotation_picks_a_residue_class() {
        let phi = AffineMap::linear(IntMatrix::from_i64(&[&[0, -1], &[1, 0]]));
        let idx: Vec<u64> = (0..=8).collect();
        let r = convergence_probe(&phi, &idx, &grid(), 1e-9).unwrap();
        assert_eq!(r.subsequence, vec![0, 4, 8]);
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn rotation_with_rational_translation() {
        let phi = AffineMap::new(IntMatrix::from_i64(&[&[0, -1], &[1, 0]]), vec![TAU / 3.0, TAU / 5.0]).unwrap();
        let idx: Vec<u64> = (0..=40).collect();
        let r = convergence_probe(&phi, &idx, &grid(), 1e-9).unwrap();
        // 1 + A + A^2 + A^3 = 0, so phi^4 = id exactly.
        assert_eq!(r.subsequence, (0..=40).step_by(4).collect::<Vec<_>>());
        assert!(r.max_deviation < 1e-9);
    }

    #[test]
    fn shear_has_only_singletons() {
        let phi = AffineMap::linear(IntMatrix::from_i64(&[&[1, 1], &[0, 1]]));
        let idx: Vec<u64> = (0..=8).collect();
        let r = convergence_probe(&phi, &idx, &grid(), 1e-9).unwrap();
        assert_eq!(r.subsequence.len(), 1);
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn translation_drift_is_split() {
        // A = I with an irrational-looking rotation: all matrices equal, translations distinct.
        let phi = AffineMap::new(IntMatrix::identity(1), vec![0.5]).unwrap();
        let r = convergence_probe(&phi, &[0, 1, 2, 3], &uniform_grid(1, 4), 1e-6).unwrap();
        assert_eq!(r.subsequence, vec![0]);
    }

    #[test]
    fn argument_errors() {
        let phi = AffineMap::linear(IntMatrix::identity(2));
        assert!(convergence_probe(&phi, &[], &grid(), 1e-9).is_err());
        assert!(convergence_probe(&phi, &[0], &grid(), 0.0).is_err());
        assert!(convergence_probe(&phi, &[0], &[], 1e-9).is_err());
        assert!(convergence_probe(&phi, &[0], &uniform_grid(3, 2), 1e-9).is_err());
    }
}
