use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Euler's totient by trial division.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "phi is defined for positive integers");
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// All `n` with `phi(n) = m`.
///
/// `phi(n) >= sqrt(n / 2)` for every `n >= 1`, so `phi(n) = m` forces
/// `n <= 2 m^2` and the search below is exhaustive.
pub fn inverse_phi(m: u64) -> BTreeSet<u64> {
    assert!(m >= 1, "inverse_phi needs m >= 1");
    (1..=2 * m * m).filter(|&n| euler_phi(n) == m).collect()
}

/// Orders of roots of unity that can occur among the eigenvalues of an integer
/// `d x d` matrix, and the largest possible multiplicative period `s_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderBoundTable {
    pub d: usize,
    /// Every `n` with `phi(n) <= d`, ascending.
    pub admissible_orders: Vec<u64>,
    /// Max of `lcm(n_1, ..., n_r)` over sets of distinct admissible orders with `sum phi(n_i) <= d`.
    pub s_max: u64,
}

pub fn order_bound(d: usize) -> OrderBoundTable {
    assert!(d >= 1, "dimension must be positive");
    let budget = d as u64;
    let admissible: Vec<u64> = (1..=budget).flat_map(inverse_phi).collect::<BTreeSet<_>>().into_iter().collect();
    let weights: Vec<u64> = admissible.iter().map(|&n| euler_phi(n)).collect();
    let mut best = 1;
    best_lcm(&admissible, &weights, 0, budget, 1, &mut best);
    OrderBoundTable { d, admissible_orders: admissible, s_max: best }
}

/// Exhaustive subset enumeration, pruned only by the degree budget.
fn best_lcm(orders: &[u64], weights: &[u64], from: usize, budget: u64, acc: u64, best: &mut u64) {
    *best = (*best).max(acc);
    for i in from..orders.len() {
        if weights[i] <= budget {
            best_lcm(orders, weights, i + 1, budget - weights[i], acc.lcm(&orders[i]), best);
        }
    }
}
