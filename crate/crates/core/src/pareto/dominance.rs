//! Pareto dominance on value vectors.

use crate::cluster::lex_cmp;

/// `p ≤ q` componentwise and `p ≠ q`.
pub fn dominates(p: &[f64], q: &[f64]) -> bool {
    p.iter().zip(q).all(|(a, b)| a <= b) && p.iter().zip(q).any(|(a, b)| a < b)
}

/// `p < q` in every component.
pub fn strictly_dominates(p: &[f64], q: &[f64]) -> bool {
    p.iter().zip(q).all(|(a, b)| a < b)
}

/// Outcome of comparing a value against a pool with a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceTest {
    Undominated,
    /// Dominated, but never strictly better in every component.
    WeaklyUndominated,
    Dominated,
}

/// `q` dominates `v` up to `tol` when `q ≤ v + tol` componentwise and
/// `q_k < v_k − tol` for some `k`.
pub fn test_against(v: &[f64], pool: &[Vec<f64>], tol: f64) -> DominanceTest {
    let mut weak = false;
    for q in pool {
        if q.iter().any(|x| !x.is_finite()) {
            continue;
        }
        if !q.iter().zip(v).all(|(a, b)| *a <= b + tol) {
            continue;
        }
        if q.iter().zip(v).all(|(a, b)| *a < b - tol) {
            return DominanceTest::Dominated;
        }
        if q.iter().zip(v).any(|(a, b)| *a < b - tol) {
            weak = true;
        }
    }
    if weak {
        DominanceTest::WeaklyUndominated
    } else {
        DominanceTest::Undominated
    }
}

/// Flags the points not dominated by any other point of the list. Points
/// with non-finite entries are never flagged and never dominate.
///
/// A dominating point precedes the dominated one lexicographically, so one
/// sweep in lexicographic order against the running front suffices.
pub fn nondominated_flags(points: &[Vec<f64>]) -> Vec<bool> {
    let mut order: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].iter().all(|v| v.is_finite()))
        .collect();
    order.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]).then(a.cmp(&b)));
    let mut flags = vec![false; points.len()];
    let mut front: Vec<usize> = Vec::new();
    for i in order {
        if !front.iter().any(|&j| dominates(&points[j], &points[i])) {
            flags[i] = true;
            front.push(i);
        }
    }
    flags
}

/// The nondominated points, in input order.
pub fn nondominated_filter(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    nondominated_flags(points)
        .into_iter()
        .zip(points)
        .filter(|(k, _)| *k)
        .map(|(_, p)| p.clone())
        .collect()
}
