//! Deterministic greedy clustering of value points.

use serde::Serialize;

use crate::linalg::{dist, norm};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub center: Vec<f64>,
    pub count: usize,
}

/// Scale-relative cluster radius `tol·(1 + ‖t‖)`.
pub fn relative_tol(tol: f64, t: &[f64]) -> f64 {
    tol * (1.0 + norm(t))
}

/// Groups points whose distance to a cluster's founding point is at most
/// `tol·(1 + ‖founder‖)`. Input order does not matter: points are sorted
/// lexicographically first.
pub fn cluster_points(points: &[Vec<f64>], tol: f64) -> Vec<Cluster> {
    let mut sorted: Vec<&Vec<f64>> = points.iter().filter(|p| p.iter().all(|v| v.is_finite())).collect();
    sorted.sort_by(|a, b| lex_cmp(a, b));
    let mut founders: Vec<&Vec<f64>> = Vec::new();
    let mut members: Vec<Vec<&Vec<f64>>> = Vec::new();
    for p in sorted {
        let hit = founders
            .iter()
            .position(|f| dist(f, p) <= relative_tol(tol, f));
        match hit {
            Some(k) => members[k].push(p),
            None => {
                founders.push(p);
                members.push(vec![p]);
            }
        }
    }
    members
        .into_iter()
        .map(|ms| {
            let m = ms[0].len();
            let mut c = vec![0.0; m];
            for p in &ms {
                for (ci, v) in c.iter_mut().zip(p.iter()) {
                    *ci += v;
                }
            }
            let k = ms.len() as f64;
            Cluster {
                center: c.into_iter().map(|v| v / k).collect(),
                count: ms.len(),
            }
        })
        .collect()
}

pub fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}
