//! Lattice polytopes with exact integer face computations.

use std::collections::BTreeSet;

use num::integer::Integer;
use num::{BigInt, BigRational, Zero};
use serde::Serialize;

use super::lp::in_convex_hull;

/// Convex hull of finitely many integer points, stored by its vertices in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticePolytope {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
}

/// A face given by a primitive integer outer normal and its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolytopeFace {
    pub normal: Vec<i64>,
    pub vertices: Vec<Vec<i64>>,
}

pub fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

impl LatticePolytope {
    /// Hull of `points` with interior and non-extreme points removed by exact
    /// membership tests.
    pub fn from_points(dim: usize, points: &[Vec<i64>]) -> Self {
        let uniq: BTreeSet<Vec<i64>> = points.iter().cloned().collect();
        let uniq: Vec<Vec<i64>> = uniq.into_iter().collect();
        let vertices = uniq
            .iter()
            .enumerate()
            .filter(|(k, p)| {
                let others: Vec<Vec<i64>> = uniq
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j != k)
                    .map(|(_, q)| q.clone())
                    .collect();
                !in_convex_hull(p, &others)
            })
            .map(|(_, p)| p.clone())
            .collect();
        LatticePolytope { dim, vertices }
    }

    /// `h(w) = max ⟨w, v⟩` over the vertices.
    pub fn support(&self, w: &[i64]) -> i128 {
        self.vertices
            .iter()
            .map(|v| dot(w, v))
            .max()
            .expect("polytope has a vertex")
    }

    /// Support function at a rational direction.
    pub fn support_rational(&self, w: &[BigRational]) -> BigRational {
        self.vertices
            .iter()
            .map(|v| {
                v.iter()
                    .zip(w)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + b * BigInt::from(*a))
            })
            .max()
            .expect("polytope has a vertex")
    }

    /// Vertices maximizing `⟨w, ·⟩`.
    pub fn argmax(&self, w: &[i64]) -> Vec<Vec<i64>> {
        let h = self.support(w);
        self.vertices
            .iter()
            .filter(|v| dot(w, v) == h)
            .cloned()
            .collect()
    }

    /// Minkowski sum, pruned to its vertices.
    pub fn minkowski_sum(parts: &[LatticePolytope]) -> LatticePolytope {
        let dim = parts[0].dim;
        let mut acc: Vec<Vec<i64>> = vec![vec![0; dim]];
        for p in parts {
            let mut next = BTreeSet::new();
            for a in &acc {
                for v in &p.vertices {
                    next.insert(a.iter().zip(v).map(|(x, y)| x + y).collect::<Vec<i64>>());
                }
            }
            // Pruning after each step keeps the candidate set small.
            acc = LatticePolytope::from_points(dim, &next.into_iter().collect::<Vec<_>>()).vertices;
        }
        LatticePolytope { dim, vertices: acc }
    }

    /// Every proper face, as (primitive relative-interior normal, vertex set),
    /// ordered by dimension then vertex list.
    pub fn faces(&self) -> Vec<PolytopeFace> {
        let basis = lineality_basis(&self.vertices);
        let d = basis.len();
        if d == 0 {
            return Vec::new();
        }
        // Facets: hyperplanes within the affine hull through d vertices.
        let mut facets: Vec<(Vec<i64>, BTreeSet<usize>)> = Vec::new();
        for subset in combinations(self.vertices.len(), d) {
            let Some(w) = facet_normal(&self.vertices, &subset, &basis) else {
                continue;
            };
            let vals: Vec<i128> = self.vertices.iter().map(|v| dot(&w, v)).collect();
            let h = vals[subset[0]];
            let w = if vals.iter().all(|&x| x <= h) {
                w
            } else if vals.iter().all(|&x| x >= h) {
                w.iter().map(|x| -x).collect()
            } else {
                continue;
            };
            let h = self.support(&w);
            let set: BTreeSet<usize> = (0..self.vertices.len())
                .filter(|&k| dot(&w, &self.vertices[k]) == h)
                .collect();
            if !facets.iter().any(|(_, s)| *s == set) {
                facets.push((w, set));
            }
        }
        // Close under intersection.
        let mut faces: Vec<BTreeSet<usize>> = facets.iter().map(|(_, s)| s.clone()).collect();
        let mut k = 0;
        while k < faces.len() {
            for j in 0..facets.len() {
                let inter: BTreeSet<usize> = faces[k].intersection(&facets[j].1).copied().collect();
                if !inter.is_empty() && !faces.contains(&inter) {
                    faces.push(inter);
                }
            }
            k += 1;
        }
        let mut out: Vec<PolytopeFace> = faces
            .into_iter()
            .map(|set| {
                let mut w = vec![0i64; self.dim];
                for (fw, fs) in &facets {
                    if set.is_subset(fs) {
                        for (a, b) in w.iter_mut().zip(fw) {
                            *a += b;
                        }
                    }
                }
                let w = primitive(w);
                PolytopeFace {
                    vertices: set.iter().map(|&i| self.vertices[i].clone()).collect(),
                    normal: w,
                }
            })
            .collect();
        out.sort_by(|a, b| {
            a.vertices
                .len()
                .cmp(&b.vertices.len())
                .then_with(|| a.vertices.cmp(&b.vertices))
        });
        debug_assert!(out.iter().all(|f| self.argmax(&f.normal) == f.vertices));
        out
    }
}

/// Divides out the gcd of the entries.
pub fn primitive(w: Vec<i64>) -> Vec<i64> {
    let g = w.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g <= 1 {
        return w;
    }
    w.into_iter().map(|x| x / g).collect()
}

/// Integer basis of the linear space spanned by differences `v − v_0`.
fn lineality_basis(vertices: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let Some(v0) = vertices.first() else {
        return Vec::new();
    };
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for v in &vertices[1..] {
        let diff: Vec<i64> = v.iter().zip(v0).map(|(a, b)| a - b).collect();
        let mut trial = basis.clone();
        trial.push(diff.clone());
        if rank(&trial) == trial.len() {
            basis = trial;
        }
    }
    basis
}

/// Rank of an integer matrix by fraction-free elimination.
pub(crate) fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for k in 0..ncols {
                    m[i][k] = m[i][k] * a - m[r][k] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    for x in m[i].iter_mut() {
                        *x /= g;
                    }
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, &x)| x).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

/// Normal `w = B c` in the span `B` of the affine hull, orthogonal to the
/// differences of the chosen vertices; `None` when they are not affinely
/// independent.
fn facet_normal(vertices: &[Vec<i64>], subset: &[usize], basis: &[Vec<i64>]) -> Option<Vec<i64>> {
    let d = basis.len();
    let s0 = &vertices[subset[0]];
    // (d−1) x d system A[j][k] = ⟨b_k, s_j − s_0⟩.
    let a: Vec<Vec<i128>> = subset[1..]
        .iter()
        .map(|&j| {
            let diff: Vec<i64> = vertices[j].iter().zip(s0).map(|(x, y)| x - y).collect();
            basis.iter().map(|b| dot(b, &diff)).collect()
        })
        .collect();
    // Generalized cross product: c_k = (−1)^k det(A without column k).
    let c: Vec<i128> = (0..d)
        .map(|k| {
            let minor: Vec<Vec<i128>> = a
                .iter()
                .map(|r| r.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, &x)| x).collect())
                .collect();
            let s = if k % 2 == 0 { 1 } else { -1 };
            s * det(&minor)
        })
        .collect();
    if c.iter().all(|&x| x == 0) {
        return None;
    }
    let n = basis[0].len();
    let w: Vec<i128> = (0..n)
        .map(|i| (0..d).map(|k| c[k] * basis[k][i] as i128).sum())
        .collect();
    let g = w.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g == 0 {
        return None;
    }
    Some(w.into_iter().map(|x| (x / g) as i64).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
