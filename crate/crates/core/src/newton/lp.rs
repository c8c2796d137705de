//! Exact phase-one simplex over the rationals, used for convex-hull
//! membership tests.

use num::{BigInt, BigRational, One, Signed, Zero};

/// Whether `p` lies in the convex hull of `points`.
pub fn in_convex_hull(p: &[i64], points: &[Vec<i64>]) -> bool {
    if points.is_empty() {
        return false;
    }
    // Rows: one per coordinate plus Σλ = 1. Columns: one λ per point.
    let rows = p.len() + 1;
    let cols = points.len();
    let mut a = vec![vec![BigRational::zero(); cols]; rows];
    let mut b = vec![BigRational::zero(); rows];
    for (j, q) in points.iter().enumerate() {
        for (i, &v) in q.iter().enumerate() {
            a[i][j] = rat(v);
        }
        a[rows - 1][j] = BigRational::one();
    }
    for (i, &v) in p.iter().enumerate() {
        b[i] = rat(v);
    }
    b[rows - 1] = BigRational::one();
    feasible(a, b)
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Whether `{λ ≥ 0 : A λ = b}` is nonempty.
fn feasible(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> bool {
    let rows = a.len();
    let cols = a[0].len();
    for i in 0..rows {
        if b[i].is_negative() {
            b[i] = -b[i].clone();
            for v in a[i].iter_mut() {
                *v = -v.clone();
            }
        }
    }
    // Tableau [A | I | b] with artificial basis; objective row minimizes Σ artificials.
    let width = cols + rows;
    let mut t: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut r = a[i].clone();
            r.extend((0..rows).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    // Reduced costs of the phase-one objective: −(sum of rows) on structural columns.
    let mut obj = vec![BigRational::zero(); width + 1];
    for row in &t {
        for (j, v) in row.iter().enumerate() {
            if j < cols || j == width {
                obj[j] -= v;
            }
        }
    }
    loop {
        // Bland's rule: first column with negative reduced cost.
        let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // Unbounded direction cannot occur in phase one; treat as done.
            break;
        };
        let piv = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v = &*v / &piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let factor = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let factor = obj[enter].clone();
            for (v, p) in obj.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        basis[r] = enter;
    }
    // Objective value is −obj[width].
    obj[width].is_zero()
}
