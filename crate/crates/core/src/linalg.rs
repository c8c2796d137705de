//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

/// `min ‖A v‖` over unit `v` in the column space dimension. Zero when the
/// matrix has more columns than rows, since the columns are then dependent.
pub fn column_sigma_min(a: &DMatrix<f64>) -> f64 {
    if a.ncols() == 0 {
        return f64::INFINITY;
    }
    if a.ncols() > a.nrows() {
        return 0.0;
    }
    if a.iter().any(|v| !v.is_finite()) {
        return f64::NAN;
    }
    a.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `min ‖Aᵀ u‖` over unit `u`: zero iff the rows are linearly dependent.
pub fn row_sigma_min(a: &DMatrix<f64>) -> f64 {
    column_sigma_min(&a.transpose())
}

/// Orthonormal basis (as columns) of the complement of the unit vector `u`.
pub fn tangent_basis(u: &DVector<f64>) -> DMatrix<f64> {
    let n = u.len();
    if n <= 1 {
        return DMatrix::zeros(n, 0);
    }
    // Householder reflection mapping e_k to ±u, with k the largest entry.
    let k = u.iamax();
    let mut v = u.clone();
    let s = if u[k] >= 0.0 { 1.0 } else { -1.0 };
    v[k] += s;
    let vv = v.dot(&v);
    let mut q = DMatrix::zeros(n, n - 1);
    let mut col = 0;
    for j in 0..n {
        if j == k {
            continue;
        }
        for i in 0..n {
            let e = if i == j { 1.0 } else { 0.0 };
            q[(i, col)] = e - 2.0 * v[i] * v[j] / vv;
        }
        col += 1;
    }
    q
}

/// Newton direction with the Hessian spectrum replaced by `max(|λ|, floor)`,
/// so the result is always a descent direction.
pub fn modified_newton_direction(h: &DMatrix<f64>, g: &DVector<f64>) -> DVector<f64> {
    let n = g.len();
    if n == 0 {
        return DVector::zeros(0);
    }
    let sym = (h + h.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let scale = eig.eigenvalues.amax();
    let floor = (1e-10 * scale).max(1e-12);
    let mut d = DVector::zeros(n);
    for i in 0..n {
        let v = eig.eigenvectors.column(i);
        let lam = eig.eigenvalues[i].abs().max(floor);
        d -= v * (v.dot(g) / lam);
    }
    d
}
