//! The Rabier function `ν_f(x) = min_{Σ|λ_i| = 1} ‖Σ λ_i ∇f_i(x)‖`.
//!
//! Each sign orthant `λ = s ⊙ μ` with `μ` on the probability simplex gives a
//! convex QP `min μᵀ (S J Jᵀ S) μ`, solved with away-step Frank–Wolfe and
//! exact line search. Patterns `s` and `−s` give the same value, so only
//! patterns with `s_1 = +1` are enumerated.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::poly::PolyMap;

pub const MAX_COMPONENTS: usize = 16;
const MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RabierResult {
    pub value: f64,
    pub weights: Vec<f64>,
    pub orthant: Vec<i8>,
    /// False when some orthant QP hit its iteration cap.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RabierError {
    #[error("{0} components exceed the orthant-enumeration limit of 16")]
    TooManyComponents(usize),
    #[error("point has {got} coordinates, map has {expected} variables")]
    Dimension { expected: usize, got: usize },
    #[error("Jacobian has non-finite entries")]
    NonFinite,
    #[error("inner QP hit its iteration cap; best value {}", .0.value)]
    BudgetExceeded(Box<RabierResult>),
}

pub fn rabier_nu(f: &PolyMap, x: &[f64]) -> Result<RabierResult, RabierError> {
    if x.len() != f.nvars() {
        return Err(RabierError::Dimension {
            expected: f.nvars(),
            got: x.len(),
        });
    }
    rabier_from_jacobian(&f.jacobian(x))
}

/// `ν` for an `m x n` Jacobian, rows being the component gradients.
pub fn rabier_from_jacobian(j: &DMatrix<f64>) -> Result<RabierResult, RabierError> {
    let m = j.nrows();
    if m > MAX_COMPONENTS {
        return Err(RabierError::TooManyComponents(m));
    }
    if j.iter().any(|v| !v.is_finite()) {
        return Err(RabierError::NonFinite);
    }
    let mut e1 = vec![0.0; m];
    e1[0] = 1.0;
    if j.iter().all(|&v| v == 0.0) {
        return Ok(RabierResult {
            value: 0.0,
            weights: e1,
            orthant: vec![1; m],
            converged: true,
        });
    }
    // ν is positively homogeneous in J; the QP runs on J / max|J_ij| so the
    // Gram matrix cannot overflow.
    let scale = j.amax();
    let js = j / scale;
    let gram = &js * js.transpose();
    let fro2 = js.norm_squared();
    let count = 1usize << (m - 1);
    let solve = |p: usize| {
        let signs = orthant_signs(p, m);
        let (mu, ok) = simplex_qp(&gram, &signs, 1e-12 * (1.0 + fro2));
        let lambda: Vec<f64> = mu.iter().zip(&signs).map(|(u, &s)| u * s as f64).collect();
        let value = scale * (js.transpose() * DVector::from_column_slice(&lambda)).norm();
        (value, lambda, signs, ok)
    };
    let results: Vec<_> = if count >= 32 {
        (0..count).into_par_iter().map(solve).collect()
    } else {
        (0..count).map(solve).collect()
    };
    let vmin = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let tie = 1e-12 * (vmin + scale * fro2.sqrt());
    let converged = results.iter().all(|r| r.3);
    // Patterns are enumerated in lexicographic order with + before −.
    let best = results
        .into_iter()
        .find(|r| r.0 <= vmin + tie)
        .expect("at least one orthant");
    let out = RabierResult {
        value: best.0,
        weights: best.1,
        orthant: best.2,
        converged,
    };
    if converged {
        Ok(out)
    } else {
        Err(RabierError::BudgetExceeded(Box::new(out)))
    }
}

/// Sign pattern number `p` among those with a leading `+`, most significant
/// component first.
fn orthant_signs(p: usize, m: usize) -> Vec<i8> {
    (0..m)
        .map(|i| {
            if i == 0 {
                1
            } else if (p >> (m - 1 - i)) & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect()
}

/// Away-step Frank–Wolfe for `min μᵀ G_s μ` on the simplex, where
/// `G_s = S G S`. Returns the minimizer and whether the gap test passed.
fn simplex_qp(gram: &DMatrix<f64>, signs: &[i8], tol: f64) -> (Vec<f64>, bool) {
    let m = signs.len();
    let g = DMatrix::from_fn(m, m, |a, b| gram[(a, b)] * (signs[a] * signs[b]) as f64);
    let mut mu = DVector::from_element(m, 1.0 / m as f64);
    let mut gm = &g * &mu;
    for _ in 0..MAX_ITER {
        let q = mu.dot(&gm);
        // ∇q = 2 G μ; vertices are compared through G μ.
        let s = gm.argmin().0;
        let gap = 2.0 * (q - gm[s]);
        if gap <= tol {
            return (mu.as_slice().to_vec(), true);
        }
        let a = (0..m)
            .filter(|&i| mu[i] > 0.0)
            .max_by(|&i, &k| gm[i].total_cmp(&gm[k]))
            .expect("simplex point has support");
        let fw_gain = q - gm[s];
        let away_gain = gm[a] - q;
        let (d, gmax) = if fw_gain >= away_gain || mu[a] >= 1.0 {
            let mut d = -&mu;
            d[s] += 1.0;
            (d, 1.0)
        } else {
            let mut d = mu.clone();
            d[a] -= 1.0;
            (d, mu[a] / (1.0 - mu[a]))
        };
        let gd = &g * &d;
        let curv = d.dot(&gd);
        let slope = d.dot(&gm);
        let gamma = if curv > 0.0 {
            (-slope / curv).clamp(0.0, gmax)
        } else {
            gmax
        };
        if gamma == 0.0 {
            return (mu.as_slice().to_vec(), true);
        }
        mu += &d * gamma;
        for v in mu.iter_mut() {
            if *v < 1e-300 {
                *v = 0.0;
            }
        }
        let total = mu.sum();
        mu /= total;
        gm = &g * &mu;
    }
    (mu.as_slice().to_vec(), false)
}
