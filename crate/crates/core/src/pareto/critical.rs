//! Sampling of critical values `K₀(f)`.
//!
//! A point is critical when `Df(x)` is not surjective, i.e. some unit
//! `u ∈ R^m` has `Df(x)ᵀu = 0`. Each start solves that square-ish system in
//! `(x, u)` by Levenberg–Marquardt.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::{cluster_points, Cluster};
use crate::linalg::row_sigma_min;
use crate::optim::{levenberg_marquardt, LmOptions, Residual};
use crate::poly::PolyMap;
use crate::sampling::halton_box;
use crate::tangency::CLUSTER_TOL;

#[derive(Debug, Clone, Serialize)]
pub struct CriticalBudget {
    pub n_starts: usize,
    pub box_radius: f64,
}

impl Default for CriticalBudget {
    fn default() -> Self {
        CriticalBudget {
            n_starts: 4096,
            box_radius: 3.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalValues {
    pub clusters: Vec<Cluster>,
    /// Set when `n ≤ m`; nothing is sampled then.
    pub degenerate_dimension: bool,
    pub starts: usize,
    pub critical_points: usize,
}

struct CokernelResidual<'a>(&'a PolyMap);

impl Residual for CokernelResidual<'_> {
    fn dim(&self) -> usize {
        self.0.nvars() + self.0.ncomponents()
    }

    /// `r = [Df(x)ᵀu ; ‖u‖² − 1]`.
    fn eval(&self, z: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let (n, m) = (self.0.nvars(), self.0.ncomponents());
        let (x, u) = z.split_at(n);
        let (_, jac, hess) = self.0.second_order(x);
        let u = DVector::from_column_slice(u);
        let mut r = DVector::zeros(n + 1);
        r.rows_mut(0, n).copy_from(&(jac.transpose() * &u));
        r[n] = u.norm_squared() - 1.0;
        let mut j = DMatrix::zeros(n + 1, n + m);
        for (i, h) in hess.iter().enumerate() {
            let mut block = j.view_mut((0, 0), (n, n));
            block += h * u[i];
        }
        j.view_mut((0, n), (n, m)).copy_from(&jac.transpose());
        for i in 0..m {
            j[(n, n + i)] = 2.0 * u[i];
        }
        (r, j)
    }
}

/// Left singular vector of `Df(x)` for its smallest singular value.
fn weakest_direction(jac: &DMatrix<f64>) -> DVector<f64> {
    let m = jac.nrows();
    let svd = jac.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let k = (0..svd.singular_values.len())
        .min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
        .unwrap_or(0);
    if k < u.ncols() {
        u.column(k).into_owned()
    } else {
        DVector::from_element(m, 1.0 / (m as f64).sqrt())
    }
}

/// Clusters of `f(x)` over sampled critical points `x`.
pub fn sample_critical_values(f: &PolyMap, budget: &CriticalBudget) -> CriticalValues {
    let (n, m) = (f.nvars(), f.ncomponents());
    if n <= m {
        return CriticalValues {
            clusters: Vec::new(),
            degenerate_dimension: true,
            starts: 0,
            critical_points: 0,
        };
    }
    let starts = halton_box(budget.n_starts, n, budget.box_radius);
    let residual = CokernelResidual(f);
    let opts = LmOptions {
        max_iter: 200,
        escape_radius: 1e6,
        ..Default::default()
    };
    let values: Vec<Option<Vec<f64>>> = starts
        .par_iter()
        .map(|x0| {
            let u0 = weakest_direction(&f.jacobian(x0));
            let mut z0 = x0.clone();
            z0.extend(u0.iter());
            let r = levenberg_marquardt(&residual, &z0, &opts);
            let x = &r.x[..n];
            if x.iter().any(|v| !v.is_finite()) {
                return None;
            }
            let jac = f.jacobian(x);
            let rank_tol = 1e-6 * (jac.norm() + 1.0);
            (row_sigma_min(&jac) <= rank_tol).then(|| f.evaluate(x))
        })
        .collect();
    let found: Vec<Vec<f64>> = values.into_iter().flatten().collect();
    CriticalValues {
        clusters: cluster_points(&found, CLUSTER_TOL),
        degenerate_dimension: false,
        starts: starts.len(),
        critical_points: found.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn motzkin_critical_values() {
        let f = PolyMap::parse("x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1", 2).unwrap();
        let k = sample_critical_values(
            &f,
            &CriticalBudget {
                n_starts: 256,
                box_radius: 3.0,
            },
        );
        let centers: Vec<f64> = k.clusters.iter().map(|c| c.center[0]).collect();
        assert!(centers.iter().any(|c| c.abs() < 1e-6), "{centers:?}");
        assert!(centers.iter().any(|c| (c - 1.0).abs() < 1e-6), "{centers:?}");
    }

    #[test]
    fn linear_function_has_none() {
        let f = PolyMap::parse("x1", 2).unwrap();
        let k = sample_critical_values(&f, &CriticalBudget::default());
        assert!(k.clusters.is_empty());
        let g = PolyMap::parse("x1\nx2", 2).unwrap();
        assert!(sample_critical_values(&g, &CriticalBudget::default()).degenerate_dimension);
    }
}
