//! Levenberg–Marquardt for nonlinear least squares `min ½‖r(x)‖²`.

use nalgebra::{DMatrix, DVector};

pub trait Residual: Sync {
    fn dim(&self) -> usize;
    /// Residual vector and its Jacobian.
    fn eval(&self, x: &[f64]) -> (DVector<f64>, DMatrix<f64>);
}

#[derive(Debug, Clone)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Success when `‖r‖ ≤ rtol`.
    pub rtol: f64,
    /// Give up when `‖Jᵀr‖_∞ ≤ gtol` (stationary but nonzero residual).
    pub gtol: f64,
    /// Give up when the iterate leaves this ball.
    pub escape_radius: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iter: 200,
            rtol: 1e-12,
            gtol: 1e-15,
            escape_radius: 1e6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmResult {
    pub x: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn levenberg_marquardt(res: &dyn Residual, x0: &[f64], opts: &LmOptions) -> LmResult {
    let n = res.dim();
    let mut x = DVector::from_column_slice(x0);
    let (mut r, mut j) = res.eval(x.as_slice());
    let mut cost = r.norm_squared();
    let mut jtj = j.transpose() * &j;
    let mut g = j.transpose() * &r;
    let mut mu = 1e-3 * jtj.diagonal().amax().max(1e-12);
    let mut nu = 2.0;
    let mut it = 0;
    let result = |x: &DVector<f64>, cost: f64, it: usize, ok: bool| LmResult {
        x: x.as_slice().to_vec(),
        residual_norm: cost.sqrt(),
        iterations: it,
        converged: ok,
    };
    while it < opts.max_iter {
        if !cost.is_finite() {
            return result(&x, cost, it, false);
        }
        if cost.sqrt() <= opts.rtol {
            return result(&x, cost, it, true);
        }
        if g.amax() <= opts.gtol || x.norm() > opts.escape_radius {
            return result(&x, cost, it, false);
        }
        it += 1;
        let mut a = jtj.clone();
        for i in 0..n {
            a[(i, i)] += mu;
        }
        let Some(h) = a.cholesky().map(|c| c.solve(&(-&g))) else {
            mu *= nu;
            nu *= 2.0;
            continue;
        };
        if h.norm() <= 1e-16 * (x.norm() + 1e-16) {
            return result(&x, cost, it, cost.sqrt() <= opts.rtol);
        }
        let xn = &x + &h;
        let (rn, jn) = res.eval(xn.as_slice());
        let cost_n = rn.norm_squared();
        let predicted = h.dot(&(&h * mu - &g));
        let gain = (cost - cost_n) / predicted;
        if cost_n.is_finite() && gain > 0.0 {
            x = xn;
            r = rn;
            j = jn;
            cost = cost_n;
            jtj = j.transpose() * &j;
            g = j.transpose() * &r;
            mu *= (1.0f64 / 3.0).max(1.0 - (2.0 * gain - 1.0).powi(3));
            nu = 2.0;
        } else {
            mu *= nu;
            nu *= 2.0;
            if !mu.is_finite() {
                break;
            }
        }
    }
    let ok = cost.sqrt() <= opts.rtol;
    result(&x, cost, it, ok)
}
