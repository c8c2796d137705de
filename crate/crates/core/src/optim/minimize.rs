//! Damped modified-Newton minimization on `R^n`.

use nalgebra::DVector;
use serde::Serialize;

use super::objective::Objective;
use crate::linalg::{modified_newton_direction, norm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinStatus {
    Converged,
    /// The iterate left the ball of radius `escape_radius`.
    Escaped,
    /// The objective dropped below `diverge_below`.
    Diverged,
    MaxIter,
    /// No acceptable step could be found.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct MinimizeOptions {
    pub max_iter: usize,
    /// Converged when `‖∇φ‖ ≤ gtol (1 + |φ|)`.
    pub gtol: f64,
    pub escape_radius: f64,
    pub diverge_below: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            max_iter: 500,
            gtol: 1e-10,
            escape_radius: f64::INFINITY,
            diverge_below: f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub status: MinStatus,
    /// Whether the last accepted steps were still lowering the objective
    /// by a non-negligible amount.
    pub decreasing: bool,
}

const ARMIJO: f64 = 1e-4;

pub fn minimize(obj: &dyn Objective, x0: &[f64], opts: &MinimizeOptions) -> MinResult {
    let mut x = DVector::from_column_slice(x0);
    let mut e = obj.eval(x.as_slice());
    let mut decreasing = true;
    let mut iterations = 0;
    let finish = |x: &DVector<f64>, value: f64, g: f64, it: usize, st: MinStatus, dec: bool| MinResult {
        x: x.as_slice().to_vec(),
        value,
        grad_norm: g,
        iterations: it,
        status: st,
        decreasing: dec,
    };
    loop {
        let gnorm = e.grad.norm();
        if !e.value.is_finite() || !gnorm.is_finite() {
            let st = if e.value == f64::NEG_INFINITY {
                MinStatus::Diverged
            } else {
                MinStatus::Stalled
            };
            return finish(&x, e.value, gnorm, iterations, st, decreasing);
        }
        if gnorm <= opts.gtol * (1.0 + e.value.abs()) {
            return finish(&x, e.value, gnorm, iterations, MinStatus::Converged, false);
        }
        if iterations >= opts.max_iter {
            return finish(&x, e.value, gnorm, iterations, MinStatus::MaxIter, decreasing);
        }
        iterations += 1;

        let mut d = modified_newton_direction(&e.hess, &e.grad);
        if !(d.dot(&e.grad) < 0.0) || d.iter().any(|v| !v.is_finite()) {
            d = -&e.grad;
        }
        // Below the resolution of φ, rank full Newton steps by the gradient.
        if -d.dot(&e.grad) <= 1e-13 * (1.0 + e.value.abs()) {
            let xn = &x + &d;
            let en = obj.eval(xn.as_slice());
            if en.grad.norm() < 0.5 * gnorm && en.value.is_finite() {
                x = xn;
                e = en;
                continue;
            }
            let st = if gnorm <= 1e-6 * (1.0 + e.value.abs()) {
                MinStatus::Converged
            } else {
                MinStatus::Stalled
            };
            return finish(&x, e.value, gnorm, iterations, st, false);
        }
        let step = line_search(obj, &x, e.value, &e.grad, &d)
            .or_else(|| line_search(obj, &x, e.value, &e.grad, &(-&e.grad)));
        let Some((xn, vn)) = step else {
            return finish(&x, e.value, gnorm, iterations, MinStatus::Stalled, false);
        };
        decreasing = e.value - vn > 1e-12 * (1.0 + e.value.abs());
        let moved = (&xn - &x).norm();
        x = xn;
        if vn < opts.diverge_below {
            return finish(&x, vn, gnorm, iterations, MinStatus::Diverged, true);
        }
        if norm(x.as_slice()) > opts.escape_radius {
            return finish(&x, vn, gnorm, iterations, MinStatus::Escaped, true);
        }
        e = obj.eval(x.as_slice());
        if moved <= 1e-15 * (1.0 + x.norm()) {
            let gnorm = e.grad.norm();
            return finish(&x, e.value, gnorm, iterations, MinStatus::Stalled, false);
        }
    }
}

/// Armijo backtracking; after a full step is accepted, keeps doubling the
/// step while the objective keeps falling, so unbounded valleys are crossed
/// in few iterations.
fn line_search(
    obj: &dyn Objective,
    x: &DVector<f64>,
    f0: f64,
    g: &DVector<f64>,
    d: &DVector<f64>,
) -> Option<(DVector<f64>, f64)> {
    let slope = g.dot(d);
    if !(slope < 0.0) {
        return None;
    }
    let mut t = 1.0;
    for _ in 0..60 {
        let xt = x + d * t;
        let ft = obj.value(xt.as_slice());
        if ft.is_finite() && ft <= f0 + ARMIJO * t * slope {
            if t == 1.0 {
                let (mut best_x, mut best_f) = (xt, ft);
                let mut s = 2.0;
                for _ in 0..40 {
                    let xs = x + d * s;
                    let fs = obj.value(xs.as_slice());
                    if !(fs < best_f) {
                        break;
                    }
                    best_x = xs;
                    best_f = fs;
                    s *= 2.0;
                }
                return Some((best_x, best_f));
            }
            return Some((xt, ft));
        }
        t *= 0.5;
    }
    None
}
