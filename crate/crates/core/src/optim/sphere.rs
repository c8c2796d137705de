//! Riemannian Newton minimization on the sphere `‖x‖ = R`.
//!
//! The tangent-space Hessian is `Qᵀ H Q − (uᵀg / R) I` with `u = x/R` and
//! `Q` an orthonormal basis of `u^⊥`; steps are retracted by `R·y/‖y‖`.

use nalgebra::DVector;

use super::objective::Objective;
use crate::linalg::{modified_newton_direction, tangent_basis};

#[derive(Debug, Clone)]
pub struct SphereOptions {
    pub max_iter: usize,
    /// Converged when `‖grad_R φ‖ ≤ gtol (1 + |φ|)`.
    pub gtol: f64,
}

impl Default for SphereOptions {
    fn default() -> Self {
        SphereOptions {
            max_iter: 200,
            gtol: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SphereResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn retract(y: DVector<f64>, radius: f64) -> DVector<f64> {
    let n = y.norm();
    y * (radius / n)
}

pub fn minimize_on_sphere(
    obj: &dyn Objective,
    x0: &[f64],
    radius: f64,
    opts: &SphereOptions,
) -> SphereResult {
    let mut x = retract(DVector::from_column_slice(x0), radius);
    let mut iterations = 0;
    loop {
        let e = obj.eval(x.as_slice());
        let u = &x / radius;
        let radial = u.dot(&e.grad);
        let gr = &e.grad - &u * radial;
        let gnorm = gr.norm();
        let done = |converged: bool, it: usize| SphereResult {
            x: x.as_slice().to_vec(),
            value: e.value,
            grad_norm: gnorm,
            iterations: it,
            converged,
        };
        if !e.value.is_finite() || !gnorm.is_finite() {
            return done(false, iterations);
        }
        if gnorm <= opts.gtol * (1.0 + e.value.abs()) {
            return done(true, iterations);
        }
        if iterations >= opts.max_iter {
            return done(false, iterations);
        }
        iterations += 1;

        let q = tangent_basis(&u);
        let gq = q.transpose() * &e.grad;
        let mut hq = q.transpose() * &e.hess * &q;
        for i in 0..hq.nrows() {
            hq[(i, i)] -= radial / radius;
        }
        let mut d = &q * modified_newton_direction(&hq, &gq);
        if !(d.dot(&gr) < 0.0) || d.iter().any(|v| !v.is_finite()) {
            d = -&gr;
        }
        // Keep steps well inside a quarter turn so the retraction stays monotone.
        let cap = 0.5 * radius;
        if d.norm() > cap {
            d *= cap / d.norm();
        }
        // Once the predicted decrease is below the resolution of φ, values
        // can no longer rank steps; accept the full Newton step if it
        // shrinks the Riemannian gradient.
        if -d.dot(&gr) <= 1e-13 * (1.0 + e.value.abs()) {
            let xn = retract(&x + &d, radius);
            let gn = riemannian_grad_norm(obj, &xn, radius);
            if gn < 0.5 * gnorm {
                x = xn;
                continue;
            }
            return done(gnorm <= 1e-6 * (1.0 + e.value.abs()), iterations);
        }
        let accepted = armijo(obj, &x, e.value, &gr, &d, radius).or_else(|| {
            let mut s = -&gr;
            if s.norm() > cap {
                s *= cap / s.norm();
            }
            armijo(obj, &x, e.value, &gr, &s, radius)
        });
        match accepted {
            Some(xn) => x = xn,
            None => {
                // Roundoff floor: no representable decrease remains.
                return done(gnorm <= 1e-6 * (1.0 + e.value.abs()), iterations);
            }
        }
    }
}

fn riemannian_grad_norm(obj: &dyn Objective, x: &DVector<f64>, radius: f64) -> f64 {
    let g = obj.eval(x.as_slice()).grad;
    let u = x / radius;
    (&g - &u * u.dot(&g)).norm()
}

fn armijo(
    obj: &dyn Objective,
    x: &DVector<f64>,
    f0: f64,
    gr: &DVector<f64>,
    d: &DVector<f64>,
    radius: f64,
) -> Option<DVector<f64>> {
    let slope = gr.dot(d);
    if !(slope < 0.0) {
        return None;
    }
    let mut t = 1.0;
    for _ in 0..60 {
        let xt = retract(x + d * t, radius);
        let ft = obj.value(xt.as_slice());
        if ft.is_finite() && ft <= f0 + 1e-4 * t * slope {
            return Some(xt);
        }
        t *= 0.5;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::PenalizedScalarization;
    use crate::poly::PolyMap;

    #[test]
    fn linear_objective_reaches_antipode() {
        let f = PolyMap::parse("x1 + 2*x2 - 2*x3", 3).unwrap();
        let obj = PenalizedScalarization::weighted(&f, vec![1.0]);
        let r = minimize_on_sphere(&obj, &[1.0, 0.3, 0.2], 3.0, &SphereOptions::default());
        assert!(r.converged);
        // minimum of ⟨a,x⟩ on the 3-sphere is −3‖a‖ = −9
        assert!((r.value + 9.0).abs() < 1e-9);
        let nx: f64 = r.x.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((nx - 3.0).abs() < 1e-12);
    }

    #[test]
    fn motzkin_axis_escape() {
        let m = PolyMap::parse("x1^2*x2^4 + x1^4*x2^2 - 3*x1^2*x2^2 + 1", 2).unwrap();
        let obj = PenalizedScalarization::weighted(&m, vec![1.0]);
        let r = minimize_on_sphere(&obj, &[1.0, 0.05], 100.0, &SphereOptions::default());
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-3, "{}", r.value);
    }
}
