use nalgebra::{DMatrix, DVector};

use crate::poly::PolyMap;

/// Value, gradient and Hessian at one point.
#[derive(Debug, Clone)]
pub struct Eval {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

/// A twice-differentiable scalar objective on `R^n`.
pub trait Objective: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn eval(&self, x: &[f64]) -> Eval;
}

/// `⟨w, f(x)⟩ + ρ Σ_j max(0, f_j(x) − b_j)²` over the listed `(j, b_j)`.
#[derive(Debug, Clone)]
pub struct PenalizedScalarization<'a> {
    pub map: &'a PolyMap,
    pub weights: Vec<f64>,
    pub penalties: Vec<(usize, f64)>,
    pub rho: f64,
}

impl<'a> PenalizedScalarization<'a> {
    pub fn weighted(map: &'a PolyMap, weights: Vec<f64>) -> Self {
        PenalizedScalarization {
            map,
            weights,
            penalties: Vec::new(),
            rho: 0.0,
        }
    }

    /// Adds a penalty on every component exceeding `bound`.
    pub fn with_sublevel(mut self, bound: &[f64], rho: f64) -> Self {
        self.penalties = bound.iter().copied().enumerate().collect();
        self.rho = rho;
        self
    }

    pub fn scalar_of(&self, fx: &[f64]) -> f64 {
        let mut v: f64 = self.weights.iter().zip(fx).map(|(w, f)| w * f).sum();
        for &(j, b) in &self.penalties {
            let e = (fx[j] - b).max(0.0);
            v += self.rho * e * e;
        }
        v
    }
}

impl Objective for PenalizedScalarization<'_> {
    fn dim(&self) -> usize {
        self.map.nvars()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.scalar_of(&self.map.evaluate(x))
    }

    fn eval(&self, x: &[f64]) -> Eval {
        let n = self.map.nvars();
        let t = self.map.power_table(x);
        let fx: Vec<f64> = self
            .map
            .components()
            .iter()
            .map(|c| c.evaluate_with(&t))
            .collect();
        let jac = self.map.jacobian_with(&t);
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        let mut coef = self.weights.clone();
        for &(j, b) in &self.penalties {
            let e = fx[j] - b;
            if e > 0.0 {
                coef[j] += 2.0 * self.rho * e;
                let gj = jac.row(j).transpose();
                hess += (&gj * gj.transpose()) * (2.0 * self.rho);
            }
        }
        for (i, &c) in coef.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            grad += jac.row(i).transpose() * c;
            hess += self.map.hessian_with(i, &t) * c;
        }
        Eval {
            value: self.scalar_of(&fx),
            grad,
            hess,
        }
    }
}

/// `‖f(x) − c‖²`.
#[derive(Debug, Clone)]
pub struct TargetResidual<'a> {
    pub map: &'a PolyMap,
    pub target: Vec<f64>,
}

impl Objective for TargetResidual<'_> {
    fn dim(&self) -> usize {
        self.map.nvars()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.map
            .evaluate(x)
            .iter()
            .zip(&self.target)
            .map(|(f, c)| (f - c) * (f - c))
            .sum()
    }

    fn eval(&self, x: &[f64]) -> Eval {
        let n = self.map.nvars();
        let t = self.map.power_table(x);
        let jac = self.map.jacobian_with(&t);
        let mut value = 0.0;
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        for (i, c) in self.map.components().iter().enumerate() {
            let r = c.evaluate_with(&t) - self.target[i];
            value += r * r;
            let gi = jac.row(i).transpose();
            grad += &gi * (2.0 * r);
            hess += (&gi * gi.transpose()) * 2.0;
            if r != 0.0 {
                hess += self.map.hessian_with(i, &t) * (2.0 * r);
            }
        }
        Eval { value, grad, hess }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(obj: &dyn Objective, x: &[f64]) {
        let e = obj.eval(x);
        let h = 1e-6;
        for k in 0..x.len() {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[k] += h;
            xm[k] -= h;
            let fd = (obj.value(&xp) - obj.value(&xm)) / (2.0 * h);
            assert!((fd - e.grad[k]).abs() <= 1e-5 * (1.0 + fd.abs()), "grad {}", k);
            let gp = obj.eval(&xp).grad;
            let gm = obj.eval(&xm).grad;
            for j in 0..x.len() {
                let fdh = (gp[j] - gm[j]) / (2.0 * h);
                assert!((fdh - e.hess[(j, k)]).abs() <= 1e-4 * (1.0 + fdh.abs()));
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let f = PolyMap::parse("x3\nx1^2 + (x1*x2 - 1)^2 + x3^2", 3).unwrap();
        let x = [0.3, -1.2, 0.7];
        fd_check(
            &PenalizedScalarization::weighted(&f, vec![0.3, 0.7]).with_sublevel(&[0.1, 0.5], 10.0),
            &x,
        );
        fd_check(
            &TargetResidual {
                map: &f,
                target: vec![0.5, 1.0],
            },
            &x,
        );
    }
}
