//! Sampling test for non-degeneracy on the faces at infinity.
//!
//! Zeros of each principal-part map on the torus `(R∖{0})^n` are sought by
//! Levenberg–Marquardt from random starts; at every zero the scaled Jacobian
//! `[x_j ∂f_{i,Δ_i}/∂x_j]` must have rank `m`. Only a rank-deficient zero is
//! a certificate; the other outcomes hold at the sampled budget only.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{principal_map, FaceAtInfinity};
use crate::linalg::{norm, row_sigma_min};
use crate::optim::{levenberg_marquardt, LmOptions, Residual};
use crate::poly::PolyMap;
use crate::sampling::task_rng;

#[derive(Debug, Clone, Serialize)]
pub struct KhovanskiiBudget {
    pub n_starts: usize,
    /// Overrides `1e-9 (1 + ‖coefficients‖)`.
    pub root_tol: Option<f64>,
    /// Overrides `1e-6 (‖M‖_F + 1)`.
    pub rank_tol: Option<f64>,
    pub seed: u64,
}

impl Default for KhovanskiiBudget {
    fn default() -> Self {
        KhovanskiiBudget {
            n_starts: 64,
            root_tol: None,
            rank_tol: None,
            seed: 0,
        }
    }
}

/// Ordered from least to most informative among the non-degenerate outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KhovanskiiStatus {
    NoZeroFound,
    NondegenerateProbabilistic,
    DegenerateWitness,
}

#[derive(Debug, Clone, Serialize)]
pub struct KhovanskiiWitness {
    pub x: Vec<f64>,
    pub residual: f64,
    pub sigma_min: f64,
    pub root_tol: f64,
    pub rank_tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KhovanskiiReport {
    pub face: FaceAtInfinity,
    pub status: KhovanskiiStatus,
    pub zeros_found: usize,
    pub witness: Option<KhovanskiiWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KhovanskiiCheck {
    pub reports: Vec<KhovanskiiReport>,
    pub overall: KhovanskiiStatus,
    pub budget: KhovanskiiBudget,
}

/// `M[i][j] = x_j ∂f_i/∂x_j (x)`.
pub fn scaled_jacobian(f: &PolyMap, x: &[f64]) -> DMatrix<f64> {
    let mut j = f.jacobian(x);
    for (c, xc) in x.iter().enumerate() {
        j.column_mut(c).scale_mut(*xc);
    }
    j
}

struct PrincipalResidual<'a>(&'a PolyMap);

impl Residual for PrincipalResidual<'_> {
    fn dim(&self) -> usize {
        self.0.nvars()
    }

    fn eval(&self, x: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let t = self.0.power_table(x);
        let r = DVector::from_iterator(
            self.0.ncomponents(),
            self.0.components().iter().map(|p| p.evaluate_with(&t)),
        );
        (r, self.0.jacobian_with(&t))
    }
}

const START_BOX: f64 = 3.0;
const MIN_START_COORD: f64 = 0.05;
/// Zeros this close to a coordinate hyperplane or this far out are not
/// treated as torus zeros.
const MIN_ZERO_COORD: f64 = 1e-3;
const MAX_ZERO_NORM: f64 = 1e3;

fn check_face(
    f: &PolyMap,
    face: &FaceAtInfinity,
    index: usize,
    budget: &KhovanskiiBudget,
) -> KhovanskiiReport {
    let g = principal_map(f, face);
    let n = g.nvars();
    let coeff_norm = g
        .components()
        .iter()
        .map(|p| p.coefficient_norm().powi(2))
        .sum::<f64>()
        .sqrt();
    let root_tol = budget.root_tol.unwrap_or(1e-9 * (1.0 + coeff_norm));
    let residual = PrincipalResidual(&g);
    let opts = LmOptions {
        max_iter: 500,
        rtol: 1e-6 * root_tol,
        gtol: 0.0,
        escape_radius: MAX_ZERO_NORM,
    };
    let mut rng = task_rng(budget.seed, index as u64);
    let mut zeros = 0;
    let mut witness = None;
    for _ in 0..budget.n_starts {
        let x0: Vec<f64> = (0..n)
            .map(|_| loop {
                let v = rng.random_range(-START_BOX..START_BOX);
                if v.abs() >= MIN_START_COORD {
                    break v;
                }
            })
            .collect();
        let r = levenberg_marquardt(&residual, &x0, &opts);
        if r.residual_norm > root_tol
            || !r.residual_norm.is_finite()
            || norm(&r.x) > MAX_ZERO_NORM
            || r.x.iter().any(|v| v.abs() < MIN_ZERO_COORD)
        {
            continue;
        }
        zeros += 1;
        let m = scaled_jacobian(&g, &r.x);
        let rank_tol = budget.rank_tol.unwrap_or(1e-6 * (m.norm() + 1.0));
        let sigma = row_sigma_min(&m);
        if sigma <= rank_tol {
            witness = Some(KhovanskiiWitness {
                x: r.x,
                residual: r.residual_norm,
                sigma_min: sigma,
                root_tol,
                rank_tol,
            });
            break;
        }
    }
    let status = if witness.is_some() {
        KhovanskiiStatus::DegenerateWitness
    } else if zeros > 0 {
        KhovanskiiStatus::NondegenerateProbabilistic
    } else {
        KhovanskiiStatus::NoZeroFound
    };
    KhovanskiiReport {
        face: face.clone(),
        status,
        zeros_found: zeros,
        witness,
    }
}

/// Per-face reports in face order. The overall status is degenerate if any
/// face is, otherwise the weakest face status.
pub fn check_khovanskii(
    f: &PolyMap,
    faces: &[FaceAtInfinity],
    budget: &KhovanskiiBudget,
) -> KhovanskiiCheck {
    let reports: Vec<KhovanskiiReport> = faces
        .par_iter()
        .enumerate()
        .map(|(k, face)| check_face(f, face, k, budget))
        .collect();
    let overall = if reports
        .iter()
        .any(|r| r.status == KhovanskiiStatus::DegenerateWitness)
    {
        KhovanskiiStatus::DegenerateWitness
    } else {
        reports
            .iter()
            .map(|r| r.status)
            .min()
            .unwrap_or(KhovanskiiStatus::NoZeroFound)
    };
    KhovanskiiCheck {
        reports,
        overall,
        budget: budget.clone(),
    }
}
