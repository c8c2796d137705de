//! The tangency variety `Γ(f)` and tangency values at infinity.
//!
//! `x ∈ Γ(f)` when `∇f_1(x), …, ∇f_m(x), x` are linearly dependent, i.e. `x`
//! is a Fritz-John point of `f` restricted to the sphere through `x`.
//! Points of `Γ(f)` are generated as minimizers of weighted sums `⟨w, f⟩` on
//! spheres and followed outward along a radius schedule.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cluster::{cluster_points, relative_tol, Cluster};
use crate::linalg::{column_sigma_min, dist, norm};
use crate::optim::{minimize_on_sphere, PenalizedScalarization, SphereOptions};
use crate::poly::PolyMap;
use crate::rabier::{rabier_nu, RabierError};
use crate::sampling::{simplex_weights, task_rng, unit_sphere};

pub const DEPENDENCY_TOL: f64 = 1e-6;
pub const CLUSTER_TOL: f64 = 1e-3;
pub const SLACK_TOL: f64 = 1e-6;

const SEED_STREAM: u64 = 0x7461_6e67;

#[derive(Debug, Clone, Error)]
pub enum TangencyError {
    #[error("the origin always lies in the tangency variety")]
    ZeroPoint,
    #[error("continuation lost track at radius {radius}")]
    LostTrack {
        radius: f64,
        trace: Box<TangencyTrace>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangencySample {
    pub x: Vec<f64>,
    pub radius: f64,
    pub fvalue: Vec<f64>,
    pub dependency: f64,
    pub nu: f64,
    pub nu_scaled: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    PsWitness,
    WeakPsWitness,
    TangencyWitness,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangencyTrace {
    pub weight: Vec<f64>,
    pub samples: Vec<TangencySample>,
    pub limit_estimate: Option<Vec<f64>>,
    pub classification: Vec<Witness>,
}

/// `1e-6 (1 + ‖t̄‖)`
pub fn slack(tbar: &[f64]) -> f64 {
    relative_tol(SLACK_TOL, tbar)
}

/// Whether `v ≤ t̄` componentwise up to the sublevel slack.
pub fn within_sublevel(v: &[f64], tbar: &[f64]) -> bool {
    let s = slack(tbar);
    v.iter().zip(tbar).all(|(a, b)| *a <= b + s)
}

/// Smallest singular value of `[∇f_i / max(1, ‖∇f_i‖) | x/‖x‖]`.
pub fn dependency_measure(f: &PolyMap, x: &[f64]) -> Result<f64, TangencyError> {
    let r = norm(x);
    if r == 0.0 {
        return Err(TangencyError::ZeroPoint);
    }
    Ok(dependency_from_jacobian(&f.jacobian(x), x, r))
}

fn dependency_from_jacobian(j: &DMatrix<f64>, x: &[f64], r: f64) -> f64 {
    let (m, n) = j.shape();
    if n <= m {
        return 0.0;
    }
    let mut a = DMatrix::zeros(n, m + 1);
    for i in 0..m {
        let g = j.row(i);
        let s = g.norm().max(1.0);
        for k in 0..n {
            a[(k, i)] = g[k] / s;
        }
    }
    for k in 0..n {
        a[(k, m)] = x[k] / r;
    }
    column_sigma_min(&a)
}

fn make_sample(f: &PolyMap, x: Vec<f64>) -> TangencySample {
    let radius = norm(&x);
    let j = f.jacobian(&x);
    let dependency = dependency_from_jacobian(&j, &x, radius);
    let nu = match rabier_nu(f, &x) {
        Ok(r) => r.value,
        Err(RabierError::BudgetExceeded(r)) => r.value,
        Err(_) => f64::NAN,
    };
    TangencySample {
        fvalue: f.evaluate(&x),
        x,
        radius,
        dependency,
        nu,
        nu_scaled: radius * nu,
    }
}

/// Minimizes `⟨w, f⟩` on `S_R` from `x0` and polishes until the dependency
/// test passes. `None` when the solve fails.
fn sphere_point(f: &PolyMap, w: &[f64], x0: &[f64], radius: f64) -> Option<TangencySample> {
    let obj = PenalizedScalarization::weighted(f, w.to_vec());
    let r = minimize_on_sphere(&obj, x0, radius, &SphereOptions::default());
    if !r.converged {
        return None;
    }
    let mut s = make_sample(f, r.x);
    if s.dependency > DEPENDENCY_TOL {
        let polish = SphereOptions {
            max_iter: 50,
            gtol: 1e-16,
        };
        let r = minimize_on_sphere(&obj, &s.x, radius, &polish);
        s = make_sample(f, r.x);
    }
    (s.dependency <= DEPENDENCY_TOL && s.fvalue.iter().all(|v| v.is_finite())).then_some(s)
}

/// Stationary points of `⟨w, f⟩` on the sphere of radius `R`, one solve per
/// `(seed, weight)` pair. Failed solves are dropped.
pub fn sphere_stationary_points(
    f: &PolyMap,
    radius: f64,
    seeds: &[Vec<f64>],
    weights: &[Vec<f64>],
) -> Vec<TangencySample> {
    let pairs: Vec<(usize, usize)> = (0..seeds.len())
        .flat_map(|s| (0..weights.len()).map(move |w| (s, w)))
        .collect();
    pairs
        .par_iter()
        .map(|&(s, w)| {
            let x0: Vec<f64> = seeds[s].iter().map(|v| v * radius).collect();
            sphere_point(f, &weights[w], &x0, radius)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Follows a sphere stationary point outward along `radii`, warm-starting
/// each solve from the previous point.
pub fn trace_to_infinity(
    f: &PolyMap,
    seed_sample: &TangencySample,
    weight: &[f64],
    radii: &[f64],
    sublevel: Option<&[f64]>,
) -> Result<TangencyTrace, TangencyError> {
    let mut trace = TangencyTrace {
        weight: weight.to_vec(),
        samples: vec![seed_sample.clone()],
        limit_estimate: None,
        classification: Vec::new(),
    };
    let start = radii
        .iter()
        .position(|&r| r > seed_sample.radius * (1.0 + 1e-12))
        .unwrap_or(radii.len());
    for &radius in &radii[start..] {
        let prev = &trace.samples.last().expect("nonempty").x;
        match sphere_point(f, weight, prev, radius) {
            Some(s) => trace.samples.push(s),
            None => {
                return Err(TangencyError::LostTrack {
                    radius,
                    trace: Box::new(trace),
                })
            }
        }
    }
    trace.limit_estimate = limit_of(&trace.samples);
    trace.classification = classify(&trace, sublevel);
    Ok(trace)
}

fn limit_of(samples: &[TangencySample]) -> Option<Vec<f64>> {
    if samples.len() < 3 {
        return None;
    }
    let tail = &samples[samples.len() - 3..];
    let last = &tail[2].fvalue;
    let tol = relative_tol(CLUSTER_TOL, last);
    for a in 0..3 {
        for b in a + 1..3 {
            if dist(&tail[a].fvalue, &tail[b].fvalue) > tol {
                return None;
            }
        }
    }
    Some(last.clone())
}

fn decays(first: f64, last: f64) -> bool {
    last <= 1e-9 || last <= 0.01 * first
}

fn classify(trace: &TangencyTrace, sublevel: Option<&[f64]>) -> Vec<Witness> {
    if trace.limit_estimate.is_none() {
        return Vec::new();
    }
    let feasible = match sublevel {
        Some(t) => trace.samples.iter().all(|s| within_sublevel(&s.fvalue, t)),
        None => true,
    };
    if !feasible {
        return Vec::new();
    }
    let first = &trace.samples[0];
    let last = trace.samples.last().expect("nonempty");
    let mut out = Vec::new();
    if decays(first.nu, last.nu) {
        out.push(Witness::PsWitness);
    }
    if decays(first.nu_scaled, last.nu_scaled) {
        out.push(Witness::WeakPsWitness);
    }
    if trace.samples.iter().all(|s| s.dependency <= DEPENDENCY_TOL) {
        out.push(Witness::TangencyWitness);
    }
    out
}

/// CSV dump: `radius, x_1..x_n, f_1..f_m, dependency, nu, nu_scaled`.
pub fn trace_csv(trace: &TangencyTrace) -> String {
    let Some(first) = trace.samples.first() else {
        return String::new();
    };
    let mut head = vec!["radius".to_string()];
    head.extend((1..=first.x.len()).map(|i| format!("x_{}", i)));
    head.extend((1..=first.fvalue.len()).map(|i| format!("f_{}", i)));
    head.extend(["dependency", "nu", "nu_scaled"].map(String::from));
    let mut out = head.join(",");
    out.push('\n');
    for s in &trace.samples {
        let mut row = vec![s.radius];
        row.extend(&s.x);
        row.extend(&s.fvalue);
        row.extend([s.dependency, s.nu, s.nu_scaled]);
        let cells: Vec<String> = row.iter().map(|v| format!("{:e}", v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct TangencyConfig {
    pub n_seeds: usize,
    pub n_weights: usize,
    pub radii: Vec<f64>,
    pub cluster_tol: f64,
    pub sublevel: Option<Vec<f64>>,
    pub seed: u64,
}

impl TangencyConfig {
    pub fn for_map(f: &PolyMap) -> Self {
        TangencyConfig {
            n_seeds: 32,
            n_weights: f.ncomponents() + 8,
            radii: geometric_radii(10.0, 2.0, 14),
            cluster_tol: CLUSTER_TOL,
            sublevel: None,
            seed: 0,
        }
    }
}

pub fn geometric_radii(r0: f64, factor: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|k| r0 * factor.powi(k as i32)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TangencyEstimate {
    pub clusters: Vec<Cluster>,
    pub traces_started: usize,
    pub traces_lost: usize,
    pub traces_with_limit: usize,
    pub traces_kept: usize,
    /// Kept traces, in (seed, weight) order.
    #[serde(skip)]
    pub traces: Vec<TangencyTrace>,
}

/// Estimates `T∞(f)` (or `T∞,≤t̄(f)` when a sublevel is given).
pub fn estimate_tangency_values(f: &PolyMap, cfg: &TangencyConfig) -> TangencyEstimate {
    let n = f.nvars();
    let mut rng = task_rng(cfg.seed, SEED_STREAM);
    let seeds: Vec<Vec<f64>> = (0..cfg.n_seeds).map(|_| unit_sphere(&mut rng, n)).collect();
    let weights = simplex_weights(f.ncomponents(), cfg.n_weights.max(1));
    let r0 = cfg.radii[0];

    // First-radius solves, deduplicated per weight so identical basins are
    // traced once.
    let pairs: Vec<(usize, usize)> = (0..weights.len())
        .flat_map(|w| (0..seeds.len()).map(move |s| (w, s)))
        .collect();
    let starts: Vec<Option<TangencySample>> = pairs
        .par_iter()
        .map(|&(w, s)| {
            let x0: Vec<f64> = seeds[s].iter().map(|v| v * r0).collect();
            sphere_point(f, &weights[w], &x0, r0)
        })
        .collect();
    let mut unique: Vec<(usize, TangencySample)> = Vec::new();
    for (k, start) in starts.into_iter().enumerate() {
        let Some(s) = start else { continue };
        let w = pairs[k].0;
        let dup = unique
            .iter()
            .rev()
            .take_while(|(uw, _)| *uw == w)
            .any(|(_, u)| dist(&u.x, &s.x) <= 1e-6 * r0);
        if !dup {
            unique.push((w, s));
        }
    }

    let sub = cfg.sublevel.as_deref();
    let results: Vec<Result<TangencyTrace, TangencyError>> = unique
        .par_iter()
        .map(|(w, s)| trace_to_infinity(f, s, &weights[*w], &cfg.radii, sub))
        .collect();

    let traces_started = results.len();
    let mut traces_lost = 0;
    let mut traces_with_limit = 0;
    let mut kept = Vec::new();
    for r in results {
        match r {
            Err(_) => traces_lost += 1,
            Ok(t) => {
                let Some(limit) = &t.limit_estimate else { continue };
                traces_with_limit += 1;
                let ok = match sub {
                    Some(tbar) => t.samples.iter().all(|s| within_sublevel(&s.fvalue, tbar)),
                    None => true,
                };
                if ok && limit.iter().all(|v| v.is_finite()) {
                    kept.push(t);
                }
            }
        }
    }
    let limits: Vec<Vec<f64>> = kept
        .iter()
        .map(|t| t.limit_estimate.clone().expect("kept traces have limits"))
        .collect();
    TangencyEstimate {
        clusters: cluster_points(&limits, cfg.cluster_tol),
        traces_started,
        traces_lost,
        traces_with_limit,
        traces_kept: kept.len(),
        traces: kept,
    }
}
