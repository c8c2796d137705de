//! Multistart scalarization search for Pareto points with local
//! verification against sampled values.

use rayon::prelude::*;
use serde::Serialize;

use super::dominance::{test_against, DominanceTest};
use crate::linalg::{dist, norm};
use crate::optim::{minimize, MinStatus, MinimizeOptions, PenalizedScalarization};
use crate::poly::PolyMap;
use crate::sampling::{halton, in_box, interior_simplex, radical_inverse, task_rng, unit_sphere};
use crate::tangency::within_sublevel;

const RUN_STREAM: u64 = 0x5041_0000;
const SAMPLE_STREAM: u64 = 0x5041_8000;
const REFUTE_STREAM: u64 = 0x5042_0000;

#[derive(Debug, Clone, Serialize)]
pub struct ParetoBudget {
    /// Strictly positive weight vectors for weighted sums.
    pub n_weights: usize,
    /// Constraint levels per objective for the ε-constraint runs (`m ≥ 2`).
    pub n_levels: usize,
    pub n_starts: usize,
    pub box_radius: f64,
    pub verify_samples: usize,
    pub seed: u64,
}

impl Default for ParetoBudget {
    fn default() -> Self {
        ParetoBudget {
            n_weights: 8,
            n_levels: 8,
            n_starts: 16,
            box_radius: 3.0,
            verify_samples: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    ParetoVerifiedLocal,
    WeakOnly,
    Unverified,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParetoPoint {
    pub x: Vec<f64>,
    pub value: Vec<f64>,
    pub kind: PointKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParetoSearch {
    pub points: Vec<ParetoPoint>,
    /// Componentwise minimum over every value the search evaluated.
    pub observed_infimum: Vec<f64>,
    pub runs: usize,
    pub converged_runs: usize,
    pub feasible_candidates: usize,
    pub pool_size: usize,
}

#[derive(Debug, Clone)]
enum Scalarization {
    Weighted(Vec<f64>),
    /// Minimize `f_j` with `f_k ≤ level_k` for `k ≠ j`.
    Epsilon { j: usize, levels: Vec<f64> },
}

fn penalty_weight(tbar: &[f64]) -> f64 {
    1e4 * (1.0 + norm(tbar))
}

/// Dominance tolerance at `v`.
pub fn value_tol(v: &[f64]) -> f64 {
    1e-9 * (1.0 + norm(v))
}

fn objective<'a>(f: &'a PolyMap, s: &Scalarization, rho: f64) -> PenalizedScalarization<'a> {
    let m = f.ncomponents();
    match s {
        Scalarization::Weighted(w) => PenalizedScalarization::weighted(f, w.clone()),
        Scalarization::Epsilon { j, levels } => {
            let mut w = vec![0.0; m];
            w[*j] = 1.0;
            let mut obj = PenalizedScalarization::weighted(f, w);
            obj.penalties = (0..m).filter(|k| k != j).map(|k| (k, levels[k])).collect();
            obj.rho = rho;
            obj
        }
    }
}

/// Uniform box samples of the image.
pub fn box_samples(f: &PolyMap, count: usize, box_radius: f64, seed: u64, stream: u64) -> Vec<Vec<f64>> {
    let mut rng = task_rng(seed, stream);
    (0..count)
        .map(|_| f.evaluate(&in_box(&mut rng, f.nvars(), box_radius)))
        .collect()
}

fn level_range(samples: &[Vec<f64>], tbar: &[f64], k: usize) -> (f64, f64) {
    let feasible = samples
        .iter()
        .filter(|v| within_sublevel(v, tbar))
        .map(|v| v[k])
        .fold(f64::INFINITY, f64::min);
    let lo = if feasible.is_finite() {
        feasible
    } else {
        samples.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min)
    };
    let hi = tbar[k];
    if lo.is_finite() && lo < hi {
        (lo, hi)
    } else {
        (hi - (1.0 + hi.abs()), hi)
    }
}

fn scalarizations(f: &PolyMap, tbar: &[f64], samples: &[Vec<f64>], b: &ParetoBudget) -> Vec<Scalarization> {
    let m = f.ncomponents();
    let mut out: Vec<Scalarization> = interior_simplex(m, b.n_weights.max(1))
        .into_iter()
        .map(Scalarization::Weighted)
        .collect();
    if m >= 2 {
        let ranges: Vec<(f64, f64)> = (0..m).map(|k| level_range(samples, tbar, k)).collect();
        for j in 0..m {
            for i in 1..=b.n_levels as u64 {
                let u: Vec<f64> = if m == 2 {
                    vec![radical_inverse(i, 2)]
                } else {
                    halton(i, m - 1)
                };
                let mut levels = tbar.to_vec();
                for (slot, k) in (0..m).filter(|&k| k != j).enumerate() {
                    let (lo, hi) = ranges[k];
                    levels[k] = lo + (hi - lo) * u[slot];
                }
                out.push(Scalarization::Epsilon { j, levels });
            }
        }
    }
    out
}

struct Run {
    x: Vec<f64>,
    value: Vec<f64>,
    status: MinStatus,
}

/// Penalized descents toward values dominating `v`, started at and around
/// `x`; returns every final value.
fn refute(f: &PolyMap, x: &[f64], v: &[f64], box_radius: f64, seed: u64, stream: u64) -> Vec<Vec<f64>> {
    let m = f.ncomponents();
    let n = f.nvars();
    let mut weights = vec![vec![1.0 / m as f64; m]];
    if m > 1 {
        for k in 0..m {
            let mut w = vec![1e-3; m];
            w[k] = 1.0;
            weights.push(w);
        }
    }
    let mut rng = task_rng(seed, stream);
    let scale = 0.1 * (1.0 + norm(x));
    let mut starts = vec![x.to_vec()];
    for _ in 0..2 {
        let d = unit_sphere(&mut rng, n);
        starts.push(x.iter().zip(&d).map(|(a, b)| a + scale * b).collect());
    }
    starts.push(in_box(&mut rng, n, box_radius));
    let opts = MinimizeOptions {
        max_iter: 200,
        escape_radius: 100.0 * box_radius.max(norm(x)),
        ..Default::default()
    };
    let rho = penalty_weight(v);
    let mut out = Vec::new();
    for w in &weights {
        let obj = PenalizedScalarization::weighted(f, w.clone()).with_sublevel(v, rho);
        for s in &starts {
            let r = minimize(&obj, s, &opts);
            if r.x.iter().all(|c| c.is_finite()) {
                out.push(f.evaluate(&r.x));
            }
        }
    }
    out
}

fn classify(v: &[f64], pools: &[&[Vec<f64>]]) -> Option<PointKind> {
    let tol = value_tol(v);
    let mut weak = false;
    for pool in pools {
        match test_against(v, pool, tol) {
            DominanceTest::Dominated => return None,
            DominanceTest::WeaklyUndominated => weak = true,
            DominanceTest::Undominated => {}
        }
    }
    Some(if weak {
        PointKind::WeakOnly
    } else {
        PointKind::ParetoVerifiedLocal
    })
}

/// Re-checks a point against a fresh sample pool and refutation descents
/// drawn from `seed`.
pub fn reverify(f: &PolyMap, p: &ParetoPoint, b: &ParetoBudget, seed: u64) -> PointKind {
    let samples = box_samples(f, b.verify_samples, b.box_radius, seed, SAMPLE_STREAM);
    let refuted = refute(f, &p.x, &p.value, b.box_radius, seed, REFUTE_STREAM);
    classify(&p.value, &[&samples, &refuted]).unwrap_or(PointKind::Unverified)
}

/// Searches for Pareto points with `f(x) ≤ t̄` (up to slack).
pub fn find_pareto_points(f: &PolyMap, tbar: &[f64], b: &ParetoBudget) -> ParetoSearch {
    let n = f.nvars();
    let samples = box_samples(f, b.verify_samples.max(200), b.box_radius, b.seed, SAMPLE_STREAM);
    let jobs = scalarizations(f, tbar, &samples, b);
    let rho = penalty_weight(tbar);
    let opts = MinimizeOptions {
        max_iter: 500,
        escape_radius: 100.0 * b.box_radius,
        diverge_below: -1e12,
        ..Default::default()
    };
    let tasks: Vec<(usize, usize)> = (0..jobs.len())
        .flat_map(|j| (0..b.n_starts).map(move |s| (j, s)))
        .collect();
    let runs: Vec<Run> = tasks
        .par_iter()
        .enumerate()
        .map(|(k, &(j, _))| {
            let mut rng = task_rng(b.seed, RUN_STREAM + k as u64);
            let x0 = in_box(&mut rng, n, b.box_radius);
            let obj = objective(f, &jobs[j], rho);
            let r = minimize(&obj, &x0, &opts);
            let value = f.evaluate(&r.x);
            Run {
                x: r.x,
                value,
                status: r.status,
            }
        })
        .collect();

    let m = f.ncomponents();
    let mut observed = vec![f64::INFINITY; m];
    for v in samples.iter().chain(runs.iter().map(|r| &r.value)) {
        for (o, x) in observed.iter_mut().zip(v) {
            if x.is_finite() {
                *o = o.min(*x);
            }
        }
    }

    let converged_runs = runs.iter().filter(|r| r.status == MinStatus::Converged).count();
    let mut candidates: Vec<&Run> = Vec::new();
    for r in runs.iter().filter(|r| {
        r.status == MinStatus::Converged
            && r.value.iter().all(|v| v.is_finite())
            && within_sublevel(&r.value, tbar)
    }) {
        if !candidates
            .iter()
            .any(|c| dist(&c.x, &r.x) <= 1e-6 * (1.0 + norm(&r.x)))
        {
            candidates.push(r);
        }
    }
    let feasible_candidates = candidates.len();

    let finals: Vec<Vec<f64>> = runs
        .iter()
        .map(|r| r.value.clone())
        .filter(|v| v.iter().all(|c| c.is_finite()))
        .collect();
    let points: Vec<ParetoPoint> = if b.verify_samples == 0 {
        candidates
            .iter()
            .map(|c| ParetoPoint {
                x: c.x.clone(),
                value: c.value.clone(),
                kind: PointKind::Unverified,
            })
            .collect()
    } else {
        let refuted: Vec<Vec<Vec<f64>>> = candidates
            .par_iter()
            .enumerate()
            .map(|(k, c)| refute(f, &c.x, &c.value, b.box_radius, b.seed, REFUTE_STREAM + k as u64))
            .collect();
        let extra: Vec<Vec<f64>> = refuted.into_iter().flatten().collect();
        candidates
            .iter()
            .filter_map(|c| {
                classify(&c.value, &[&samples, &finals, &extra]).map(|kind| ParetoPoint {
                    x: c.x.clone(),
                    value: c.value.clone(),
                    kind,
                })
            })
            .collect()
    };
    ParetoSearch {
        points,
        observed_infimum: observed,
        runs: runs.len(),
        converged_runs,
        feasible_candidates,
        pool_size: samples.len() + finals.len(),
    }
}
