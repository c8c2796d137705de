//! Budgeted probes of sublevel conditions at a level `t̄`: bounded sections of
//! the image, properness, and escapes along which the Rabier function decays.
//!
//! Verdicts other than witnesses are budget-relative: `bounded_likely` and
//! `no_witness_found` mean that the search found nothing, not that nothing
//! exists.

use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::relative_tol;
use crate::linalg::{dist, norm};
use crate::optim::{
    minimize, minimize_on_sphere, MinStatus, MinimizeOptions, PenalizedScalarization,
    SphereOptions, TargetResidual,
};
use crate::poly::PolyMap;
use crate::rabier::{rabier_nu, RabierError};
use crate::sampling::{in_ball, in_box, simplex_weights, task_rng, unit_sphere};
use crate::tangency::{geometric_radii, within_sublevel, CLUSTER_TOL};

const SECTION_STREAM: u64 = 0x5345_0000;
const PROPER_STREAM: u64 = 0x5052_0000;
const PS_STREAM: u64 = 0x5053_0000;

fn penalty_base(tbar: &[f64]) -> f64 {
    1e4 * (1.0 + norm(tbar))
}

/// Random image points: `count` evaluations at points drawn uniformly from
/// balls of radius `10^k`, `k = 0..levels`, cycling.
pub fn sample_image(f: &PolyMap, count: usize, levels: u32, seed: u64, stream: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = task_rng(seed, stream);
    (0..count)
        .map(|i| {
            let r = 10f64.powi((i as u32 % levels.max(1)) as i32);
            let x = in_ball(&mut rng, f.nvars(), r);
            let v = f.evaluate(&x);
            (x, v)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Bounded sections

#[derive(Debug, Clone, Serialize)]
pub struct SectionBudget {
    pub n_starts: usize,
    pub r_max: f64,
    pub iter_cap: usize,
    pub diverge_threshold: f64,
    pub seed: u64,
}

impl Default for SectionBudget {
    fn default() -> Self {
        SectionBudget {
            n_starts: 16,
            r_max: 1e5,
            iter_cap: 500,
            diverge_threshold: -1e6,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionVerdict {
    BoundedLikely,
    UnboundedWitness,
    EmptySection,
    Inconclusive,
}

/// Feasible points along which component `component` decreases past the
/// divergence threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscapeRecord {
    pub component: usize,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionProbeReport {
    pub tbar: Vec<f64>,
    pub verdict: SectionVerdict,
    pub witness: Option<EscapeRecord>,
    /// Lowest feasible value of each component; `None` if none was feasible.
    pub lower_envelope: Vec<Option<f64>>,
    pub feasible_runs: usize,
    pub runs: usize,
    pub note: &'static str,
}

enum RunOutcome {
    Feasible { value: f64, capped_while_falling: bool },
    Witness(EscapeRecord),
    Infeasible,
}

fn section_run(f: &PolyMap, tbar: &[f64], i: usize, x0: Vec<f64>, b: &SectionBudget) -> RunOutcome {
    let m = f.ncomponents();
    let mut w = vec![0.0; m];
    w[i] = 1.0;
    let rho0 = penalty_base(tbar);
    let mut x = x0;
    let mut capped = false;
    for (stage, scale) in [1.0, 1e2, 1e4, 1e6, 1e8].into_iter().enumerate() {
        let obj = PenalizedScalarization::weighted(f, w.clone()).with_sublevel(tbar, rho0 * scale);
        let opts = MinimizeOptions {
            max_iter: b.iter_cap,
            gtol: 1e-10,
            escape_radius: 1e3 * b.r_max,
            diverge_below: b.diverge_threshold,
        };
        let r = minimize(&obj, &x, &opts);
        let fx = f.evaluate(&r.x);
        let escaped = matches!(r.status, MinStatus::Diverged | MinStatus::Escaped);
        if escaped && fx[i] < b.diverge_threshold {
            if within_sublevel(&fx, tbar) {
                return RunOutcome::Witness(escape_sequence(f, tbar, i, &obj, &x, b));
            }
            // Penalty too weak for this escape; restart the next stage here.
        }
        if stage == 4 {
            capped = r.status == MinStatus::MaxIter && r.decreasing;
        }
        if r.x.iter().all(|v| v.is_finite()) {
            x = r.x;
        }
    }
    let fx = f.evaluate(&x);
    if !within_sublevel(&fx, tbar) {
        return RunOutcome::Infeasible;
    }
    RunOutcome::Feasible {
        value: fx[i],
        capped_while_falling: capped,
    }
}

/// Re-runs a divergent minimization with thresholds `−10^2, −10^3, …`
/// to record a feasible sequence with decreasing component `i`.
fn escape_sequence(
    f: &PolyMap,
    tbar: &[f64],
    i: usize,
    obj: &PenalizedScalarization,
    x0: &[f64],
    b: &SectionBudget,
) -> EscapeRecord {
    let mut rec = EscapeRecord {
        component: i,
        points: Vec::new(),
        values: Vec::new(),
    };
    let mut x = x0.to_vec();
    let mut level = -1e2;
    while level >= b.diverge_threshold {
        let opts = MinimizeOptions {
            max_iter: b.iter_cap,
            gtol: 1e-10,
            escape_radius: f64::INFINITY,
            diverge_below: level,
        };
        let r = minimize(obj, &x, &opts);
        let fx = f.evaluate(&r.x);
        if within_sublevel(&fx, tbar) {
            rec.points.push(r.x.clone());
            rec.values.push(fx);
        }
        x = r.x;
        level *= 10.0;
    }
    rec
}

pub fn probe_bounded_section(f: &PolyMap, tbar: &[f64], b: &SectionBudget) -> SectionProbeReport {
    let m = f.ncomponents();
    let n = f.nvars();
    let levels = b.r_max.log10().floor().max(1.0) as i32;
    let tasks: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..b.n_starts).map(move |s| (i, s)))
        .collect();
    let outcomes: Vec<RunOutcome> = tasks
        .par_iter()
        .map(|&(i, s)| {
            let mut rng = task_rng(b.seed, SECTION_STREAM + (i * b.n_starts + s) as u64);
            let r = 10f64.powi(1 + (s as i32 % levels));
            section_run(f, tbar, i, in_ball(&mut rng, n, r), b)
        })
        .collect();

    let mut envelope: Vec<Option<f64>> = vec![None; m];
    let mut feasible = 0;
    let mut capped = false;
    let mut witness = None;
    for (&(i, _), o) in tasks.iter().zip(outcomes) {
        match o {
            RunOutcome::Witness(w) => {
                if witness.is_none() {
                    witness = Some(w);
                }
            }
            RunOutcome::Feasible {
                value,
                capped_while_falling,
            } => {
                feasible += 1;
                capped |= capped_while_falling;
                envelope[i] = Some(envelope[i].map_or(value, |e: f64| e.min(value)));
            }
            RunOutcome::Infeasible => {}
        }
    }
    // Direct samples count toward feasibility too.
    if feasible == 0 && witness.is_none() {
        for (_, v) in sample_image(f, 200, levels as u32, b.seed, SECTION_STREAM - 1) {
            if within_sublevel(&v, tbar) {
                feasible += 1;
                for (e, vi) in envelope.iter_mut().zip(&v) {
                    *e = Some(e.map_or(*vi, |x: f64| x.min(*vi)));
                }
            }
        }
    }
    let verdict = if witness.is_some() {
        SectionVerdict::UnboundedWitness
    } else if feasible == 0 {
        SectionVerdict::EmptySection
    } else if capped {
        SectionVerdict::Inconclusive
    } else {
        SectionVerdict::BoundedLikely
    };
    SectionProbeReport {
        tbar: tbar.to_vec(),
        verdict,
        witness,
        lower_envelope: envelope,
        feasible_runs: feasible,
        runs: tasks.len(),
        note: "lower_envelope is the lowest value observed, not a certified bound",
    }
}

// ---------------------------------------------------------------------------
// Properness

#[derive(Debug, Clone, Serialize)]
pub struct PropernessBudget {
    pub n_targets: usize,
    pub n_starts: usize,
    pub radii: Vec<f64>,
    pub seed: u64,
}

impl Default for PropernessBudget {
    fn default() -> Self {
        PropernessBudget {
            n_targets: 10,
            n_starts: 8,
            radii: geometric_radii(10.0, 2.0, 14),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropernessVerdict {
    NotProperWitness,
    NoWitnessFound,
    EmptySection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProperEscape {
    pub target: Vec<f64>,
    pub radii: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropernessProbeReport {
    pub tbar: Vec<f64>,
    pub verdict: PropernessVerdict,
    pub witness: Option<ProperEscape>,
    pub targets: Vec<Vec<f64>>,
}

fn witness_tol(c: &[f64]) -> f64 {
    1e-4 * (1.0 + norm(c))
}

/// Candidate limits `c ≤ t̄`: `t̄` itself, the lowest feasible sampled image
/// points, their coordinatewise floor, and values reached on a large sphere.
fn properness_targets(f: &PolyMap, tbar: &[f64], b: &PropernessBudget) -> Vec<Vec<f64>> {
    let mut feasible: Vec<Vec<f64>> = sample_image(f, 400, 3, b.seed, PROPER_STREAM - 1)
        .into_iter()
        .map(|(_, v)| v)
        .filter(|v| within_sublevel(v, tbar))
        .collect();
    // Minimizers of the penalized sum reach the bottom of the section.
    let ones = vec![1.0; f.ncomponents()];
    let obj = PenalizedScalarization::weighted(f, ones.clone()).with_sublevel(tbar, penalty_base(tbar));
    let mut rng = task_rng(b.seed, PROPER_STREAM - 2);
    for _ in 0..b.n_starts {
        let x0 = in_box(&mut rng, f.nvars(), 3.0);
        let r = minimize(&obj, &x0, &MinimizeOptions { max_iter: 200, escape_radius: 1e6, ..Default::default() });
        let v = f.evaluate(&r.x);
        if within_sublevel(&v, tbar) {
            feasible.push(v);
        }
    }
    let mut asymptotic = Vec::new();
    let r_big = *b.radii.last().unwrap_or(&1e3);
    for _ in 0..b.n_starts {
        let x0 = unit_sphere(&mut rng, f.nvars());
        let r = minimize_on_sphere(&obj, &x0, r_big, &SphereOptions::default());
        let v = f.evaluate(&r.x);
        if within_sublevel(&v, tbar) {
            asymptotic.push(v);
        }
    }

    let mut targets = vec![tbar.to_vec()];
    if feasible.is_empty() && asymptotic.is_empty() {
        return targets;
    }
    feasible.sort_by(|a, b| a.iter().sum::<f64>().total_cmp(&b.iter().sum::<f64>()));
    let floor: Vec<f64> = (0..tbar.len())
        .map(|i| feasible.iter().map(|v| v[i]).fold(f64::INFINITY, f64::min))
        .collect();
    let mut push = |t: Vec<f64>| {
        if t.iter().all(|v| v.is_finite())
            && !targets.iter().any(|u| dist(u, &t) <= relative_tol(CLUSTER_TOL, &t))
        {
            targets.push(t);
        }
    };
    for v in asymptotic {
        push(v);
    }
    for v in feasible.iter().take(b.n_targets) {
        push(v.clone());
    }
    if !feasible.is_empty() {
        push(floor);
    }
    targets
}

fn properness_run(f: &PolyMap, tbar: &[f64], c: &[f64], dir: &[f64], radii: &[f64]) -> Option<ProperEscape> {
    let obj = TargetResidual {
        map: f,
        target: c.to_vec(),
    };
    let mut esc = ProperEscape {
        target: c.to_vec(),
        radii: Vec::new(),
        points: Vec::new(),
        values: Vec::new(),
        residuals: Vec::new(),
    };
    let mut x: Vec<f64> = dir.iter().map(|v| v * radii[0]).collect();
    let tol = witness_tol(c);
    for &r in radii {
        let res = minimize_on_sphere(&obj, &x, r, &SphereOptions::default());
        x = res.x;
        let v = f.evaluate(&x);
        let resid = dist(&v, c);
        if resid > tol || !within_sublevel(&v, tbar) {
            // Only the tail counts; restart the record.
            esc.radii.clear();
            esc.points.clear();
            esc.values.clear();
            esc.residuals.clear();
            continue;
        }
        esc.radii.push(r);
        esc.points.push(x.clone());
        esc.values.push(v);
        esc.residuals.push(resid);
    }
    let r_max = *radii.last()?;
    let k = esc.values.len();
    if k < 3 || *esc.radii.last()? < r_max / 2.0 {
        return None;
    }
    let ctol = relative_tol(CLUSTER_TOL, &esc.values[k - 1]);
    for a in k - 3..k {
        for b2 in a + 1..k {
            if dist(&esc.values[a], &esc.values[b2]) > ctol {
                return None;
            }
        }
    }
    Some(esc)
}

pub fn probe_properness(f: &PolyMap, tbar: &[f64], b: &PropernessBudget) -> PropernessProbeReport {
    let targets = properness_targets(f, tbar, b);
    let n = f.nvars();
    let mut rng = task_rng(b.seed, PROPER_STREAM);
    let dirs: Vec<Vec<f64>> = (0..b.n_starts).map(|_| unit_sphere(&mut rng, n)).collect();
    let tasks: Vec<(usize, usize)> = (0..targets.len())
        .flat_map(|t| (0..dirs.len()).map(move |s| (t, s)))
        .collect();
    let found: Vec<Option<ProperEscape>> = tasks
        .par_iter()
        .map(|&(t, s)| properness_run(f, tbar, &targets[t], &dirs[s], &b.radii))
        .collect();
    let witness = found.into_iter().flatten().next();
    let verdict = if witness.is_some() {
        PropernessVerdict::NotProperWitness
    } else if targets.len() == 1 && !has_feasible_point(f, tbar, b.seed) {
        PropernessVerdict::EmptySection
    } else {
        PropernessVerdict::NoWitnessFound
    };
    PropernessProbeReport {
        tbar: tbar.to_vec(),
        verdict,
        witness,
        targets,
    }
}

fn has_feasible_point(f: &PolyMap, tbar: &[f64], seed: u64) -> bool {
    let ones = vec![1.0; f.ncomponents()];
    let obj = PenalizedScalarization::weighted(f, ones).with_sublevel(tbar, penalty_base(tbar) * 1e4);
    let mut rng = task_rng(seed, PROPER_STREAM - 3);
    (0..16).any(|_| {
        let x0 = in_box(&mut rng, f.nvars(), 3.0);
        let r = minimize(&obj, &x0, &MinimizeOptions { max_iter: 300, escape_radius: 1e6, ..Default::default() });
        within_sublevel(&f.evaluate(&r.x), tbar)
    })
}

// ---------------------------------------------------------------------------
// Palais–Smale escapes

#[derive(Debug, Clone, Serialize)]
pub struct PsBudget {
    pub n_seeds: usize,
    pub n_weights: usize,
    pub radii: Vec<f64>,
    pub seed: u64,
}

impl Default for PsBudget {
    fn default() -> Self {
        PsBudget {
            n_seeds: 8,
            n_weights: 4,
            radii: geometric_radii(10.0, 2.0, 14),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsVerdict {
    /// A feasible escape with convergent values and `‖x‖ ν_f → 0`.
    WeakPsWitness,
    /// A feasible escape with convergent values and `ν_f → 0`.
    PsWitness,
    NoWitnessFound,
    EmptySection,
}

#[derive(Debug, Clone, Serialize)]
pub struct PsEscape {
    pub weight: Vec<f64>,
    pub radii: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub nu: Vec<f64>,
    pub nu_scaled: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PsProbeReport {
    pub tbar: Vec<f64>,
    pub verdict: PsVerdict,
    /// Smallest `ν_f` over feasible escape samples.
    pub min_nu: Option<f64>,
    pub min_nu_scaled: Option<f64>,
    pub escape_samples: usize,
    pub witness: Option<PsEscape>,
}

fn nu_at(f: &PolyMap, x: &[f64]) -> f64 {
    match rabier_nu(f, x) {
        Ok(r) => r.value,
        Err(RabierError::BudgetExceeded(r)) => r.value,
        Err(_) => f64::NAN,
    }
}

fn ps_run(f: &PolyMap, tbar: &[f64], w: &[f64], dir: &[f64], radii: &[f64]) -> PsEscape {
    let obj = PenalizedScalarization::weighted(f, w.to_vec()).with_sublevel(tbar, penalty_base(tbar) * 1e4);
    let mut esc = PsEscape {
        weight: w.to_vec(),
        radii: Vec::new(),
        values: Vec::new(),
        nu: Vec::new(),
        nu_scaled: Vec::new(),
    };
    let mut x: Vec<f64> = dir.iter().map(|v| v * radii[0]).collect();
    for &r in radii {
        let res = minimize_on_sphere(&obj, &x, r, &SphereOptions::default());
        x = res.x;
        let v = f.evaluate(&x);
        if !within_sublevel(&v, tbar) {
            esc.radii.clear();
            esc.values.clear();
            esc.nu.clear();
            esc.nu_scaled.clear();
            continue;
        }
        let nu = nu_at(f, &x);
        esc.radii.push(r);
        esc.values.push(v);
        esc.nu.push(nu);
        esc.nu_scaled.push(nu * r);
    }
    esc
}

fn convergent_tail(values: &[Vec<f64>]) -> bool {
    let k = values.len();
    if k < 3 {
        return false;
    }
    let tol = relative_tol(CLUSTER_TOL, &values[k - 1]);
    (k - 3..k).all(|a| (a + 1..k).all(|b| dist(&values[a], &values[b]) <= tol))
}

fn decays(series: &[f64]) -> bool {
    match (series.first(), series.last()) {
        (Some(&a), Some(&z)) => z <= 1e-9 || z <= 0.01 * a,
        _ => false,
    }
}

/// Searches for feasible escapes `f(x^k) ≤ t̄`, `‖x^k‖ → ∞`, `f(x^k)`
/// convergent, with `ν_f(x^k) → 0` (or `‖x^k‖ ν_f(x^k) → 0`).
pub fn probe_palais_smale(f: &PolyMap, tbar: &[f64], b: &PsBudget) -> PsProbeReport {
    let n = f.nvars();
    let mut rng = task_rng(b.seed, PS_STREAM);
    let dirs: Vec<Vec<f64>> = (0..b.n_seeds).map(|_| unit_sphere(&mut rng, n)).collect();
    let weights = simplex_weights(f.ncomponents(), b.n_weights.max(1));
    let tasks: Vec<(usize, usize)> = (0..weights.len())
        .flat_map(|w| (0..dirs.len()).map(move |s| (w, s)))
        .collect();
    let runs: Vec<PsEscape> = tasks
        .par_iter()
        .map(|&(w, s)| ps_run(f, tbar, &weights[w], &dirs[s], &b.radii))
        .collect();
    let r_max = *b.radii.last().unwrap_or(&0.0);
    let mut min_nu: Option<f64> = None;
    let mut min_scaled: Option<f64> = None;
    let mut samples = 0;
    let mut weak = None;
    let mut strong = None;
    for run in runs {
        // Only runs that stay feasible out to the largest radius are escapes.
        if run.radii.last().is_none_or(|&r| r < r_max / 2.0) {
            continue;
        }
        samples += run.nu.len();
        for (&a, &s) in run.nu.iter().zip(&run.nu_scaled) {
            min_nu = Some(min_nu.map_or(a, |v| v.min(a)));
            min_scaled = Some(min_scaled.map_or(s, |v| v.min(s)));
        }
        if convergent_tail(&run.values) {
            if weak.is_none() && decays(&run.nu_scaled) {
                weak = Some(run);
            } else if strong.is_none() && decays(&run.nu) {
                strong = Some(run);
            }
        }
    }
    let verdict = if weak.is_some() {
        PsVerdict::WeakPsWitness
    } else if strong.is_some() {
        PsVerdict::PsWitness
    } else if samples == 0 && !has_feasible_point(f, tbar, b.seed) {
        PsVerdict::EmptySection
    } else {
        PsVerdict::NoWitnessFound
    };
    PsProbeReport {
        tbar: tbar.to_vec(),
        verdict,
        min_nu,
        min_nu_scaled: min_scaled,
        escape_samples: samples,
        witness: weak.or(strong),
    }
}
