//! Candidate value sets and existence verdicts.

use serde::Serialize;
use serde_json::{json, Value};

use super::critical::{sample_critical_values, CriticalBudget};
use super::dominance::nondominated_flags;
use super::search::{box_samples, find_pareto_points, reverify, ParetoBudget, ParetoPoint, PointKind};
use crate::cluster::Cluster;
use crate::linalg::dist;
use crate::newton::{
    check_khovanskii, faces_at_infinity, is_convenient, KhovanskiiBudget, KhovanskiiStatus, MAX_FACE_DIM,
};
use crate::poly::PolyMap;
use crate::sublevel::{
    probe_bounded_section, probe_palais_smale, probe_properness, PropernessBudget, PropernessVerdict,
    PsBudget, PsVerdict, SectionBudget, SectionVerdict,
};
use crate::tangency::{estimate_tangency_values, TangencyConfig};

const TBAR_STREAM: u64 = 0x5442_0000;
/// Offset mixed into the seed for the independent re-verification pass.
const REVERIFY_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueSource {
    Critical,
    Tangency,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateValue {
    pub value: Vec<f64>,
    pub source: ValueSource,
    pub nondominated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateValueSet {
    pub critical_values: Vec<Cluster>,
    pub tangency_values: Vec<Cluster>,
    /// Critical clusters first, then tangency clusters.
    pub values: Vec<CandidateValue>,
    pub degenerate_dimension: bool,
}

impl CandidateValueSet {
    /// Distance from `t` to the nearest candidate value.
    pub fn distance_to(&self, t: &[f64]) -> f64 {
        self.values
            .iter()
            .map(|c| dist(&c.value, t))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateConfig {
    pub critical: CriticalBudget,
    pub tangency: TangencyConfig,
}

impl CandidateConfig {
    pub fn for_map(f: &PolyMap, seed: u64) -> Self {
        let mut tangency = TangencyConfig::for_map(f);
        tangency.seed = seed;
        CandidateConfig {
            critical: CriticalBudget::default(),
            tangency,
        }
    }
}

/// `K₀(f) ∪ T∞(f)` as clustered point clouds with nondominated flags.
pub fn candidate_pareto_values(f: &PolyMap, cfg: &CandidateConfig) -> CandidateValueSet {
    let k0 = sample_critical_values(f, &cfg.critical);
    let tinf = estimate_tangency_values(f, &cfg.tangency);
    let mut values: Vec<CandidateValue> = k0
        .clusters
        .iter()
        .map(|c| (c, ValueSource::Critical))
        .chain(tinf.clusters.iter().map(|c| (c, ValueSource::Tangency)))
        .map(|(c, source)| CandidateValue {
            value: c.center.clone(),
            source,
            nondominated: false,
        })
        .collect();
    let pts: Vec<Vec<f64>> = values.iter().map(|v| v.value.clone()).collect();
    for (v, flag) in values.iter_mut().zip(nondominated_flags(&pts)) {
        v.nondominated = flag;
    }
    CandidateValueSet {
        critical_values: k0.clusters,
        tangency_values: tinf.clusters,
        values,
        degenerate_dimension: k0.degenerate_dimension,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExistenceVerdict {
    ExistsWithWitness,
    CertificatePlusBoundedSection,
    NoConclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceKind {
    SectionProbe,
    PropernessProbe,
    PsProbe,
    TangencySublevel,
    NewtonCertificate,
    ParetoPoint,
}

#[derive(Debug, Clone, Serialize)]
pub struct Evidence {
    pub kind: EvidenceKind,
    pub verdict: String,
    pub data: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExistenceConfig {
    pub seed: u64,
    pub box_radius: f64,
    pub tbar_samples: usize,
    pub section: SectionBudget,
    pub properness: PropernessBudget,
    pub ps: PsBudget,
    pub tangency: TangencyConfig,
    pub khovanskii: KhovanskiiBudget,
    pub pareto: ParetoBudget,
}

impl ExistenceConfig {
    /// Default budgets, every probe seeded from `seed`.
    pub fn for_map(f: &PolyMap, seed: u64) -> Self {
        let mut tangency = TangencyConfig::for_map(f);
        tangency.n_seeds = 16;
        tangency.seed = seed;
        ExistenceConfig {
            seed,
            box_radius: 3.0,
            tbar_samples: 100,
            section: SectionBudget {
                seed,
                ..Default::default()
            },
            properness: PropernessBudget {
                seed,
                ..Default::default()
            },
            ps: PsBudget {
                seed,
                ..Default::default()
            },
            tangency,
            khovanskii: KhovanskiiBudget {
                seed,
                ..Default::default()
            },
            pareto: ParetoBudget {
                seed,
                ..Default::default()
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExistenceReport {
    pub tbar: Vec<f64>,
    /// `given` or `image_sample`.
    pub tbar_source: String,
    pub verdict: ExistenceVerdict,
    pub basis: Vec<Evidence>,
    pub theorem_path: String,
    /// Bounded section with no properness, Palais–Smale or tangency witness.
    /// Sampling evidence only; it never upgrades the verdict.
    pub sublevel_probes_clean: bool,
    pub witness: Option<ParetoPoint>,
    pub budget: Value,
    pub seed: u64,
}

/// The sampled image point nearest the componentwise median of
/// `count` box samples; it lies in `f(R^n)` by construction.
pub fn auto_tbar(f: &PolyMap, count: usize, box_radius: f64, seed: u64) -> Vec<f64> {
    let samples = box_samples(f, count.max(1), box_radius, seed, TBAR_STREAM);
    let m = f.ncomponents();
    let median: Vec<f64> = (0..m)
        .map(|k| {
            let mut c: Vec<f64> = samples.iter().map(|v| v[k]).collect();
            c.sort_by(f64::total_cmp);
            c[c.len() / 2]
        })
        .collect();
    samples
        .iter()
        .min_by(|a, b| dist(a, &median).total_cmp(&dist(b, &median)))
        .cloned()
        .expect("at least one sample")
}

fn evidence<T: Serialize>(kind: EvidenceKind, verdict: impl Serialize, data: &T) -> Evidence {
    let verdict = match serde_json::to_value(verdict) {
        Ok(Value::String(s)) => s,
        Ok(v) => v.to_string(),
        Err(e) => e.to_string(),
    };
    Evidence {
        kind,
        verdict,
        data: serde_json::to_value(data).unwrap_or(Value::Null),
    }
}

/// Gathers the sublevel, tangency and Newton evidence at `t̄`, searches for
/// a verified Pareto point, and combines them into a three-valued verdict.
pub fn existence_verdict(f: &PolyMap, tbar: Option<&[f64]>, cfg: &ExistenceConfig) -> ExistenceReport {
    let (tbar, tbar_source) = match tbar {
        Some(t) => (t.to_vec(), "given"),
        None => (
            auto_tbar(f, cfg.tbar_samples, cfg.box_radius, cfg.seed),
            "image_sample",
        ),
    };
    let mut basis = Vec::new();

    let section = probe_bounded_section(f, &tbar, &cfg.section);
    basis.push(evidence(EvidenceKind::SectionProbe, section.verdict, &section));
    let proper = probe_properness(f, &tbar, &cfg.properness);
    basis.push(evidence(EvidenceKind::PropernessProbe, proper.verdict, &proper));
    let ps = probe_palais_smale(f, &tbar, &cfg.ps);
    basis.push(evidence(EvidenceKind::PsProbe, ps.verdict, &ps));
    let mut tcfg = cfg.tangency.clone();
    tcfg.sublevel = Some(tbar.clone());
    let tangency = estimate_tangency_values(f, &tcfg);
    let tverdict = if tangency.clusters.is_empty() {
        "no_value_found"
    } else {
        "values_found"
    };
    basis.push(evidence(EvidenceKind::TangencySublevel, tverdict, &tangency));

    let mut newton_ok = false;
    if f.nvars() <= MAX_FACE_DIM {
        let conv = is_convenient(f);
        let cx = faces_at_infinity(f).expect("dimension checked");
        let kh = check_khovanskii(f, &cx.faces, &cfg.khovanskii);
        newton_ok = conv.convenient && kh.overall != KhovanskiiStatus::DegenerateWitness;
        let verdict = if !conv.convenient {
            "not_convenient"
        } else if newton_ok {
            "convenient_nondegenerate"
        } else {
            "degenerate_face"
        };
        let data = json!({
            "convenience": conv,
            "khovanskii_overall": kh.overall,
            "faces": cx.faces.len(),
            "reports": kh.reports,
            "budget": kh.budget,
        });
        basis.push(evidence(EvidenceKind::NewtonCertificate, verdict, &data));
    } else {
        basis.push(evidence(
            EvidenceKind::NewtonCertificate,
            "dimension_unsupported",
            &json!({ "nvars": f.nvars(), "max": MAX_FACE_DIM }),
        ));
    }

    let search = find_pareto_points(f, &tbar, &cfg.pareto);
    let witness = search
        .points
        .iter()
        .filter(|p| p.kind == PointKind::ParetoVerifiedLocal)
        .find(|p| {
            reverify(f, p, &cfg.pareto, cfg.seed ^ REVERIFY_SALT) == PointKind::ParetoVerifiedLocal
        })
        .cloned();
    let pverdict = if witness.is_some() {
        "verified_point"
    } else {
        "none_verified"
    };
    basis.push(evidence(EvidenceKind::ParetoPoint, pverdict, &search));
    basis.sort_by_key(|e| e.kind);

    let (verdict, path) = if witness.is_some() {
        (ExistenceVerdict::ExistsWithWitness, "verified_pareto_point")
    } else if newton_ok && section.verdict == SectionVerdict::BoundedLikely {
        (
            ExistenceVerdict::CertificatePlusBoundedSection,
            "convenient_nondegenerate_with_bounded_section",
        )
    } else {
        (ExistenceVerdict::NoConclusion, "none")
    };
    let sublevel_probes_clean = section.verdict == SectionVerdict::BoundedLikely
        && proper.verdict == PropernessVerdict::NoWitnessFound
        && ps.verdict == PsVerdict::NoWitnessFound
        && tangency.clusters.is_empty();
    ExistenceReport {
        tbar,
        tbar_source: tbar_source.to_string(),
        verdict,
        basis,
        theorem_path: path.to_string(),
        sublevel_probes_clean,
        witness,
        budget: serde_json::to_value(cfg).unwrap_or(Value::Null),
        seed: cfg.seed,
    }
}
