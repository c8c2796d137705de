//! Numerical analysis of unconstrained polynomial vector optimization
//! problems `Min f(x)` over the cone `R^m_+`.
//!
//! The crate samples the candidate Pareto values (critical values and
//! tangency values at infinity), probes sections, properness and
//! Palais–Smale conditions at a sublevel, checks Newton-polytope
//! non-degeneracy, and searches for verified Pareto points.

pub mod catalog;
pub mod cluster;
pub mod linalg;
pub mod newton;
pub mod optim;
pub mod pareto;
pub mod poly;
pub mod rabier;
pub mod sampling;
pub mod sublevel;
pub mod tangency;

pub use cluster::Cluster;
pub use newton::{
    check_khovanskii, faces_at_infinity, is_convenient, newton_polytope, principal_part, FaceAtInfinity,
    KhovanskiiReport, KhovanskiiStatus, LatticePolytope, NewtonError,
};
pub use pareto::{
    candidate_pareto_values, existence_verdict, find_pareto_points, nondominated_filter, sample_critical_values,
    CandidateValueSet, ExistenceReport, ExistenceVerdict, ParetoPoint, PointKind,
};
pub use poly::{parse_polynomial, Monomial, PolyError, PolyMap, Polynomial, ProblemFile};
pub use rabier::{rabier_nu, RabierError, RabierResult};
pub use sublevel::{probe_bounded_section, probe_palais_smale, probe_properness};
pub use tangency::{estimate_tangency_values, TangencyConfig, TangencyEstimate, TangencyError};
