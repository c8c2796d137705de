//! Candidate Pareto values, Pareto point search, and existence verdicts.

mod critical;
mod dominance;
mod search;
mod verdict;

pub use critical::{sample_critical_values, CriticalBudget, CriticalValues};
pub use dominance::{
    dominates, nondominated_filter, nondominated_flags, strictly_dominates, test_against, DominanceTest,
};
pub use search::{
    box_samples, find_pareto_points, reverify, value_tol, ParetoBudget, ParetoPoint, ParetoSearch, PointKind,
};
pub use verdict::{
    auto_tbar, candidate_pareto_values, existence_verdict, CandidateConfig, CandidateValue, CandidateValueSet,
    Evidence, EvidenceKind, ExistenceConfig, ExistenceReport, ExistenceVerdict, ValueSource,
};
