//! Local solvers shared by the analysis modules.

mod lm;
mod minimize;
mod objective;
mod sphere;

pub use lm::{levenberg_marquardt, LmOptions, LmResult, Residual};
pub use minimize::{minimize, MinResult, MinStatus, MinimizeOptions};
pub use objective::{Eval, Objective, PenalizedScalarization, TargetResidual};
pub use sphere::{minimize_on_sphere, SphereOptions, SphereResult};
