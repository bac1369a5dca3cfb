//! Integration of augmented Leibniz algebras to augmented racks over a
//! supplied group model.

mod chart;
mod config;
mod cutoff;
mod model;
mod nilradical;
mod pullback;
mod section;

pub use chart::exp_chart_check;
pub use config::IntegrationConfig;
pub use cutoff::{beta, beta_from_char_poly, cutoff_from_char_poly, invariant_cutoff, plateau};
pub use model::{bch, build_model, nilpotency_class, principal_log, E2Cover, GroupModel, LogResult, MatrixLocal, NilpotentBch};
pub use nilradical::verify_nilradical_translation;
pub use pullback::{build_pullback_rack, lie_case_reduction, tangent_check, DirtyRack, RackPoint, TangentCheck};
pub use section::{section_equivariance_check, section_s};
