//! Racks: pointed carriers with a self-distributive product, the standard
//! constructions, sampled axiom checks and recovery of the tangent bracket.

mod constructions;
mod group;
mod structure;
mod tangent;

pub use constructions::{
    conjugation_rack, from_augmented, gauge, kinyon_rack, trivial_rack, verify_augmented_rack, ActionFn,
    AugmentedRackStructure, PhiFn, SelfMap,
};
pub use group::{GeneralLinearGroup, Group, UnitriangularGroup, VectorGroup};
pub use structure::{
    check_rack_axioms, point_distance, rng_from_seed, sample_scalar, sample_vector, Carrier, Chart, ChartCoordsFn,
    ChartPointFn, DefectFn,
    Point, ProductFn, RackStructure, SamplerFn,
};
pub use tangent::{relative_table_error, tangent_leibniz, TangentBracket};
