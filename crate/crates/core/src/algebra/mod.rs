//! Leibniz algebras by structure constants, their canonical ideals and
//! quotients, and augmented Leibniz algebras.

mod augmented;
mod ideals;
mod leibniz;

pub use augmented::{canonical_augmentation, derived_bracket, verify_augmented, AugmentedLeibnizAlgebra};
pub use ideals::{is_two_sided_ideal, left_center, quotient_by_ideal, squares_ideal, Subspace};
pub use leibniz::{adjoint_map, leibniz_defect, right_multiplication, verify_leibniz, verify_lie, LeibnizAlgebra};
