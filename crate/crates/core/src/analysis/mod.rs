//! Spectral analysis of square matrices: exponential and `h`-series,
//! zeros of monic polynomials, eigenvalue strips and the Jordan–Chevalley
//! decomposition.

mod expm;
mod jordan;
mod roots;
mod strip;

pub use crate::poly::{char_poly, MonicPolynomial};
pub use expm::{exp_nilpotent, h_nilpotent, h_series, mat_exp};
pub use jordan::{
    exp_injectivity_probe, functional_jordan_parts, jordan_chevalley, unipotent_log, verify_jordan_pair,
    FunctionalParts, InjectivityProbe, JordanPair,
};
pub use roots::{cluster_radius, from_roots, root_bound, roots, ComplexMultiset};
pub use strip::{
    max_abs_imag_eigenvalue, spectrum, spectrum_of_poly, strip_membership, verdict_from_poly, StripVerdict,
    SPECTRUM_TOL, STRIP_GUARD,
};
