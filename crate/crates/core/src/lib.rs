//! Leibniz algebras, Lie racks and their integration.
//!
//! The crate is organised bottom-up: exact and floating scalars, dense
//! matrices and polynomials, Leibniz algebras and augmentations, the
//! spectral analysis of `ad` operators, rack structures, and finally the
//! pullback rack that integrates an augmented Leibniz algebra.

// NaN must fail every tolerance test, so `!(x <= tol)` is the intended form.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod analysis;
pub mod catalog;
pub mod error;
pub mod integration;
pub mod linalg;
pub mod poly;
pub mod rack;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use linalg::{LinearMap, Matrix};
pub use report::{Check, VerificationReport, Violation};
pub use scalar::{Rational, Scalar, ScalarMode};
