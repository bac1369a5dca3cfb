use serde::Serialize;

use crate::analysis::roots::{root_bound, roots, ComplexMultiset};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{char_poly, MonicPolynomial};
use crate::scalar::Scalar;

/// Residual tolerance handed to the root finder for spectra.
pub const SPECTRUM_TOL: f64 = 1e-8;

/// Absolute width by which an eigenvalue must clear the strip boundary:
/// `|Im μ| < τ - STRIP_GUARD · max(1, τ)`.
pub const STRIP_GUARD: f64 = 1e-9;

/// Outcome of a strip test `max |Im μ| < τ` over the spectrum of a matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripVerdict {
    pub member: bool,
    pub tau: f64,
    /// `τ - max |Im μ|`; negative outside the strip.
    pub margin: f64,
    pub max_abs_imag: f64,
    pub root_bound: f64,
}

/// Eigenvalues of `x` as zeros of its characteristic polynomial.
/// A characteristic polynomial that is exactly `λ^n` gives `n` exact zeros.
pub fn spectrum<S: Scalar>(x: &Matrix<S>) -> Result<(MonicPolynomial<S>, ComplexMultiset)> {
    let f = char_poly(x)?;
    let z = spectrum_of_poly(&f)?;
    Ok((f, z))
}

pub fn spectrum_of_poly<S: Scalar>(f: &MonicPolynomial<S>) -> Result<ComplexMultiset> {
    roots(&f.to_complex(), SPECTRUM_TOL)
}

/// `max |Im μ|` over eigenvalues `μ` of `x`.
pub fn max_abs_imag_eigenvalue<S: Scalar>(x: &Matrix<S>) -> Result<f64> {
    Ok(spectrum(x)?.1.max_abs_imag())
}

pub fn verdict_from_poly<S: Scalar>(f: &MonicPolynomial<S>, tau: f64) -> Result<StripVerdict> {
    if !(tau > 0.0) {
        return Err(Error::Precondition(format!("strip half-width must be positive, got {tau}")));
    }
    let z = spectrum_of_poly(f)?;
    let beta = z.max_abs_imag();
    Ok(StripVerdict {
        member: beta < tau - STRIP_GUARD * tau.max(1.0),
        tau,
        margin: tau - beta,
        max_abs_imag: beta,
        root_bound: root_bound(&f.to_complex()),
    })
}

/// Whether every eigenvalue of `x` lies in the open strip `|Im μ| < τ`.
pub fn strip_membership<S: Scalar>(x: &Matrix<S>, tau: f64) -> Result<StripVerdict> {
    verdict_from_poly(&char_poly(x)?, tau)
}
