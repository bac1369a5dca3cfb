use crate::algebra::{adjoint_map, LeibnizAlgebra};
use crate::analysis::{char_poly, spectrum_of_poly, MonicPolynomial};
use crate::error::Result;
use crate::integration::config::IntegrationConfig;
use crate::scalar::Scalar;

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth plateau: `1` on `[0, τ′]`, `0` on `[τ, ∞)`, and
/// `f(τ - β) / (f(τ - β) + f(β - τ′))` with `f(t) = e^{-1/t}` in between.
pub fn plateau(beta: f64, tau_prime: f64, tau: f64) -> f64 {
    if beta <= tau_prime {
        return 1.0;
    }
    if beta >= tau {
        return 0.0;
    }
    let a = bump(tau - beta);
    let b = bump(beta - tau_prime);
    a / (a + b)
}

/// `β = max |Im μ|` over the roots of a characteristic polynomial.
pub fn beta_from_char_poly<S: Scalar>(f: &MonicPolynomial<S>) -> Result<f64> {
    Ok(spectrum_of_poly(f)?.max_abs_imag())
}

/// `β(ξ) = max |Im μ|` over eigenvalues `μ` of `ad_ξ`.
pub fn beta<S: Scalar>(alg: &LeibnizAlgebra<S>, xi: &[S]) -> Result<f64> {
    beta_from_char_poly(&char_poly(&adjoint_map(alg, xi)?)?)
}

/// `γ` evaluated through the characteristic polynomial of `ad_ξ`, so equal
/// polynomials give bit-identical values.
pub fn cutoff_from_char_poly<S: Scalar>(f: &MonicPolynomial<S>, cfg: &IntegrationConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(plateau(beta_from_char_poly(f)?, cfg.tau_prime, cfg.tau))
}

/// `γ(ξ) = ψ(β(ξ))`: equal to 1 where all eigenvalues of `ad_ξ` have
/// `|Im| ≤ τ′` and to 0 where some eigenvalue has `|Im| ≥ τ`.
pub fn invariant_cutoff<S: Scalar>(alg: &LeibnizAlgebra<S>, xi: &[S], cfg: &IntegrationConfig) -> Result<f64> {
    cutoff_from_char_poly(&char_poly(&adjoint_map(alg, xi)?)?, cfg)
}
