use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::integration::config::IntegrationConfig;
use crate::integration::cutoff::{beta, plateau};
use crate::integration::model::GroupModel;
use crate::linalg::unit_vector;
use crate::rack::rng_from_seed;
use crate::report::{Check, VerificationReport};
use crate::scalar::max_abs_diff;

/// Relative slack allowed between a model's log-domain flag and the strip test.
const DOMAIN_SLACK: f64 = 1e-6;

/// `s(g′) = γ(log g′) log g′` on the log domain and `0` elsewhere.
pub fn section_s(model: &dyn GroupModel, g: &[f64], cfg: &IntegrationConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let n = model.lie_algebra().dim();
    let log = model.log(g)?;
    if !log.in_domain {
        return Ok(vec![0.0; n]);
    }
    let b = beta(model.lie_algebra(), &log.vector)?;
    if b >= PI * (1.0 + DOMAIN_SLACK) {
        return Err(Error::Model(format!(
            "model '{}' reports a logarithm in its domain with imaginary eigenvalue part {b}",
            model.name()
        )));
    }
    let gamma = plateau(b, cfg.tau_prime, cfg.tau);
    Ok(log.vector.into_iter().map(|x| gamma * x).collect())
}

/// Samples `g, g′` and compares `s(g g′ g⁻¹)` with `Ad_g s(g′)`; also checks
/// `s(e) = 0` and the finite-difference derivative of `s` at `e`.
pub fn section_equivariance_check(
    model: &dyn GroupModel,
    cfg: &IntegrationConfig,
    n_samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    cfg.validate()?;
    let n = model.lie_algebra().dim();
    let mut report = VerificationReport::new();

    let mut unit = Check::new("section_unit");
    let s_e = section_s(model, &model.identity(), cfg)?;
    let d = s_e.iter().map(|x| x.abs()).fold(0.0, f64::max);
    unit.record(vec![], s_e.iter().map(|x| x.to_string()).collect(), d, d != 0.0);
    report.push(unit);

    // central differences along exp(±δ e_i), δ = 1e-4
    let mut tangent = Check::new("section_tangent");
    let delta = 1e-4;
    for i in 0..n {
        let e: Vec<f64> = unit_vector(n, i);
        let plus = section_s(model, &model.exp(&e.iter().map(|x| x * delta).collect::<Vec<_>>())?, cfg)?;
        let minus = section_s(model, &model.exp(&e.iter().map(|x| -x * delta).collect::<Vec<_>>())?, cfg)?;
        let column: Vec<f64> = plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * delta)).collect();
        tangent.record_sample(vec![i], max_abs_diff(&column, &e), 1e-6);
    }
    report.push(tangent);

    let mut equiv = Check::new("section_equivariance");
    let mut rng = rng_from_seed(seed);
    for k in 0..n_samples {
        let g = model.sample(&mut rng, 1.0);
        let h = model.sample(&mut rng, 1.0);
        let lhs = section_s(model, &model.conj(&g, &h)?, cfg)?;
        let rhs = model.adjoint(&g)?.apply(&section_s(model, &h, cfg)?)?;
        equiv.record_sample(vec![k], max_abs_diff(&lhs, &rhs), cfg.tol);
    }
    report.push(equiv);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::integration::model::{E2Cover, NilpotentBch};
    use crate::rack::Group;

    #[test]
    fn section_examples() {
        let cfg = IntegrationConfig::default();
        let m = E2Cover::new();
        assert_eq!(section_s(&m, &m.identity(), &cfg).unwrap(), vec![0.0; 3]);
        let xi = [1.2, -0.4, 0.9];
        let s = section_s(&m, &m.exp(&xi).unwrap(), &cfg).unwrap();
        assert!(max_abs_diff(&s, &xi) < 1e-14);

        let theta = 0.9 * PI;
        let s = section_s(&m, &m.exp(&[theta, 0.0, 0.0]).unwrap(), &cfg).unwrap();
        let psi = plateau(theta, cfg.tau_prime, cfg.tau);
        assert!(psi > 0.0 && psi < 1.0);
        assert!((s[0] - psi * theta).abs() < 1e-12);
        assert!(s[0] > 0.0 && s[0] < theta);
        assert_eq!(section_s(&m, &[4.0, 1.0, 1.0], &cfg).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn equivariance_on_bundled_models() {
        let cfg = IntegrationConfig::default();
        let h = NilpotentBch::new(catalog::heisenberg().to_f64()).unwrap();
        let r = section_equivariance_check(&h, &cfg, 256, 7).unwrap();
        assert!(r.passed(), "{r:?}");
        let e2 = E2Cover::new();
        let r = section_equivariance_check(&e2, &cfg, 256, 7).unwrap();
        assert!(r.passed(), "{r:?}");
        let ab = NilpotentBch::new(crate::algebra::LeibnizAlgebra::abelian(2)).unwrap();
        let r = section_equivariance_check(&ab, &cfg, 32, 7).unwrap();
        assert_eq!(r.check("section_equivariance").unwrap().max_defect, 0.0);
    }
}
