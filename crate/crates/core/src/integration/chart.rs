use crate::analysis::h_series;
use crate::algebra::adjoint_map;
use crate::error::Result;
use crate::integration::config::IntegrationConfig;
use crate::integration::cutoff::beta;
use crate::integration::model::GroupModel;
use crate::rack::{rng_from_seed, sample_vector};
use crate::report::{Check, VerificationReport};
use crate::scalar::max_abs_diff;

const STRIP_MARGIN: f64 = 0.98;
const DERIVATIVE_STEP: f64 = 1e-5;
const DERIVATIVE_TOL: f64 = 1e-4;

/// Samples `ξ` with `β(ξ) < 0.98 τ` (starting with `ξ = 0`) and checks
/// `log exp ξ = ξ`, the derivative formula
/// `d/ds exp(ξ + sη) = exp(ξ) · h(ad_ξ) η` by central differences, and
/// invertibility of `h(ad_ξ)`.
pub fn exp_chart_check(
    model: &dyn GroupModel,
    cfg: &IntegrationConfig,
    n_samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    cfg.validate()?;
    let alg = model.lie_algebra();
    let n = alg.dim();
    let mut rng = rng_from_seed(seed);
    let mut round_trip = Check::new("log_exp_round_trip");
    let mut derivative = Check::new("exp_derivative");
    let mut invertible = Check::new("h_invertible");
    let mut accepted = 0;
    let mut xi = vec![0.0; n];
    let mut attempts = 0usize;
    while accepted < n_samples {
        if accepted > 0 {
            loop {
                attempts += 1;
                xi = sample_vector(&mut rng, n, cfg.tau);
                if beta(alg, &xi)? < STRIP_MARGIN * cfg.tau || attempts > 1000 * n_samples {
                    break;
                }
            }
        }
        let k = accepted;
        accepted += 1;

        let g = model.exp(&xi)?;
        let log = model.log(&g)?;
        let scale = xi.iter().map(|x| x.abs()).fold(1.0, f64::max);
        let d = if log.in_domain {
            max_abs_diff(&log.vector, &xi) / scale
        } else {
            f64::INFINITY
        };
        round_trip.record_sample(vec![k], d, cfg.tol);

        let h = h_series(&adjoint_map(alg, &xi)?, 1e-16)?;
        let eta: Vec<f64> = sample_vector(&mut rng, n, 1.0);
        let expected = h.apply(&eta)?;
        let g_inv = model.inverse(&g)?;
        let moved = |s: f64| -> Result<Vec<f64>> {
            let p: Vec<f64> = xi.iter().zip(&eta).map(|(a, b)| a + s * b).collect();
            Ok(model.log(&model.multiply(&g_inv, &model.exp(&p)?)?)?.vector)
        };
        let (plus, minus) = (moved(DERIVATIVE_STEP)?, moved(-DERIVATIVE_STEP)?);
        let fd: Vec<f64> = plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * DERIVATIVE_STEP)).collect();
        let denom = expected.iter().map(|x| x.abs()).fold(1.0, f64::max);
        derivative.record_sample(vec![k], max_abs_diff(&fd, &expected) / denom, DERIVATIVE_TOL);

        let det = h.determinant()?;
        invertible.record_sample(vec![k], if det.abs() > 1e-12 { 0.0 } else { f64::INFINITY }, 1.0);
    }
    let mut report = VerificationReport::new();
    report.push(round_trip);
    report.push(derivative);
    report.push(invertible);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::integration::model::{E2Cover, MatrixLocal, NilpotentBch};

    #[test]
    fn bundled_models_pass() {
        let cfg = IntegrationConfig::default();
        let h = NilpotentBch::new(catalog::heisenberg().to_f64()).unwrap();
        assert!(exp_chart_check(&h, &cfg, 50, 1).unwrap().passed());
        let r = exp_chart_check(&E2Cover::new(), &cfg, 50, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = exp_chart_check(&MatrixLocal::affine_line(), &cfg, 50, 3).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn single_sample_is_origin() {
        let cfg = IntegrationConfig::default();
        let r = exp_chart_check(&E2Cover::new(), &cfg, 1, 0).unwrap();
        assert_eq!(r.check("log_exp_round_trip").unwrap().max_defect, 0.0);
        assert!(r.check("exp_derivative").unwrap().max_defect < 1e-9);
    }
}
