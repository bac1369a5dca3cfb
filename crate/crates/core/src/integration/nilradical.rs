use crate::algebra::{adjoint_map, is_two_sided_ideal, LeibnizAlgebra, Subspace};
use crate::analysis::char_poly;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rack::{rng_from_seed, sample_scalar, sample_vector};
use crate::report::{Check, VerificationReport};
use crate::scalar::Scalar;

/// True when the span is nilpotent as an algebra: iterated brackets
/// `[n_1, [n_2, ... n_k]]` vanish for `k ≤ dim + 1`.
fn is_nilpotent_span<S: Scalar>(alg: &LeibnizAlgebra<S>, span: &Subspace<S>) -> Result<bool> {
    let mut current = span.clone();
    for _ in 0..=alg.dim() {
        if current.dim() == 0 {
            return Ok(true);
        }
        let mut gens = Vec::new();
        for a in span.basis() {
            for b in current.basis() {
                gens.push(alg.bracket(a, b)?);
            }
        }
        current = Subspace::span(alg.dim(), &gens)?;
    }
    Ok(current.dim() == 0)
}

/// Checks that `nilbasis` spans a nilpotent ideal, then that
/// `char_poly(ad_{ξ+η}) = char_poly(ad_ξ)` and
/// `tr (ad_{ξ+η})^r = tr (ad_ξ)^r` for sampled `ξ` and `η` in the span.
/// Exact in rational mode.
pub fn verify_nilradical_translation<S: Scalar>(
    alg: &LeibnizAlgebra<S>,
    nilbasis: &[Vec<S>],
    n_samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let n = alg.dim();
    let span = Subspace::span(n, nilbasis)?;
    if !is_two_sided_ideal(alg, &span)? {
        return Err(Error::Precondition("claimed nilradical is not an ideal".into()));
    }
    if !is_nilpotent_span(alg, &span)? {
        return Err(Error::Precondition("claimed nilradical is not nilpotent".into()));
    }
    let mut poly = Check::new("char_poly_translation");
    let mut traces = Check::new("trace_powers");
    let mut rng = rng_from_seed(seed);
    for k in 0..n_samples {
        let xi: Vec<S> = sample_vector(&mut rng, n, 2.0);
        let mut shifted = xi.clone();
        for b in span.basis() {
            let u: S = sample_scalar(&mut rng, 2.0);
            for (s, bi) in shifted.iter_mut().zip(b) {
                *s = s.clone() + u.clone() * bi.clone();
            }
        }
        let a = adjoint_map(alg, &xi)?;
        let b = adjoint_map(alg, &shifted)?;
        let (fa, fb) = (char_poly(&a)?, char_poly(&b)?);
        let diffs: Vec<S> = fa
            .coefficients()
            .iter()
            .zip(fb.coefficients())
            .map(|(x, y)| x.clone() - y.clone())
            .collect();
        let mag = diffs.iter().map(Scalar::magnitude).fold(0.0, f64::max);
        let scale = fa.norm().max(1.0);
        let failed = diffs.iter().any(|d| !negligible_rel(d, scale));
        poly.record(vec![k], diffs.iter().map(|d| d.to_string()).collect(), mag, failed);

        let (mut pa, mut pb) = (Matrix::<S>::identity(n), Matrix::<S>::identity(n));
        let mut worst = 0.0f64;
        let mut failed = false;
        for r in 1..=n {
            pa = pa.mul(&a)?;
            pb = pb.mul(&b)?;
            let d = pa.trace() - pb.trace();
            let scale = pa.trace().magnitude().max(1.0);
            worst = worst.max(d.magnitude());
            failed |= !negligible_rel(&d, scale);
            let _ = r;
        }
        traces.record(vec![k], vec![], worst, failed);
    }
    let mut report = VerificationReport::new();
    report.push(poly);
    report.push(traces);
    Ok(report)
}

fn negligible_rel<S: Scalar>(d: &S, scale: f64) -> bool {
    if S::is_exact() {
        d.is_zero()
    } else {
        d.magnitude() <= 1e-9 * scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::Rational;

    #[test]
    fn bundled_nilradicals() {
        let r = verify_nilradical_translation(&catalog::affine_line(), &catalog::affine_nilradical(), 100, 1).unwrap();
        assert!(r.passed());
        let r = verify_nilradical_translation(&catalog::euclidean_plane(), &catalog::euclidean_nilradical(), 100, 2)
            .unwrap();
        assert!(r.passed());
        let h = catalog::heisenberg();
        let full: Vec<Vec<Rational>> = (0..3).map(|i| crate::linalg::unit_vector(3, i)).collect();
        let r = verify_nilradical_translation(&h, &full, 20, 3).unwrap();
        assert!(r.passed());
        // every characteristic polynomial of a nilpotent algebra is λ^n
        let x: Vec<Rational> = [3, -5, 7].iter().map(|&v| Rational::from_i64(v)).collect();
        let f = char_poly(&adjoint_map(&h, &x).unwrap()).unwrap();
        assert!(f.coefficients().iter().all(|c| c.is_negligible()));
    }

    #[test]
    fn rejects_non_nilradicals() {
        let aff = catalog::affine_line();
        let e1 = vec![vec![Rational::from_i64(1), Rational::from_i64(0)]];
        assert!(matches!(verify_nilradical_translation(&aff, &e1, 5, 0), Err(Error::Precondition(_))));
        let full: Vec<Vec<Rational>> = (0..2).map(|i| crate::linalg::unit_vector(2, i)).collect();
        assert!(matches!(verify_nilradical_translation(&aff, &full, 5, 0), Err(Error::Precondition(_))));
    }
}
