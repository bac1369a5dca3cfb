use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::expm::{exp_nilpotent, mat_exp};
use crate::analysis::roots::root_bound;
use crate::analysis::strip::{spectrum, strip_membership};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{char_poly, Poly};
use crate::report::{Check, VerificationReport};
use crate::scalar::Scalar;

/// Additive Jordan decomposition `X = S + N`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanPair<S: Scalar> {
    pub semisimple: Matrix<S>,
    pub nilpotent: Matrix<S>,
    /// False for the floating-point fallback.
    pub exact: bool,
    pub warning: Option<String>,
}

/// Chevalley's Newton iteration `S ← S - q(S) q'(S)^{-1}` from `S = X`,
/// stopping once `done(q(S))`.
fn chevalley_newton<S: Scalar>(
    x: &Matrix<S>,
    q: &Poly<S>,
    max_iter: usize,
    done: impl Fn(&Matrix<S>) -> bool,
) -> Result<(Matrix<S>, bool)> {
    let dq = q.derivative();
    let mut s = x.clone();
    for _ in 0..max_iter {
        let qs = q.eval_matrix(&s)?;
        if done(&qs) {
            return Ok((s, true));
        }
        let step = qs.mul(&dq.eval_matrix(&s)?.inverse()?)?;
        s = s.sub(&step)?;
    }
    let qs = q.eval_matrix(&s)?;
    Ok((s, done(&qs)))
}

fn ceil_log2(n: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// Radius for grouping eigenvalues in the float fallback.
const FLOAT_CLUSTER: f64 = 1e-4;
/// Distinct eigenvalue clusters closer than this (relative) trigger a warning.
const FLOAT_SEPARATION: f64 = 1e-2;

fn float_squarefree(x: &Matrix<f64>) -> Result<(Poly<f64>, Option<String>)> {
    let (f, z) = spectrum(x)?;
    let bound = root_bound(&f.to_complex());
    let clusters = z.clusters(FLOAT_CLUSTER * bound);
    let mut q = vec![Complex64::new(1.0, 0.0)];
    for (c, _) in &clusters {
        let mut next = vec![Complex64::new(0.0, 0.0); q.len() + 1];
        for (k, a) in q.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * c;
        }
        q = next;
    }
    let mut sep = f64::INFINITY;
    for (i, (a, _)) in clusters.iter().enumerate() {
        for (b, _) in &clusters[i + 1..] {
            sep = sep.min((a - b).norm());
        }
    }
    let warning = if sep < FLOAT_SEPARATION * bound {
        Some(format!(
            "ill-separated eigenvalues (gap {sep:.3e} against scale {bound:.3e}); decomposition is poorly conditioned"
        ))
    } else {
        None
    };
    Ok((Poly::new(q.iter().map(|c| c.re).collect()), warning))
}

/// Jordan–Chevalley decomposition with both parts polynomials in `X`.
///
/// Rational input runs the Newton iteration on the squarefree part
/// `f / gcd(f, f')` of the characteristic polynomial and is exact. Float
/// input builds the squarefree polynomial from clustered numeric
/// eigenvalues; the result is marked inexact and may carry a conditioning
/// warning.
pub fn jordan_chevalley<S: Scalar>(x: &Matrix<S>) -> Result<JordanPair<S>> {
    if !x.is_square() {
        return Err(Error::Dimension("Jordan decomposition of a non-square matrix".into()));
    }
    let n = x.rows();
    if n == 0 {
        return Ok(JordanPair {
            semisimple: x.clone(),
            nilpotent: x.clone(),
            exact: S::is_exact(),
            warning: None,
        });
    }
    if S::is_exact() {
        let q = char_poly(x)?.to_poly().squarefree_part()?;
        let (s, ok) = chevalley_newton(x, &q, ceil_log2(n) + 2, Matrix::is_zero)?;
        if !ok {
            return Err(Error::Internal("Chevalley iteration did not terminate".into()));
        }
        let nil = x.sub(&s)?;
        return Ok(JordanPair {
            semisimple: s,
            nilpotent: nil,
            exact: true,
            warning: None,
        });
    }
    let xf = x.to_f64();
    let (q, mut warning) = float_squarefree(&xf)?;
    let scale = xf.max_abs().max(1.0);
    let deg = q.degree().unwrap_or(0) as i32;
    let threshold = 1e-10 * scale.powi(deg);
    let (s, ok) = chevalley_newton(&xf, &q, 60, |m| m.max_abs() <= threshold)?;
    if !ok && warning.is_none() {
        warning = Some("Chevalley iteration did not reach the residual threshold".into());
    }
    let s: Matrix<S> = s.map(|&v| S::from_f64(v));
    let nil = x.sub(&s)?;
    Ok(JordanPair {
        semisimple: s,
        nilpotent: nil,
        exact: false,
        warning,
    })
}

/// Checks `S + N = X`, `SN = NS`, `N^n = 0` and that the squarefree part of
/// the characteristic polynomial of `S` annihilates `S`.
pub fn verify_jordan_pair<S: Scalar>(x: &Matrix<S>, pair: &JordanPair<S>) -> VerificationReport {
    let mut report = VerificationReport::new();
    let scale = x.max_abs().max(1.0);
    let tol = if S::is_exact() { 0.0 } else { 1e-8 * scale };
    let fails = |m: &Matrix<S>, tol: f64| if S::is_exact() { !m.is_zero() } else { !(m.max_abs() <= tol) };

    let mut sum = Check::new("sum");
    match pair.semisimple.add(&pair.nilpotent).and_then(|m| m.sub(x)) {
        Ok(d) => sum.record(vec![], vec![], d.max_abs(), fails(&d, tol)),
        Err(e) => sum.fail(e.to_string()),
    }
    report.push(sum);

    let mut comm = Check::new("commute");
    match pair.semisimple.commutator(&pair.nilpotent) {
        Ok(d) => comm.record(vec![], vec![], d.max_abs(), fails(&d, tol * scale)),
        Err(e) => comm.fail(e.to_string()),
    }
    report.push(comm);

    let mut nil = Check::new("nilpotent");
    match pair.nilpotent.pow(x.rows() as u32) {
        Ok(p) => nil.record(vec![], vec![], p.max_abs(), fails(&p, tol * scale.powi(x.rows() as i32))),
        Err(e) => nil.fail(e.to_string()),
    }
    report.push(nil);

    let mut semi = Check::new("semisimple");
    let residual = if S::is_exact() {
        char_poly(&pair.semisimple)
            .and_then(|f| f.to_poly().squarefree_part())
            .and_then(|q| q.eval_matrix(&pair.semisimple))
    } else {
        let sf = pair.semisimple.to_f64();
        float_squarefree(&sf)
            .and_then(|(q, _)| q.eval_matrix(&sf))
            .map(|m| m.map(|&v| S::from_f64(v)))
    };
    match residual {
        Ok(r) => {
            let deg_scale = scale.powi(x.rows() as i32);
            semi.record(vec![], vec![], r.max_abs(), fails(&r, 1e-6 * deg_scale));
        }
        Err(e) => semi.fail(e.to_string()),
    }
    report.push(semi);
    report
}

/// `log U = Σ_{r≥1} (-1)^{r+1} (U - I)^r / r` for unipotent `U`; the sum is
/// finite and exact in rational mode.
pub fn unipotent_log<S: Scalar>(u: &Matrix<S>) -> Result<Matrix<S>> {
    if !u.is_square() {
        return Err(Error::Dimension("logarithm of a non-square matrix".into()));
    }
    let n = u.rows();
    let x = u.sub(&Matrix::identity(n))?;
    if !x.is_nilpotent() {
        return Err(Error::Precondition("U - I is not nilpotent".into()));
    }
    let mut acc = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for r in 1..=n {
        power = power.mul(&x)?;
        if power.is_zero() {
            break;
        }
        let c = S::from_ratio(if r % 2 == 1 { 1 } else { -1 }, r as i64);
        acc = acc.add(&power.scale(&c))?;
    }
    Ok(acc)
}

/// Jordan parts of `exp(X)` obtained from those of `X`:
/// `exp(X)_S = exp(X_S)` and `exp(X)_N = exp(X) - exp(X_S)`.
#[derive(Debug, Clone)]
pub struct FunctionalParts {
    pub semisimple: Matrix<f64>,
    pub nilpotent: Matrix<f64>,
    pub report: VerificationReport,
}

pub fn functional_jordan_parts<S: Scalar>(x: &Matrix<S>, tol: f64) -> Result<FunctionalParts> {
    let pair = jordan_chevalley(x)?;
    let ex = mat_exp(&x.to_f64(), tol)?;
    let es = mat_exp(&pair.semisimple.to_f64(), tol)?;
    let en = ex.sub(&es)?;
    let n = x.rows();
    let scale = ex.max_abs().max(1.0);
    let check_tol = 1e3 * tol.max(f64::EPSILON) * scale;

    let mut report = VerificationReport::new();
    let mut fact = Check::new("factorization");
    let exp_n = exp_nilpotent(&pair.nilpotent)?.to_f64();
    let d = es.mul(&exp_n)?.sub(&ex)?;
    fact.record(vec![], vec![], d.max_abs(), !(d.max_abs() <= check_tol));
    report.push(fact);

    let mut comm = Check::new("commute");
    let d = es.commutator(&en)?;
    comm.record(vec![], vec![], d.max_abs(), !(d.max_abs() <= check_tol * scale));
    report.push(comm);

    let mut nil = Check::new("nilpotent");
    let p = en.pow(n as u32)?;
    nil.record(vec![], vec![], p.max_abs(), !(p.max_abs() <= check_tol * scale.powi(n as i32)));
    report.push(nil);

    Ok(FunctionalParts {
        semisimple: es,
        nilpotent: en,
        report,
    })
}

/// Result of comparing `‖e^X - e^Y‖` with `‖X - Y‖`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectivityProbe {
    pub exp_distance: f64,
    pub distance: f64,
    /// `‖e^X - e^Y‖ < tol` while `‖X - Y‖ > 1000 tol`.
    pub violation: bool,
}

/// Probes injectivity of `exp` on the `π`-strip; both inputs must lie in it.
pub fn exp_injectivity_probe(x: &Matrix<f64>, y: &Matrix<f64>, tol: f64) -> Result<InjectivityProbe> {
    for (name, m) in [("X", x), ("Y", y)] {
        if !strip_membership(m, PI)?.member {
            return Err(Error::Precondition(format!("{name} is outside the π-strip")));
        }
    }
    let exp_tol = (tol * 1e-3).max(1e-15);
    let exp_distance = mat_exp(x, exp_tol)?.max_abs_diff(&mat_exp(y, exp_tol)?);
    let distance = x.max_abs_diff(y);
    Ok(InjectivityProbe {
        exp_distance,
        distance,
        violation: exp_distance < tol && distance > 1000.0 * tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn jordan_examples() {
        let d = qm(&[&[2, 0], &[0, -1]]);
        let p = jordan_chevalley(&d).unwrap();
        assert_eq!(p.semisimple, d);
        assert!(p.nilpotent.is_zero());

        let n = qm(&[&[0, 1, 5], &[0, 0, 2], &[0, 0, 0]]);
        let p = jordan_chevalley(&n).unwrap();
        assert!(p.semisimple.is_zero());
        assert_eq!(p.nilpotent, n);

        let j = qm(&[&[1, 1], &[0, 1]]);
        let p = jordan_chevalley(&j).unwrap();
        assert_eq!(p.semisimple, Matrix::identity(2));
        assert_eq!(p.nilpotent, qm(&[&[0, 1], &[0, 0]]));
        assert!(verify_jordan_pair(&j, &p).passed());
    }

    #[test]
    fn jordan_non_diagonal_semisimple_part() {
        // rotation block with a nilpotent coupling: eigenvalues ±i, each twice
        let x = qm(&[&[0, -1, 1, 0], &[1, 0, 0, 1], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
        let p = jordan_chevalley(&x).unwrap();
        assert!(!p.nilpotent.is_zero());
        let r = verify_jordan_pair(&x, &p);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn float_fallback_is_flagged() {
        let x = Matrix::from_rows(vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let p = jordan_chevalley(&x).unwrap();
        assert!(!p.exact);
        assert!(p.semisimple.max_abs_diff(&Matrix::identity(2)) < 1e-6);
        let close = Matrix::from_rows(vec![vec![1.0, 1.0], vec![0.0, 1.0 + 1e-3]]).unwrap();
        assert!(jordan_chevalley(&close).unwrap().warning.is_some());
    }

    #[test]
    fn unipotent_log_examples() {
        assert!(unipotent_log(&Matrix::<Rational>::identity(3)).unwrap().is_zero());
        assert_eq!(unipotent_log(&qm(&[&[1, 1], &[0, 1]])).unwrap(), qm(&[&[0, 1], &[0, 0]]));
        let n = qm(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let u = Matrix::identity(3).add(&n).unwrap();
        let expect = n.sub(&n.mul(&n).unwrap().scale(&Rational::from_ratio(1, 2))).unwrap();
        assert_eq!(unipotent_log(&u).unwrap(), expect);
        assert_eq!(exp_nilpotent(&expect).unwrap(), u);
        assert!(unipotent_log(&qm(&[&[2, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn functional_parts_examples() {
        let e = std::f64::consts::E;
        let d = qm(&[&[1, 0], &[0, 2]]);
        let f = functional_jordan_parts(&d, 1e-14).unwrap();
        assert!(f.report.passed());
        assert!((f.semisimple[(1, 1)] - e * e).abs() < 1e-12);
        assert!(f.nilpotent.max_abs() < 1e-12);

        let n = qm(&[&[0, 3], &[0, 0]]);
        let f = functional_jordan_parts(&n, 1e-14).unwrap();
        assert!(f.semisimple.max_abs_diff(&Matrix::identity(2)) < 1e-15);
        assert!((f.nilpotent[(0, 1)] - 3.0).abs() < 1e-14);

        let j = qm(&[&[1, 1], &[0, 1]]);
        let f = functional_jordan_parts(&j, 1e-14).unwrap();
        assert!(f.report.passed());
        assert!(f.semisimple.max_abs_diff(&Matrix::identity(2).scale(&e)) < 1e-13);
        let expect = Matrix::from_rows(vec![vec![0.0, e], vec![0.0, 0.0]]).unwrap();
        assert!(f.nilpotent.max_abs_diff(&expect) < 1e-13);
    }

    #[test]
    fn injectivity_probe_examples() {
        let x = Matrix::from_rows(vec![vec![0.3, -1.0], vec![1.0, 0.2]]).unwrap();
        assert!(!exp_injectivity_probe(&x, &x, 1e-9).unwrap().violation);
        let two_pi = 2.0 * PI;
        let y = Matrix::from_rows(vec![vec![0.0, -two_pi], vec![two_pi, 0.0]]).unwrap();
        let z = Matrix::zeros(2, 2);
        assert!(mat_exp(&y, 1e-14).unwrap().max_abs_diff(&Matrix::identity(2)) < 1e-12);
        assert!(matches!(exp_injectivity_probe(&z, &y, 1e-9), Err(Error::Precondition(_))));
    }
}
