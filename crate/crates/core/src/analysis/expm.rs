use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

const MAX_TAYLOR_DEGREE: usize = 40;

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("tolerance must be positive, got {tol}")))
    }
}

fn check_square<S: Scalar>(x: &Matrix<S>) -> Result<()> {
    if x.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!("expected a square matrix, got {}x{}", x.rows(), x.cols())))
    }
}

/// Smallest `m` with `ρ^{m+1}/(m+1)! · 1/(1 - ρ/(m+2)) < tol`, at least `min`.
fn taylor_degree(rho: f64, tol: f64, min: usize) -> usize {
    let mut term = 1.0;
    for m in 0..MAX_TAYLOR_DEGREE {
        term *= rho / (m + 1) as f64;
        let tail = term / (1.0 - rho / (m + 2) as f64).max(f64::MIN_POSITIVE);
        if m >= min && tail < tol {
            return m;
        }
    }
    MAX_TAYLOR_DEGREE
}

/// Matrix exponential by scaling and squaring: `X / 2^s` has max-row-sum
/// norm at most 1/2 and the Taylor remainder of the scaled exponential is
/// below `tol / 2^s`.
pub fn mat_exp(x: &Matrix<f64>, tol: f64) -> Result<Matrix<f64>> {
    check_tol(tol)?;
    check_square(x)?;
    if !x.is_finite() {
        return Err(Error::Numeric("matrix exponential of a non-finite matrix".into()));
    }
    let n = x.rows();
    let norm = x.norm_inf();
    let mut s = 0i32;
    while norm / 2f64.powi(s) > 0.5 {
        s += 1;
    }
    let scaled = x.scale(&2f64.powi(-s));
    let m = taylor_degree(norm / 2f64.powi(s), tol / 2f64.powi(s), 6);
    // Horner: I + Y(I + Y/2(I + Y/3(...)))
    let mut acc = Matrix::identity(n);
    for k in (1..=m).rev() {
        acc = Matrix::identity(n).add(&scaled.mul(&acc)?.scale(&(1.0 / k as f64)))?;
    }
    for _ in 0..s {
        acc = acc.mul(&acc)?;
    }
    Ok(acc)
}

/// `exp(N)` for nilpotent `N` as the terminating series; exact in rational mode.
pub fn exp_nilpotent<S: Scalar>(x: &Matrix<S>) -> Result<Matrix<S>> {
    check_square(x)?;
    if !x.is_nilpotent() {
        return Err(Error::Precondition("exp_nilpotent requires a nilpotent matrix".into()));
    }
    let n = x.rows();
    let mut acc = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=n {
        term = term.mul(x)?.scale(&(S::one() / S::from_i64(k as i64)));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `h(X) = Σ_{r≥0} (-1)^r X^r / (r+1)! = (I - e^{-X}) / X`.
///
/// Small arguments use the series directly. Larger ones read `h(X)` off the
/// upper-right block of `exp([[-X, I], [0, 0]])`, which avoids the
/// cancellation of the alternating series.
pub fn h_series(x: &Matrix<f64>, tol: f64) -> Result<Matrix<f64>> {
    check_tol(tol)?;
    check_square(x)?;
    let n = x.rows();
    let norm = x.norm_inf();
    if norm <= 1.0 {
        let m = taylor_degree(norm, tol, 4);
        let mut acc = Matrix::identity(n);
        for r in (1..=m).rev() {
            // term ratio of (-X)^r/(r+1)! to (-X)^{r-1}/r!
            acc = Matrix::identity(n).add(&x.mul(&acc)?.scale(&(-1.0 / (r + 1) as f64)))?;
        }
        return Ok(acc);
    }
    let mut big = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            big[(i, j)] = -x[(i, j)];
        }
        big[(i, n + i)] = 1.0;
    }
    let e = mat_exp(&big, tol)?;
    let mut h = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = e[(i, n + j)];
        }
    }
    Ok(h)
}

/// `h(N)` for nilpotent `N` as a finite sum; exact in rational mode.
pub fn h_nilpotent<S: Scalar>(x: &Matrix<S>) -> Result<Matrix<S>> {
    check_square(x)?;
    if !x.is_nilpotent() {
        return Err(Error::Precondition("h_nilpotent requires a nilpotent matrix".into()));
    }
    let n = x.rows();
    let mut acc = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for r in 1..=n {
        term = term.mul(x)?.scale(&(-S::one() / S::from_i64(r as i64 + 1)));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}
