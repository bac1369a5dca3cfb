//! Univariate polynomials over a scalar field and monic polynomials in
//! coefficient form `λ^n + a_1 λ^{n-1} + ... + a_n`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Dense polynomial with coefficients in ascending degree order.
/// The zero polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::new(vec![S::one()])
    }

    /// `λ - c`.
    pub fn linear_root(c: S) -> Self {
        Self::new(vec![-c, S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, x: &Matrix<S>) -> Result<Matrix<S>> {
        if !x.is_square() {
            return Err(Error::Dimension("polynomial of a non-square matrix".into()));
        }
        let n = x.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(&Matrix::identity(n).scale(c))?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * S::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_else(S::zero);
                    let b = other.coeffs.get(k).cloned().unwrap_or_else(S::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::Numeric("polynomial division by zero".into()));
        };
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![S::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem[rem.len() - 1].clone() / lead.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn make_monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = S::one() / l.clone();
                Self::new(self.coeffs.iter().map(|c| c.clone() * inv.clone()).collect())
            }
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor. Exact only in rational mode.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).map(|(_, r)| r).unwrap_or_else(|_| Self::zero());
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// `f / gcd(f, f')`, the product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Result<Self> {
        let g = self.gcd(&self.derivative());
        Ok(self.div_rem(&g)?.0.make_monic())
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

/// Monic polynomial `λ^n + Σ_{r=1}^{n} a_r λ^{n-r}` stored as `(a_1, ..., a_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial<T> {
    a: Vec<T>,
}

impl<T: Clone> MonicPolynomial<T> {
    pub fn from_coefficients(a: Vec<T>) -> Self {
        Self { a }
    }

    pub fn degree(&self) -> usize {
        self.a.len()
    }

    /// `(a_1, ..., a_n)`.
    pub fn coefficients(&self) -> &[T] {
        &self.a
    }
}

impl<S: Scalar> MonicPolynomial<S> {
    pub fn from_poly(p: &Poly<S>) -> Result<Self> {
        let Some(d) = p.degree() else {
            return Err(Error::Numeric("zero polynomial is not monic".into()));
        };
        let p = p.make_monic();
        Ok(Self {
            a: (0..d).rev().map(|k| p.coeffs[k].clone()).collect(),
        })
    }

    pub fn to_poly(&self) -> Poly<S> {
        let mut c: Vec<S> = self.a.iter().rev().cloned().collect();
        c.push(S::one());
        Poly::new(c)
    }

    /// `‖a‖ = Σ |a_j|`.
    pub fn norm(&self) -> f64 {
        self.a.iter().map(Scalar::magnitude).sum()
    }

    pub fn to_complex(&self) -> MonicPolynomial<Complex64> {
        MonicPolynomial {
            a: self.a.iter().map(|x| Complex64::new(x.to_f64(), 0.0)).collect(),
        }
    }
}

impl MonicPolynomial<Complex64> {
    pub fn norm(&self) -> f64 {
        self.a.iter().map(|z| z.norm()).sum()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.a.iter().fold(Complex64::new(1.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let n = self.a.len();
        let mut acc = Complex64::new(n as f64, 0.0);
        for (r, c) in self.a.iter().enumerate().take(n.saturating_sub(1)) {
            acc = acc * z + c * (n - 1 - r) as f64;
        }
        acc
    }

    pub fn max_coefficient_diff(&self, other: &Self) -> f64 {
        if self.a.len() != other.a.len() {
            return f64::INFINITY;
        }
        self.a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// Characteristic polynomial `det(λI - X)` by the Faddeev–LeVerrier recursion.
/// Exact in rational mode.
pub fn char_poly<S: Scalar>(x: &Matrix<S>) -> Result<MonicPolynomial<S>> {
    if !x.is_square() {
        return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
    }
    let n = x.rows();
    let mut a = Vec::with_capacity(n);
    let mut m = Matrix::identity(n);
    for k in 1..=n {
        let am = x.mul(&m)?;
        let c = -(am.trace() / S::from_i64(k as i64));
        a.push(c.clone());
        m = am.add(&Matrix::identity(n).scale(&c))?;
    }
    Ok(MonicPolynomial { a })
}
