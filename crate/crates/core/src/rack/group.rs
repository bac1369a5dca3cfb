use rand_chacha::ChaCha8Rng;

use crate::analysis::{exp_nilpotent, unipotent_log};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rack::structure::{sample_scalar, sample_vector, Chart, Point};
use crate::scalar::Scalar;

/// Group operations on coordinate tuples.
pub trait Group<S>: Send + Sync {
    /// Length of the coordinate tuple of an element.
    fn coord_dim(&self) -> usize;
    fn identity(&self) -> Point<S>;
    fn multiply(&self, a: &[S], b: &[S]) -> Result<Point<S>>;
    fn inverse(&self, a: &[S]) -> Result<Point<S>>;
    /// Element near the identity; `scale` bounds the displacement.
    fn sample(&self, rng: &mut ChaCha8Rng, scale: f64) -> Point<S>;
    /// Distance of a coordinate tuple from the group; zero on members.
    fn membership_defect(&self, a: &[S]) -> f64 {
        if a.len() == self.coord_dim() {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// `a b a^{-1}`.
    fn conj(&self, a: &[S], b: &[S]) -> Result<Point<S>> {
        self.multiply(&self.multiply(a, b)?, &self.inverse(a)?)
    }
}

/// `(S^n, +)`.
#[derive(Debug, Clone)]
pub struct VectorGroup {
    pub dim: usize,
}

impl<S: Scalar> Group<S> for VectorGroup {
    fn coord_dim(&self) -> usize {
        self.dim
    }

    fn identity(&self) -> Point<S> {
        vec![S::zero(); self.dim]
    }

    fn multiply(&self, a: &[S], b: &[S]) -> Result<Point<S>> {
        Ok(a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect())
    }

    fn inverse(&self, a: &[S]) -> Result<Point<S>> {
        Ok(a.iter().map(|x| -x.clone()).collect())
    }

    fn sample(&self, rng: &mut ChaCha8Rng, scale: f64) -> Point<S> {
        sample_vector(rng, self.dim, scale)
    }
}

fn as_matrix<S: Scalar>(n: usize, a: &[S]) -> Result<Matrix<S>> {
    Matrix::from_vec(n, n, a.to_vec())
}

/// Invertible `n × n` matrices, stored row-major.
#[derive(Debug, Clone)]
pub struct GeneralLinearGroup {
    pub n: usize,
}

impl<S: Scalar> Group<S> for GeneralLinearGroup {
    fn coord_dim(&self) -> usize {
        self.n * self.n
    }

    fn identity(&self) -> Point<S> {
        Matrix::<S>::identity(self.n).data().to_vec()
    }

    fn multiply(&self, a: &[S], b: &[S]) -> Result<Point<S>> {
        Ok(as_matrix(self.n, a)?.mul(&as_matrix(self.n, b)?)?.data().to_vec())
    }

    fn inverse(&self, a: &[S]) -> Result<Point<S>> {
        Ok(as_matrix(self.n, a)?.inverse()?.data().to_vec())
    }

    /// `I + E` with entries of `E` in `[-scale/n, scale/n]`, which keeps the
    /// sample invertible for `scale < 1`.
    fn sample(&self, rng: &mut ChaCha8Rng, scale: f64) -> Point<S> {
        let n = self.n;
        let mut m = Matrix::<S>::identity(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = m[(i, j)].clone() + sample_scalar(rng, scale / n.max(1) as f64);
            }
        }
        m.data().to_vec()
    }

    fn membership_defect(&self, a: &[S]) -> f64 {
        if a.len() != self.n * self.n {
            return f64::INFINITY;
        }
        match as_matrix(self.n, a).and_then(|m| m.determinant()) {
            Ok(d) if !d.is_negligible() => 0.0,
            _ => f64::INFINITY,
        }
    }
}

/// Upper unitriangular `n × n` matrices, stored row-major.
#[derive(Debug, Clone)]
pub struct UnitriangularGroup {
    pub n: usize,
}

impl UnitriangularGroup {
    /// Number of entries strictly above the diagonal.
    pub fn algebra_dim(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    fn strict_upper<S: Scalar>(&self, c: &[S]) -> Matrix<S> {
        let mut m = Matrix::zeros(self.n, self.n);
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                m[(i, j)] = c[k].clone();
                k += 1;
            }
        }
        m
    }

    /// Exponential coordinates: strictly upper entries of `log U`, listed
    /// row by row.
    pub fn exp_chart<S: Scalar>(&self) -> Chart<S> {
        let g = self.clone();
        let h = self.clone();
        Chart {
            dim: self.algebra_dim(),
            point: std::sync::Arc::new(move |c: &[f64]| {
                let c: Vec<S> = c.iter().map(|&x| S::from_f64(x)).collect();
                Ok(exp_nilpotent(&g.strict_upper(&c))?.data().to_vec())
            }),
            coords: std::sync::Arc::new(move |p: &[S]| {
                let l = unipotent_log(&as_matrix(h.n, p)?)?;
                let mut out = Vec::with_capacity(h.algebra_dim());
                for i in 0..h.n {
                    for j in i + 1..h.n {
                        out.push(l[(i, j)].to_f64());
                    }
                }
                Ok(out)
            }),
        }
    }
}

impl<S: Scalar> Group<S> for UnitriangularGroup {
    fn coord_dim(&self) -> usize {
        self.n * self.n
    }

    fn identity(&self) -> Point<S> {
        Matrix::<S>::identity(self.n).data().to_vec()
    }

    fn multiply(&self, a: &[S], b: &[S]) -> Result<Point<S>> {
        Ok(as_matrix(self.n, a)?.mul(&as_matrix(self.n, b)?)?.data().to_vec())
    }

    /// `U^{-1} = Σ_{k<n} (I - U)^k`.
    fn inverse(&self, a: &[S]) -> Result<Point<S>> {
        let n = self.n;
        let u = as_matrix(n, a)?;
        let m = Matrix::identity(n).sub(&u)?;
        if !m.is_nilpotent() {
            return Err(Error::Precondition("matrix is not unipotent".into()));
        }
        let mut acc = Matrix::identity(n);
        let mut p = Matrix::identity(n);
        for _ in 1..n {
            p = p.mul(&m)?;
            acc = acc.add(&p)?;
        }
        Ok(acc.data().to_vec())
    }

    fn sample(&self, rng: &mut ChaCha8Rng, scale: f64) -> Point<S> {
        let c: Vec<S> = sample_vector(rng, self.algebra_dim(), scale);
        Matrix::identity(self.n).add(&self.strict_upper(&c)).expect("square").data().to_vec()
    }

    fn membership_defect(&self, a: &[S]) -> f64 {
        if a.len() != self.n * self.n {
            return f64::INFINITY;
        }
        let mut d: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let target = if i == j { S::one() } else { S::zero() };
                d = d.max((a[i * self.n + j].clone() - target).magnitude());
            }
        }
        d
    }
}
