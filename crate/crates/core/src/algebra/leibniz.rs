use crate::error::{dim_check, Error, Result};
use crate::linalg::{vec_add, vec_sub, LinearMap, Matrix};
use crate::report::{Check, VerificationReport};
use crate::scalar::{max_abs, Rational, Scalar};

/// Finite-dimensional algebra given by structure constants
/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
///
/// Construction only checks table shapes. Whether the bracket actually
/// satisfies the left Leibniz identity is decided by [`verify_leibniz`].
#[derive(Debug, Clone, PartialEq)]
pub struct LeibnizAlgebra<S> {
    dim: usize,
    labels: Vec<String>,
    table: Vec<S>,
    lie: bool,
}

impl<S: Scalar> LeibnizAlgebra<S> {
    /// Builds an algebra from a nested table `c[i][j]` of coefficient vectors.
    pub fn from_table(table: Vec<Vec<Vec<S>>>) -> Result<Self> {
        let dim = table.len();
        let mut flat = Vec::with_capacity(dim * dim * dim);
        for (i, row) in table.into_iter().enumerate() {
            dim_check(&format!("bracket row {}", i + 1), dim, row.len())?;
            for (j, v) in row.into_iter().enumerate() {
                dim_check(&format!("bracket [e{}, e{}]", i + 1, j + 1), dim, v.len())?;
                flat.extend(v);
            }
        }
        Ok(Self {
            dim,
            labels: default_labels(dim),
            table: flat,
            lie: false,
        })
    }

    pub fn from_flat(dim: usize, table: Vec<S>) -> Result<Self> {
        dim_check("structure constant count", dim * dim * dim, table.len())?;
        Ok(Self {
            dim,
            labels: default_labels(dim),
            table,
            lie: false,
        })
    }

    /// Zero bracket on `dim` generators.
    pub fn abelian(dim: usize) -> Self {
        Self {
            dim,
            labels: default_labels(dim),
            table: vec![S::zero(); dim * dim * dim],
            lie: true,
        }
    }

    /// Sparse constructor: `(i, j, k, c)` means `c[i][j][k] = c`, zero-based.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, S)]) -> Result<Self> {
        let mut alg = Self::abelian(dim);
        alg.lie = false;
        for (i, j, k, c) in entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::Dimension(format!("entry ({i},{j},{k}) outside dimension {dim}")));
            }
            alg.table[(i * dim + j) * dim + k] = c.clone();
        }
        Ok(alg)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        dim_check("basis label count", self.dim, labels.len())?;
        self.labels = labels;
        Ok(self)
    }

    /// Declares the algebra to be Lie. The flag is a claim; [`verify_lie`] checks it.
    pub fn with_lie_flag(mut self, lie: bool) -> Self {
        self.lie = lie;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_declared_lie(&self) -> bool {
        self.lie
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &S {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    /// `[e_i, e_j]` as a coefficient vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[S] {
        let start = (i * self.dim + j) * self.dim;
        &self.table[start..start + self.dim]
    }

    pub fn table(&self) -> Vec<Vec<Vec<S>>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.basis_bracket(i, j).to_vec()).collect())
            .collect()
    }

    pub fn flat_table(&self) -> &[S] {
        &self.table
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        dim_check("bracket left argument", self.dim, x.len())?;
        dim_check("bracket right argument", self.dim, y.len())?;
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let w = xi.clone() * yj.clone();
                for (k, c) in self.basis_bracket(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].clone() + w.clone() * c.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LeibnizAlgebra<T> {
        LeibnizAlgebra {
            dim: self.dim,
            labels: self.labels.clone(),
            table: self.table.iter().map(f).collect(),
            lie: self.lie,
        }
    }

    pub fn to_f64(&self) -> LeibnizAlgebra<f64> {
        self.map_scalars(Scalar::to_f64)
    }

    /// Largest structure-constant difference; infinite if dimensions differ.
    pub fn max_constant_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }
}

impl LeibnizAlgebra<f64> {
    /// Exact rational image of a float table (every double is dyadic).
    pub fn to_rational(&self) -> LeibnizAlgebra<Rational> {
        self.map_scalars(|&x| Rational::from_f64(x))
    }
}

fn default_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("e{i}")).collect()
}

fn render<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Left Leibniz defect `[[x,y],z] + [y,[x,z]] - [x,[y,z]]`.
pub fn leibniz_defect<S: Scalar>(alg: &LeibnizAlgebra<S>, x: &[S], y: &[S], z: &[S]) -> Result<Vec<S>> {
    let lhs = alg.bracket(x, &alg.bracket(y, z)?)?;
    let t1 = alg.bracket(&alg.bracket(x, y)?, z)?;
    let t2 = alg.bracket(y, &alg.bracket(x, z)?)?;
    Ok(vec_sub(&vec_add(&t1, &t2), &lhs))
}

/// Checks the left Leibniz identity on every basis triple `(i, j, k)`.
///
/// Each violation carries the defect `[[e_i,e_j],e_k] + [e_j,[e_i,e_k]] - [e_i,[e_j,e_k]]`.
/// Exact in rational mode; float mode flags entries above `1e-9`.
pub fn verify_leibniz<S: Scalar>(alg: &LeibnizAlgebra<S>) -> VerificationReport {
    let n = alg.dim();
    let mut check = Check::new("leibniz_identity");
    let basis: Vec<Vec<S>> = (0..n).map(|i| crate::linalg::unit_vector(n, i)).collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let d = leibniz_defect(alg, &basis[i], &basis[j], &basis[k]).expect("basis vectors have algebra dimension");
                let failed = d.iter().any(|x| !x.is_negligible());
                check.record(vec![i, j, k], render(&d), max_abs(&d), failed);
            }
        }
    }
    VerificationReport { checks: vec![check] }
}

/// Antisymmetry of the table plus the Leibniz identity (equivalently Jacobi).
pub fn verify_lie<S: Scalar>(alg: &LeibnizAlgebra<S>) -> VerificationReport {
    let n = alg.dim();
    let mut anti = Check::new("antisymmetry");
    for i in 0..n {
        for j in i..n {
            let d: Vec<S> = alg
                .basis_bracket(i, j)
                .iter()
                .zip(alg.basis_bracket(j, i))
                .map(|(a, b)| a.clone() + b.clone())
                .collect();
            let failed = d.iter().any(|x| !x.is_negligible());
            anti.record(vec![i, j], render(&d), max_abs(&d), failed);
        }
    }
    let mut report = VerificationReport { checks: vec![anti] };
    report.extend(verify_leibniz(alg));
    report
}

/// Matrix of `y ↦ [x, y]` in the algebra's basis.
pub fn adjoint_map<S: Scalar>(alg: &LeibnizAlgebra<S>, x: &[S]) -> Result<LinearMap<S>> {
    dim_check("adjoint argument", alg.dim(), x.len())?;
    let n = alg.dim();
    let mut m = Matrix::<S>::zeros(n, n);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for j in 0..n {
            for (k, c) in alg.basis_bracket(i, j).iter().enumerate() {
                if !c.is_zero() {
                    m[(k, j)] = m[(k, j)].clone() + xi.clone() * c.clone();
                }
            }
        }
    }
    Ok(m)
}

/// Matrix of `y ↦ [y, x]` (right multiplication).
pub fn right_multiplication<S: Scalar>(alg: &LeibnizAlgebra<S>, x: &[S]) -> Result<LinearMap<S>> {
    dim_check("right multiplication argument", alg.dim(), x.len())?;
    let n = alg.dim();
    let mut m = Matrix::zeros(n, n);
    for j in 0..n {
        let col = alg.bracket(&crate::linalg::unit_vector(n, j), x)?;
        for (k, c) in col.into_iter().enumerate() {
            m[(k, j)] = c;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::unit_vector;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn shape_errors() {
        let bad = vec![vec![vec![q(0), q(0)], vec![q(0)]], vec![vec![q(0), q(0)], vec![q(0), q(0)]]];
        assert!(matches!(LeibnizAlgebra::from_table(bad), Err(Error::Dimension(_))));
        assert!(LeibnizAlgebra::from_flat(2, vec![q(0); 7]).is_err());
    }

    #[test]
    fn leibniz_examples() {
        assert!(verify_leibniz(&LeibnizAlgebra::<Rational>::abelian(2)).passed());
        assert!(verify_leibniz(&catalog::leibniz_dim2()).passed());
        let r = verify_leibniz(&catalog::not_leibniz());
        assert!(!r.passed());
        let c = &r.checks[0];
        assert_eq!(c.violations.len(), 1);
        assert_eq!(c.violations[0].location, vec![1, 0, 0]);
        assert_eq!(c.violations[0].defect, vec!["0".to_string(), "2".to_string()]);
        assert_eq!(c.evaluated, 8);
    }

    #[test]
    fn lie_examples() {
        assert!(verify_lie(&LeibnizAlgebra::<Rational>::abelian(3)).passed());
        assert!(verify_lie(&catalog::affine_line()).passed());
        let r = verify_lie(&catalog::leibniz_dim2());
        assert!(!r.check("antisymmetry").unwrap().passed);
        assert!(r.check("leibniz_identity").unwrap().passed);
    }

    #[test]
    fn adjoint_examples() {
        let l = catalog::leibniz_dim2();
        assert!(adjoint_map(&l, &[q(0), q(0)]).unwrap().is_zero());
        let ad = adjoint_map(&l, &unit_vector(2, 0)).unwrap();
        let expect = Matrix::from_rows(vec![vec![q(0), q(0)], vec![q(1), q(0)]]).unwrap();
        assert_eq!(ad, expect);
        let aff = catalog::affine_line();
        let ad = adjoint_map(&aff, &unit_vector(2, 0)).unwrap();
        assert_eq!(ad, Matrix::diagonal(&[q(0), q(1)]));
    }

    #[test]
    fn float_mode_tolerance() {
        let mut alg = catalog::not_leibniz().to_f64();
        assert!(!verify_leibniz(&alg).passed());
        alg = LeibnizAlgebra::from_entries(1, &[(0, 0, 0, 1e-12)]).unwrap();
        assert!(verify_leibniz(&alg).passed());
    }
}
