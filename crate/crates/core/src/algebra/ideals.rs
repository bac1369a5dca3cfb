use crate::algebra::leibniz::LeibnizAlgebra;
use crate::error::{dim_check, Error, Result};
use crate::linalg::{unit_vector, LinearMap, Matrix};
use crate::scalar::Scalar;

/// Linear subspace of `K^n` stored as a reduced row-echelon basis, so equal
/// subspaces have identical representations.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<S> {
    ambient_dim: usize,
    basis: Vec<Vec<S>>,
    pivots: Vec<usize>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(ambient_dim, &(0..ambient_dim).map(|i| unit_vector(ambient_dim, i)).collect::<Vec<_>>())
            .expect("unit vectors have ambient length")
    }

    pub fn span(ambient_dim: usize, vectors: &[Vec<S>]) -> Result<Self> {
        for v in vectors {
            dim_check("spanning vector length", ambient_dim, v.len())?;
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient_dim));
        }
        let e = Matrix::from_rows(vectors.to_vec())?.rref();
        let basis = (0..e.pivots.len()).map(|r| e.matrix.row(r).to_vec()).collect();
        Ok(Self {
            ambient_dim,
            basis,
            pivots: e.pivots,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the subspace; the result vanishes on pivot columns.
    pub fn reduce(&self, v: &[S]) -> Vec<S> {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let f = r[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, bx) in r.iter_mut().zip(b) {
                *x = x.clone() - f.clone() * bx.clone();
            }
        }
        r
    }

    pub fn contains(&self, v: &[S]) -> bool {
        v.len() == self.ambient_dim && self.reduce(v).iter().all(Scalar::is_negligible)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|b| other.contains(b))
    }

    /// Coordinates not used as pivots: the complement chosen for quotients.
    pub fn complement_coordinates(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|c| !self.pivots.contains(c)).collect()
    }
}

/// `Q(h)`: span of all squares `[x, x]`, generated by `[e_i,e_i]` and
/// `[e_i,e_j] + [e_j,e_i]`. The result is checked to be a two-sided ideal.
pub fn squares_ideal<S: Scalar>(alg: &LeibnizAlgebra<S>) -> Result<Subspace<S>> {
    let n = alg.dim();
    let mut gens = Vec::new();
    for i in 0..n {
        gens.push(alg.basis_bracket(i, i).to_vec());
        for j in i + 1..n {
            gens.push(
                alg.basis_bracket(i, j)
                    .iter()
                    .zip(alg.basis_bracket(j, i))
                    .map(|(a, b)| a.clone() + b.clone())
                    .collect(),
            );
        }
    }
    let q = Subspace::span(n, &gens)?;
    if !is_two_sided_ideal(alg, &q)? {
        return Err(Error::Internal(
            "span of squares is not a two-sided ideal; is the left Leibniz identity satisfied?".into(),
        ));
    }
    Ok(q)
}

/// `z(h) = {x : [x, y] = 0 for all y}`, the kernel of `x ↦ ad_x`.
pub fn left_center<S: Scalar>(alg: &LeibnizAlgebra<S>) -> Subspace<S> {
    let n = alg.dim();
    // column i is ad_{e_i} flattened
    let mut m = Matrix::zeros(n * n, n);
    for i in 0..n {
        for j in 0..n {
            for (k, c) in alg.basis_bracket(i, j).iter().enumerate() {
                m[(j * n + k, i)] = c.clone();
            }
        }
    }
    Subspace::span(n, &m.kernel()).expect("kernel vectors have algebra dimension")
}

/// True when `[e_i, b]` and `[b, e_i]` lie in `ideal` for every basis vector `b`.
pub fn is_two_sided_ideal<S: Scalar>(alg: &LeibnizAlgebra<S>, ideal: &Subspace<S>) -> Result<bool> {
    dim_check("ideal ambient dimension", alg.dim(), ideal.ambient_dim())?;
    let n = alg.dim();
    for b in ideal.basis() {
        for i in 0..n {
            let e = unit_vector(n, i);
            if !ideal.contains(&alg.bracket(&e, b)?) || !ideal.contains(&alg.bracket(b, &e)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Quotient algebra on the basis `{e_k : k not a pivot of the ideal}`,
/// together with the projection `h → h/I`.
pub fn quotient_by_ideal<S: Scalar>(
    alg: &LeibnizAlgebra<S>,
    ideal: &Subspace<S>,
) -> Result<(LeibnizAlgebra<S>, LinearMap<S>)> {
    if !is_two_sided_ideal(alg, ideal)? {
        return Err(Error::Precondition("subspace is not a two-sided ideal".into()));
    }
    let n = alg.dim();
    let keep = ideal.complement_coordinates();
    let m = keep.len();
    let project = |v: &[S]| -> Vec<S> {
        let r = ideal.reduce(v);
        keep.iter().map(|&k| r[k].clone()).collect()
    };
    let mut proj = Matrix::zeros(m, n);
    for j in 0..n {
        for (a, c) in project(&unit_vector(n, j)).into_iter().enumerate() {
            proj[(a, j)] = c;
        }
    }
    let mut table = Vec::with_capacity(m * m * m);
    for &ka in &keep {
        for &kb in &keep {
            table.extend(project(alg.basis_bracket(ka, kb)));
        }
    }
    let labels = keep.iter().map(|&k| format!("[{}]", alg.labels()[k])).collect();
    let quotient = LeibnizAlgebra::from_flat(m, table)?.with_labels(labels)?;
    Ok((quotient, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::leibniz::verify_lie;
    use crate::catalog;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn squares_examples() {
        assert_eq!(squares_ideal(&catalog::heisenberg()).unwrap().dim(), 0);
        assert_eq!(squares_ideal(&LeibnizAlgebra::<Rational>::abelian(3)).unwrap().dim(), 0);
        let sq = squares_ideal(&catalog::leibniz_dim2()).unwrap();
        assert_eq!(sq, Subspace::span(2, &[vec![q(0), q(1)]]).unwrap());
    }

    #[test]
    fn left_center_examples() {
        assert_eq!(left_center(&LeibnizAlgebra::<Rational>::abelian(3)), Subspace::full(3));
        assert_eq!(left_center(&catalog::leibniz_dim2()).basis(), &[vec![q(0), q(1)]]);
        assert_eq!(left_center(&catalog::affine_line()).dim(), 0);
        assert_eq!(left_center(&catalog::heisenberg()).basis(), &[vec![q(0), q(0), q(1)]]);
    }

    #[test]
    fn echelon_is_canonical() {
        let a = Subspace::span(3, &[vec![q(1), q(2), q(0)], vec![q(2), q(4), q(1)]]).unwrap();
        let b = Subspace::span(3, &[vec![q(0), q(0), q(5)], vec![q(-1), q(-2), q(3)]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.complement_coordinates(), vec![1]);
    }

    #[test]
    fn quotient_examples() {
        let l = catalog::leibniz_dim2();
        let (quo, p) = quotient_by_ideal(&l, &squares_ideal(&l).unwrap()).unwrap();
        assert_eq!(quo.dim(), 1);
        assert!(quo.flat_table().iter().all(|c| c.is_negligible()));
        assert_eq!(p, Matrix::from_rows(vec![vec![q(1), q(0)]]).unwrap());

        let h = catalog::heisenberg();
        let (same, id) = quotient_by_ideal(&h, &Subspace::zero(3)).unwrap();
        assert_eq!(same.flat_table(), h.flat_table());
        assert_eq!(id, Matrix::identity(3));

        let ab = LeibnizAlgebra::<Rational>::abelian(2);
        let (zero, _) = quotient_by_ideal(&ab, &Subspace::full(2)).unwrap();
        assert_eq!(zero.dim(), 0);
    }

    #[test]
    fn non_ideal_rejected() {
        let aff = catalog::affine_line();
        let s = Subspace::span(2, &[vec![q(1), q(0)]]).unwrap();
        assert!(matches!(quotient_by_ideal(&aff, &s), Err(Error::Precondition(_))));
    }

    #[test]
    fn quotient_by_center_is_lie() {
        let l = catalog::leibniz_dim2();
        let (quo, _) = quotient_by_ideal(&l, &left_center(&l)).unwrap();
        assert!(verify_lie(&quo).passed());
    }
}
