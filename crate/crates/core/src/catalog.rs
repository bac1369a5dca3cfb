//! Small algebras and augmentations used throughout tests and fixtures.

use crate::algebra::{adjoint_map, AugmentedLeibnizAlgebra, LeibnizAlgebra};
use crate::error::{dim_check, Result};
use crate::linalg::{unit_vector, Matrix};
use crate::scalar::{Rational, Scalar};

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn build(dim: usize, entries: &[(usize, usize, usize, i64)], labels: &[&str], lie: bool) -> LeibnizAlgebra<Rational> {
    let entries: Vec<_> = entries.iter().map(|&(i, j, k, c)| (i, j, k, q(c))).collect();
    LeibnizAlgebra::from_entries(dim, &entries)
        .and_then(|a| a.with_labels(labels.iter().map(|s| s.to_string()).collect()))
        .expect("catalog entries are in range")
        .with_lie_flag(lie)
}

/// `[e1, e1] = e2`, the smallest non-Lie Leibniz algebra.
pub fn leibniz_dim2() -> LeibnizAlgebra<Rational> {
    build(2, &[(0, 0, 1, 1)], &["e1", "e2"], false)
}

/// `[e1, e2] = [e2, e1] = e2`; violates the Leibniz identity only at `(e2, e1, e1)`.
pub fn not_leibniz() -> LeibnizAlgebra<Rational> {
    build(2, &[(0, 1, 1, 1), (1, 0, 1, 1)], &["e1", "e2"], false)
}

/// Affine line algebra `[e1, e2] = e2`.
pub fn affine_line() -> LeibnizAlgebra<Rational> {
    build(2, &[(0, 1, 1, 1), (1, 0, 1, -1)], &["e1", "e2"], true)
}

/// Heisenberg algebra `[e1, e2] = e3`.
pub fn heisenberg() -> LeibnizAlgebra<Rational> {
    build(3, &[(0, 1, 2, 1), (1, 0, 2, -1)], &["e1", "e2", "e3"], true)
}

/// Euclidean motion algebra with basis `r, x, y`: `[r, x] = y`, `[r, y] = -x`.
pub fn euclidean_plane() -> LeibnizAlgebra<Rational> {
    build(
        3,
        &[(0, 1, 2, 1), (1, 0, 2, -1), (0, 2, 1, -1), (2, 0, 1, 1)],
        &["r", "x", "y"],
        true,
    )
}

/// Declared nilradical bases: affine line `{e2}`, Euclidean plane `{x, y}`.
pub fn affine_nilradical() -> Vec<Vec<Rational>> {
    vec![vec![q(0), q(1)]]
}

pub fn euclidean_nilradical() -> Vec<Vec<Rational>> {
    vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]]
}

/// Hemisemidirect product `h = g ⊕ V` over a Lie algebra `g` with a
/// `g`-module `V`: `p` projects onto `g` and `ξ.(η, v) = ([ξ, η], ξ.v)`.
/// The induced bracket is `[(ξ, v), (η, w)] = ([ξ, η], ξ.w)`.
pub fn hemisemidirect<S: Scalar>(g: &LeibnizAlgebra<S>, module: &[Matrix<S>]) -> Result<AugmentedLeibnizAlgebra<S>> {
    let n = g.dim();
    dim_check("number of module matrices", n, module.len())?;
    let m = module.first().map_or(0, Matrix::rows);
    let h = n + m;
    let mut p = Matrix::zeros(n, h);
    for i in 0..n {
        p[(i, i)] = S::one();
    }
    let mut action = Vec::with_capacity(n);
    for (a, rep) in module.iter().enumerate() {
        let ad = adjoint_map(g, &unit_vector(n, a))?;
        let mut block = Matrix::zeros(h, h);
        for i in 0..n {
            for j in 0..n {
                block[(i, j)] = ad[(i, j)].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                block[(n + i, n + j)] = rep[(i, j)].clone();
            }
        }
        action.push(block);
    }
    AugmentedLeibnizAlgebra::new(h, g.clone(), p, action)
}

/// `g = span{a}` acting on `h = span{a, v}` by `a.v = v`, `p = (1 0)`.
pub fn hemisemidirect_line() -> AugmentedLeibnizAlgebra<Rational> {
    hemisemidirect(&LeibnizAlgebra::abelian(1), &[Matrix::identity(1)]).expect("consistent shapes")
}

/// Heisenberg ⊕ ℝ with `e1` acting on the extra line by 1.
pub fn hemisemidirect_heisenberg() -> AugmentedLeibnizAlgebra<Rational> {
    let one = Matrix::identity(1);
    let zero = Matrix::zeros(1, 1);
    hemisemidirect(&heisenberg(), &[one, zero.clone(), zero]).expect("consistent shapes")
}

/// Affine line ⊕ ℝ with `e1` acting on the extra line by 1.
pub fn hemisemidirect_affine() -> AugmentedLeibnizAlgebra<Rational> {
    hemisemidirect(&affine_line(), &[Matrix::identity(1), Matrix::zeros(1, 1)]).expect("consistent shapes")
}

/// Euclidean plane ⊕ ℝ² with `r` acting by the rotation generator.
pub fn hemisemidirect_euclidean() -> AugmentedLeibnizAlgebra<Rational> {
    let j = Matrix::from_rows(vec![vec![q(0), q(-1)], vec![q(1), q(0)]]).expect("2x2");
    let z = Matrix::zeros(2, 2);
    hemisemidirect(&euclidean_plane(), &[j, z.clone(), z]).expect("consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{verify_augmented, verify_leibniz, verify_lie};

    #[test]
    fn catalog_is_consistent() {
        for lie in [affine_line(), heisenberg(), euclidean_plane()] {
            assert!(verify_lie(&lie).passed(), "{:?}", lie.labels());
        }
        assert!(verify_leibniz(&leibniz_dim2()).passed());
        for aug in [
            hemisemidirect_line(),
            hemisemidirect_heisenberg(),
            hemisemidirect_affine(),
            hemisemidirect_euclidean(),
        ] {
            let r = verify_augmented(&aug);
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
    }
}
