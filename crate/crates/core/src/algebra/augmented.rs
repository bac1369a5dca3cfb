use crate::algebra::ideals::{left_center, quotient_by_ideal, squares_ideal, Subspace};
use crate::algebra::leibniz::{adjoint_map, verify_leibniz, verify_lie, LeibnizAlgebra};
use crate::error::{dim_check, Error, Result};
use crate::linalg::{unit_vector, LinearMap, Matrix};
use crate::report::{Check, VerificationReport};
use crate::scalar::{Rational, Scalar};

/// A Lie algebra `g` acting on a module `h` together with an equivariant
/// linear map `p: h → g`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedLeibnizAlgebra<S: Scalar> {
    h_dim: usize,
    g: LeibnizAlgebra<S>,
    p: LinearMap<S>,
    action: Vec<Matrix<S>>,
}

impl<S: Scalar> AugmentedLeibnizAlgebra<S> {
    /// `p` is `dim g × dim h`; `action[a]` is the `dim h × dim h` matrix of
    /// the `a`-th basis vector of `g`.
    pub fn new(h_dim: usize, g: LeibnizAlgebra<S>, p: LinearMap<S>, action: Vec<Matrix<S>>) -> Result<Self> {
        dim_check("rows of p", g.dim(), p.rows())?;
        dim_check("columns of p", h_dim, p.cols())?;
        dim_check("number of action matrices", g.dim(), action.len())?;
        for (a, m) in action.iter().enumerate() {
            if m.rows() != h_dim || m.cols() != h_dim {
                return Err(Error::Dimension(format!(
                    "action matrix {} is {}x{}, expected {h_dim}x{h_dim}",
                    a + 1,
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self {
            h_dim,
            g: g.with_lie_flag(true),
            p,
            action,
        })
    }

    pub fn h_dim(&self) -> usize {
        self.h_dim
    }

    pub fn g(&self) -> &LeibnizAlgebra<S> {
        &self.g
    }

    pub fn p(&self) -> &LinearMap<S> {
        &self.p
    }

    pub fn action(&self) -> &[Matrix<S>] {
        &self.action
    }

    /// Matrix of `ρ̇_ξ` for a `g`-vector `ξ`.
    pub fn action_of(&self, xi: &[S]) -> Result<Matrix<S>> {
        dim_check("g-vector length", self.g.dim(), xi.len())?;
        let mut m = Matrix::zeros(self.h_dim, self.h_dim);
        for (c, a) in xi.iter().zip(&self.action) {
            if !c.is_zero() {
                m = m.add(&a.scale(c))?;
            }
        }
        Ok(m)
    }

    /// The Leibniz algebra `(h, [x,y] = p(x).y)`.
    pub fn derived_algebra(&self) -> LeibnizAlgebra<S> {
        let n = self.h_dim;
        let mut table = Vec::with_capacity(n * n * n);
        for i in 0..n {
            let rho = self.action_of(&self.p.column(i)).expect("p column has g dimension");
            for j in 0..n {
                table.extend(rho.column(j));
            }
        }
        LeibnizAlgebra::from_flat(n, table).expect("table has h dimension")
    }

    /// Kernel of `p` as an echelon subspace of `h`.
    pub fn kernel_of_p(&self) -> Subspace<S> {
        Subspace::span(self.h_dim, &self.p.kernel()).expect("kernel vectors have h dimension")
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> AugmentedLeibnizAlgebra<T> {
        AugmentedLeibnizAlgebra {
            h_dim: self.h_dim,
            g: self.g.map_scalars(f),
            p: self.p.map(f),
            action: self.action.iter().map(|m| m.map(f)).collect(),
        }
    }

    pub fn to_f64(&self) -> AugmentedLeibnizAlgebra<f64> {
        self.map_scalars(Scalar::to_f64)
    }
}

impl AugmentedLeibnizAlgebra<f64> {
    pub fn to_rational(&self) -> AugmentedLeibnizAlgebra<Rational> {
        self.map_scalars(|&x| Rational::from_f64(x))
    }
}

/// `[x, y]_h = p(x).y`.
pub fn derived_bracket<S: Scalar>(aug: &AugmentedLeibnizAlgebra<S>, x: &[S], y: &[S]) -> Result<Vec<S>> {
    dim_check("left argument", aug.h_dim, x.len())?;
    dim_check("right argument", aug.h_dim, y.len())?;
    aug.action_of(&aug.p.apply(x)?)?.apply(y)
}

/// Augmentation of `h` over its Lie quotient `h / Q(h)`, with the coset of
/// `e_i` acting by `ad_{e_i}`.
pub fn canonical_augmentation<S: Scalar>(alg: &LeibnizAlgebra<S>) -> Result<AugmentedLeibnizAlgebra<S>> {
    let q = squares_ideal(alg)?;
    if !q.is_subspace_of(&left_center(alg)) {
        return Err(Error::Internal(
            "Q(h) is not contained in the left center, so ad does not descend to h/Q(h)".into(),
        ));
    }
    let (g, p) = quotient_by_ideal(alg, &q)?;
    let action = q
        .complement_coordinates()
        .into_iter()
        .map(|k| adjoint_map(alg, &unit_vector(alg.dim(), k)))
        .collect::<Result<Vec<_>>>()?;
    let aug = AugmentedLeibnizAlgebra::new(alg.dim(), g, p, action)?;
    let report = verify_augmented(&aug);
    if !report.passed() {
        let failed: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
        return Err(Error::Internal(format!("canonical augmentation fails {failed:?}")));
    }
    Ok(aug)
}

fn render<S: Scalar>(m: &Matrix<S>) -> Vec<String> {
    m.data().iter().map(|x| x.to_string()).collect()
}

/// Checks the augmented-algebra axioms on basis vectors, then the induced
/// bracket: Leibniz identity and `Q(h) ⊆ Ker p ⊆ z(h)`.
pub fn verify_augmented<S: Scalar>(aug: &AugmentedLeibnizAlgebra<S>) -> VerificationReport {
    let g = &aug.g;
    let mut report = VerificationReport::new();
    for mut c in verify_lie(g).checks {
        c.name = format!("g_{}", c.name);
        report.push(c);
    }

    let mut rep = Check::new("representation");
    for a in 0..g.dim() {
        for b in 0..g.dim() {
            let lhs = aug.action_of(g.basis_bracket(a, b)).expect("g dimension");
            let rhs = aug.action[a].commutator(&aug.action[b]).expect("square action");
            let d = lhs.sub(&rhs).expect("same shape");
            rep.record(vec![a, b], render(&d), d.max_abs(), !d.is_zero());
        }
    }
    report.push(rep);

    // p(ξ.x) = [ξ, p(x)] on basis ξ = e_a, x = e_j
    let mut eq = Check::new("equivariance");
    for a in 0..g.dim() {
        let ad = adjoint_map(g, &unit_vector(g.dim(), a)).expect("g dimension");
        let lhs = aug.p.mul(&aug.action[a]).expect("shape");
        let rhs = ad.mul(&aug.p).expect("shape");
        let d = lhs.sub(&rhs).expect("shape");
        for j in 0..aug.h_dim {
            let col: Vec<S> = d.column(j);
            let failed = col.iter().any(|x| !x.is_negligible());
            eq.record(
                vec![a, j],
                col.iter().map(|x| x.to_string()).collect(),
                crate::scalar::max_abs(&col),
                failed,
            );
        }
    }
    report.push(eq);

    let derived = aug.derived_algebra();
    for mut c in verify_leibniz(&derived).checks {
        c.name = format!("derived_{}", c.name);
        report.push(c);
    }

    let kernel = aug.kernel_of_p();
    let mut chain = Check::new("squares_in_kernel");
    match squares_ideal(&derived) {
        Ok(q) => {
            for (i, b) in q.basis().iter().enumerate() {
                let img = aug.p.apply(b).expect("h dimension");
                let failed = !kernel.contains(b);
                chain.record(vec![i], img.iter().map(|x| x.to_string()).collect(), crate::scalar::max_abs(&img), failed);
            }
        }
        Err(e) => chain.fail(e.to_string()),
    }
    report.push(chain);

    let z = left_center(&derived);
    let mut kz = Check::new("kernel_in_left_center");
    for (i, b) in kernel.basis().iter().enumerate() {
        let ad = adjoint_map(&derived, b).expect("h dimension");
        kz.record(vec![i], render(&ad), ad.max_abs(), !z.contains(b));
    }
    report.push(kz);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn hemisemidirect_model() {
        let aug = catalog::hemisemidirect_line();
        assert!(verify_augmented(&aug).passed());
        // [(α,s),(β,t)] = (0, αt)
        let x = vec![q(3), q(5)];
        let y = vec![q(7), q(11)];
        assert_eq!(derived_bracket(&aug, &x, &y).unwrap(), vec![q(0), q(33)]);
        assert_eq!(derived_bracket(&aug, &[q(1), q(0)], &[q(0), q(1)]).unwrap(), vec![q(0), q(1)]);
        assert_eq!(derived_bracket(&aug, &x, &[q(0), q(0)]).unwrap(), vec![q(0), q(0)]);
    }

    #[test]
    fn wrong_projection_breaks_equivariance() {
        let good = catalog::hemisemidirect_line();
        let p = Matrix::from_rows(vec![vec![q(0), q(1)]]).unwrap();
        let bad = AugmentedLeibnizAlgebra::new(2, good.g().clone(), p, good.action().to_vec()).unwrap();
        let r = verify_augmented(&bad);
        let eq = r.check("equivariance").unwrap();
        assert!(!eq.passed);
        assert_eq!(eq.violations[0].location, vec![0, 1]);
    }

    #[test]
    fn canonical_augmentation_examples() {
        let l = catalog::leibniz_dim2();
        let aug = canonical_augmentation(&l).unwrap();
        assert_eq!(aug.g().dim(), 1);
        assert_eq!(aug.p(), &Matrix::from_rows(vec![vec![q(1), q(0)]]).unwrap());
        assert_eq!(aug.action()[0], adjoint_map(&l, &[q(1), q(0)]).unwrap());
        assert_eq!(derived_bracket(&aug, &[q(1), q(0)], &[q(1), q(0)]).unwrap(), vec![q(0), q(1)]);

        let h = catalog::heisenberg();
        let aug = canonical_augmentation(&h).unwrap();
        assert_eq!(aug.p(), &Matrix::identity(3));
        assert_eq!(aug.g().flat_table(), h.flat_table());

        let ab = LeibnizAlgebra::<Rational>::abelian(2);
        let aug = canonical_augmentation(&ab).unwrap();
        assert!(aug.action().iter().all(|m| m.is_zero()));
    }

    #[test]
    fn dimension_errors() {
        let g = LeibnizAlgebra::<Rational>::abelian(1);
        let p = Matrix::zeros(1, 3);
        assert!(AugmentedLeibnizAlgebra::new(2, g.clone(), p, vec![Matrix::zeros(2, 2)]).is_err());
        let p = Matrix::zeros(1, 2);
        assert!(AugmentedLeibnizAlgebra::new(2, g, p.clone(), vec![Matrix::zeros(3, 3)]).is_err());
        let aug = catalog::hemisemidirect_line();
        assert!(derived_bracket(&aug, &[q(1)], &[q(1), q(0)]).is_err());
    }
}
