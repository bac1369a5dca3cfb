use proptest::prelude::*;

use rackforge::algebra::*;
use rackforge::catalog;
use rackforge::linalg::{unit_vector, Matrix};
use rackforge::scalar::Rational;
use rackforge::Scalar;

fn q(n: i64) -> Rational {
    <Rational as Scalar>::from_i64(n)
}

fn valid_algebras() -> Vec<LeibnizAlgebra<Rational>> {
    vec![
        catalog::leibniz_dim2(),
        catalog::affine_line(),
        catalog::heisenberg(),
        catalog::euclidean_plane(),
        LeibnizAlgebra::abelian(1),
        LeibnizAlgebra::abelian(3),
        catalog::hemisemidirect_line().derived_algebra(),
        catalog::hemisemidirect_heisenberg().derived_algebra(),
        catalog::hemisemidirect_affine().derived_algebra(),
        catalog::hemisemidirect_euclidean().derived_algebra(),
    ]
}

/// Unit lower triangular times upper triangular with diagonal in {1, 2, -1}.
fn invertible(n: usize, lower: &[i64], upper: &[i64], diag: &[i64]) -> Matrix<Rational> {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    let mut k = 0;
    for i in 0..n {
        for j in 0..n {
            if i > j {
                l[(i, j)] = q(lower[k % lower.len()]);
                u[(j, i)] = q(upper[k % upper.len()]);
                k += 1;
            }
        }
        u[(i, i)] = q([1, 2, -1][diag[i % diag.len()].rem_euclid(3) as usize]);
    }
    l.mul(&u).unwrap()
}

/// Structure constants of `[x, y]' = P⁻¹ [P x, P y]`.
fn transport(alg: &LeibnizAlgebra<Rational>, p: &Matrix<Rational>) -> LeibnizAlgebra<Rational> {
    let n = alg.dim();
    let pinv = p.inverse().unwrap();
    let mut flat = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let b = alg.bracket(&p.column(i), &p.column(j)).unwrap();
            flat.extend(pinv.apply(&b).unwrap());
        }
    }
    LeibnizAlgebra::from_flat(n, flat).unwrap()
}

fn algebra_strategy() -> impl Strategy<Value = LeibnizAlgebra<Rational>> {
    (
        0..valid_algebras().len(),
        prop::collection::vec(-3i64..=3, 1..8),
        prop::collection::vec(-3i64..=3, 1..8),
        prop::collection::vec(0i64..3, 1..5),
    )
        .prop_map(|(k, lower, upper, diag)| {
            let alg = valid_algebras().swap_remove(k);
            let p = invertible(alg.dim(), &lower, &upper, &diag);
            transport(&alg, &p)
        })
}

#[test]
fn broken_fixture_counterexample() {
    let r = verify_leibniz(&catalog::not_leibniz());
    assert!(!r.passed());
    let c = r.failures().next().unwrap();
    let v = c.first_violation().unwrap();
    assert_eq!(v.location, vec![1, 0, 0]);
    assert_eq!(v.magnitude, 2.0);
    for alg in valid_algebras() {
        assert!(verify_leibniz(&alg).passed());
    }
}

#[test]
fn lie_quotient_and_chain_on_catalog() {
    for alg in valid_algebras() {
        let sq = squares_ideal(&alg).unwrap();
        assert!(sq.is_subspace_of(&left_center(&alg)));
        let (quo, _) = quotient_by_ideal(&alg, &sq).unwrap();
        assert!(verify_lie(&quo).passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transported_algebras_stay_leibniz(alg in algebra_strategy()) {
        prop_assert!(verify_leibniz(&alg).passed());
    }

    #[test]
    fn squares_lie_in_left_center(alg in algebra_strategy()) {
        let sq = squares_ideal(&alg).unwrap();
        prop_assert!(sq.is_subspace_of(&left_center(&alg)));
    }

    #[test]
    fn quotient_by_squares_is_lie(alg in algebra_strategy()) {
        let (quo, _) = quotient_by_ideal(&alg, &squares_ideal(&alg).unwrap()).unwrap();
        prop_assert!(verify_lie(&quo).passed());
    }

    #[test]
    fn canonical_augmentation_recovers_bracket(alg in algebra_strategy()) {
        let aug = canonical_augmentation(&alg).unwrap();
        let n = alg.dim();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (unit_vector(n, i), unit_vector(n, j));
                prop_assert_eq!(derived_bracket(&aug, &x, &y).unwrap(), alg.bracket(&x, &y).unwrap());
            }
        }
        prop_assert!(verify_augmented(&aug).passed());
        prop_assert!(verify_leibniz(&aug.derived_algebra()).passed());
    }

    #[test]
    fn adjoint_matches_bracket(
        alg in algebra_strategy(),
        pairs in prop::collection::vec((prop::collection::vec(-9i64..=9, 5), prop::collection::vec(-9i64..=9, 5)), 100),
    ) {
        let n = alg.dim();
        for (a, b) in pairs {
            let x: Vec<Rational> = a[..n].iter().map(|&v| q(v)).collect();
            let y: Vec<Rational> = b[..n].iter().map(|&v| q(v)).collect();
            prop_assert_eq!(adjoint_map(&alg, &x).unwrap().apply(&y).unwrap(), alg.bracket(&x, &y).unwrap());
        }
    }

    #[test]
    fn left_center_annihilates(alg in algebra_strategy(), coeffs in prop::collection::vec(-5i64..=5, 5)) {
        let z = left_center(&alg);
        let n = alg.dim();
        let y: Vec<Rational> = coeffs[..n].iter().map(|&v| q(v)).collect();
        for b in z.basis() {
            prop_assert!(alg.bracket(b, &y).unwrap().iter().all(|c| c.is_negligible()));
        }
    }
}
