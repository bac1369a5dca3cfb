use std::f64::consts::PI;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use crate::algebra::{adjoint_map, LeibnizAlgebra, Subspace};
use crate::analysis::{mat_exp, strip_membership};
use crate::catalog;
use crate::error::{dim_check, Error, Result};
use crate::linalg::{unit_vector, Matrix};
use crate::rack::{sample_vector, Group, Point};
use crate::scalar::Scalar;

const EXP_TOL: f64 = 1e-16;

/// Logarithm together with whether the element lies in the injectivity
/// domain `exp(U_{πi})`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogResult {
    pub vector: Vec<f64>,
    pub in_domain: bool,
}

/// Explicit realization of a connected, simply connected Lie group with
/// Lie algebra `lie_algebra()`.
pub trait GroupModel: Group<f64> {
    fn name(&self) -> &str;
    fn lie_algebra(&self) -> &LeibnizAlgebra<f64>;
    fn exp(&self, xi: &[f64]) -> Result<Point<f64>>;
    fn log(&self, g: &[f64]) -> Result<LogResult>;
    /// Matrix of `Ad_g` on the Lie algebra.
    fn adjoint(&self, g: &[f64]) -> Result<Matrix<f64>>;
    /// Vectors `ξ_1, ..., ξ_m` with `g = exp(ξ_1) ⋯ exp(ξ_m)`.
    fn exp_word_factor(&self, g: &[f64]) -> Result<Vec<Vec<f64>>>;
}

/// Length of the lower central series: the smallest `k` with `g^{(k+1)} = 0`.
pub fn nilpotency_class<S: Scalar>(alg: &LeibnizAlgebra<S>) -> Option<usize> {
    let n = alg.dim();
    let mut current = Subspace::<S>::full(n);
    for k in 1..=n.max(1) {
        if current.dim() == 0 {
            return Some(k - 1);
        }
        let mut gens = Vec::new();
        for i in 0..n {
            for v in current.basis() {
                gens.push(alg.bracket(&unit_vector(n, i), v).ok()?);
            }
        }
        let next = Subspace::span(n, &gens).ok()?;
        if next.dim() == 0 {
            return Some(k);
        }
        current = next;
    }
    None
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Dynkin's form of the Baker–Campbell–Hausdorff series up to total degree
/// `degree`; exact for nilpotent algebras of class at most `degree`.
pub fn bch<S: Scalar>(alg: &LeibnizAlgebra<S>, x: &[S], y: &[S], degree: usize) -> Result<Vec<S>> {
    let n = alg.dim();
    dim_check("BCH left argument", n, x.len())?;
    dim_check("BCH right argument", n, y.len())?;
    let mut total = vec![S::zero(); n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    dynkin_terms(alg, x, y, degree, 0, &mut pairs, &mut total)?;
    Ok(total)
}

fn dynkin_terms<S: Scalar>(
    alg: &LeibnizAlgebra<S>,
    x: &[S],
    y: &[S],
    degree: usize,
    used: usize,
    pairs: &mut Vec<(usize, usize)>,
    total: &mut Vec<S>,
) -> Result<()> {
    if !pairs.is_empty() {
        let k = pairs.len();
        let mut letters: Vec<&[S]> = Vec::with_capacity(used);
        let mut denom = k as i64 * used as i64;
        for &(r, s) in pairs.iter() {
            letters.extend(std::iter::repeat_n(x, r));
            letters.extend(std::iter::repeat_n(y, s));
            denom *= (factorial(r) * factorial(s)) as i64;
        }
        let last = letters.len() - 1;
        if last == 0 || letters[last] != letters[last - 1] {
            let mut v = letters[last].to_vec();
            for a in letters[..last].iter().rev() {
                v = alg.bracket(a, &v)?;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let c = S::from_ratio(sign, denom);
            for (t, vi) in total.iter_mut().zip(v) {
                *t = t.clone() + c.clone() * vi;
            }
        }
    }
    for r in 0..=degree - used {
        for s in 0..=degree - used - r {
            if r + s == 0 {
                continue;
            }
            pairs.push((r, s));
            dynkin_terms(alg, x, y, degree, used + r + s, pairs, total)?;
            pairs.pop();
        }
    }
    Ok(())
}

/// Simply connected nilpotent group in exponential coordinates; the group
/// law is the terminating BCH series.
#[derive(Debug, Clone)]
pub struct NilpotentBch {
    alg: LeibnizAlgebra<f64>,
    class: usize,
}

impl NilpotentBch {
    pub fn new(alg: LeibnizAlgebra<f64>) -> Result<Self> {
        let class = nilpotency_class(&alg)
            .ok_or_else(|| Error::Config("nilpotent-bch model requires a nilpotent Lie algebra".into()))?;
        Ok(Self {
            alg: alg.with_lie_flag(true),
            class: class.max(1),
        })
    }

    pub fn class(&self) -> usize {
        self.class
    }
}

impl Group<f64> for NilpotentBch {
    fn coord_dim(&self) -> usize {
        self.alg.dim()
    }

    fn identity(&self) -> Point<f64> {
        vec![0.0; self.alg.dim()]
    }

    fn multiply(&self, a: &[f64], b: &[f64]) -> Result<Point<f64>> {
        bch(&self.alg, a, b, self.class)
    }

    fn inverse(&self, a: &[f64]) -> Result<Point<f64>> {
        Ok(a.iter().map(|x| -x).collect())
    }

    fn sample(&self, rng: &mut ChaCha8Rng, scale: f64) -> Point<f64> {
        sample_vector(rng, self.alg.dim(), scale)
    }

    /// `e^{ad_a} b`, which equals `a b a^{-1}` in exponential coordinates.
    fn conj(&self, a: &[f64], b: &[f64]) -> Result<Point<f64>> {
        self.adjoint(a)?.apply(b)
    }
}

impl GroupModel for NilpotentBch {
    fn name(&self) -> &str {
        "nilpotent-bch"
    }

    fn lie_algebra(&self) -> &LeibnizAlgebra<f64> {
        &self.alg
    }

    fn exp(&self, xi: &[f64]) -> Result<Point<f64>> {
        dim_check("Lie algebra vector", self.alg.dim(), xi.len())?;
        Ok(xi.to_vec())
    }

    fn log(&self, g: &[f64]) -> Result<LogResult> {
        dim_check("group element", self.alg.dim(), g.len())?;
        Ok(LogResult {
            vector: g.to_vec(),
            in_domain: true,
        })
    }

    fn adjoint(&self, g: &[f64]) -> Result<Matrix<f64>> {
        mat_exp(&adjoint_map(&self.alg, g)?, EXP_TOL)
    }

    fn exp_word_factor(&self, g: &[f64]) -> Result<Vec<Vec<f64>>> {
        dim_check("group element", self.alg.dim(), g.len())?;
        Ok(vec![g.to_vec()])
    }
}

/// Universal cover of the Euclidean motion group: elements `(θ, v)` with
/// `(θ₁, v₁)(θ₂, v₂) = (θ₁ + θ₂, v₁ + R(θ₁) v₂)`, Lie algebra basis `r, x, y`.
#[derive(Debug, Clone)]
pub struct E2Cover {
    alg: LeibnizAlgebra<f64>,
}

impl Default for E2Cover {
    fn default() -> Self {
        Self {
            alg: catalog::euclidean_plane().to_f64(),
        }
    }
}

fn rotate(theta: f64, v: &[f64]) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

/// `V(θ) = (1/θ) [[sin θ, -(1 - cos θ)], [1 - cos θ, sin θ]]`, with `V(0) = I`.
fn v_matrix(theta: f64) -> [[f64; 2]; 2] {
    if theta.abs() < 1e-8 {
        // series: sin θ/θ ≈ 1 - θ²/6, (1 - cos θ)/θ ≈ θ/2 - θ³/24
        let a = 1.0 - theta * theta / 6.0;
        let b = theta / 2.0 - theta.powi(3) / 24.0;
        return [[a, -b], [b, a]];
    }
    let (s, c) = theta.sin_cos();
    [[s / theta, -(1.0 - c) / theta], [(1.0 - c) / theta, s / theta]]
}

impl E2Cover {
    pub fn new() -> Self {
        Self::default()
    }

    /// Whether `log` is inside the injectivity domain, i.e. `|θ| < π`.
    pub fn in_log_domain(theta: f64) -> bool {
        theta.abs() < PI
    }
}

impl Group<f64> for E2Cover {
    fn coord_dim(&self) -> usize {
        3
    }

    fn identity(&self) -> Point<f64> {
        vec![0.0; 3]
    }

    fn multiply(&self, a: &[f64], b: &[f64]) -> Result<Point<f64>> {
        dim_check("element", 3, a.len())?;
        dim_check("element", 3, b.len())?;
        let r = rotate(a[0], &b[1..]);
        Ok(vec![a[0] + b[0], a[1] + r[0], a[2] + r[1]])
    }

    fn inverse(&self, a: &[f64]) -> Result<Point<f64>> {
        dim_check("element", 3, a.len())?;
        let r = rotate(-a[0], &a[1..]);
        Ok(vec![-a[0], -r[0], -r[1]])
    }

    /// `θ` uniform in `[-3.6 scale, 3.6 scale]` so samples reach beyond the
    /// log domain `|θ| < π`; `v` uniform in `[-scale, scale]²`.
    fn sample(&self, rng: &mut ChaCha8Rng, scale: f64) -> Point<f64> {
        let mut p: Vec<f64> = sample_vector(rng, 3, scale);
        p[0] *= 3.6;
        p
    }
}

impl GroupModel for E2Cover {
    fn name(&self) -> &str {
        "e2-cover"
    }

    fn lie_algebra(&self) -> &LeibnizAlgebra<f64> {
        &self.alg
    }

    fn exp(&self, xi: &[f64]) -> Result<Point<f64>> {
        dim_check("Lie algebra vector", 3, xi.len())?;
        let v = v_matrix(xi[0]);
        Ok(vec![
            xi[0],
            v[0][0] * xi[1] + v[0][1] * xi[2],
            v[1][0] * xi[1] + v[1][1] * xi[2],
        ])
    }

    fn log(&self, g: &[f64]) -> Result<LogResult> {
        dim_check("element", 3, g.len())?;
        let theta = g[0];
        let v = v_matrix(theta);
        let det = v[0][0] * v[1][1] - v[0][1] * v[1][0];
        if det.abs() < 1e-300 {
            return Ok(LogResult {
                vector: vec![theta, 0.0, 0.0],
                in_domain: false,
            });
        }
        let a = (v[1][1] * g[1] - v[0][1] * g[2]) / det;
        let b = (-v[1][0] * g[1] + v[0][0] * g[2]) / det;
        Ok(LogResult {
            vector: vec![theta, a, b],
            in_domain: Self::in_log_domain(theta),
        })
    }

    /// Columns: `Ad_g r = r + v_y x - v_x y`, `Ad_g x = cos θ x + sin θ y`,
    /// `Ad_g y = -sin θ x + cos θ y`.
    fn adjoint(&self, g: &[f64]) -> Result<Matrix<f64>> {
        dim_check("element", 3, g.len())?;
        let (s, c) = g[0].sin_cos();
        Matrix::from_rows(vec![vec![1.0, 0.0, 0.0], vec![g[2], c, -s], vec![-g[1], s, c]])
    }

    /// `(θ, v) = exp(θ r) · exp(R(-θ) v)`.
    fn exp_word_factor(&self, g: &[f64]) -> Result<Vec<Vec<f64>>> {
        dim_check("element", 3, g.len())?;
        let w = rotate(-g[0], &g[1..]);
        Ok(vec![vec![g[0], 0.0, 0.0], vec![0.0, w[0], w[1]]])
    }
}

/// Linear group generated by a faithful matrix representation `e_a ↦ E_a`,
/// with the principal matrix logarithm as chart. Valid where the principal
/// logarithm exists and lands in the strip domain.
#[derive(Clone)]
pub struct MatrixLocal {
    alg: LeibnizAlgebra<f64>,
    basis: Vec<Matrix<f64>>,
    n: usize,
    /// `(B^T B)^{-1} B^T` for the flattened basis matrix `B`.
    projector: Matrix<f64>,
}

impl std::fmt::Debug for MatrixLocal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixLocal").field("n", &self.n).field("dim", &self.basis.len()).finish()
    }
}

fn denman_beavers_sqrt(a: &Matrix<f64>) -> Option<Matrix<f64>> {
    let n = a.rows();
    let mut y = a.clone();
    let mut z = Matrix::identity(n);
    for _ in 0..100 {
        let yi = y.inverse().ok()?;
        let zi = z.inverse().ok()?;
        let ny = y.add(&zi).ok()?.scale(&0.5);
        let nz = z.add(&yi).ok()?.scale(&0.5);
        let delta = ny.max_abs_diff(&y);
        y = ny;
        z = nz;
        if !y.is_finite() {
            return None;
        }
        if delta <= 1e-15 * y.max_abs().max(1.0) {
            return Some(y);
        }
    }
    None
}

/// Principal logarithm by inverse scaling and squaring; `None` when the
/// square-root iteration fails (eigenvalues on the closed negative axis).
pub fn principal_log(a: &Matrix<f64>) -> Option<Matrix<f64>> {
    let n = a.rows();
    let mut y = a.clone();
    let mut k = 0;
    while y.sub(&Matrix::identity(n)).ok()?.norm_inf() > 0.25 {
        y = denman_beavers_sqrt(&y)?;
        k += 1;
        if k > 60 {
            return None;
        }
    }
    let x = y.sub(&Matrix::identity(n)).ok()?;
    let mut acc = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for m in 1..=60 {
        power = power.mul(&x).ok()?;
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        acc = acc.add(&power.scale(&(sign / m as f64))).ok()?;
        if power.max_abs() < 1e-18 {
            break;
        }
    }
    Some(acc.scale(&2f64.powi(k)))
}

impl MatrixLocal {
    /// Checks that the matrices are linearly independent and satisfy the
    /// bracket relations of `alg`.
    pub fn new(alg: LeibnizAlgebra<f64>, basis: Vec<Matrix<f64>>) -> Result<Self> {
        let d = alg.dim();
        dim_check("number of representation matrices", d, basis.len())?;
        let n = basis.first().map_or(0, Matrix::rows);
        for m in &basis {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension("representation matrices must be square of equal size".into()));
            }
        }
        let columns: Vec<Vec<f64>> = basis.iter().map(|m| m.data().to_vec()).collect();
        let b = Matrix::from_columns(n * n, &columns)?;
        if b.rank() != d {
            return Err(Error::Config("representation matrices are linearly dependent".into()));
        }
        let bt = b.transpose();
        let projector = bt.mul(&b)?.inverse()?.mul(&bt)?;
        for i in 0..d {
            for j in 0..d {
                let lhs = basis[i].commutator(&basis[j])?;
                let mut rhs = Matrix::zeros(n, n);
                for (k, c) in alg.basis_bracket(i, j).iter().enumerate() {
                    rhs = rhs.add(&basis[k].scale(c))?;
                }
                if lhs.max_abs_diff(&rhs) > 1e-9 {
                    return Err(Error::Config(format!(
                        "representation violates the bracket relation for basis pair ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self {
            alg: alg.with_lie_flag(true),
            basis,
            n,
            projector,
        })
    }

    /// `ax + b` group: `e1 = [[1,0],[0,0]]`, `e2 = [[0,1],[0,0]]`.
    pub fn affine_line() -> Self {
        let e1 = Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).expect("2x2");
        let e2 = Matrix::from_rows(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).expect("2x2");
        Self::new(catalog::affine_line().to_f64(), vec![e1, e2]).expect("affine representation is faithful")
    }

    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn representation(&self) -> &[Matrix<f64>] {
        &self.basis
    }

    fn embed(&self, xi: &[f64]) -> Result<Matrix<f64>> {
        dim_check("Lie algebra vector", self.basis.len(), xi.len())?;
        let mut m = Matrix::zeros(self.n, self.n);
        for (c, e) in xi.iter().zip(&self.basis) {
            m = m.add(&e.scale(c))?;
        }
        Ok(m)
    }

    /// Least-squares coordinates and the residual of the fit.
    fn coordinates(&self, m: &Matrix<f64>) -> Result<(Vec<f64>, f64)> {
        let c = self.projector.apply(m.data())?;
        let residual = self.embed(&c)?.max_abs_diff(m);
        Ok((c, residual))
    }

    fn as_matrix(&self, g: &[f64]) -> Result<Matrix<f64>> {
        Matrix::from_vec(self.n, self.n, g.to_vec())
    }
}

impl Group<f64> for MatrixLocal {
    fn coord_dim(&self) -> usize {
        self.n * self.n
    }

    fn identity(&self) -> Point<f64> {
        Matrix::<f64>::identity(self.n).data().to_vec()
    }

    fn multiply(&self, a: &[f64], b: &[f64]) -> Result<Point<f64>> {
        Ok(self.as_matrix(a)?.mul(&self.as_matrix(b)?)?.data().to_vec())
    }

    fn inverse(&self, a: &[f64]) -> Result<Point<f64>> {
        Ok(self.as_matrix(a)?.inverse()?.data().to_vec())
    }

    fn sample(&self, rng: &mut ChaCha8Rng, scale: f64) -> Point<f64> {
        let xi: Vec<f64> = sample_vector(rng, self.basis.len(), scale);
        self.exp(&xi).expect("sampled vector has algebra dimension")
    }

    fn membership_defect(&self, a: &[f64]) -> f64 {
        if a.len() != self.n * self.n {
            return f64::INFINITY;
        }
        let Ok(m) = self.as_matrix(a) else {
            return f64::INFINITY;
        };
        match principal_log(&m).map(|l| self.coordinates(&l)) {
            Some(Ok((_, r))) => r,
            _ => f64::INFINITY,
        }
    }
}

impl GroupModel for MatrixLocal {
    fn name(&self) -> &str {
        "matrix-local"
    }

    fn lie_algebra(&self) -> &LeibnizAlgebra<f64> {
        &self.alg
    }

    fn exp(&self, xi: &[f64]) -> Result<Point<f64>> {
        Ok(mat_exp(&self.embed(xi)?, EXP_TOL)?.data().to_vec())
    }

    fn log(&self, g: &[f64]) -> Result<LogResult> {
        let m = self.as_matrix(g)?;
        let d = self.basis.len();
        let Some(l) = principal_log(&m) else {
            return Ok(LogResult {
                vector: vec![0.0; d],
                in_domain: false,
            });
        };
        let (c, residual) = self.coordinates(&l)?;
        let fits = residual <= 1e-8 * l.max_abs().max(1.0);
        let in_strip = strip_membership(&adjoint_map(&self.alg, &c)?, PI)?.member;
        Ok(LogResult {
            vector: c,
            in_domain: fits && in_strip,
        })
    }

    fn adjoint(&self, g: &[f64]) -> Result<Matrix<f64>> {
        let m = self.as_matrix(g)?;
        let mi = m.inverse()?;
        let columns = self
            .basis
            .iter()
            .map(|e| Ok(self.coordinates(&m.mul(e)?.mul(&mi)?)?.0))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(self.basis.len(), &columns)
    }

    fn exp_word_factor(&self, g: &[f64]) -> Result<Vec<Vec<f64>>> {
        let l = self.log(g)?;
        if !l.in_domain {
            return Err(Error::Model("element is outside the chart domain of the matrix-local model".into()));
        }
        Ok(vec![l.vector])
    }
}

/// Bundled models by name: `nilpotent-bch`, `e2-cover`, `matrix-local`.
/// `matrix-local` needs representation matrices.
pub fn build_model(
    name: &str,
    alg: &LeibnizAlgebra<f64>,
    representation: Option<Vec<Matrix<f64>>>,
) -> Result<Arc<dyn GroupModel>> {
    match name {
        "nilpotent-bch" => Ok(Arc::new(NilpotentBch::new(alg.clone())?)),
        "e2-cover" => {
            let model = E2Cover::new();
            if alg.dim() != 3 || alg.max_constant_diff(model.lie_algebra()) > 1e-12 {
                return Err(Error::Config(
                    "e2-cover model needs the algebra [r,x] = y, [r,y] = -x on the basis r, x, y".into(),
                ));
            }
            Ok(Arc::new(model))
        }
        "matrix-local" => {
            let rep = representation
                .ok_or_else(|| Error::Config("matrix-local model needs representation matrices".into()))?;
            Ok(Arc::new(MatrixLocal::new(alg.clone(), rep)?))
        }
        other => Err(Error::Config(format!(
            "unknown group model '{other}' (expected nilpotent-bch, e2-cover or matrix-local)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::unipotent_log;
    use crate::rack::rng_from_seed;

    #[test]
    fn bch_heisenberg_closed_form() {
        let h = catalog::heisenberg().to_f64();
        let x = [1.0, 2.0, 3.0];
        let y = [-0.5, 4.0, 1.0];
        let z = bch(&h, &x, &y, 2).unwrap();
        // X + Y + [X,Y]/2 with [X,Y] = (x1 y2 - x2 y1) e3
        let c = x[0] * y[1] - x[1] * y[0];
        assert_eq!(z, vec![0.5, 6.0, 4.0 + c / 2.0]);
        assert_eq!(nilpotency_class(&catalog::heisenberg()), Some(2));
        assert_eq!(nilpotency_class(&LeibnizAlgebra::<f64>::abelian(2)), Some(1));
        assert_eq!(nilpotency_class(&catalog::affine_line()), None);
    }

    #[test]
    fn bch_matches_matrix_logarithm_class_three() {
        // strictly upper 4x4 matrices E12, E23, E34, E13, E24, E14 (class 3)
        let idx = [(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (0, 3)];
        let e = |(i, j): (usize, usize)| {
            let mut m = Matrix::<f64>::zeros(4, 4);
            m[(i, j)] = 1.0;
            m
        };
        let coords = |m: &Matrix<f64>| idx.iter().map(|&(i, j)| m[(i, j)]).collect::<Vec<_>>();
        let mut flat = Vec::new();
        for &a in &idx {
            for &b in &idx {
                flat.extend(coords(&e(a).commutator(&e(b)).unwrap()));
            }
        }
        let alg = LeibnizAlgebra::from_flat(6, flat).unwrap();
        let embed = |v: &[f64]| {
            let mut m = Matrix::zeros(4, 4);
            for (c, &(i, j)) in v.iter().zip(&idx) {
                m[(i, j)] = *c;
            }
            m
        };
        let x = [0.3, -1.2, 0.7, 0.4, 0.25, -0.6];
        let y = [1.1, 0.5, -0.9, -0.2, 0.8, 0.3];
        let prod = mat_exp(&embed(&x), 1e-16).unwrap().mul(&mat_exp(&embed(&y), 1e-16).unwrap()).unwrap();
        let oracle = coords(&unipotent_log(&prod).unwrap());
        let z = bch(&alg, &x, &y, 3).unwrap();
        for (a, b) in z.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-13, "{z:?} vs {oracle:?}");
        }
    }

    fn group_axioms(m: &dyn GroupModel, seed: u64) {
        let mut rng = rng_from_seed(seed);
        let e = m.identity();
        for _ in 0..32 {
            let a = m.sample(&mut rng, 1.0);
            let b = m.sample(&mut rng, 1.0);
            let c = m.sample(&mut rng, 1.0);
            let l = m.multiply(&m.multiply(&a, &b).unwrap(), &c).unwrap();
            let r = m.multiply(&a, &m.multiply(&b, &c).unwrap()).unwrap();
            assert!(crate::scalar::max_abs_diff(&l, &r) < 1e-12);
            let ai = m.inverse(&a).unwrap();
            assert!(crate::scalar::max_abs_diff(&m.multiply(&a, &ai).unwrap(), &e) < 1e-12);
            assert!(crate::scalar::max_abs_diff(&m.multiply(&e, &a).unwrap(), &a) < 1e-15);
            // factorization reproduces the element
            let word = m.exp_word_factor(&a);
            if let Ok(word) = word {
                let mut g = e.clone();
                for xi in &word {
                    g = m.multiply(&g, &m.exp(xi).unwrap()).unwrap();
                }
                assert!(crate::scalar::max_abs_diff(&g, &a) < 1e-12);
            }
            // Ad(exp ξ) = e^{ad ξ}
            let xi: Vec<f64> = sample_vector(&mut rng, m.lie_algebra().dim(), 1.0);
            let ad = mat_exp(&adjoint_map(m.lie_algebra(), &xi).unwrap(), 1e-16).unwrap();
            assert!(m.adjoint(&m.exp(&xi).unwrap()).unwrap().max_abs_diff(&ad) < 1e-12);
            let l = m.log(&m.exp(&xi).unwrap()).unwrap();
            assert!(l.in_domain);
            assert!(crate::scalar::max_abs_diff(&l.vector, &xi) < 1e-12);
        }
    }

    #[test]
    fn bundled_models_satisfy_contract() {
        group_axioms(&NilpotentBch::new(catalog::heisenberg().to_f64()).unwrap(), 1);
        group_axioms(&E2Cover::new(), 2);
        group_axioms(&MatrixLocal::affine_line(), 3);
    }

    #[test]
    fn e2_log_domain() {
        let m = E2Cover::new();
        let g = m.exp(&[0.9 * PI, 0.3, -0.4]).unwrap();
        let l = m.log(&g).unwrap();
        assert!(l.in_domain);
        assert!((l.vector[1] - 0.3).abs() < 1e-12);
        assert!(!m.log(&[PI, 0.0, 0.0]).unwrap().in_domain);
        assert!(!m.log(&[2.0 * PI, 1.0, 0.0]).unwrap().in_domain);
    }

    #[test]
    fn principal_log_round_trip() {
        let x = Matrix::from_rows(vec![vec![0.4, -2.0], vec![1.5, -0.3]]).unwrap();
        let l = principal_log(&mat_exp(&x, 1e-16).unwrap()).unwrap();
        assert!(l.max_abs_diff(&x) < 1e-12);
        let neg = Matrix::from_rows(vec![vec![-1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert!(principal_log(&neg).is_none());
    }

    #[test]
    fn model_selection() {
        let h = catalog::heisenberg().to_f64();
        assert!(build_model("nilpotent-bch", &h, None).is_ok());
        assert!(matches!(build_model("e2-cover", &h, None), Err(Error::Config(_))));
        assert!(build_model("nilpotent-bch", &catalog::affine_line().to_f64(), None).is_err());
        assert!(build_model("matrix-local", &h, None).is_err());
        assert!(build_model("lie3", &h, None).is_err());
    }
}
