use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::MonicPolynomial;

const SCHUR_MAX_ITER: usize = 10_000;

/// Finite multiset of complex numbers, e.g. the zeros of a polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMultiset {
    values: Vec<Complex64>,
}

impl ComplexMultiset {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Bottleneck distance between multisets of equal size: the smallest
    /// achievable largest pairwise distance over all matchings. Exhaustive
    /// up to 8 elements, greedy beyond.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        let n = self.len();
        if n <= 8 {
            let mut perm: Vec<usize> = (0..n).collect();
            let mut best = f64::INFINITY;
            permute(&mut perm, 0, &mut |p| {
                let d = p
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (self.values[i] - other.values[j]).norm())
                    .fold(0.0, f64::max);
                best = best.min(d);
            });
            best
        } else {
            let mut free: Vec<Complex64> = other.values.clone();
            let mut worst: f64 = 0.0;
            for z in &self.values {
                let (k, d) = free
                    .iter()
                    .enumerate()
                    .map(|(k, w)| (k, (z - w).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("equal sizes");
                worst = worst.max(d);
                free.swap_remove(k);
            }
            worst
        }
    }

    /// Groups values lying within `radius` of a cluster seed, returning each
    /// cluster's mean and multiplicity.
    pub fn clusters(&self, radius: f64) -> Vec<(Complex64, usize)> {
        let mut groups: Vec<Vec<Complex64>> = Vec::new();
        for &z in &self.values {
            match groups.iter_mut().find(|g| (g[0] - z).norm() <= radius) {
                Some(g) => g.push(z),
                None => groups.push(vec![z]),
            }
        }
        groups
            .into_iter()
            .map(|g| {
                let k = g.len();
                (g.iter().sum::<Complex64>() / k as f64, k)
            })
            .collect()
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Monic polynomial with the given zeros: `a_r = (-1)^r e_r(z)`.
pub fn from_roots(z: &ComplexMultiset) -> MonicPolynomial<Complex64> {
    // e holds the elementary symmetric functions e_0..e_k of the first k roots
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for &root in z.values() {
        e.push(Complex64::new(0.0, 0.0));
        for r in (1..e.len()).rev() {
            let prev = e[r - 1];
            e[r] += prev * root;
        }
    }
    let a = e
        .iter()
        .enumerate()
        .skip(1)
        .map(|(r, c)| if r % 2 == 0 { *c } else { -c })
        .collect();
    MonicPolynomial::from_coefficients(a)
}

/// `max(1, ‖a‖)`, an upper bound for the modulus of every zero.
pub fn root_bound(f: &MonicPolynomial<Complex64>) -> f64 {
    f.norm().max(1.0)
}

/// Radius within which computed zeros are treated as one multiple zero.
pub fn cluster_radius(f: &MonicPolynomial<Complex64>) -> f64 {
    1e-7 * root_bound(f)
}

/// Diagonal similarity balancing of a dense matrix (Parlett and Reinsch).
fn balance<T: nalgebra::ComplexField<RealField = f64>>(m: &mut DMatrix<T>) {
    let n = m.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].clone().abs();
                    r += m[(i, j)].clone().abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let s = c + r;
            while c < r / 2.0 {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while c >= r * 2.0 {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r) < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] = m[(i, j)].clone().unscale(f);
                    m[(j, i)] = m[(j, i)].clone().scale(f);
                }
            }
        }
    }
}

fn companion_eigenvalues(a: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.len();
    let fail = || Error::Numeric(format!("companion eigenvalue iteration did not converge (degree {n})"));
    if a.iter().all(|c| c.im == 0.0) {
        let mut m = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            m[(0, j)] = -a[j].re;
        }
        for i in 1..n {
            m[(i, i - 1)] = 1.0;
        }
        balance(&mut m);
        let schur = Schur::try_new(m, f64::EPSILON, SCHUR_MAX_ITER).ok_or_else(fail)?;
        Ok(schur.complex_eigenvalues().iter().copied().collect())
    } else {
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for j in 0..n {
            m[(0, j)] = -a[j];
        }
        for i in 1..n {
            m[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        balance(&mut m);
        let schur = Schur::try_new(m, f64::EPSILON, SCHUR_MAX_ITER).ok_or_else(fail)?;
        Ok(schur.eigenvalues().ok_or_else(fail)?.iter().copied().collect())
    }
}

fn polish(f: &MonicPolynomial<Complex64>, mut z: Complex64) -> Complex64 {
    let mut best = f.eval(z).norm();
    for _ in 0..4 {
        let d = f.eval_derivative(z);
        if d.norm() == 0.0 || best == 0.0 {
            break;
        }
        let next = z - f.eval(z) / d;
        let r = f.eval(next).norm();
        if !(r < best) {
            break;
        }
        z = next;
        best = r;
    }
    z
}

/// All zeros of `f` with multiplicity, from the eigenvalues of the balanced
/// companion matrix. Exact zero roots (trailing zero coefficients) are split
/// off first; clusters within [`cluster_radius`] are replaced by their mean
/// and isolated zeros get a few Newton steps.
pub fn roots(f: &MonicPolynomial<Complex64>, tol: f64) -> Result<ComplexMultiset> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    let a = f.coefficients();
    if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Numeric("polynomial has non-finite coefficients".into()));
    }
    let mut deg = a.len();
    while deg > 0 && a[deg - 1] == Complex64::new(0.0, 0.0) {
        deg -= 1;
    }
    let zeros = a.len() - deg;
    let mut values = vec![Complex64::new(0.0, 0.0); zeros];
    if deg > 0 {
        let reduced = MonicPolynomial::from_coefficients(a[..deg].to_vec());
        let raw = ComplexMultiset::new(companion_eigenvalues(&a[..deg])?);
        for (c, k) in raw.clusters(cluster_radius(&reduced)) {
            if k == 1 {
                values.push(polish(&reduced, c));
            } else {
                values.extend(std::iter::repeat_n(c, k));
            }
        }
    }
    let bound = root_bound(f);
    let allowed = tol * bound.powi(a.len() as i32);
    for z in &values {
        let r = f.eval(*z).norm();
        if !(r < allowed) {
            return Err(Error::Numeric(format!("root {z} has residual {r:e} above {allowed:e}")));
        }
    }
    Ok(ComplexMultiset::new(values))
}
