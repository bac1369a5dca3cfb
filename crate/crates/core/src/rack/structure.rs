use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{dim_check, Error, Result};
use crate::report::{Check, VerificationReport};
use crate::scalar::{max_abs, snap, Scalar};

pub type Point<S> = Vec<S>;
pub type DefectFn<S> = Arc<dyn Fn(&[S]) -> f64 + Send + Sync>;
pub type SamplerFn<S> = Arc<dyn Fn(&mut ChaCha8Rng, f64) -> Point<S> + Send + Sync>;
pub type ProductFn<S> = Arc<dyn Fn(&[S], &[S]) -> Result<Point<S>> + Send + Sync>;
pub type ChartPointFn<S> = Arc<dyn Fn(&[f64]) -> Result<Point<S>> + Send + Sync>;
pub type ChartCoordsFn<S> = Arc<dyn Fn(&[S]) -> Result<Vec<f64>> + Send + Sync>;

/// Deterministic generator used by every sampler and sampled check.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform scalar in `[-scale, scale]`; snapped to a multiple of 1/16 in
/// rational mode so exact arithmetic stays small.
pub fn sample_scalar<S: Scalar>(rng: &mut ChaCha8Rng, scale: f64) -> S {
    let x = scale * (2.0 * rng.random::<f64>() - 1.0);
    if S::is_exact() {
        snap(x, 16)
    } else {
        S::from_f64(x)
    }
}

pub fn sample_vector<S: Scalar>(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vec<S> {
    (0..dim).map(|_| sample_scalar(rng, scale)).collect()
}

/// Largest coordinate difference; exact differences in rational mode so a
/// nonzero defect never rounds to zero.
pub fn point_distance<S: Scalar>(a: &[S], b: &[S]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let d: Vec<S> = a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect();
    let m = max_abs(&d);
    if S::is_exact() && m == 0.0 && d.iter().any(|x| !x.is_zero()) {
        f64::MIN_POSITIVE
    } else if m.is_nan() {
        f64::INFINITY
    } else {
        m
    }
}

/// Coordinate space together with a membership defect (zero on the carrier)
/// and a sampler of points near the unit.
#[derive(Clone)]
pub struct Carrier<S> {
    coord_dim: usize,
    defect: DefectFn<S>,
    sampler: SamplerFn<S>,
    tol: f64,
}

impl<S: Scalar> Carrier<S> {
    pub fn new(coord_dim: usize, defect: DefectFn<S>, sampler: SamplerFn<S>, tol: f64) -> Self {
        Self {
            coord_dim,
            defect,
            sampler,
            tol,
        }
    }

    /// All of `S^dim`, sampled uniformly in the cube of half-width `scale`.
    pub fn euclidean(dim: usize) -> Self {
        Self::new(
            dim,
            Arc::new(|_| 0.0),
            Arc::new(move |rng, scale| sample_vector(rng, dim, scale)),
            0.0,
        )
    }

    pub fn coord_dim(&self) -> usize {
        self.coord_dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn membership_defect(&self, x: &[S]) -> f64 {
        if x.len() != self.coord_dim {
            return f64::INFINITY;
        }
        let d = (self.defect)(x);
        if d.is_nan() {
            f64::INFINITY
        } else {
            d
        }
    }

    pub fn contains(&self, x: &[S]) -> bool {
        self.membership_defect(x) <= self.tol
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng, scale: f64) -> Point<S> {
        (self.sampler)(rng, scale)
    }
}

/// Coordinates around the unit: `point` maps `R^dim` into the carrier and
/// `coords` is its inverse near the unit.
#[derive(Clone)]
pub struct Chart<S> {
    pub dim: usize,
    pub point: ChartPointFn<S>,
    pub coords: ChartCoordsFn<S>,
}

impl<S: Scalar> Chart<S> {
    /// The identity chart of a Euclidean carrier.
    pub fn linear(dim: usize) -> Self {
        Self {
            dim,
            point: Arc::new(|c| Ok(c.iter().map(|&x| S::from_f64(x)).collect())),
            coords: Arc::new(|p| Ok(p.iter().map(Scalar::to_f64).collect())),
        }
    }
}

/// Pointed carrier with a binary product.
#[derive(Clone)]
pub struct RackStructure<S> {
    name: String,
    carrier: Carrier<S>,
    unit: Point<S>,
    product: ProductFn<S>,
    chart: Option<Chart<S>>,
    sample_scale: f64,
}

impl<S: Scalar> fmt::Debug for RackStructure<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RackStructure")
            .field("name", &self.name)
            .field("coord_dim", &self.carrier.coord_dim)
            .field("has_chart", &self.chart.is_some())
            .finish()
    }
}

impl<S: Scalar> RackStructure<S> {
    pub fn new(name: impl Into<String>, carrier: Carrier<S>, unit: Point<S>, product: ProductFn<S>) -> Result<Self> {
        dim_check("unit length", carrier.coord_dim, unit.len())?;
        if !carrier.contains(&unit) {
            return Err(Error::Carrier("unit is not a carrier point".into()));
        }
        Ok(Self {
            name: name.into(),
            carrier,
            unit,
            product,
            chart: None,
            sample_scale: 1.0,
        })
    }

    pub fn with_chart(mut self, chart: Chart<S>) -> Self {
        self.chart = Some(chart);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Half-width passed to the carrier sampler by sampled checks.
    pub fn with_sample_scale(mut self, scale: f64) -> Self {
        self.sample_scale = scale;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &Carrier<S> {
        &self.carrier
    }

    pub fn unit(&self) -> &[S] {
        &self.unit
    }

    pub fn chart(&self) -> Option<&Chart<S>> {
        self.chart.as_ref()
    }

    pub fn sample_scale(&self) -> f64 {
        self.sample_scale
    }

    pub fn product_fn(&self) -> &ProductFn<S> {
        &self.product
    }

    /// `x ▷ y`.
    pub fn product(&self, x: &[S], y: &[S]) -> Result<Point<S>> {
        dim_check("left factor length", self.carrier.coord_dim, x.len())?;
        dim_check("right factor length", self.carrier.coord_dim, y.len())?;
        (self.product)(x, y)
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Point<S> {
        self.carrier.sample(rng, self.sample_scale)
    }
}

fn sample_checked<S: Scalar>(rack: &RackStructure<S>, rng: &mut ChaCha8Rng) -> Result<Point<S>> {
    let p = rack.sample(rng);
    let d = rack.carrier.membership_defect(&p);
    if d > rack.carrier.tol {
        return Err(Error::Sampler(format!("sampled point has membership defect {d:e}")));
    }
    Ok(p)
}

/// Records `d` against `tol`; in rational mode any nonzero defect fails.
pub(crate) fn record_defect<S: Scalar>(check: &mut Check, location: Vec<usize>, d: f64, tol: f64) {
    let tol = if S::is_exact() { f64::MIN_POSITIVE / 2.0 } else { tol };
    check.record_sample(location, d, tol);
}

/// Evaluates the unit laws, self-distributivity, closure and injectivity of
/// left multiplication on `n_samples` seeded triples.
pub fn check_rack_axioms<S: Scalar>(
    rack: &RackStructure<S>,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    if n_samples == 0 {
        return Err(Error::Precondition("at least one sample is required".into()));
    }
    let mut rng = rng_from_seed(seed);
    let e = rack.unit();
    let mut unit_left = Check::new("unit_left");
    let mut unit_right = Check::new("unit_right");
    let mut sd = Check::new("self_distributivity");
    let mut closure = Check::new("closure");
    let mut inj = Check::new("left_injectivity");

    for k in 0..n_samples {
        let x = sample_checked(rack, &mut rng)?;
        let y = sample_checked(rack, &mut rng)?;
        let z = sample_checked(rack, &mut rng)?;

        let d = rack.product(e, &x).map_or(f64::INFINITY, |p| point_distance(&p, &x));
        record_defect::<S>(&mut unit_left, vec![k], d, tol);
        let d = rack.product(&x, e).map_or(f64::INFINITY, |p| point_distance(&p, e));
        record_defect::<S>(&mut unit_right, vec![k], d, tol);

        let yz = rack.product(&y, &z);
        let xy = rack.product(&x, &y);
        let xz = rack.product(&x, &z);
        let lhs = yz.as_ref().ok().and_then(|yz| rack.product(&x, yz).ok());
        let rhs = match (&xy, &xz) {
            (Ok(a), Ok(b)) => rack.product(a, b).ok(),
            _ => None,
        };
        let d = match (&lhs, &rhs) {
            (Some(l), Some(r)) => point_distance(l, r),
            _ => f64::INFINITY,
        };
        record_defect::<S>(&mut sd, vec![k], d, tol);

        let outside = [&yz, &xy, &xz]
            .iter()
            .map(|p| match p {
                Ok(p) => rack.carrier.membership_defect(p),
                Err(_) => f64::INFINITY,
            })
            .fold(0.0, f64::max);
        record_defect::<S>(&mut closure, vec![k], outside, rack.carrier.tol.max(tol));

        // distinct y, z must have distinct images under x ▷ (-)
        let d_in = point_distance(&y, &z);
        let d_out = match (&xy, &xz) {
            (Ok(a), Ok(b)) => point_distance(a, b),
            _ => 0.0,
        };
        let collapsed = d_in > tol && !(d_out > 1e-6 * d_in);
        inj.record(vec![k], vec![], if collapsed { d_in } else { 0.0 }, collapsed);
    }
    let mut report = VerificationReport::new();
    for c in [unit_left, unit_right, sd, closure, inj] {
        report.push(c);
    }
    Ok(report)
}
