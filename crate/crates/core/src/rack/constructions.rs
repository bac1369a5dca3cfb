use std::sync::Arc;

use crate::algebra::{adjoint_map, LeibnizAlgebra};
use crate::analysis::mat_exp;
use crate::error::{dim_check, Error, Result};
use crate::rack::group::Group;
use crate::rack::structure::{
    point_distance, record_defect, rng_from_seed, Carrier, Chart, Point, RackStructure,
};
use crate::report::{Check, VerificationReport};
use crate::scalar::Scalar;

const GAUGE_SEED: u64 = 0x6761_7567;
const AUGMENTED_SEED: u64 = 0x6175_676d;

/// `x ▷ y = y` on `S^dim` with unit 0.
pub fn trivial_rack<S: Scalar>(dim: usize) -> RackStructure<S> {
    RackStructure::new(
        "trivial",
        Carrier::euclidean(dim),
        vec![S::zero(); dim],
        Arc::new(|_, y| Ok(y.to_vec())),
    )
    .expect("zero is a point of the euclidean carrier")
    .with_chart(Chart::linear(dim))
}

fn group_carrier<S: Scalar>(group: &Arc<dyn Group<S>>) -> Carrier<S> {
    let (g1, g2) = (group.clone(), group.clone());
    Carrier::new(
        group.coord_dim(),
        Arc::new(move |a| g1.membership_defect(a)),
        Arc::new(move |rng, scale| g2.sample(rng, scale)),
        if S::is_exact() { 0.0 } else { 1e-9 },
    )
}

/// `g ▷ h = g h g^{-1}` with unit the identity.
pub fn conjugation_rack<S: Scalar>(group: Arc<dyn Group<S>>) -> Result<RackStructure<S>> {
    let g = group.clone();
    RackStructure::new(
        "conjugation",
        group_carrier(&group),
        group.identity(),
        Arc::new(move |a, b| g.conj(a, b)),
    )
}

/// `X ▷ Y = e^{ad_X} Y` on the underlying space of a Leibniz algebra.
pub fn kinyon_rack(alg: &LeibnizAlgebra<f64>) -> RackStructure<f64> {
    let n = alg.dim();
    let a = alg.clone();
    RackStructure::new(
        "kinyon",
        Carrier::euclidean(n),
        vec![0.0; n],
        Arc::new(move |x, y| mat_exp(&adjoint_map(&a, x)?, 1e-16)?.apply(y)),
    )
    .expect("zero is a point of the euclidean carrier")
    .with_chart(Chart::linear(n))
}

pub type SelfMap<S> = Arc<dyn Fn(&[S]) -> Result<Point<S>> + Send + Sync>;

/// `x ▷_f y = f(x) ▷ y` after checking `f(e) = e` and
/// `f(x ▷ y) = x ▷ f(y)` on `n_check` sampled pairs.
pub fn gauge<S: Scalar>(rack: &RackStructure<S>, f: SelfMap<S>, n_check: usize, tol: f64) -> Result<RackStructure<S>> {
    let e = rack.unit();
    let fe = f(e)?;
    if point_distance(&fe, e) > tol {
        return Err(Error::Precondition("gauge map does not fix the unit".into()));
    }
    let mut rng = rng_from_seed(GAUGE_SEED);
    for k in 0..n_check {
        let x = rack.sample(&mut rng);
        let y = rack.sample(&mut rng);
        let lhs = f(&rack.product(&x, &y)?)?;
        let rhs = rack.product(&x, &f(&y)?)?;
        let d = point_distance(&lhs, &rhs);
        if !(d <= tol) {
            return Err(Error::Precondition(format!(
                "gauge map is not equivariant: defect {d:e} on sample {k}"
            )));
        }
    }
    let inner = rack.product_fn().clone();
    let mut gauged = RackStructure::new(
        format!("gauged {}", rack.name()),
        rack.carrier().clone(),
        rack.unit().to_vec(),
        Arc::new(move |x, y| inner(&f(x)?, y)),
    )?
    .with_sample_scale(rack.sample_scale());
    if let Some(c) = rack.chart() {
        gauged = gauged.with_chart(c.clone());
    }
    Ok(gauged)
}

pub type PhiFn<S> = Arc<dyn Fn(&[S]) -> Result<Point<S>> + Send + Sync>;
pub type ActionFn<S> = Arc<dyn Fn(&[S], &[S]) -> Result<Point<S>> + Send + Sync>;

/// Pointed `G`-set `M` with an equivariant map `φ: M → G`.
#[derive(Clone)]
pub struct AugmentedRackStructure<S> {
    pub name: String,
    pub carrier: Carrier<S>,
    pub unit: Point<S>,
    pub group: Arc<dyn Group<S>>,
    pub phi: PhiFn<S>,
    /// `ell(g, x) = ℓ_g(x)`.
    pub ell: ActionFn<S>,
    pub chart: Option<Chart<S>>,
    pub sample_scale: f64,
}

/// Checks, on sampled `g, h ∈ G` and `x ∈ M`: `ℓ_g(e) = e`,
/// `φ(ℓ_g x) = g φ(x) g^{-1}`, `ℓ_g ℓ_h x = ℓ_{gh} x` and `ℓ_g x ∈ M`.
pub fn verify_augmented_rack<S: Scalar>(
    aug: &AugmentedRackStructure<S>,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let mut rng = rng_from_seed(seed);
    let mut unit = Check::new("unit_fixed");
    let mut equiv = Check::new("phi_equivariance");
    let mut action = Check::new("action");
    let mut closure = Check::new("action_closure");
    let mut phi_unit = Check::new("phi_unit");
    let d = match (aug.phi)(&aug.unit) {
        Ok(p) => point_distance(&p, &aug.group.identity()),
        Err(_) => f64::INFINITY,
    };
    record_defect::<S>(&mut phi_unit, vec![], d, tol);
    for k in 0..n_samples {
        let g = aug.group.sample(&mut rng, aug.sample_scale);
        let h = aug.group.sample(&mut rng, aug.sample_scale);
        let x = aug.carrier.sample(&mut rng, aug.sample_scale);
        if !aug.carrier.contains(&x) {
            return Err(Error::Sampler(format!("carrier sample {k} is not a carrier point")));
        }
        let d = (aug.ell)(&g, &aug.unit).map_or(f64::INFINITY, |p| point_distance(&p, &aug.unit));
        record_defect::<S>(&mut unit, vec![k], d, tol);

        let gx = (aug.ell)(&g, &x);
        let d = match &gx {
            Ok(gx) => {
                let lhs = (aug.phi)(gx);
                let rhs = (aug.phi)(&x).and_then(|p| aug.group.conj(&g, &p));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => point_distance(&l, &r),
                    _ => f64::INFINITY,
                }
            }
            Err(_) => f64::INFINITY,
        };
        record_defect::<S>(&mut equiv, vec![k], d, tol);

        let d = match &gx {
            Ok(gx) => aug.carrier.membership_defect(gx),
            Err(_) => f64::INFINITY,
        };
        record_defect::<S>(&mut closure, vec![k], d, aug.carrier.tol().max(tol));

        let lhs = (aug.ell)(&h, &x).and_then(|hx| (aug.ell)(&g, &hx));
        let rhs = aug.group.multiply(&g, &h).and_then(|gh| (aug.ell)(&gh, &x));
        let d = match (lhs, rhs) {
            (Ok(l), Ok(r)) => point_distance(&l, &r),
            _ => f64::INFINITY,
        };
        record_defect::<S>(&mut action, vec![k], d, tol);
    }
    let mut report = VerificationReport::new();
    for c in [phi_unit, unit, equiv, action, closure] {
        report.push(c);
    }
    Ok(report)
}

/// `x ▷ y = ℓ_{φ(x)}(y)`, after [`verify_augmented_rack`] passes on
/// `n_check` samples.
pub fn from_augmented<S: Scalar>(aug: &AugmentedRackStructure<S>, n_check: usize, tol: f64) -> Result<RackStructure<S>> {
    dim_check("unit length", aug.carrier.coord_dim(), aug.unit.len())?;
    let report = verify_augmented_rack(aug, n_check, AUGMENTED_SEED, tol)?;
    if !report.passed() {
        let failed: Vec<String> = report
            .failures()
            .map(|c| format!("{} (max defect {:e})", c.name, c.max_defect))
            .collect();
        return Err(Error::Precondition(format!("augmented rack invariants fail: {}", failed.join(", "))));
    }
    let (phi, ell) = (aug.phi.clone(), aug.ell.clone());
    let mut rack = RackStructure::new(
        aug.name.clone(),
        aug.carrier.clone(),
        aug.unit.clone(),
        Arc::new(move |x, y| ell(&phi(x)?, y)),
    )?
    .with_sample_scale(aug.sample_scale);
    if let Some(c) = &aug.chart {
        rack = rack.with_chart(c.clone());
    }
    Ok(rack)
}
