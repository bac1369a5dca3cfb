use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{verify_augmented, verify_lie, AugmentedLeibnizAlgebra, LeibnizAlgebra};
use crate::analysis::mat_exp;
use crate::error::{dim_check, Error, Result};
use crate::integration::config::IntegrationConfig;
use crate::integration::cutoff::beta;
use crate::integration::model::GroupModel;
use crate::integration::section::section_s;
use crate::linalg::{unit_vector, Matrix};
use crate::rack::{
    check_rack_axioms, from_augmented, relative_table_error, rng_from_seed, sample_vector, tangent_leibniz,
    AugmentedRackStructure, Carrier, Chart, Group, Point, RackStructure, TangentBracket,
};
use crate::report::{Check, VerificationReport};
use crate::scalar::max_abs_diff;

/// Point `(x, g′)` of `M = {(x, g′) : p(x) = s(g′)}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RackPoint {
    pub x: Vec<f64>,
    pub gp: Vec<f64>,
}

struct Inner {
    aug: AugmentedLeibnizAlgebra<f64>,
    model: Arc<dyn GroupModel>,
    cfg: IntegrationConfig,
    pinv: Matrix<f64>,
    kernel: Vec<Vec<f64>>,
}

impl Inner {
    fn h_dim(&self) -> usize {
        self.aug.h_dim()
    }

    fn split<'a>(&self, m: &'a [f64]) -> Result<(&'a [f64], &'a [f64])> {
        dim_check("rack point length", self.h_dim() + self.model.coord_dim(), m.len())?;
        Ok(m.split_at(self.h_dim()))
    }

    fn defect(&self, m: &[f64]) -> f64 {
        let Ok((x, g)) = self.split(m) else {
            return f64::INFINITY;
        };
        let group = self.model.membership_defect(g);
        let Ok(px) = self.aug.p().apply(x) else {
            return f64::INFINITY;
        };
        match section_s(self.model.as_ref(), g, &self.cfg) {
            Ok(s) => max_abs_diff(&px, &s).max(group),
            Err(_) => f64::INFINITY,
        }
    }

    fn rho(&self, g: &[f64]) -> Result<Matrix<f64>> {
        let mut r = Matrix::identity(self.h_dim());
        for xi in self.model.exp_word_factor(g)? {
            r = r.mul(&mat_exp(&self.aug.action_of(&xi)?, 1e-16)?)?;
        }
        Ok(r)
    }

    /// `ℓ_g(x, g′) = (ρ_g x, g g′ g⁻¹)`.
    fn ell(&self, g: &[f64], m: &[f64]) -> Result<Point<f64>> {
        let (x, gp) = self.split(m)?;
        let mut out = self.rho(g)?.apply(x)?;
        out.extend(self.model.conj(g, gp)?);
        Ok(out)
    }

    fn lift(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.pinv.apply(&section_s(self.model.as_ref(), g, &self.cfg)?)
    }

    fn sample(&self, rng: &mut rand_chacha::ChaCha8Rng, scale: f64) -> Point<f64> {
        let g = self.model.sample(rng, scale);
        let mut x = self.lift(&g).unwrap_or_else(|_| vec![f64::NAN; self.h_dim()]);
        for k in &self.kernel {
            let u: f64 = sample_vector::<f64>(rng, 1, scale)[0];
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += u * ki;
            }
        }
        x.extend(g);
        x
    }
}

/// The pullback `M = s*h` over a group model, with its augmented rack
/// structure `φ(x, g′) = g′` and `ℓ_g(x, g′) = (ρ_g x, g g′ g⁻¹)`.
#[derive(Clone)]
pub struct DirtyRack {
    inner: Arc<Inner>,
    augmented: AugmentedRackStructure<f64>,
    rack: RackStructure<f64>,
}

impl std::fmt::Debug for DirtyRack {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirtyRack")
            .field("h_dim", &self.inner.h_dim())
            .field("model", &self.inner.model.name())
            .field("fiber_dim", &self.inner.kernel.len())
            .finish()
    }
}

/// Builds `M` after checking the augmentation axioms, the dimensions and
/// structure constants against the model, and surjectivity of `p`.
pub fn build_pullback_rack(
    aug: &AugmentedLeibnizAlgebra<f64>,
    model: Arc<dyn GroupModel>,
    cfg: &IntegrationConfig,
) -> Result<DirtyRack> {
    cfg.validate()?;
    let report = verify_augmented(aug);
    if !report.passed() {
        let failed: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
        return Err(Error::Precondition(format!("augmentation axioms fail: {failed:?}")));
    }
    dim_check("model Lie algebra dimension", aug.g().dim(), model.lie_algebra().dim())?;
    let diff = aug.g().max_constant_diff(model.lie_algebra());
    if diff > 1e-12 {
        return Err(Error::Config(format!(
            "model '{}' has a Lie algebra different from the augmentation target (constants differ by {diff:e})",
            model.name()
        )));
    }
    if aug.p().rank() != aug.g().dim() {
        return Err(Error::Config("p is not surjective onto the model Lie algebra".into()));
    }
    let pinv = aug.p().right_pseudo_inverse()?;
    let inner = Arc::new(Inner {
        aug: aug.clone(),
        model: model.clone(),
        pinv,
        kernel: aug.p().kernel(),
        cfg: cfg.clone(),
    });
    let h = inner.h_dim();
    let coord_dim = h + model.coord_dim();
    let (i1, i2) = (inner.clone(), inner.clone());
    let carrier = Carrier::new(
        coord_dim,
        Arc::new(move |m| i1.defect(m)),
        Arc::new(move |rng, scale| i2.sample(rng, scale)),
        cfg.tol,
    );
    let (i3, i4) = (inner.clone(), inner.clone());
    let chart = Chart {
        dim: h,
        point: Arc::new(move |c: &[f64]| {
            dim_check("chart coordinates", i3.h_dim(), c.len())?;
            let mut out = c.to_vec();
            out.extend(i3.model.exp(&i3.aug.p().apply(c)?)?);
            Ok(out)
        }),
        coords: Arc::new(move |m: &[f64]| Ok(i4.split(m)?.0.to_vec())),
    };
    let (i5, i6) = (inner.clone(), inner.clone());
    let mut unit = vec![0.0; h];
    unit.extend(model.identity());
    let augmented = AugmentedRackStructure {
        name: format!("dirty ({})", model.name()),
        carrier,
        unit,
        group: model.clone() as Arc<dyn Group<f64>>,
        phi: Arc::new(move |m| Ok(i5.split(m)?.1.to_vec())),
        ell: Arc::new(move |g, m| {
            if i6.defect(m) > i6.cfg.tol {
                return Err(Error::Carrier("action applied to a point outside M".into()));
            }
            i6.ell(g, m)
        }),
        chart: Some(chart),
        sample_scale: 1.0,
    };
    let rack = from_augmented(&augmented, 32, cfg.tol)?;
    Ok(DirtyRack {
        inner,
        augmented,
        rack,
    })
}

impl DirtyRack {
    pub fn rack(&self) -> &RackStructure<f64> {
        &self.rack
    }

    pub fn augmented(&self) -> &AugmentedRackStructure<f64> {
        &self.augmented
    }

    pub fn aug(&self) -> &AugmentedLeibnizAlgebra<f64> {
        &self.inner.aug
    }

    pub fn model(&self) -> &Arc<dyn GroupModel> {
        &self.inner.model
    }

    pub fn config(&self) -> &IntegrationConfig {
        &self.inner.cfg
    }

    /// Dimension of the typical fiber, `dim Ker p`.
    pub fn fiber_dim(&self) -> usize {
        self.inner.kernel.len()
    }

    pub fn unit_point(&self) -> RackPoint {
        self.to_point(self.rack.unit()).expect("unit has rack point length")
    }

    pub fn to_point(&self, m: &[f64]) -> Result<RackPoint> {
        let (x, gp) = self.inner.split(m)?;
        Ok(RackPoint {
            x: x.to_vec(),
            gp: gp.to_vec(),
        })
    }

    pub fn flatten(&self, m: &RackPoint) -> Vec<f64> {
        let mut v = m.x.clone();
        v.extend_from_slice(&m.gp);
        v
    }

    /// `|p(x) - s(g′)|`, plus the model's own membership defect of `g′`.
    pub fn membership_defect(&self, m: &RackPoint) -> f64 {
        self.inner.defect(&self.flatten(m))
    }

    /// `ρ_g = Π exp(ρ̇_{ξ_i})` over the model's factorization of `g`.
    pub fn rho(&self, g: &[f64]) -> Result<Matrix<f64>> {
        self.inner.rho(g)
    }

    /// The point of `M` over `g′` with `x = p⁺ s(g′)`.
    pub fn lift(&self, g: &[f64]) -> Result<RackPoint> {
        Ok(RackPoint {
            x: self.inner.lift(g)?,
            gp: g.to_vec(),
        })
    }

    pub fn sample(&self, rng: &mut rand_chacha::ChaCha8Rng) -> RackPoint {
        self.to_point(&self.rack.sample(rng)).expect("sampler produces rack point length")
    }

    /// `m ▷ m′ = (ρ_g x′, g g′ g⁻¹)` with `g = m.gp`; both inputs and the
    /// output must lie in `M`.
    pub fn product(&self, m: &RackPoint, n: &RackPoint) -> Result<RackPoint> {
        let tol = self.inner.cfg.tol;
        for (name, p) in [("left", m), ("right", n)] {
            let d = self.membership_defect(p);
            if !(d <= tol) {
                return Err(Error::Carrier(format!("{name} factor is not in M (defect {d:e})")));
            }
        }
        let out = self.to_point(&self.inner.ell(&m.gp, &self.flatten(n))?)?;
        let d = self.membership_defect(&out);
        if !(d <= tol) {
            return Err(Error::Carrier(format!("product left M (defect {d:e})")));
        }
        Ok(out)
    }

    /// Fibers over 32 sampled base points: `h_dim + 1` sampled fiber points
    /// span an affine space of dimension `dim Ker p`.
    pub fn fiber_dimension_check(&self, seed: u64) -> Result<Check> {
        let mut check = Check::new("fiber_dimension");
        let mut rng = rng_from_seed(seed);
        let h = self.inner.h_dim();
        for k in 0..32 {
            let g = self.inner.model.sample(&mut rng, self.augmented.sample_scale);
            let base = self.lift(&g)?;
            let mut diffs = Vec::new();
            let mut worst: f64 = self.membership_defect(&base);
            for _ in 0..h {
                let mut x = base.x.clone();
                for kv in &self.inner.kernel {
                    let u: f64 = sample_vector::<f64>(&mut rng, 1, 1.0)[0];
                    for (xi, ki) in x.iter_mut().zip(kv) {
                        *xi += u * ki;
                    }
                }
                let pt = RackPoint { x, gp: g.clone() };
                worst = worst.max(self.membership_defect(&pt));
                diffs.push(pt.x.iter().zip(&base.x).map(|(a, b)| a - b).collect::<Vec<_>>());
            }
            let rank = if diffs.is_empty() { 0 } else { Matrix::from_rows(diffs)?.rank() };
            let failed = rank != self.fiber_dim() || !(worst <= self.inner.cfg.tol);
            check.record(vec![k], vec![rank.to_string()], worst, failed);
        }
        Ok(check)
    }

    /// Products of sampled points stay in `M`.
    pub fn membership_check(&self, n_samples: usize, seed: u64) -> Check {
        let mut check = Check::new("product_membership");
        let mut rng = rng_from_seed(seed);
        for k in 0..n_samples {
            let a = self.sample(&mut rng);
            let b = self.sample(&mut rng);
            let d = match self.inner.ell(&a.gp, &self.flatten(&b)) {
                Ok(p) => self.inner.defect(&p),
                Err(_) => f64::INFINITY,
            };
            check.record_sample(vec![k], d, self.inner.cfg.tol);
        }
        check
    }

    /// Rack axioms, product membership and fiber dimensions.
    pub fn verify(&self, n_samples: usize, seed: u64) -> Result<VerificationReport> {
        let mut report = check_rack_axioms(&self.rack, n_samples, seed, self.inner.cfg.tol)?;
        report.push(self.membership_check(n_samples, seed.wrapping_add(1)));
        report.push(self.fiber_dimension_check(seed.wrapping_add(2))?);
        Ok(report)
    }
}

/// Tangent bracket of `M` at `(0, e)` along the curves `(t x, exp(t p x))`.
#[derive(Debug, Clone)]
pub struct TangentCheck {
    pub recovered: TangentBracket,
    pub expected: LeibnizAlgebra<f64>,
    pub relative_error: f64,
    pub report: VerificationReport,
}

/// Recovers the bracket of `h` from the dirty rack and compares it with
/// `[x, y] = p(x).y` at relative tolerance `tangent_tol`.
pub fn tangent_check(rack: &DirtyRack) -> Result<TangentCheck> {
    let cfg = rack.config();
    let aug = rack.aug();
    let h = aug.h_dim();
    for i in 0..h {
        let xi = aug.p().apply(&unit_vector(h, i))?;
        let step: Vec<f64> = xi.iter().map(|x| x * cfg.fd_step).collect();
        let b = beta(aug.g(), &step)?;
        if b > cfg.tau_prime {
            return Err(Error::Config(format!(
                "finite-difference step {} leaves the cutoff plateau along e{}; reduce the step",
                cfg.fd_step,
                i + 1
            )));
        }
    }
    let recovered = tangent_leibniz(&rack.rack, cfg.fd_step, cfg.fd_step)?;
    let expected = aug.derived_algebra();
    let relative_error = relative_table_error(&recovered.table, &expected);
    let mut check = Check::new("tangent_bracket");
    check.record_sample(vec![], relative_error, cfg.tangent_tol);
    let mut report = VerificationReport::new();
    report.push(check);
    Ok(TangentCheck {
        recovered,
        expected,
        relative_error,
        report,
    })
}

/// For a Lie algebra and its canonical augmentation (`p = id`, trivial
/// fibers): `(x, g′) ↦ g′` is a bijection onto sampled group elements and
/// carries the dirty product to conjugation.
pub fn lie_case_reduction(
    lie: &LeibnizAlgebra<f64>,
    model: Arc<dyn GroupModel>,
    cfg: &IntegrationConfig,
) -> Result<VerificationReport> {
    cfg.validate()?;
    if !verify_lie(lie).passed() {
        return Err(Error::Precondition("input is not a Lie algebra".into()));
    }
    let aug = crate::algebra::canonical_augmentation(lie)?;
    if aug.kernel_of_p().dim() != 0 {
        return Err(Error::Precondition("the typical fiber Ker p is nonzero".into()));
    }
    let dirty = build_pullback_rack(&aug, model.clone(), cfg)?;
    let mut report = VerificationReport::new();
    let mut fiber = Check::new("fiber_dimension_zero");
    fiber.record(vec![], vec![dirty.fiber_dim().to_string()], dirty.fiber_dim() as f64, dirty.fiber_dim() != 0);
    report.push(fiber);

    let mut rng = rng_from_seed(cfg.seed);
    let mut bijective = Check::new("projection_bijective");
    let mut transport = Check::new("conjugation_transport");
    for k in 0..cfg.samples {
        // surjectivity: every sampled g′ has a lift; injectivity: the lift
        // of the projection of a sampled point is that point
        let g = model.sample(&mut rng, 1.0);
        let lifted = dirty.lift(&g)?;
        let m = dirty.sample(&mut rng);
        let relift = dirty.lift(&m.gp)?;
        let d = dirty
            .membership_defect(&lifted)
            .max(max_abs_diff(&relift.x, &m.x))
            .max(max_abs_diff(&relift.gp, &m.gp));
        bijective.record_sample(vec![k], d, cfg.tol);

        let n = dirty.sample(&mut rng);
        let d = match dirty.product(&m, &n) {
            Ok(out) => {
                let conj = model.conj(&m.gp, &n.gp)?;
                let expected = dirty.lift(&conj)?;
                max_abs_diff(&out.gp, &conj).max(max_abs_diff(&out.x, &expected.x))
            }
            Err(_) => f64::INFINITY,
        };
        transport.record_sample(vec![k], d, cfg.tol);
    }
    report.push(bijective);
    report.push(transport);
    Ok(report)
}
