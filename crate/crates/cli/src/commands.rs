//! The five subcommands. Each returns a report or an input error.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use rackforge::algebra::{
    canonical_augmentation, left_center, quotient_by_ideal, squares_ideal, verify_augmented, verify_leibniz,
    verify_lie, AugmentedLeibnizAlgebra, LeibnizAlgebra, Subspace,
};
use rackforge::analysis::{mat_exp, spectrum, verdict_from_poly};
use rackforge::integration::{
    build_model, build_pullback_rack, exp_chart_check, invariant_cutoff, lie_case_reduction,
    section_equivariance_check, tangent_check, verify_nilradical_translation, GroupModel, IntegrationConfig,
};
use rackforge::linalg::Matrix;
use rackforge::rack::{
    check_rack_axioms, conjugation_rack, from_augmented, gauge, kinyon_rack, relative_table_error, tangent_leibniz,
    trivial_rack, AugmentedRackStructure, Carrier, Chart, Group, RackStructure,
};
use rackforge::report::Check;
use rackforge::{Error, Scalar};

use crate::error::CliError;
use crate::input::{parse_input, Content, Input, Parsed};
use crate::report::{digest, number, Report};

pub const CONSTRUCTIONS: [&str; 6] = ["trivial", "conjugation", "kinyon", "gauged", "augmented", "dirty"];

pub struct Loaded {
    pub input: Input,
    pub digest: String,
    pub file_name: String,
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CliError::input("file is not UTF-8"))?;
    let file_name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Loaded {
        input: parse_input(text, &stem)?,
        digest: digest(&bytes),
        file_name,
    })
}

/// Library errors that describe the input rather than a mathematical
/// failure stop the command.
fn is_input_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::Dimension(_) | Error::Parse(_))
}

fn render_vec<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn render_matrix<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| render_vec(r)).collect()
}

fn render_subspace<S: Scalar>(s: &Subspace<S>) -> Value {
    json!({
        "dimension": s.dim(),
        "basis": s.basis().iter().map(|b| render_vec(b)).collect::<Vec<_>>(),
    })
}

/// Nonzero structure constants as one-based `[i, j, k, c]`.
fn render_algebra<S: Scalar>(alg: &LeibnizAlgebra<S>) -> Value {
    let n = alg.dim();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = alg.constant(i, j, k);
                if !c.is_zero() {
                    entries.push(json!([i + 1, j + 1, k + 1, c.to_string()]));
                }
            }
        }
    }
    json!({ "dimension": n, "labels": alg.labels(), "bracket": entries })
}

fn render_float_table(alg: &LeibnizAlgebra<f64>, threshold: f64) -> Value {
    let n = alg.dim();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = *alg.constant(i, j, k);
                if c.abs() > threshold {
                    entries.push(json!([i + 1, j + 1, k + 1, number(c)]));
                }
            }
        }
    }
    json!(entries)
}

// verify

fn verify_parsed<S: Scalar>(r: &mut Report, p: &Parsed<S>, declared_lie: bool) {
    let alg = p.algebra.as_ref().expect("algebra presence checked");
    r.checks(Some("leibniz"), &verify_leibniz(alg));
    if declared_lie {
        r.checks(Some("lie"), &verify_lie(alg));
    }
    if let Some(aug) = &p.augmentation {
        r.checks(Some("augmentation"), &verify_augmented(aug));
    }
    r.data("dimension", alg.dim());
    r.data("labels", alg.labels());
}

pub fn cmd_verify(path: &Path) -> Result<Report, CliError> {
    let l = load(path)?;
    l.input.require_algebra()?;
    let mut r = Report::new("verify", &l.file_name, l.digest.clone(), None);
    r.param("scalars", l.input.scalars());
    let lie = l.input.declared_lie.unwrap_or(false);
    match &l.input.content {
        Content::Rational(p) => verify_parsed(&mut r, p, lie),
        Content::Float(p) => verify_parsed(&mut r, p, lie),
    }
    Ok(r)
}

// analyze

fn analyze_parsed<S: Scalar>(r: &mut Report, p: &Parsed<S>, samples: usize, seed: u64) -> Result<(), CliError> {
    let alg = p.algebra.as_ref().expect("algebra presence checked");
    let leib = verify_leibniz(alg);
    r.checks(Some("leibniz"), &leib);
    if !leib.passed() {
        return Ok(());
    }
    let q = match squares_ideal(alg) {
        Ok(q) => q,
        Err(e) => {
            r.failure("squares_ideal", e.to_string());
            return Ok(());
        }
    };
    let z = left_center(alg);
    let mut chain = Check::new("squares_in_left_center");
    let outside: Vec<usize> = q
        .basis()
        .iter()
        .enumerate()
        .filter(|(_, b)| !z.contains(b))
        .map(|(i, _)| i)
        .collect();
    chain.record(vec![], vec![], outside.len() as f64, !outside.is_empty());
    r.check(&chain);
    r.data("squares_ideal", render_subspace(&q));
    r.data("left_center", render_subspace(&z));

    match quotient_by_ideal(alg, &q) {
        Ok((quo, proj)) => {
            r.checks(Some("quotient"), &verify_lie(&quo));
            r.data(
                "quotient",
                json!({ "algebra": render_algebra(&quo), "projection": render_matrix(&proj) }),
            );
        }
        Err(e) => r.failure("quotient", e.to_string()),
    }
    match canonical_augmentation(alg) {
        Ok(aug) => {
            let mut same = Check::new("canonical_augmentation_bracket");
            let d = aug.derived_algebra().to_f64().max_constant_diff(&alg.to_f64());
            let exact = aug.derived_algebra().flat_table() == alg.flat_table();
            same.record(vec![], vec![], d, !exact && !(d <= 1e-9 && !S::is_exact()));
            r.check(&same);
            r.data(
                "canonical_augmentation",
                json!({
                    "g": render_algebra(aug.g()),
                    "p": render_matrix(aug.p()),
                    "action": aug.action().iter().map(render_matrix).collect::<Vec<_>>(),
                }),
            );
        }
        Err(e) => r.failure("canonical_augmentation", e.to_string()),
    }
    if let Some(nil) = &p.nilradical {
        match verify_nilradical_translation(alg, nil, samples, seed) {
            Ok(rep) => r.checks(Some("nilradical"), &rep),
            Err(e) if is_input_error(&e) => return Err(e.into()),
            Err(e) => r.failure("nilradical", e.to_string()),
        }
    }
    Ok(())
}

pub fn cmd_analyze(path: &Path, samples: usize, seed: u64) -> Result<Report, CliError> {
    let l = load(path)?;
    l.input.require_algebra()?;
    let mut r = Report::new("analyze", &l.file_name, l.digest.clone(), Some(seed));
    r.param("scalars", l.input.scalars());
    r.param("samples", samples);
    match &l.input.content {
        Content::Rational(p) => analyze_parsed(&mut r, p, samples, seed)?,
        Content::Float(p) => analyze_parsed(&mut r, p, samples, seed)?,
    }
    Ok(r)
}

// integrate

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrateOptions {
    pub model: Option<String>,
    pub tau_prime: f64,
    pub tau: f64,
    pub samples: usize,
    pub seed: u64,
    pub step: f64,
    pub tol: f64,
    pub tangent_tol: f64,
}

/// Model named on the command line, else in the file, else `nilpotent-bch`.
/// The representation in the file is used only when the names agree.
fn select_model(
    input: &Input,
    name: Option<&str>,
    alg: &LeibnizAlgebra<f64>,
) -> Result<Arc<dyn GroupModel>, CliError> {
    let file = input.model.as_ref().map(|m| m.name.as_str());
    let chosen = name.or(file).unwrap_or("nilpotent-bch");
    if !verify_lie(alg).passed() {
        return Err(CliError::input("group models need a Lie algebra"));
    }
    let rep = if Some(chosen) == file { input.representation.clone() } else { None };
    Ok(build_model(chosen, alg, rep)?)
}

/// The file's augmentation, or the canonical one when the file has none.
fn augmentation_of(input: &Input) -> Result<Option<AugmentedLeibnizAlgebra<f64>>, Error> {
    if let Some(a) = input.augmentation_f64() {
        return Ok(Some(a));
    }
    match &input.content {
        Content::Rational(p) => canonical(p.algebra.as_ref().expect("algebra presence checked")).map(|a| a.map(|a| a.to_f64())),
        Content::Float(p) => canonical(p.algebra.as_ref().expect("algebra presence checked")),
    }
}

fn canonical<S: Scalar>(alg: &LeibnizAlgebra<S>) -> Result<Option<AugmentedLeibnizAlgebra<S>>, Error> {
    if !verify_leibniz(alg).passed() {
        return Ok(None);
    }
    canonical_augmentation(alg).map(Some)
}

fn leibniz_report(input: &Input) -> rackforge::report::VerificationReport {
    match &input.content {
        Content::Rational(p) => verify_leibniz(p.algebra.as_ref().expect("algebra presence checked")),
        Content::Float(p) => verify_leibniz(p.algebra.as_ref().expect("algebra presence checked")),
    }
}

fn is_lie(input: &Input) -> bool {
    match &input.content {
        Content::Rational(p) => p.algebra.as_ref().is_some_and(|a| verify_lie(a).passed()),
        Content::Float(p) => p.algebra.as_ref().is_some_and(|a| verify_lie(a).passed()),
    }
}

pub fn cmd_integrate(path: &Path, opts: &IntegrateOptions) -> Result<Report, CliError> {
    let l = load(path)?;
    l.input.require_algebra()?;
    let cfg = IntegrationConfig {
        tau_prime: opts.tau_prime,
        tau: opts.tau,
        fd_step: opts.step,
        samples: opts.samples,
        seed: opts.seed,
        tol: opts.tol,
        tangent_tol: opts.tangent_tol,
    }
    .validated()?;
    let mut r = Report::new("integrate", &l.file_name, l.digest.clone(), Some(opts.seed));
    r.param("scalars", l.input.scalars());
    r.param("config", &cfg);

    let leib = leibniz_report(&l.input);
    r.checks(Some("leibniz"), &leib);
    let Some(aug) = augmentation_of(&l.input)? else {
        return Ok(r);
    };
    let model = select_model(&l.input, opts.model.as_deref(), aug.g())?;
    r.param("model", model.name());
    r.data("h_dimension", aug.h_dim());
    r.data("g_dimension", aug.g().dim());
    r.data("augmentation_source", if l.input.augmentation_f64().is_some() { "file" } else { "canonical" });

    let dirty = match build_pullback_rack(&aug, model.clone(), &cfg) {
        Ok(d) => d,
        Err(e) if is_input_error(&e) => return Err(e.into()),
        Err(e) => {
            r.checks(Some("augmentation"), &verify_augmented(&aug));
            r.failure("pullback", e.to_string());
            return Ok(r);
        }
    };
    r.data("fiber_dimension", dirty.fiber_dim());

    match section_equivariance_check(model.as_ref(), &cfg, cfg.samples, cfg.seed) {
        Ok(rep) => r.checks(Some("section"), &rep),
        Err(e) => r.failure("section", e.to_string()),
    }
    match exp_chart_check(model.as_ref(), &cfg, cfg.samples.min(100), cfg.seed) {
        Ok(rep) => r.checks(Some("chart"), &rep),
        Err(e) => r.failure("chart", e.to_string()),
    }
    match dirty.verify(cfg.samples, cfg.seed) {
        Ok(rep) => r.checks(Some("rack"), &rep),
        Err(e) => r.failure("rack", e.to_string()),
    }
    match tangent_check(&dirty) {
        Ok(t) => {
            r.checks(None, &t.report);
            r.data(
                "tangent",
                json!({
                    "relative_error": number(t.relative_error),
                    "error_estimate": number(t.recovered.max_error()),
                    "recovered": render_float_table(&t.recovered.table, 1e-6),
                    "expected": render_float_table(&t.expected, 0.0),
                    "errors": t.recovered.error.iter().map(|&x| number(x)).collect::<Vec<_>>(),
                }),
            );
        }
        Err(e) if is_input_error(&e) => return Err(e.into()),
        Err(e) => r.failure("tangent_bracket", e.to_string()),
    }
    let reduction = l.input.augmentation_f64().is_none() && is_lie(&l.input);
    r.data("lie_case", reduction);
    if reduction {
        let alg = l.input.algebra_f64().expect("algebra presence checked");
        match lie_case_reduction(&alg, model, &cfg) {
            Ok(rep) => r.checks(Some("lie_reduction"), &rep),
            Err(e) => r.failure("lie_reduction", e.to_string()),
        }
    }
    Ok(r)
}

// strip

#[derive(Debug, Clone, PartialEq)]
pub struct StripOptions {
    pub tau: f64,
    pub tau_prime: Option<f64>,
    pub model: Option<String>,
    pub samples: usize,
    pub seed: u64,
}

fn eigen_json(z: &rackforge::analysis::ComplexMultiset) -> Value {
    json!(z.values().iter().map(|c| [number(c.re), number(c.im)]).collect::<Vec<_>>())
}

fn strip_matrices<S: Scalar>(r: &mut Report, ms: &[Matrix<S>], tau: f64) -> Result<(), CliError> {
    let mut bound = Check::new("root_bound");
    let mut out = Vec::new();
    for (k, m) in ms.iter().enumerate() {
        match spectrum(m).and_then(|(f, z)| Ok((verdict_from_poly(&f, tau)?, z))) {
            Ok((v, z)) => {
                let worst = z.max_modulus() / v.root_bound;
                bound.record(vec![k], vec![], worst, worst > 1.0 + 1e-12);
                out.push(json!({
                    "member": v.member,
                    "margin": number(v.margin),
                    "max_abs_imag": number(v.max_abs_imag),
                    "root_bound": number(v.root_bound),
                    "eigenvalues": eigen_json(&z),
                }));
            }
            Err(e) if is_input_error(&e) => return Err(e.into()),
            Err(e) => {
                bound.record(vec![k], vec![], f64::INFINITY, true);
                out.push(json!({ "error": e.to_string() }));
            }
        }
    }
    if !ms.is_empty() {
        r.check(&bound);
        r.data("matrices", out);
    }
    Ok(())
}

fn strip_elements<S: Scalar>(r: &mut Report, p: &Parsed<S>, cfg: &IntegrationConfig) -> Result<(), CliError> {
    let Some(alg) = &p.algebra else {
        return Ok(());
    };
    let mut out = Vec::new();
    for xi in &p.elements {
        let ad = rackforge::algebra::adjoint_map(alg, xi)?;
        let verdict = rackforge::analysis::strip_membership(&ad, cfg.tau);
        let gamma = invariant_cutoff(alg, xi, cfg);
        match (verdict, gamma) {
            (Ok(v), Ok(g)) => out.push(json!({
                "element": render_vec(xi),
                "member": v.member,
                "margin": number(v.margin),
                "max_abs_imag": number(v.max_abs_imag),
                "cutoff": number(g),
            })),
            (Err(e), _) | (_, Err(e)) => {
                r.failure("element_spectrum", e.to_string());
                out.push(json!({ "element": render_vec(xi), "error": e.to_string() }));
            }
        }
    }
    if !p.elements.is_empty() {
        r.data("elements", out);
    }
    Ok(())
}

pub fn cmd_strip(path: &Path, opts: &StripOptions) -> Result<Report, CliError> {
    let l = load(path)?;
    let tau_prime = opts.tau_prime.unwrap_or((std::f64::consts::PI / 2.0).min(opts.tau / 2.0));
    let cfg = IntegrationConfig {
        tau_prime,
        tau: opts.tau,
        samples: opts.samples,
        seed: opts.seed,
        ..Default::default()
    }
    .validated()?;
    let mut r = Report::new("strip", &l.file_name, l.digest.clone(), Some(opts.seed));
    r.param("scalars", l.input.scalars());
    r.param("tau", opts.tau);
    r.param("tau_prime", tau_prime);
    match &l.input.content {
        Content::Rational(p) => {
            strip_matrices(&mut r, &p.matrices, opts.tau)?;
            strip_elements(&mut r, p, &cfg)?;
        }
        Content::Float(p) => {
            strip_matrices(&mut r, &p.matrices, opts.tau)?;
            strip_elements(&mut r, p, &cfg)?;
        }
    }
    let group_algebra = l.input.augmentation_f64().map(|a| a.g().clone()).or_else(|| l.input.algebra_f64());
    if let Some(alg) = group_algebra {
        if opts.model.is_some() || l.input.model.is_some() {
            let model = select_model(&l.input, opts.model.as_deref(), &alg)?;
            r.param("model", model.name());
            match exp_chart_check(model.as_ref(), &cfg, opts.samples, opts.seed) {
                Ok(rep) => r.checks(Some("chart"), &rep),
                Err(e) => r.failure("chart", e.to_string()),
            }
        }
    }
    Ok(r)
}

// rackcheck

#[derive(Debug, Clone, PartialEq)]
pub struct RackcheckOptions {
    pub construction: String,
    pub model: Option<String>,
    pub samples: usize,
    pub seed: u64,
    pub step: f64,
    pub tol: f64,
    pub tangent_tol: f64,
}

fn scaled(alg: &LeibnizAlgebra<f64>, c: f64) -> LeibnizAlgebra<f64> {
    let flat = alg.flat_table().iter().map(|x| x * c).collect();
    LeibnizAlgebra::from_flat(alg.dim(), flat).expect("same dimension")
}

/// `M = h`, `φ(x) = exp(p x)` and `ℓ_g x = ρ_g x`.
fn linear_augmented(
    aug: &AugmentedLeibnizAlgebra<f64>,
    model: Arc<dyn GroupModel>,
    tol: f64,
) -> Result<RackStructure<f64>, Error> {
    let n = aug.h_dim();
    let (a1, a2) = (aug.clone(), aug.clone());
    let (m1, m2) = (model.clone(), model.clone());
    let structure = AugmentedRackStructure {
        name: format!("augmented ({})", model.name()),
        carrier: Carrier::euclidean(n),
        unit: vec![0.0; n],
        group: model.clone() as Arc<dyn Group<f64>>,
        phi: Arc::new(move |x| m1.exp(&a1.p().apply(x)?)),
        ell: Arc::new(move |g, x| {
            let mut rho = Matrix::identity(a2.h_dim());
            for xi in m2.exp_word_factor(g)? {
                rho = rho.mul(&mat_exp(&a2.action_of(&xi)?, 1e-16)?)?;
            }
            rho.apply(x)
        }),
        chart: Some(Chart::linear(n)),
        sample_scale: 1.0,
    };
    from_augmented(&structure, 32, tol)
}

fn model_chart(model: Arc<dyn GroupModel>) -> Chart<f64> {
    let (m1, m2) = (model.clone(), model.clone());
    Chart {
        dim: model.lie_algebra().dim(),
        point: Arc::new(move |c| m1.exp(c)),
        coords: Arc::new(move |g| Ok(m2.log(g)?.vector)),
    }
}

pub fn cmd_rackcheck(path: &Path, opts: &RackcheckOptions) -> Result<Report, CliError> {
    let l = load(path)?;
    if !CONSTRUCTIONS.contains(&opts.construction.as_str()) {
        return Err(CliError::input(format!(
            "unknown construction {:?}; expected one of {}",
            opts.construction,
            CONSTRUCTIONS.join(", ")
        )));
    }
    l.input.require_algebra()?;
    if !(opts.step > 0.0 && opts.tol > 0.0 && opts.tangent_tol > 0.0 && opts.samples > 0) {
        return Err(CliError::input("step, tolerances and samples must be positive"));
    }
    let alg = l.input.algebra_f64().expect("algebra presence checked");
    let n = alg.dim();
    let mut r = Report::new("rackcheck", &l.file_name, l.digest.clone(), Some(opts.seed));
    r.param("scalars", l.input.scalars());
    r.param("construction", &opts.construction);
    r.param("samples", opts.samples);
    r.param("step", opts.step);
    r.param("tol", opts.tol);

    let built: Result<(RackStructure<f64>, Option<LeibnizAlgebra<f64>>), Error> = if l.input.product_override.is_some() {
        r.param("product_override", "additive");
        RackStructure::new(
            "additive",
            Carrier::euclidean(n),
            vec![0.0; n],
            Arc::new(|x: &[f64], y: &[f64]| Ok(x.iter().zip(y).map(|(a, b)| a + b).collect())),
        )
        .map(|rack| (rack.with_chart(Chart::linear(n)), None))
    } else {
        match opts.construction.as_str() {
            "trivial" => Ok((trivial_rack(n), Some(LeibnizAlgebra::abelian(n)))),
            "kinyon" => Ok((kinyon_rack(&alg), Some(alg.clone()))),
            "gauged" => {
                let base = kinyon_rack(&alg);
                let f = Arc::new(|x: &[f64]| Ok(x.iter().map(|v| 2.0 * v).collect()));
                gauge(&base, f, 32, opts.tol).map(|rack| (rack, Some(scaled(&alg, 2.0))))
            }
            "conjugation" => {
                let model = select_model(&l.input, opts.model.as_deref(), &alg)?;
                r.param("model", model.name());
                conjugation_rack(model.clone() as Arc<dyn Group<f64>>)
                    .map(|rack| (rack.with_chart(model_chart(model.clone())), Some(model.lie_algebra().clone())))
            }
            _ => {
                let aug = match augmentation_of(&l.input)? {
                    Some(a) => a,
                    None => {
                        r.checks(Some("leibniz"), &leibniz_report(&l.input));
                        return Ok(r);
                    }
                };
                let model = select_model(&l.input, opts.model.as_deref(), aug.g())?;
                r.param("model", model.name());
                let expected = aug.derived_algebra();
                if opts.construction == "augmented" {
                    linear_augmented(&aug, model, opts.tol).map(|rack| (rack, Some(expected)))
                } else {
                    let cfg = IntegrationConfig {
                        fd_step: opts.step,
                        samples: opts.samples,
                        seed: opts.seed,
                        tol: opts.tol,
                        tangent_tol: opts.tangent_tol,
                        ..Default::default()
                    };
                    build_pullback_rack(&aug, model, &cfg).map(|d| (d.rack().clone(), Some(expected)))
                }
            }
        }
    };
    let (rack, expected) = match built {
        Ok(b) => b,
        Err(e) if is_input_error(&e) => return Err(e.into()),
        Err(e) => {
            r.failure("construction", e.to_string());
            return Ok(r);
        }
    };
    r.data("rack", rack.name());
    match check_rack_axioms(&rack, opts.samples, opts.seed, opts.tol) {
        Ok(rep) => r.checks(Some("axioms"), &rep),
        Err(e) => r.failure("axioms", e.to_string()),
    }
    match tangent_leibniz(&rack, opts.step, opts.step) {
        Ok(t) => {
            let mut data = json!({
                "recovered": render_float_table(&t.table, 1e-6),
                "error_estimate": number(t.max_error()),
            });
            if let Some(exp) = &expected {
                let rel = relative_table_error(&t.table, exp);
                let mut c = Check::new("tangent_bracket");
                c.record_sample(vec![], rel, opts.tangent_tol);
                r.check(&c);
                data["relative_error"] = number(rel);
                data["expected"] = render_float_table(exp, 0.0);
            }
            r.data("tangent", data);
        }
        Err(e) => {
            if expected.is_some() {
                r.failure("tangent_bracket", e.to_string());
            } else {
                r.data("tangent", json!({ "error": e.to_string() }));
            }
        }
    }
    Ok(r)
}
