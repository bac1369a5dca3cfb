//! Acceptance gate. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use rackforge::algebra::{adjoint_map, left_center, quotient_by_ideal, squares_ideal, verify_leibniz, verify_lie, LeibnizAlgebra};
use rackforge::analysis::*;
use rackforge::catalog;
use rackforge::integration::*;
use rackforge::linalg::Matrix;
use rackforge::rack::{check_rack_axioms, kinyon_rack, relative_table_error, rng_from_seed, sample_scalar, tangent_leibniz};
use rackforge::scalar::Rational;
use rackforge::Scalar;
use rackforge_cli::input::{parse_input, Content, Input};
use rackforge_cli::report::digest;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn fixture(name: &str) -> Input {
    let text = std::fs::read_to_string(fixture_dir().join(format!("{name}.json"))).unwrap();
    parse_input(&text, name).unwrap()
}

/// Fixtures that carry a valid Leibniz bracket, in rational form.
fn valid_fixtures() -> Vec<(String, LeibnizAlgebra<Rational>)> {
    let mut out = Vec::new();
    let mut names: Vec<_> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    names.sort();
    for path in names {
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        let Ok(input) = parse_input(&std::fs::read_to_string(&path).unwrap(), &stem) else {
            continue;
        };
        let alg = match &input.content {
            Content::Rational(p) => p.algebra.clone(),
            Content::Float(p) => p.algebra.as_ref().map(|a| a.to_rational()),
        };
        if let Some(alg) = alg {
            if stem != "not_leibniz" {
                out.push((stem, alg));
            }
        }
    }
    out
}

fn q(n: i64, d: i64) -> Rational {
    <Rational as Scalar>::from_ratio(n, d)
}

fn rand_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    let x: f64 = sample_scalar(rng, 1.0);
    lo + (((x + 1.0) / 2.0) * (hi - lo + 1) as f64).floor().min((hi - lo) as f64) as i64
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_leibniz_suite() -> Outcome {
    let valid = valid_fixtures();
    for (name, alg) in &valid {
        let r = verify_leibniz(alg);
        ensure(r.passed() && r.max_defect() == 0.0, format!("{name} fails the Leibniz identity"))?;
    }
    let broken = fixture("not_leibniz");
    let Content::Rational(p) = &broken.content else {
        return Err("broken fixture is not rational".into());
    };
    let r = verify_leibniz(p.algebra.as_ref().unwrap());
    let v = r
        .failures()
        .next()
        .and_then(|c| c.first_violation())
        .ok_or("broken fixture passes")?;
    let one_based: Vec<usize> = v.location.iter().map(|i| i + 1).collect();
    ensure(one_based == [2, 1, 1], format!("counterexample at {one_based:?}"))?;
    ensure(v.defect == ["0", "2"], format!("defect {:?}", v.defect))?;
    Ok(format!("{} valid fixtures exact; broken at (2,1,1) with defect 2e2", valid.len()))
}

fn c2_ideal_chain() -> Outcome {
    let valid = valid_fixtures();
    for (name, alg) in &valid {
        let sq = squares_ideal(alg).map_err(|e| format!("{name}: {e}"))?;
        ensure(sq.is_subspace_of(&left_center(alg)), format!("{name}: Q not in z"))?;
        let (quo, _) = quotient_by_ideal(alg, &sq).map_err(|e| format!("{name}: {e}"))?;
        ensure(verify_lie(&quo).passed(), format!("{name}: quotient not Lie"))?;
    }
    Ok(format!("{} fixtures", valid.len()))
}

fn c3_kinyon_round_trip() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (name, alg) in valid_fixtures() {
        if alg.dim() > 4 {
            continue;
        }
        let alg = alg.to_f64();
        let t = tangent_leibniz(&kinyon_rack(&alg), 1e-3, 1e-3).map_err(|e| format!("{name}: {e}"))?;
        let rel = relative_table_error(&t.table, &alg);
        ensure(rel < 1e-4, format!("{name}: relative error {rel}"))?;
        worst = worst.max(rel);
        count += 1;
    }
    ensure(count > 0, "no fixtures of dimension at most 4")?;
    Ok(format!("{count} fixtures, worst relative error {worst:.2e}"))
}

fn unit_upper(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rational> {
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = q(rand_int(rng, -2, 2), 1);
        }
    }
    m
}

fn c4_matrix_suite() -> Outcome {
    let mut rng = rng_from_seed(4);
    // (a), (b)
    for k in 0..200 {
        let deg = 1 + (k % 6);
        let a: Vec<Complex64> = (0..deg).map(|_| Complex64::new(sample_scalar(&mut rng, 5.0), 0.0)).collect();
        let f = MonicPolynomial::from_coefficients(a);
        let z = roots(&f, SPECTRUM_TOL).map_err(|e| e.to_string())?;
        let res = from_roots(&z).max_coefficient_diff(&f);
        ensure(res < 1e-7, format!("(a) residual {res} on sample {k}"))?;
        let bound = root_bound(&f);
        ensure(z.values().iter().all(|w| w.norm() <= bound * (1.0 + 1e-12)), format!("(b) sample {k}"))?;
    }
    // (c)
    for k in 0..100 {
        let m = if k % 2 == 0 {
            Matrix::from_vec(4, 4, (0..16).map(|_| q(rand_int(&mut rng, -3, 3), 1)).collect()).unwrap()
        } else {
            let mut eigs: Vec<i64> = (0..4).map(|_| rand_int(&mut rng, -2, 2)).collect();
            eigs.sort();
            let mut j = Matrix::diagonal(&eigs.iter().map(|&e| q(e, 1)).collect::<Vec<_>>());
            for i in 0..3 {
                if eigs[i] == eigs[i + 1] && rand_int(&mut rng, 0, 1) == 1 {
                    j[(i, i + 1)] = q(1, 1);
                }
            }
            let p = unit_upper(&mut rng, 4).transpose().mul(&unit_upper(&mut rng, 4)).unwrap();
            p.mul(&j).unwrap().mul(&p.inverse().unwrap()).unwrap()
        };
        let pair = jordan_chevalley(&m).map_err(|e| e.to_string())?;
        ensure(pair.exact && verify_jordan_pair(&m, &pair).passed(), format!("(c) sample {k}"))?;
    }
    // (d)
    let wide = 0.95 * 2.0 * PI;
    let mut dets = 0;
    while dets < 100 {
        let theta: f64 = (sample_scalar::<f64>(&mut rng, 1.0) + 1.0) / 2.0 * wide;
        let d: f64 = sample_scalar(&mut rng, 3.0);
        let mut x = Matrix::from_rows(vec![vec![0.0, -theta, 0.0], vec![theta, 0.0, 0.0], vec![0.0, 0.0, d]]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                x[(i, j)] += sample_scalar::<f64>(&mut rng, 0.3);
            }
        }
        if !strip_membership(&x, wide).map_err(|e| e.to_string())?.member {
            continue;
        }
        let det = h_series(&x, 1e-16).map_err(|e| e.to_string())?.determinant().map_err(|e| e.to_string())?;
        ensure(det.is_finite() && det.abs() > 1e-12, format!("(d) det {det} at sample {dets}"))?;
        dets += 1;
    }
    // (e)
    for k in 0..100 {
        let p = unit_upper(&mut rng, 4).transpose().mul(&unit_upper(&mut rng, 4)).unwrap();
        let u = p.mul(&unit_upper(&mut rng, 4)).unwrap().mul(&p.inverse().unwrap()).unwrap();
        let l = unipotent_log(&u).map_err(|e| e.to_string())?;
        ensure(exp_nilpotent(&l).map_err(|e| e.to_string())? == u, format!("(e) sample {k}"))?;
    }
    Ok("(a) 200 (b) 200 (c) 100 (d) 100 (e) 100 samples".into())
}

fn heisenberg_model() -> Arc<dyn GroupModel> {
    Arc::new(NilpotentBch::new(catalog::heisenberg().to_f64()).unwrap())
}

fn c5_section() -> Outcome {
    let cfg = IntegrationConfig::default();
    let mut worst: f64 = 0.0;
    for model in [heisenberg_model(), Arc::new(E2Cover::new()) as Arc<dyn GroupModel>] {
        let name = model.name().to_string();
        let r = section_equivariance_check(model.as_ref(), &cfg, 256, 5).map_err(|e| e.to_string())?;
        let get = |c: &str| r.check(c).map(|c| c.max_defect).ok_or(format!("{name}: missing {c}"));
        ensure(get("section_unit")? == 0.0, format!("{name}: s(e) != 0"))?;
        ensure(get("section_tangent")? <= 1e-6, format!("{name}: tangent of s"))?;
        let eq = get("section_equivariance")?;
        ensure(eq < 1e-9 && r.check("section_equivariance").unwrap().evaluated >= 256, format!("{name}: equivariance {eq}"))?;
        worst = worst.max(eq);
    }
    Ok(format!("Heisenberg and E2 cover, equivariance defect {worst:.2e}"))
}

fn hemisemidirect_cases() -> Vec<(&'static str, rackforge::algebra::AugmentedLeibnizAlgebra<f64>, Arc<dyn GroupModel>)> {
    vec![
        ("heisenberg", catalog::hemisemidirect_heisenberg().to_f64(), heisenberg_model()),
        ("euclidean", catalog::hemisemidirect_euclidean().to_f64(), Arc::new(E2Cover::new())),
        ("affine", catalog::hemisemidirect_affine().to_f64(), Arc::new(MatrixLocal::affine_line())),
        (
            "line",
            catalog::hemisemidirect_line().to_f64(),
            Arc::new(NilpotentBch::new(LeibnizAlgebra::abelian(1)).unwrap()),
        ),
    ]
}

fn c6_dirty_rack() -> Outcome {
    let cfg = IntegrationConfig::default();
    let mut worst: f64 = 0.0;
    for (name, aug, model) in hemisemidirect_cases() {
        let dirty = build_pullback_rack(&aug, model, &cfg).map_err(|e| format!("{name}: {e}"))?;
        let axioms = check_rack_axioms(dirty.rack(), 256, 6, 1e-9).map_err(|e| e.to_string())?;
        ensure(axioms.passed() && axioms.max_defect() < 1e-9, format!("{name}: axioms {}", axioms.max_defect()))?;
        let m = dirty.membership_check(256, 6);
        ensure(m.passed && m.evaluated >= 256, format!("{name}: membership"))?;
        let f = dirty.fiber_dimension_check(6).map_err(|e| e.to_string())?;
        ensure(f.passed && f.evaluated == 32, format!("{name}: fiber dimension"))?;
        ensure(dirty.fiber_dim() == aug.kernel_of_p().dim(), format!("{name}: fiber dim"))?;
        worst = worst.max(axioms.max_defect());
    }
    Ok(format!("4 hemisemidirect racks, worst axiom defect {worst:.2e}"))
}

fn c7_tangent() -> Outcome {
    let cfg = IntegrationConfig::default();
    let mut parts = Vec::new();
    for (name, aug, model) in hemisemidirect_cases() {
        let dirty = build_pullback_rack(&aug, model, &cfg).map_err(|e| format!("{name}: {e}"))?;
        let t = tangent_check(&dirty).map_err(|e| format!("{name}: {e}"))?;
        ensure(t.relative_error < 1e-4, format!("{name}: relative error {}", t.relative_error))?;
        parts.push(format!("{name} {:.1e}", t.relative_error));
    }
    Ok(parts.join(", "))
}

fn c8_lie_case() -> Outcome {
    let cfg = IntegrationConfig::default();
    let cases: [(&str, LeibnizAlgebra<f64>, Arc<dyn GroupModel>); 2] = [
        ("heisenberg", catalog::heisenberg().to_f64(), heisenberg_model()),
        ("affine", catalog::affine_line().to_f64(), Arc::new(MatrixLocal::affine_line())),
    ];
    let mut worst: f64 = 0.0;
    for (name, alg, model) in cases {
        let r = lie_case_reduction(&alg, model, &cfg).map_err(|e| format!("{name}: {e}"))?;
        let c = r.check("conjugation_transport").ok_or("missing conjugation_transport")?;
        ensure(r.passed() && c.max_defect < 1e-9 && c.evaluated >= 256, format!("{name}: {}", c.max_defect))?;
        worst = worst.max(c.max_defect);
    }
    Ok(format!("Heisenberg and affine line, worst defect {worst:.2e}"))
}

fn c9_nilradical() -> Outcome {
    for name in ["affine_line", "euclidean_plane"] {
        let input = fixture(name);
        let Content::Rational(p) = &input.content else {
            return Err(format!("{name} is not rational"));
        };
        let nil = p.nilradical.as_ref().ok_or(format!("{name} has no nilradical"))?;
        let r = verify_nilradical_translation(p.algebra.as_ref().unwrap(), nil, 100, 9).map_err(|e| e.to_string())?;
        let c = r.check("char_poly_translation").ok_or("missing check")?;
        ensure(r.passed() && r.max_defect() == 0.0 && c.evaluated == 100, format!("{name}: {r:?}"))?;
    }
    Ok("affine line and E2, 100 samples each, exact".into())
}

/// `Ad` of a group element as an exact rational matrix.
fn exact_adjoint(rng: &mut ChaCha8Rng, which: usize) -> (LeibnizAlgebra<Rational>, Matrix<Rational>) {
    let nil_exp = |alg: &LeibnizAlgebra<Rational>, nil: &[Vec<Rational>], rng: &mut ChaCha8Rng| {
        let mut eta = vec![q(0, 1); alg.dim()];
        for b in nil {
            let c = q(rand_int(rng, -8, 8), 4);
            for (e, bi) in eta.iter_mut().zip(b) {
                *e = e.clone() + c.clone() * bi.clone();
            }
        }
        exp_nilpotent(&adjoint_map(alg, &eta).unwrap()).unwrap()
    };
    match which {
        0 => {
            let h = catalog::heisenberg();
            let full: Vec<Vec<Rational>> = (0..3).map(|i| rackforge::linalg::unit_vector(3, i)).collect();
            let ad = nil_exp(&h, &full, rng);
            (h, ad)
        }
        1 => {
            let e = catalog::euclidean_plane();
            let a = nil_exp(&e, &catalog::euclidean_nilradical(), rng);
            // rotation with cos = 3/5, sin = 4/5 composed with a translation
            let (vx, vy) = (q(rand_int(rng, -6, 6), 3), q(rand_int(rng, -6, 6), 7));
            let r = Matrix::from_rows(vec![
                vec![q(1, 1), q(0, 1), q(0, 1)],
                vec![vy, q(3, 5), q(-4, 5)],
                vec![-vx, q(4, 5), q(3, 5)],
            ])
            .unwrap();
            (e, r.mul(&a).unwrap())
        }
        _ => {
            let a = catalog::affine_line();
            let n = nil_exp(&a, &catalog::affine_nilradical(), rng);
            let s = Matrix::diagonal(&[q(1, 1), q(rand_int(rng, 1, 9), 3)]);
            (a, s.mul(&n).unwrap())
        }
    }
}

fn c10_cutoff() -> Outcome {
    let cfg = IntegrationConfig::default();
    let mut rng = rng_from_seed(10);
    for k in 0..100 {
        let (alg, ad) = exact_adjoint(&mut rng, k % 3);
        let x: Vec<Rational> = (0..alg.dim()).map(|_| q(rand_int(&mut rng, -24, 24), 8)).collect();
        let y = ad.apply(&x).unwrap();
        let fx = char_poly(&adjoint_map(&alg, &x).unwrap()).unwrap();
        let fy = char_poly(&adjoint_map(&alg, &y).unwrap()).unwrap();
        ensure(fx == fy, format!("char poly differs at sample {k}"))?;
        let (gx, gy) = (invariant_cutoff(&alg, &x, &cfg).unwrap(), invariant_cutoff(&alg, &y, &cfg).unwrap());
        ensure(gx.to_bits() == gy.to_bits(), format!("cutoff differs at sample {k}"))?;
    }
    let e2 = catalog::euclidean_plane().to_f64();
    let gamma = |t: f64| invariant_cutoff(&e2, &[t, 0.7, -1.3], &cfg).unwrap();
    for t in [0.0, 0.3, 1.0, PI / 2.0, -PI / 2.0] {
        ensure(gamma(t) == 1.0, format!("gamma({t}) = {}", gamma(t)))?;
    }
    for t in [PI, -PI, 3.5, 5.0, -7.0] {
        ensure(gamma(t) == 0.0, format!("gamma({t}) = {}", gamma(t)))?;
    }
    for t in [1.8, 2.4, 3.0] {
        let g = gamma(t);
        ensure(g > 0.0 && g < 1.0 && (g - plateau(t, cfg.tau_prime, cfg.tau)).abs() < 1e-15, format!("gamma({t}) = {g}"))?;
    }
    Ok("100 exact samples; E2 plateau and support table".into())
}

fn run_cli(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_rackforge"))
        .args(args)
        .env_remove("RACKFORGE_SEED")
        .output()
        .unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap_or(-1))
}

/// The raw body bytes and the declared body digest of a rendered report.
fn split_report(text: &str) -> Result<(String, String), String> {
    let text = text.trim_end();
    let start = text.find("\"body\":").ok_or("no body")? + "\"body\":".len();
    let body = text[start..text.len() - 1].to_string();
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let sha = v["header"]["body_sha256"].as_str().ok_or("no digest")?.to_string();
    Ok((body, sha))
}

fn c11_determinism() -> Outcome {
    let dir = fixture_dir();
    let f = |n: &str| dir.join(format!("{n}.json")).display().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec!["verify".into(), f("heisenberg")],
        vec!["verify".into(), f("not_leibniz")],
        vec!["analyze".into(), f("euclidean_plane"), "--seed".into(), "7".into()],
        vec!["integrate".into(), f("hemisemidirect_euclidean"), "--seed".into(), "7".into(), "--samples".into(), "64".into()],
        vec!["strip".into(), f("e2_strip"), "--seed".into(), "7".into()],
        vec!["rackcheck".into(), f("leibniz_dim2"), "--construction".into(), "kinyon".into(), "--seed".into(), "7".into()],
    ];
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (a, ca) = run_cli(&args);
        let (b, cb) = run_cli(&args);
        let (ba, sa) = split_report(&a).map_err(|e| format!("{}: {e}", args[0]))?;
        let (bb, sb) = split_report(&b).map_err(|e| format!("{}: {e}", args[0]))?;
        ensure(ca == cb && ba == bb && sa == sb, format!("{} differs between runs", args[0]))?;
        ensure(digest(ba.as_bytes()) == sa, format!("{}: body digest mismatch", args[0]))?;
    }
    Ok(format!("{} commands run twice, identical bodies", runs.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 leibniz suite", c1_leibniz_suite),
        ("2 ideal chain", c2_ideal_chain),
        ("3 kinyon round trip", c3_kinyon_round_trip),
        ("4 matrix suite", c4_matrix_suite),
        ("5 section", c5_section),
        ("6 dirty rack axioms", c6_dirty_rack),
        ("7 tangent bracket", c7_tangent),
        ("8 lie case", c8_lie_case),
        ("9 nilradical translation", c9_nilradical),
        ("10 cutoff invariance", c10_cutoff),
        ("11 determinism", c11_determinism),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let clock = std::time::Instant::now();
        let outcome = f();
        let secs = clock.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                println!("FAIL criterion {name}: {msg} ({secs:.1}s)");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
