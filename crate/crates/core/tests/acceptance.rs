//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

use std::time::Instant;

use blochop::essnorm::{
    a_quantity, dilation_upper_bound, essnorm_hinf, essnorm_qk_to_bloch, EssnormOptions, LimsupOptions, SourceSpace,
    Verdict,
};
use blochop::funcalg::{contour_derivative, AnalyticFunction, MobiusPowerSum, MobiusPowerTerm, Polynomial};
use blochop::norms::{
    bloch_alpha_equiv_norm, bloch_mu_norm, hinf_norm, qk_inner_integral, qk_norm, DiskGrid, QkOptions, QkQuadrature,
};
use blochop::operators::{apply, derivative_decomposed, e_coefficients, OperatorKind, OperatorSpec, SymbolConfig};
use blochop::testfn::{default_certificate_sweep, sample_suite};
use blochop::weights::{Kernel, SpaceParams, Weight};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 0x5eed_2026;

fn poly(cs: &[f64]) -> AnalyticFunction<f64> {
    Polynomial::from_real(cs).into()
}

fn qk_params() -> SpaceParams<f64> {
    SpaceParams::new(2.0, 0.0, Kernel::power(0.5).unwrap()).unwrap()
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("error: {e:?}")
}

fn random_complex(rng: &mut ChaCha8Rng, scale: f64) -> C {
    C::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> AnalyticFunction<f64> {
    let d = rng.gen_range(0..=max_degree);
    Polynomial::new((0..=d).map(|_| random_complex(rng, 1.0)).collect()).into()
}

/// Polynomial with `sum |c_k| = l1`, so `sup |phi| <= l1`.
fn random_phi(rng: &mut ChaCha8Rng, l1: f64, real_nonneg: bool) -> AnalyticFunction<f64> {
    let d = rng.gen_range(1..=3);
    let mut cs: Vec<C> = (0..=d)
        .map(|_| {
            if real_nonneg {
                C::new(rng.gen_range(0.0..1.0), 0.0)
            } else {
                random_complex(rng, 1.0)
            }
        })
        .collect();
    cs[1] += C::new(0.2, 0.0);
    let s: f64 = cs.iter().map(|c| c.norm()).sum();
    for c in &mut cs {
        *c *= l1 / s;
    }
    Polynomial::new(cs).into()
}

fn random_mobius(rng: &mut ChaCha8Rng) -> AnalyticFunction<f64> {
    let k = rng.gen_range(1..=3);
    let terms = (0..k)
        .map(|_| {
            let a = C::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..std::f64::consts::TAU));
            MobiusPowerTerm::new(random_complex(rng, 1.0), a, rng.gen_range(0.5..4.0)).unwrap()
        })
        .collect();
    AnalyticFunction::Mobius(MobiusPowerSum::new(terms))
}

fn random_kind(rng: &mut ChaCha8Rng) -> OperatorKind {
    if rng.gen_bool(0.5) {
        OperatorKind::Tn {
            n: rng.gen_range(0..=2),
        }
    } else {
        let n = rng.gen_range(1..=3);
        OperatorKind::Tmn {
            m: rng.gen_range(0..n),
            n,
        }
    }
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let cases = default_certificate_sweep().map_err(err)?;
    let secs = t.elapsed().as_secs_f64();
    let failed = cases.iter().filter(|c| !c.pass()).count();
    let worst_v = cases
        .iter()
        .flat_map(|c| c.vanishing.residuals.iter().map(|r| r.relative))
        .fold(0.0, f64::max);
    let worst_c = cases.iter().map(|c| c.closed_form.relative).fold(0.0, f64::max);
    ensure(
        failed == 0 && cases.len() == 324 && worst_v <= 1e-9 && worst_c <= 1e-9 && secs <= 10.0,
        format!(
            "{} cases, {failed} failed, worst vanishing {worst_v:.2e}, worst closed form {worst_c:.2e}, {secs:.2}s",
            cases.len()
        ),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let grid = DiskGrid::with_depth(8);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let kind = random_kind(&mut rng);
        let s = SymbolConfig::new(
            random_poly(&mut rng, 3),
            random_poly(&mut rng, 3),
            random_phi(&mut rng, 0.9, false),
            kind,
            &grid,
        )
        .map_err(err)?;
        let spec = OperatorSpec::new(s);
        let f = random_mobius(&mut rng);
        let z = C::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..std::f64::consts::TAU));
        let tf = apply(&spec, &f);
        let fd = contour_derivative(|w| tf.eval(w), 1, z, 0.05, 32).map_err(err)?;
        let d = derivative_decomposed(&spec, &f, z).map_err(err)?;
        // relative to the magnitude of the individual terms, so cancellation in the sum is not penalized
        let w = spec.symbols.phi.eval(z).map_err(err)?;
        let e = e_coefficients(&spec, z).map_err(err)?;
        let mut scale = 0.0;
        for (&k, c) in &e.terms {
            scale += c.norm() * f.eval_derivative(k, w).map_err(err)?.norm();
        }
        worst = worst.max((d - fd).norm() / scale.max(f64::MIN_POSITIVE));
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(
        worst <= 1e-6 && secs <= 10.0,
        format!("100 configs, worst relative {worst:.2e}, {secs:.2}s"),
    )
}

fn criterion_3() -> Outcome {
    let grid = DiskGrid::default();
    let o = EssnormOptions::default();
    let half = poly(&[0.0, 0.5]);
    let s = SymbolConfig::new(
        poly(&[1.0, 2.0]),
        poly(&[0.0, 0.0, 1.0]),
        half.clone(),
        OperatorKind::Tn { n: 1 },
        &grid,
    )
    .map_err(err)?;
    let qk = essnorm_qk_to_bloch(
        &OperatorSpec::new(s),
        &qk_params(),
        &Weight::alpha(2.0).unwrap(),
        &grid,
        &o,
    )
    .map_err(err)?;
    let s = SymbolConfig::new(
        poly(&[0.5, -1.0]),
        poly(&[2.0, 0.0, 0.0, 1.0]),
        half,
        OperatorKind::Tmn { m: 0, n: 2 },
        &grid,
    )
    .map_err(err)?;
    let hi = essnorm_hinf(&OperatorSpec::new(s), &Weight::alpha(3.0).unwrap(), &grid, &o).map_err(err)?;
    let ok = [&qk, &hi]
        .iter()
        .all(|r| r.verdict == Verdict::Compact && r.terms.values().all(|e| e.value == 0.0 && e.empty_boundary_flag));
    ensure(
        ok,
        format!(
            "Q_K verdict {:?}, H^inf verdict {:?}, all A-quantities zero with empty boundary",
            qk.verdict, hi.verdict
        ),
    )
}

fn criterion_4() -> Outcome {
    let grid = DiskGrid::default();
    let o = LimsupOptions { levels: 12 };
    let one = poly(&[1.0]);
    let id = poly(&[0.0, 1.0]);
    let mut notes = Vec::new();
    let mut ok = true;
    for g in [0.5, 1.0, 2.0, 3.0] {
        let at = a_quantity(&one, &id, g, &Weight::alpha(g).unwrap(), &grid, &o).map_err(err)?;
        let above = a_quantity(&one, &id, g, &Weight::alpha(g + 0.5).unwrap(), &grid, &o).map_err(err)?;
        ok &= (0.95..=1.05).contains(&at.value) && above.value <= 1e-2;
        let mut note = format!("gamma {g}: {:.4} / {:.1e}", at.value, above.value);
        if g > 0.5 {
            let below = a_quantity(&one, &id, g, &Weight::alpha(g - 0.5).unwrap(), &grid, &o).map_err(err)?;
            let peak = below.levels.iter().cloned().fold(0.0, f64::max);
            ok &= below.divergence_flag && peak > 1e3;
            note += &format!(" / {peak:.1e} diverging={}", below.divergence_flag);
        }
        notes.push(note);
    }
    ensure(ok, notes.join("; "))
}

fn criterion_5() -> Outcome {
    let grid = DiskGrid::default();
    let o = EssnormOptions::default();
    let params = qk_params();
    let gamma = params.gamma();
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 0..=2 {
        let s = SymbolConfig::new(
            poly(&[0.0]),
            poly(&[1.0]),
            poly(&[0.0, 1.0]),
            OperatorKind::Tn { n },
            &grid,
        )
        .map_err(err)?;
        let w = Weight::alpha(gamma + n as f64 + 1.0).unwrap();
        let r = essnorm_qk_to_bloch(&OperatorSpec::new(s), &params, &w, &grid, &o).map_err(err)?;
        ok &= (r.upper_max - 1.0).abs() <= 0.05 && r.verdict == Verdict::NonCompact;
        notes.push(format!("T^{n}: upper_max {:.4} {:?}", r.upper_max, r.verdict));
    }
    for (m, n) in [(0, 2), (1, 2), (0, 3)] {
        let s = SymbolConfig::new(
            poly(&[0.0]),
            poly(&[1.0]),
            poly(&[0.0, 1.0]),
            OperatorKind::Tmn { m, n },
            &grid,
        )
        .map_err(err)?;
        let w = Weight::alpha(n as f64 + 1.0).unwrap();
        let r = essnorm_hinf(&OperatorSpec::new(s), &w, &grid, &o).map_err(err)?;
        let e = r.terms[&(n + 1)].value;
        ok &= (e - 1.0).abs() <= 0.05;
        notes.push(format!("T^({m},{n}): E_{} term {e:.4}", n + 1));
    }
    ensure(ok, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let params = qk_params();
    let grid = DiskGrid::default();
    let w = Weight::alpha(params.gamma()).unwrap();
    let mut worst = (0.0, 0);
    for (i, f) in sample_suite::<f64>().iter().enumerate() {
        let b = bloch_mu_norm(f, &w, &grid).map_err(err)?.value;
        let q = qk_norm(f, &params, &QkOptions::default()).map_err(err)?.value;
        if b / q > worst.0 {
            worst = (b / q, i);
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(
        worst.0 <= 1.05 && secs <= 60.0,
        format!(
            "worst Bloch/Q_K ratio {:.4} (suite member {}), {secs:.1}s",
            worst.0, worst.1
        ),
    )
}

fn criterion_7() -> Outcome {
    let grid = DiskGrid::default();
    let suite = sample_suite::<f64>();
    let zero = C::new(0.0, 0.0);
    let mut band: f64 = 1.0;
    for alpha in [0.5, 1.0, 2.0] {
        let w = Weight::alpha(alpha).unwrap();
        for f in &suite {
            let plain = bloch_mu_norm(f, &w, &grid).map_err(err)?.value;
            let f0 = f.eval(zero).map_err(err)?.norm();
            for n in [1, 2] {
                let equiv = f0 + bloch_alpha_equiv_norm(f, alpha, n, &grid).map_err(err)?.value;
                band = band.max(plain / equiv).max(equiv / plain);
            }
        }
    }
    ensure(
        band <= 10.0,
        format!("C = {band:.3} over 12 functions x 3 alphas x 2 orders"),
    )
}

fn criterion_8() -> Outcome {
    let params = SpaceParams::new(2.0, 0.0, Kernel::power(1.0).unwrap()).unwrap();
    let v = qk_inner_integral(&poly(&[0.0, 1.0]), &params, C::new(0.0, 0.0), &QkQuadrature::accurate())
        .map_err(err)?
        .value;
    ensure((v - 0.5).abs() <= 1e-3, format!("I(0) = {v:.8}"))
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let grid = DiskGrid::default();
    let o = EssnormOptions::default();
    let params = qk_params();
    let three = C::new(3.0, 0.0);
    let mut sandwich_bad = Vec::new();
    let mut worst_scale: f64 = 0.0;
    for i in 0..50 {
        let touching = i % 2 == 1;
        let phi = random_phi(&mut rng, if touching { 1.0 } else { 0.8 }, touching);
        let (psi1, psi2) = (random_poly(&mut rng, 3), random_poly(&mut rng, 3));
        let (a, b) = if i % 4 < 2 {
            let n = rng.gen_range(0..=2);
            let s = SymbolConfig::new(psi1, psi2, phi, OperatorKind::Tn { n }, &grid).map_err(err)?;
            let w = Weight::alpha(params.gamma() + n as f64 + 1.0).unwrap();
            let a = essnorm_qk_to_bloch(&OperatorSpec::new(s.clone()), &params, &w, &grid, &o).map_err(err)?;
            let b = essnorm_qk_to_bloch(&OperatorSpec::new(s.scaled(three)), &params, &w, &grid, &o).map_err(err)?;
            (a, b)
        } else {
            let n = rng.gen_range(1..=3);
            let kind = OperatorKind::Tmn {
                m: rng.gen_range(0..n),
                n,
            };
            let s = SymbolConfig::new(psi1, psi2, phi, kind, &grid).map_err(err)?;
            let w = Weight::alpha(n as f64 + 1.0).unwrap();
            let a = essnorm_hinf(&OperatorSpec::new(s.clone()), &w, &grid, &o).map_err(err)?;
            let b = essnorm_hinf(&OperatorSpec::new(s.scaled(three)), &w, &grid, &o).map_err(err)?;
            (a, b)
        };
        if a.lower > a.upper_sum * 1.05 {
            sandwich_bad.push(format!("#{i} {:.3}/{:.3}", a.lower, a.upper_sum));
        }
        for (x, y) in [
            (a.lower, b.lower),
            (a.upper_max, b.upper_max),
            (a.upper_sum, b.upper_sum),
        ] {
            if y != 0.0 || x != 0.0 {
                worst_scale = worst_scale.max((3.0 * x - y).abs() / y.abs());
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(
        sandwich_bad.is_empty() && worst_scale <= 1e-12,
        format!(
            "sandwich violations {} of 50 [{}], worst homogeneity error {worst_scale:.1e}, {secs:.1}s",
            sandwich_bad.len(),
            sandwich_bad.join(", ")
        ),
    )
}

fn criterion_10() -> Outcome {
    let grid = DiskGrid::default();
    // T^0 with psi1 = 1, psi2 = z/4, phi = z/2
    let s = SymbolConfig::new(
        poly(&[1.0]),
        poly(&[0.0, 0.25]),
        poly(&[0.0, 0.5]),
        OperatorKind::Tn { n: 0 },
        &grid,
    )
    .map_err(err)?;
    let base = OperatorSpec::new(s.clone());
    let dil = OperatorSpec::dilated(s, 0.999).map_err(err)?;
    let fs = [
        poly(&[0.0, 1.0]),
        poly(&[0.0, 0.0, 1.0]),
        poly(&[1.0, 2.0, -1.0 / 3.0]),
        poly(&[0.0, -0.5, 0.0, 1.0]),
    ];
    let mut gap: f64 = 0.0;
    for f in &fs {
        // unit sup norm, so the threshold does not depend on the size of f
        let f = f.scale(C::new(1.0 / hinf_norm(f, &grid).map_err(err)?.value, 0.0));
        let (a, b) = (apply(&base, &f), apply(&dil, &f));
        for i in 0..=90 {
            for j in 0..128 {
                let z = C::from_polar(0.01 * i as f64, std::f64::consts::TAU * j as f64 / 128.0);
                gap = gap.max((a.eval(z).map_err(err)? - b.eval(z).map_err(err)?).norm());
            }
        }
    }
    // compact T^(0,2): psi1 = 1 + 2z, psi2 = z^2, phi = z/2, from H^inf
    let s = SymbolConfig::new(
        poly(&[1.0, 2.0]),
        poly(&[0.0, 0.0, 1.0]),
        poly(&[0.0, 0.5]),
        OperatorKind::Tmn { m: 0, n: 2 },
        &grid,
    )
    .map_err(err)?;
    let schedule = [0.5, 0.9, 0.99, 0.999, 1.0];
    let seq = dilation_upper_bound(
        &OperatorSpec::new(s),
        &SourceSpace::Hinf,
        &Weight::alpha(3.0).unwrap(),
        &grid,
        &schedule,
        &sample_suite::<f64>(),
    )
    .map_err(err)?;
    let v: Vec<f64> = seq.iter().map(|p| p.value).collect();
    let decreasing = v.windows(2).all(|p| p[1] < p[0]);
    ensure(
        gap <= 1e-3 && decreasing && v[4] == 0.0 && v[3] <= 1e-2 * v[0],
        format!(
            "sup gap at r = 0.999 for unit-sup polynomials is {gap:.2e}; sequence {}",
            v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("test-function certificate sweep", criterion_1),
        ("E-decomposition oracle", criterion_2),
        ("interior-map compactness", criterion_3),
        ("A-quantity calibration", criterion_4),
        ("surviving-term essential norm", criterion_5),
        ("Q_K into gamma-Bloch embedding", criterion_6),
        ("equivalent-norm band", criterion_7),
        ("quadrature oracle", criterion_8),
        ("sandwich and homogeneity", criterion_9),
        ("dilation monitoring", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{secs:.2}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
