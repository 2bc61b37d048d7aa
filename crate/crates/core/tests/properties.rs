use blochop::essnorm::{a_quantity, essnorm_hinf, essnorm_qk_to_bloch, EssnormOptions, LimsupOptions};
use blochop::funcalg::{
    finite_difference_derivative, linear_combine, AnalyticFunction, MobiusPowerSum, MobiusPowerTerm, Polynomial,
};
use blochop::norms::{bloch_mu_norm, hinf_norm, qk_inner_integral, DiskGrid, QkOptions, QkQuadrature};
use blochop::operators::{apply, derivative_decomposed, OperatorKind, OperatorSpec, SymbolConfig};
use blochop::scalar::rising_factorial;
use blochop::testfn::{build_hinf_test, build_qk_test, qk_family_norm, FamilyKind, DEFAULT_MODULI};
use blochop::weights::{check_normal, weight_at, Kernel, NormalityCondition, RadialResolution, SpaceParams, Weight};
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn disk_point(max: f64) -> impl Strategy<Value = C> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C::from_polar(r, t))
}

fn complex_coeff() -> impl Strategy<Value = C> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| C::new(a, b))
}

fn mobius_term() -> impl Strategy<Value = MobiusPowerTerm<f64>> {
    (complex_coeff(), disk_point(0.6), 0.5..4.0f64).prop_map(|(c, a, b)| MobiusPowerTerm::new(c, a, b).unwrap())
}

fn mobius_sum() -> impl Strategy<Value = AnalyticFunction<f64>> {
    prop::collection::vec(mobius_term(), 1..=3).prop_map(|t| AnalyticFunction::Mobius(MobiusPowerSum::new(t)))
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = AnalyticFunction<f64>> {
    prop::collection::vec(complex_coeff(), 1..=max_degree + 1).prop_map(|c| Polynomial::new(c).into())
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_linearity(f in mobius_sum(), g in mobius_sum(), a in complex_coeff(), b in complex_coeff(), k in 0usize..5, z in disk_point(0.9)) {
        let h = linear_combine(&[a, b], &[f.clone(), g.clone()]).unwrap();
        let lhs = h.eval_derivative(k, z).unwrap();
        let rhs = a * f.eval_derivative(k, z).unwrap() + b * g.eval_derivative(k, z).unwrap();
        let scale = (a * f.eval_derivative(k, z).unwrap()).norm().max((b * g.eval_derivative(k, z).unwrap()).norm()).max(1e-300);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
    }

    #[test]
    fn finite_difference_oracle(f in mobius_sum(), k in 1usize..=4, z in disk_point(0.9)) {
        let exact = f.eval_derivative(k, z).unwrap();
        let fd = finite_difference_derivative(&f, k, z, 0.05).unwrap();
        let scale = match &f { AnalyticFunction::Mobius(m) => m.term_scale(k, z).unwrap(), _ => unreachable!() };
        prop_assert!((exact - fd).norm() <= 1e-6 * scale.max(exact.norm()), "k={k} exact={exact} fd={fd}");
    }

    #[test]
    fn rising_factorial_recurrence(t in mobius_term(), k in 0usize..6, z in disk_point(0.9)) {
        let direct = t.eval_derivative(k + 1, z).unwrap();
        let via = t.differentiate().eval_derivative(k, z).unwrap();
        prop_assert!(rel(direct, via) <= 1e-14);
        // the differentiated term carries c * beta * conj(a)
        let d = t.differentiate();
        prop_assert_eq!(d.beta, t.beta + 1.0);
        prop_assert!(rel(d.c, t.c * t.a.conj() * rising_factorial(t.beta, 1)) <= 1e-15);
    }

    #[test]
    fn radial_symmetry(alpha in 0.1..4.0f64, z in disk_point(0.999)) {
        let w = Weight::alpha(alpha).unwrap();
        prop_assert_eq!(weight_at(&w, z), weight_at(&w, C::new(z.norm(), 0.0)));
    }

    #[test]
    fn power_kernel_nondecreasing(s in 0.0..3.0f64, a in 0.0..5.0f64, d in 0.0..5.0f64) {
        let k = Kernel::power(s).unwrap();
        prop_assert!(k.eval(a) <= k.eval(a + d));
    }

    #[test]
    fn decreasing_kernel_samples_rejected(ks in prop::collection::vec(0.0..2.0f64, 3..8), at in 0usize..6) {
        let mut ks = ks;
        ks.sort_by(f64::total_cmp);
        let i = at % (ks.len() - 1);
        ks[i + 1] = ks[i] - 0.1;
        let ts: Vec<f64> = (0..ks.len()).map(|j| j as f64).collect();
        prop_assert!(Kernel::sampled(ts, ks).is_err());
    }

    #[test]
    fn operator_linearity(p1 in polynomial(3), p2 in polynomial(3), f in mobius_sum(), g in mobius_sum(), a in complex_coeff(), b in complex_coeff(), z in disk_point(0.9)) {
        let grid = DiskGrid::with_depth(8);
        let phi: AnalyticFunction<f64> = Polynomial::new(vec![C::new(0.1, 0.0), C::new(0.5, 0.2)]).into();
        let s = SymbolConfig::new(p1, p2, phi, OperatorKind::Tn { n: 1 }, &grid).unwrap();
        let spec = OperatorSpec::new(s);
        let h = linear_combine(&[a, b], &[f.clone(), g.clone()]).unwrap();
        let lhs = apply(&spec, &h).eval(z).unwrap();
        let ta = a * apply(&spec, &f).eval(z).unwrap();
        let tb = b * apply(&spec, &g).eval(z).unwrap();
        prop_assert!((lhs - ta - tb).norm() <= 1e-12 * ta.norm().max(tb.norm()).max(1e-300));
    }

    #[test]
    fn decomposition_matches_finite_difference(p1 in polynomial(3), p2 in polynomial(3), f in mobius_sum(), n in 0usize..3, z in disk_point(0.8)) {
        let grid = DiskGrid::with_depth(8);
        let phi: AnalyticFunction<f64> = Polynomial::new(vec![C::new(0.1, -0.1), C::new(0.5, 0.1), C::new(0.2, 0.0)]).into();
        let spec = OperatorSpec::new(SymbolConfig::new(p1, p2, phi, OperatorKind::Tn { n }, &grid).unwrap());
        let tf = apply(&spec, &f);
        let h = 1e-4;
        let fd = (tf.eval(z + h).unwrap() - tf.eval(z - h).unwrap()) / (2.0 * h);
        let d = derivative_decomposed(&spec, &f, z).unwrap();
        prop_assert!((d - fd).norm() <= 1e-5 * d.norm().max(1.0), "{d} vs {fd}");
    }

    #[test]
    fn kind_reduction(p1 in polynomial(3), p2 in polynomial(3), f in mobius_sum(), n in 0usize..3, z in disk_point(0.9)) {
        let grid = DiskGrid::with_depth(8);
        let phi: AnalyticFunction<f64> = Polynomial::new(vec![C::new(0.0, 0.1), C::new(0.6, 0.0)]).into();
        let tn = OperatorSpec::new(SymbolConfig::new(p1.clone(), p2.clone(), phi.clone(), OperatorKind::Tn { n }, &grid).unwrap());
        let tmn = OperatorSpec::new(SymbolConfig::new(p1, p2, phi, OperatorKind::Tmn { m: n, n: n + 1 }, &grid).unwrap());
        prop_assert_eq!(apply(&tn, &f).eval(z).unwrap(), apply(&tmn, &f).eval(z).unwrap());
        prop_assert_eq!(derivative_decomposed(&tn, &f, z).unwrap(), derivative_decomposed(&tmn, &f, z).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn alpha_weight_normality(alpha in 0.3..3.0f64, fa in 0.05..0.95f64, fb in 1.05..3.0f64) {
        // mu / (1 - r)^a = (1 + r)^alpha (1 - r)^(alpha - a) increases on [0, r*)
        let (a, b) = (fa * alpha, fb * alpha);
        let w = Weight::alpha(alpha).unwrap();
        let r_star = a / (2.0 * alpha - a);
        let v = check_normal(&w, a, b, 0.0, RadialResolution::default()).unwrap();
        prop_assert!(!v.ok);
        let wit = v.witness.unwrap();
        prop_assert_eq!(wit.condition, NormalityCondition::DecreasingA);
        prop_assert!(wit.r1 < r_star);
        let delta = (r_star + 0.05 * (1.0 - r_star)).min(0.999);
        prop_assert!(check_normal(&w, a, b, delta, RadialResolution::default()).unwrap().ok);
    }

    #[test]
    fn qk_rotation_invariance(f in mobius_sum(), xi in disk_point(0.8), theta in 0.0..std::f64::consts::TAU) {
        let params = SpaceParams::new(2.0, 0.0, Kernel::power(0.5).unwrap()).unwrap();
        let rot = C::from_polar(1.0, theta);
        let g = match &f {
            AnalyticFunction::Mobius(m) => AnalyticFunction::Mobius(MobiusPowerSum::new(
                m.terms.iter().map(|t| MobiusPowerTerm::new(t.c, t.a * rot.conj(), t.beta).unwrap()).collect(),
            )),
            _ => unreachable!(),
        };
        // g(z) = f(e^{i theta} z); the inner integral of g at e^{-i theta} xi equals that of f at xi
        let q = QkQuadrature::accurate();
        let a = qk_inner_integral(&f, &params, xi, &q).unwrap().value;
        let b = qk_inner_integral(&g, &params, xi * rot.conj(), &q).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-5 * a.abs().max(1e-300), "{a} vs {b}");
    }

    #[test]
    fn monotone_refinement(f in polynomial(4), alpha in 0.5..2.0f64) {
        let w = Weight::alpha(alpha).unwrap();
        let mut last = 0.0;
        for depth in [4, 8, 12, 16] {
            let v = bloch_mu_norm(&f, &w, &DiskGrid { max_level: 0, ..DiskGrid::with_depth(depth) }).unwrap().value;
            prop_assert!(v >= last * (1.0 - 1e-12), "depth {depth}: {v} < {last}");
            last = v;
        }
    }

    #[test]
    fn hinf_test_norm_band(i in 1usize..=4, m in 0.9..0.999f64, t in 0.0..std::f64::consts::TAU) {
        let fam = build_hinf_test(i, C::from_polar(m, t)).unwrap();
        let v = hinf_norm(&fam.function, &DiskGrid::default()).unwrap().value;
        prop_assert!(v > 0.9 && v <= 1.0 + 1e-9, "{v}");
    }
}

/// Degree <= 3 symbols with `phi` either interior or touching the boundary at 1.
fn random_symbols(kind: OperatorKind, touching: bool) -> impl Strategy<Value = SymbolConfig<f64>> {
    let phi = prop::collection::vec(0.0..1.0f64, 4).prop_map(move |mut c| {
        let s: f64 = c.iter().sum::<f64>().max(1e-9);
        let target = if touching { 1.0 } else { 0.7 };
        for x in &mut c {
            *x *= target / s;
        }
        c
    });
    (polynomial(3), polynomial(3), phi).prop_map(move |(p1, p2, ph)| {
        SymbolConfig::new(p1, p2, Polynomial::from_real(&ph).into(), kind, &DiskGrid::default()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn interior_maps_are_null(s in random_symbols(OperatorKind::Tmn { m: 0, n: 2 }, false)) {
        let w = Weight::alpha(3.0).unwrap();
        let rep = essnorm_hinf(&OperatorSpec::new(s), &w, &DiskGrid::default(), &EssnormOptions::default()).unwrap();
        prop_assert!(rep.terms.values().all(|e| e.empty_boundary_flag && e.value == 0.0));
        prop_assert_eq!(rep.verdict, blochop::essnorm::Verdict::Compact);
    }

    #[test]
    fn max_sum_bracket_and_exclusivity(s in random_symbols(OperatorKind::Tmn { m: 0, n: 2 }, true)) {
        let w = Weight::alpha(3.0).unwrap();
        let mut s = s;
        s.psi2 = Polynomial::zero().into();
        let rep = essnorm_hinf(&OperatorSpec::new(s), &w, &DiskGrid::default(), &EssnormOptions::default()).unwrap();
        prop_assert!(rep.upper_max <= rep.upper_sum);
        prop_assert!(rep.upper_sum <= rep.terms.len() as f64 * rep.upper_max);
        for o in [2usize, 3] {
            prop_assert!(rep.terms[&o].levels.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn scale_covariance_qk(s in random_symbols(OperatorKind::Tn { n: 0 }, true)) {
        let params = SpaceParams::new(2.0, 0.0, Kernel::power(0.5).unwrap()).unwrap();
        let w = Weight::alpha(2.0).unwrap();
        let grid = DiskGrid::default();
        let o = EssnormOptions::default();
        let a = essnorm_qk_to_bloch(&OperatorSpec::new(s.clone()), &params, &w, &grid, &o).unwrap();
        let b = essnorm_qk_to_bloch(&OperatorSpec::new(s.scaled(C::new(3.0, 0.0))), &params, &w, &grid, &o).unwrap();
        for (x, y) in [(a.lower, b.lower), (a.upper_max, b.upper_max), (a.upper_sum, b.upper_sum)] {
            prop_assert!((3.0 * x - y).abs() <= 1e-12 * y.abs().max(1e-300), "{x} {y}");
        }
    }
}

#[test]
fn a_quantity_interior_null() {
    let one: AnalyticFunction<f64> = Polynomial::from_real(&[1.0]).into();
    let phi: AnalyticFunction<f64> = Polynomial::from_real(&[0.0, 0.9]).into();
    let w = Weight::alpha(1.0).unwrap();
    let est = a_quantity(&one, &phi, 1.0, &w, &DiskGrid::default(), &LimsupOptions::default()).unwrap();
    assert!(est.empty_boundary_flag);
    assert_eq!(est.value, 0.0);
}

#[test]
fn qk_families_uniformly_bounded() {
    // the norm depends on |base| only, so one ray suffices
    let params = SpaceParams::new(2.0, 0.0, Kernel::power(0.5).unwrap()).unwrap();
    for kind in FamilyKind::ALL {
        let norms: Vec<f64> = DEFAULT_MODULI
            .iter()
            .map(|&m| {
                let fam = build_qk_test(kind, C::new(m, 0.0), params.gamma(), 1).unwrap();
                qk_family_norm(&fam, &params, &QkOptions::local()).unwrap().value
            })
            .collect();
        let (lo, hi) = norms
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
        assert!(lo > 0.0 && hi <= 3.0 * lo, "{kind:?}: {norms:?}");
    }
}
