//! Command implementations. Each returns a JSON result tree, an optional CSV
//! table and, for `verify-paper`, an optional certification failure.

use blochop::essnorm::{dilation_upper_bound, essnorm_hinf, essnorm_qk_to_bloch, EstimateReport, SourceSpace};
use blochop::funcalg::{contour_derivative, AnalyticFunction, MobiusPowerSum, MobiusPowerTerm, Polynomial};
use blochop::norms::{bloch_alpha_equiv_norm, bloch_mu_norm, hinf_norm, qk_norm, DiskGrid};
use blochop::operators::{
    apply, boundedness_suprema, derivative_decomposed, e_coefficients, e_orders, rho, OperatorKind, OperatorSpec,
    SymbolConfig,
};
use blochop::testfn::{
    build_with_coefficients, check_closed_form, default_certificate_sweep, family_coefficients, sample_suite,
    verify_vanishing, BoundarySequence, FamilyKind, SweepCase,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{RunConfig, Space};
use crate::error::{CliError, CliResult, Context};

/// Default `r` schedule of `dilation-sweep`.
pub const DEFAULT_SCHEDULE: [f64; 5] = [0.5, 0.9, 0.99, 0.999, 1.0];
/// Random operator configurations checked by `verify-paper`.
pub const DECOMPOSITION_CONFIGS: usize = 100;
pub const DECOMPOSITION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum NormSpace {
    BlochMu,
    BlochAlpha,
    Hinf,
    Qk,
}

/// A CSV table: header and rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug)]
pub struct Outcome {
    pub results: Value,
    pub csv: Option<Table>,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(results: Value, csv: Option<Table>) -> Self {
        Self {
            results,
            csv,
            failure: None,
        }
    }
}

fn to_json<S: Serialize>(v: &S) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

pub fn norm(cfg: &RunConfig, space: NormSpace) -> CliResult<Outcome> {
    let f = cfg.function()?;
    let grid = cfg.grid();
    let rep = match space {
        NormSpace::BlochMu => bloch_mu_norm(&f, &cfg.weight()?, &grid),
        NormSpace::BlochAlpha => bloch_alpha_equiv_norm(&f, cfg.alpha()?, cfg.equiv_order.unwrap_or(0), &grid),
        NormSpace::Hinf => hinf_norm(&f, &grid),
        NormSpace::Qk => qk_norm(&f, &cfg.qk_params()?, &cfg.qk_options()),
    }
    .ctx("norm")?;
    Ok(Outcome::ok(to_json(&rep), None))
}

/// The operator together with its source space, rejecting pairings outside
/// the implemented estimates (T^n with Q_K, T^(m,n) with H-infinity).
fn paired(cfg: &RunConfig, grid: &DiskGrid) -> CliResult<(OperatorSpec<f64>, Space)> {
    let spec = cfg.operator(grid)?;
    let space = cfg.space()?;
    match (spec.kind(), &space) {
        (OperatorKind::Tn { .. }, Space::Qk(_)) | (OperatorKind::Tmn { .. }, Space::Hinf) => Ok((spec, space)),
        (OperatorKind::Tn { .. }, Space::Hinf) => Err(CliError::Incompatible(
            "T^n is estimated from Q_K(p, q) only; use T^(m,n) with hinf".into(),
        )),
        (OperatorKind::Tmn { .. }, Space::Qk(_)) => Err(CliError::Incompatible(
            "T^(m,n) is estimated from H-infinity only; use T^n with qk".into(),
        )),
    }
}

fn level_table(rep: &EstimateReport<f64>) -> Table {
    let mut rows = Vec::new();
    for (order, est) in &rep.terms {
        for (j, (eps, v)) in rep.levels.iter().zip(&est.levels).enumerate() {
            rows.push(vec![
                order.to_string(),
                (j + 1).to_string(),
                format!("{eps:e}"),
                format!("{v:e}"),
            ]);
        }
    }
    Table {
        header: ["order", "level", "eps", "sup"].map(String::from).to_vec(),
        rows,
    }
}

pub fn essnorm(cfg: &RunConfig) -> CliResult<Outcome> {
    let grid = cfg.grid();
    let (spec, space) = paired(cfg, &grid)?;
    let w = cfg.weight()?;
    let opts = cfg.essnorm_options();
    let rep = match &space {
        Space::Qk(params) => essnorm_qk_to_bloch(&spec, params, &w, &grid, &opts),
        Space::Hinf => essnorm_hinf(&spec, &w, &grid, &opts),
    }
    .ctx("essnorm")?;
    let table = level_table(&rep);
    Ok(Outcome::ok(to_json(&rep), Some(table)))
}

pub fn check_bounded(cfg: &RunConfig) -> CliResult<Outcome> {
    let grid = cfg.grid();
    let (spec, space) = paired(cfg, &grid)?;
    let w = cfg.weight()?;
    let orders = e_orders(spec.kind());
    let exps: Vec<f64> = match &space {
        Space::Qk(params) => orders.iter().map(|&o| params.gamma() + o as f64 - 1.0).collect(),
        Space::Hinf => orders.iter().map(|&o| o as f64).collect(),
    };
    let bounded = boundedness_suprema(&spec, &w, &exps, &grid).ctx("check-bounded")?;
    let rho = rho(&spec, &grid).ctx("check-bounded")?;
    let finite = bounded
        .suprema
        .values()
        .chain(bounded.weighted_suprema.values())
        .all(|v| v.is_finite());
    Ok(Outcome::ok(
        json!({ "bounded": finite, "rho": to_json(&rho), "suprema": to_json(&bounded) }),
        None,
    ))
}

pub fn dilation_sweep(cfg: &RunConfig) -> CliResult<Outcome> {
    let grid = cfg.grid();
    let (spec, space) = paired(cfg, &grid)?;
    let w = cfg.weight()?;
    let source = match space {
        Space::Qk(params) => SourceSpace::Qk(params, cfg.qk_options()),
        Space::Hinf => SourceSpace::Hinf,
    };
    let schedule = cfg
        .dilation_schedule
        .clone()
        .unwrap_or_else(|| DEFAULT_SCHEDULE.to_vec());
    let seq = dilation_upper_bound(&spec, &source, &w, &grid, &schedule, &sample_suite()).ctx("dilation-sweep")?;
    let table = Table {
        header: ["r", "value", "argmax"].map(String::from).to_vec(),
        rows: seq
            .iter()
            .map(|p| vec![format!("{}", p.r), format!("{:e}", p.value), p.argmax.to_string()])
            .collect(),
    };
    Ok(Outcome::ok(
        json!({ "schedule": schedule, "sequence": to_json(&seq) }),
        Some(table),
    ))
}

/// The default sweep, optionally with the middle `f`-family coefficient for
/// `gamma = 1, n = 0` perturbed from -3 to -2.9.
fn certificate_cases(tamper: bool) -> CliResult<Vec<SweepCase>> {
    let mut cases = default_certificate_sweep().ctx("certificate sweep")?;
    if tamper {
        let mut coeffs = family_coefficients(FamilyKind::F, 1.0, 0);
        coeffs[1] = -2.9;
        for (case, z) in cases
            .iter_mut()
            .filter(|c| c.vanishing.kind == FamilyKind::F && c.vanishing.gamma == 1.0 && c.vanishing.n == 0)
            .zip(BoundarySequence::<f64>::default().points())
        {
            let fam = build_with_coefficients(FamilyKind::F, z, 1.0, 0, coeffs).ctx("tampered fixture")?;
            *case = SweepCase {
                vanishing: verify_vanishing(&fam).ctx("tampered fixture")?,
                closed_form: check_closed_form(&fam).ctx("tampered fixture")?,
            };
        }
    }
    Ok(cases)
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_poly(rng: &mut ChaCha8Rng) -> AnalyticFunction<f64> {
    let d = rng.gen_range(0..=3);
    Polynomial::new((0..=d).map(|_| random_complex(rng)).collect()).into()
}

/// Worst relative gap between the E-decomposition and a contour difference of
/// `T f` over random polynomial symbols and Möbius sums at `|z| <= 0.9`.
fn decomposition_check(seed: u64) -> CliResult<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = DiskGrid::with_depth(8);
    let mut worst: f64 = 0.0;
    for _ in 0..DECOMPOSITION_CONFIGS {
        let kind = if rng.gen_bool(0.5) {
            OperatorKind::Tn {
                n: rng.gen_range(0..=2),
            }
        } else {
            let n = rng.gen_range(1..=3);
            OperatorKind::Tmn {
                m: rng.gen_range(0..n),
                n,
            }
        };
        let mut phi: Vec<Complex64> = (0..=rng.gen_range(1..=3)).map(|_| random_complex(&mut rng)).collect();
        let l1: f64 = phi.iter().map(|c| c.norm()).sum();
        phi.iter_mut().for_each(|c| *c *= 0.9 / l1);
        let symbols = SymbolConfig::new(
            random_poly(&mut rng),
            random_poly(&mut rng),
            Polynomial::new(phi).into(),
            kind,
            &grid,
        )
        .ctx("random symbols")?;
        let spec = OperatorSpec::new(symbols);
        let terms = (0..rng.gen_range(1..=3))
            .map(|_| {
                let a = Complex64::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..std::f64::consts::TAU));
                MobiusPowerTerm::new(random_complex(&mut rng), a, rng.gen_range(0.5..4.0))
            })
            .collect::<blochop::Result<Vec<_>>>()
            .ctx("random function")?;
        let f = AnalyticFunction::Mobius(MobiusPowerSum::new(terms));
        let z = Complex64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..std::f64::consts::TAU));
        let tf = apply(&spec, &f);
        let fd = contour_derivative(|w| tf.eval(w), 1, z, 0.05, 32).ctx("contour difference")?;
        let d = derivative_decomposed(&spec, &f, z).ctx("decomposition")?;
        let w = spec.symbols.phi.eval(z).ctx("phi")?;
        let mut scale = 0.0;
        for (&k, e) in &e_coefficients(&spec, z).ctx("E-coefficients")?.terms {
            scale += e.norm() * f.eval_derivative(k, w).ctx("derivative")?.norm();
        }
        worst = worst.max((d - fd).norm() / scale.max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

pub fn verify_paper(cfg: &RunConfig, tamper: bool) -> CliResult<Outcome> {
    let cases = certificate_cases(tamper)?;
    let failures: Vec<&SweepCase> = cases.iter().filter(|c| !c.pass()).collect();
    let worst_vanishing = cases
        .iter()
        .flat_map(|c| c.vanishing.residuals.iter().map(|r| r.relative))
        .fold(0.0, f64::max);
    let worst_closed_form = cases.iter().map(|c| c.closed_form.relative).fold(0.0, f64::max);
    let seed = cfg.seed.unwrap_or(0);
    let worst_decomposition = decomposition_check(seed)?;
    let decomposition_ok = worst_decomposition <= DECOMPOSITION_TOL;
    let pass = failures.is_empty() && decomposition_ok;
    let results = json!({
        "pass": pass,
        "certificates": {
            "cases": cases.len(),
            "failed": failures.len(),
            "worst_vanishing": worst_vanishing,
            "worst_closed_form": worst_closed_form,
            "failures": to_json(&failures),
        },
        "decomposition": {
            "seed": seed,
            "configs": DECOMPOSITION_CONFIGS,
            "worst_relative": worst_decomposition,
            "tol": DECOMPOSITION_TOL,
            "pass": decomposition_ok,
        },
    });
    let failure = (!pass).then(|| {
        CliError::Certification(format!(
            "{} of {} certificate cases failed, decomposition worst {worst_decomposition:.2e}",
            failures.len(),
            cases.len()
        ))
    });
    Ok(Outcome {
        results,
        csv: None,
        failure,
    })
}
