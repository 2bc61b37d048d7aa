//! Boundary limsup quantities, essential-norm estimators and compactness verdicts.
//!
//! A limsup over `|phi(z)| -> 1` is sampled on level sets of `t = 1 - |phi(z)|`.
//! With grid depth `M` and `J` levels, level `j` has threshold
//! `eps_j = 2^(-j M / J)` and collects the grid points with
//! `eps_j 2^(-M/J) < t <= eps_j 2^S` (the last level has no lower bound),
//! where `S = CONTACT_SLACK_OCTAVES` absorbs the angular derivative of `phi`
//! at a contact point. The per-level suprema `s_j` are the sequence whose
//! tail defines the estimate.

use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalg::AnalyticFunction;
use crate::norms::{hinf_norm, skippable, DiskGrid, GridPoint, QkOptions};
use crate::operators::{
    boundedness_suprema, e_orders, e_values, one_minus_sq, BoundednessReport, OperatorKind, OperatorSpec, SymbolConfig,
};
use crate::scalar::{from_usize, lit, to_f64, Scalar};
use crate::testfn::{
    build_hinf_delta_family, build_hinf_test, build_qk_test, closed_form_value, qk_family_norm, FamilyKind,
};
use crate::weights::{SpaceParams, Weight};

pub const DEFAULT_LEVELS: usize = 12;
/// Relative change between the last two levels accepted as stabilized.
pub const STABILIZATION_RTOL: f64 = 0.05;
/// Octaves of `1 - |phi|` above each threshold still counted in its level.
pub const CONTACT_SLACK_OCTAVES: f64 = 4.0;
/// Relative tie tolerance when locating maximizers.
pub const ARGMAX_TIE_RTOL: f64 = 1e-9;
/// Compactness tolerance relative to the largest boundedness supremum.
pub const COMPACT_RTOL: f64 = 1e-3;
/// `lower >= NONCOMPACT_FACTOR * tol` is required for a non-compact verdict.
pub const NONCOMPACT_FACTOR: f64 = 10.0;
/// Slack of the order sandwich `lower <= upper_sum (1 + slack)`.
pub const SANDWICH_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimsupOptions {
    /// Number of levels `J`.
    pub levels: usize,
}

impl Default for LimsupOptions {
    fn default() -> Self {
        Self { levels: DEFAULT_LEVELS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Stable,
    Increasing,
    Decreasing,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimsupEstimate<T> {
    /// `s_J`, `0` when the boundary set is empty, `+inf` when divergent.
    pub value: T,
    pub exponent: T,
    /// Per-level suprema `s_1 .. s_J` (`0` on empty levels).
    pub levels: Vec<T>,
    pub occupied: Vec<bool>,
    /// Maximizer on the deepest level.
    pub argmax: Option<Complex<T>>,
    pub empty_boundary_flag: bool,
    pub divergence_flag: bool,
    pub stabilized: bool,
    pub trend: Trend,
}

/// Thresholds `eps_j = 2^(-j M / J)`, `j = 1..=J`.
pub fn level_thresholds(grid: &DiskGrid, levels: usize) -> Vec<f64> {
    let w = grid.depth as f64 / levels as f64;
    (1..=levels).map(|j| (-(j as f64) * w).exp2()).collect()
}

fn validate_levels(grid: &DiskGrid, opts: &LimsupOptions) -> Result<()> {
    if opts.levels < 2 || opts.levels > 64 || grid.depth < opts.levels {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= J <= min(64, M); got J = {}, M = {}",
            opts.levels, grid.depth
        )));
    }
    Ok(())
}

struct Sample<T> {
    point: GridPoint<T>,
    /// Bit `j` set when the point belongs to level `j` (0-based).
    mask: u64,
    values: Vec<T>,
}

struct LevelSweep<T> {
    sup: Vec<Vec<T>>,
    arg: Vec<Option<GridPoint<T>>>,
    occupied: Vec<bool>,
    /// `1 - sup |phi|` over the sampled grid.
    min_gap: T,
}

fn is_identity<T: Scalar>(phi: &AnalyticFunction<T>) -> bool {
    match phi {
        AnalyticFunction::Poly(p) => {
            let c = p.coeffs();
            c.len() == 2 && c[0].norm() == T::zero() && c[1] == Complex::new(T::one(), T::zero())
        }
        _ => false,
    }
}

/// `1 - |phi(z)|`, exact on the grid for the identity map.
fn boundary_gap<T: Scalar>(phi: &AnalyticFunction<T>, identity: bool, p: &GridPoint<T>) -> Result<Option<T>> {
    if identity {
        return Ok(Some(p.t));
    }
    match phi.eval(p.z) {
        Ok(w) => Ok(Some(T::one() - w.norm())),
        Err(e) if skippable(&e) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Per-level, per-term suprema of `f(p, 1 - |phi|^2)` over level-0 grid points.
fn level_sweep<T, F>(
    phi: &AnalyticFunction<T>,
    grid: &DiskGrid,
    levels: usize,
    terms: usize,
    f: &F,
) -> Result<LevelSweep<T>>
where
    T: Scalar,
    F: Fn(&GridPoint<T>, T) -> Result<Vec<T>> + Sync,
{
    let eps = level_thresholds(grid, levels);
    let width = grid.depth as f64 / levels as f64;
    let hi: Vec<T> = eps.iter().map(|&e| lit(e * CONTACT_SLACK_OCTAVES.exp2())).collect();
    let lo: Vec<T> = eps
        .iter()
        .enumerate()
        .map(|(j, &e)| {
            if j + 1 == levels {
                T::neg_infinity()
            } else {
                lit(e * (-width).exp2())
            }
        })
        .collect();
    let identity = is_identity(phi);
    let rings = grid.rings::<T>(0);
    let per_ring: Vec<(Vec<Sample<T>>, T)> = rings
        .par_iter()
        .map(|ring| {
            let mut out = Vec::new();
            let mut min_gap = T::infinity();
            for p in ring.points() {
                let Some(gap) = boundary_gap(phi, identity, &p)? else {
                    continue;
                };
                if gap < min_gap {
                    min_gap = gap;
                }
                if !(gap > T::zero()) {
                    return Err(Error::InconsistentGrid {
                        rho: to_f64(T::one() - gap),
                    });
                }
                if gap > hi[0] {
                    continue;
                }
                let mut mask = 0u64;
                for j in 0..levels {
                    if gap <= hi[j] && gap > lo[j] {
                        mask |= 1 << j;
                    }
                }
                if mask == 0 {
                    continue;
                }
                let d = gap * (lit::<T>(2.0) - gap);
                let values = match f(&p, d) {
                    Ok(v) => v,
                    Err(e) if skippable(&e) => continue,
                    Err(e) => return Err(e),
                };
                if values.iter().any(|v| v.is_nan()) {
                    return Err(Error::Kernel(format!(
                        "NaN limsup integrand at ({}, {})",
                        to_f64(p.z.re),
                        to_f64(p.z.im)
                    )));
                }
                out.push(Sample { point: p, mask, values });
            }
            Ok((out, min_gap))
        })
        .collect::<Result<_>>()?;

    let mut sup = vec![vec![T::zero(); levels]; terms];
    let mut occupied = vec![false; levels];
    let mut min_gap = T::infinity();
    for (samples, g) in &per_ring {
        if *g < min_gap {
            min_gap = *g;
        }
        for s in samples {
            for (j, occ) in occupied.iter_mut().enumerate() {
                if s.mask & (1 << j) != 0 {
                    *occ = true;
                    for k in 0..terms {
                        if s.values[k] > sup[k][j] {
                            sup[k][j] = s.values[k];
                        }
                    }
                }
            }
        }
    }
    // first sample (ring-major, angle order) within the tie tolerance of the
    // deepest-level maximum, so that tiny rounding differences between
    // equivalent inputs pick the same point
    let deepest = levels - 1;
    let tie = T::one() - lit(ARGMAX_TIE_RTOL);
    let mut arg = vec![None; terms];
    for (k, a) in arg.iter_mut().enumerate() {
        let target = sup[k][deepest];
        if target <= T::zero() {
            continue;
        }
        *a = per_ring
            .iter()
            .flat_map(|(s, _)| s.iter())
            .find(|s| s.mask & (1 << deepest) != 0 && s.values[k] >= target * tie)
            .map(|s| s.point);
    }
    Ok(LevelSweep {
        sup,
        arg,
        occupied,
        min_gap,
    })
}

fn build_estimate<T: Scalar>(
    levels: Vec<T>,
    occupied: Vec<bool>,
    exponent: T,
    arg: Option<GridPoint<T>>,
) -> LimsupEstimate<T> {
    let n = levels.len();
    let rtol = lit::<T>(STABILIZATION_RTOL);
    if !occupied[n - 1] {
        return LimsupEstimate {
            value: T::zero(),
            exponent,
            levels,
            occupied,
            argmax: None,
            empty_boundary_flag: true,
            divergence_flag: false,
            stabilized: true,
            trend: Trend::Empty,
        };
    }
    let last = levels[n - 1];
    let prev = levels[n - 2];
    let stabilized = last.is_finite() && (last - prev).abs() <= rtol * last;
    let grows =
        |j: usize| occupied[j - 1] && levels[j - 1] > T::zero() && levels[j] > levels[j - 1] * (T::one() + rtol);
    let divergence_flag = !last.is_finite() || (n >= 4 && (n - 3..n).all(grows));
    let trend = if stabilized {
        Trend::Stable
    } else if last > prev {
        Trend::Increasing
    } else {
        Trend::Decreasing
    };
    LimsupEstimate {
        value: if divergence_flag { T::infinity() } else { last },
        exponent,
        levels,
        occupied,
        argmax: arg.map(|p| p.z),
        empty_boundary_flag: false,
        divergence_flag,
        stabilized,
        trend,
    }
}

/// `limsup_{|phi(z)| -> 1} mu(z) |u(z)| / (1 - |phi(z)|^2)^gamma_exp`.
pub fn a_quantity<T: Scalar>(
    u: &AnalyticFunction<T>,
    phi: &AnalyticFunction<T>,
    gamma_exp: T,
    w: &Weight<T>,
    grid: &DiskGrid,
    opts: &LimsupOptions,
) -> Result<LimsupEstimate<T>> {
    validate_levels(grid, opts)?;
    let sweep = level_sweep(phi, grid, opts.levels, 1, &|p: &GridPoint<T>, d: T| {
        let m = w.value_rt(p.r, p.t) * u.eval(p.z)?.norm();
        Ok(vec![if m == T::zero() {
            T::zero()
        } else {
            m / d.powf(gamma_exp)
        }])
    })?;
    let LevelSweep { sup, arg, occupied, .. } = sweep;
    Ok(build_estimate(
        sup.into_iter().next().unwrap(),
        occupied,
        gamma_exp,
        arg[0],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Compact,
    NonCompact,
    Inconclusive,
}

/// Compact iff `upper_sum <= tol`, non-compact iff `lower >= 10 tol`.
pub fn compactness_verdict<T: Scalar>(lower: T, upper_sum: T, tol: T) -> Verdict {
    if upper_sum <= tol {
        Verdict::Compact
    } else if lower >= tol * lit(NONCOMPACT_FACTOR) {
        Verdict::NonCompact
    } else {
        Verdict::Inconclusive
    }
}

/// One single-term lower-bound extraction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerTerm<T> {
    pub family: String,
    pub value: T,
    pub point: Complex<T>,
    /// `|phi(point)|`, the modulus of the test-function base point.
    pub base_modulus: T,
    /// Source-space norm of the test function.
    pub test_norm: T,
    /// Normalized point evaluation: `value / A-integrand at point`.
    pub kappa: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics<T> {
    pub space: String,
    pub tol: T,
    /// Largest `sup mu |E_i|`, the scale of `tol`.
    pub scale: T,
    /// `sup |phi|` over the sampled grid.
    pub rho: T,
    pub boundedness: BoundednessReport<T>,
    pub lower_terms: BTreeMap<usize, LowerTerm<T>>,
    /// The delta-family (single-term) lower estimate, H-infinity only.
    pub lower_delta_family: Option<T>,
    /// `lower / upper_sum` when `upper_sum > 0`.
    pub sandwich_ratio: Option<T>,
    pub sandwich_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport<T> {
    pub lower: T,
    pub upper_max: T,
    pub upper_sum: T,
    /// Keyed by E-coefficient order.
    pub terms: BTreeMap<usize, LimsupEstimate<T>>,
    pub verdict: Verdict,
    /// Level thresholds `eps_j`.
    pub levels: Vec<f64>,
    pub diagnostics: Diagnostics<T>,
}

/// Errors when the order sandwich `lower <= upper_sum (1 + slack)` fails.
pub fn check_consistency<T: Scalar>(report: &EstimateReport<T>, slack: f64) -> Result<()> {
    if report.lower > report.upper_sum * (T::one() + lit(slack)) {
        return Err(Error::EstimatorInconsistency {
            lower: to_f64(report.lower),
            upper_sum: to_f64(report.upper_sum),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EssnormOptions {
    pub limsup: LimsupOptions,
    pub compact_rtol: f64,
    /// Search used for the Q_K norms of the test families.
    pub family_qk: QkOptions,
    /// Turn a failed order sandwich into an error.
    pub strict: bool,
}

impl Default for EssnormOptions {
    fn default() -> Self {
        Self {
            limsup: LimsupOptions::default(),
            compact_rtol: COMPACT_RTOL,
            family_qk: QkOptions::local(),
            strict: false,
        }
    }
}

struct TermSweepResult<T> {
    orders: Vec<usize>,
    estimates: Vec<LimsupEstimate<T>>,
    args: Vec<Option<GridPoint<T>>>,
    min_gap: T,
}

fn sweep_terms<T: Scalar>(
    symbols: &SymbolConfig<T>,
    w: &Weight<T>,
    exponents: &[T],
    grid: &DiskGrid,
    opts: &LimsupOptions,
) -> Result<TermSweepResult<T>> {
    validate_levels(grid, opts)?;
    let orders = e_orders(symbols.kind);
    let k = orders.len();
    let sweep = level_sweep(&symbols.phi, grid, opts.levels, k, &|p: &GridPoint<T>, d: T| {
        let mu = w.value_rt(p.r, p.t);
        let e = e_values(symbols, p.z)?;
        Ok(e.iter()
            .zip(exponents)
            .map(|(v, &x)| {
                let m = mu * v.norm();
                if m == T::zero() {
                    T::zero()
                } else {
                    m / d.powf(x)
                }
            })
            .collect())
    })?;
    let estimates = (0..k)
        .map(|i| build_estimate(sweep.sup[i].clone(), sweep.occupied.clone(), exponents[i], sweep.arg[i]))
        .collect();
    Ok(TermSweepResult {
        orders,
        estimates,
        args: sweep.arg,
        min_gap: sweep.min_gap,
    })
}

fn check_unbounded<T: Scalar>(
    orders: &[usize],
    est: &[LimsupEstimate<T>],
    bounded: &BoundednessReport<T>,
) -> Result<()> {
    if !bounded.all_finite() {
        return Err(Error::Unbounded {
            what: "boundedness suprema".into(),
            value: f64::INFINITY,
        });
    }
    for (o, e) in orders.iter().zip(est) {
        if e.divergence_flag {
            return Err(Error::Unbounded {
                what: format!("A-quantity of E_{o}"),
                value: to_f64(*e.levels.last().unwrap()),
            });
        }
    }
    Ok(())
}

fn finish<T: Scalar>(
    space: &str,
    sweep: TermSweepResult<T>,
    bounded: BoundednessReport<T>,
    lower: T,
    lower_terms: BTreeMap<usize, LowerTerm<T>>,
    lower_delta_family: Option<T>,
    grid: &DiskGrid,
    opts: &EssnormOptions,
) -> Result<EstimateReport<T>> {
    let upper_max = sweep.estimates.iter().fold(T::zero(), |a, e| a.max(e.value));
    let upper_sum = sweep.estimates.iter().fold(T::zero(), |a, e| a + e.value);
    let scale = bounded.scale();
    let tol = scale * lit(opts.compact_rtol);
    let sandwich_ratio = (upper_sum > T::zero()).then(|| lower / upper_sum);
    let sandwich_ok = lower <= upper_sum * (T::one() + lit(SANDWICH_SLACK));
    let report = EstimateReport {
        lower,
        upper_max,
        upper_sum,
        terms: sweep.orders.iter().copied().zip(sweep.estimates).collect(),
        verdict: compactness_verdict(lower, upper_sum, tol),
        levels: level_thresholds(grid, opts.limsup.levels),
        diagnostics: Diagnostics {
            space: space.into(),
            tol,
            scale,
            rho: T::one() - sweep.min_gap.min(T::one()),
            boundedness: bounded,
            lower_terms,
            lower_delta_family,
            sandwich_ratio,
            sandwich_ok,
        },
    };
    if opts.strict {
        check_consistency(&report, SANDWICH_SLACK)?;
    }
    Ok(report)
}

/// Essential-norm estimates for `T^n : Q_K(p, q) -> B_mu`.
///
/// The A-quantities of `E_n, E_{n+1}, E_{n+2}` use exponents
/// `gamma + n - 1, gamma + n, gamma + n + 1`. The lower estimate extracts one
/// term per test family (f, g, h isolate `E_n, E_{n+1}, E_{n+2}`) at that term's
/// deepest-level maximizer, using the closed-form derivative and the
/// numerically computed Q_K norm of the family member.
pub fn essnorm_qk_to_bloch<T: Scalar>(
    spec: &OperatorSpec<T>,
    params: &SpaceParams<T>,
    w: &Weight<T>,
    grid: &DiskGrid,
    opts: &EssnormOptions,
) -> Result<EstimateReport<T>> {
    let n = match spec.kind() {
        OperatorKind::Tn { n } => n,
        k => return Err(Error::WrongOperatorKind(format!("Q_K estimates need T^n, got {k:?}"))),
    };
    let symbols = spec.effective_symbols();
    let eff = OperatorSpec::new(symbols.clone());
    let g = params.gamma();
    let exps: Vec<T> = (0..3).map(|i| g + from_usize::<T>(n + i) - T::one()).collect();
    let bounded = boundedness_suprema(&eff, w, &exps, grid)?;
    let sweep = sweep_terms(&symbols, w, &exps, grid, &opts.limsup)?;
    check_unbounded(&sweep.orders, &sweep.estimates, &bounded)?;

    let mut lower = T::zero();
    let mut lower_terms = BTreeMap::new();
    for (i, kind) in FamilyKind::ALL.into_iter().enumerate() {
        let (Some(p), est) = (sweep.args[i], &sweep.estimates[i]) else {
            continue;
        };
        if !(est.value > T::zero()) {
            continue;
        }
        let b = symbols.phi.eval(p.z)?;
        let m = b.norm();
        let family = build_qk_test(kind, Complex::new(m, T::zero()), g, n)?;
        let norm = qk_family_norm(&family, params, &opts.family_qk)?.value;
        let cf = closed_form_value(&family).norm();
        let e = e_values(&symbols, p.z)?[i].norm();
        let value = w.value_rt(p.r, p.t) * e * cf / norm;
        let integrand = w.value_rt(p.r, p.t) * e / one_minus_sq(b).powf(exps[i]);
        lower = lower.max(value);
        lower_terms.insert(
            sweep.orders[i],
            LowerTerm {
                family: format!("{kind:?}").to_lowercase(),
                value,
                point: p.z,
                base_modulus: m,
                test_norm: norm,
                kappa: value / integrand,
            },
        );
    }
    finish("qk", sweep, bounded, lower, lower_terms, None, grid, opts)
}

/// Hyperbolic radius of the patch on which `||T f_i||_{B_mu}` is sampled.
const PATCH_RADIUS: f64 = 0.75;
const PATCH_RADII: usize = 16;
const PATCH_ANGLES: usize = 32;

/// `|T f(0)| + sup mu |(T f)'|` over the pseudo-hyperbolic patch
/// `{phi_c(zeta) : |zeta| <= PATCH_RADIUS}` around `c`. A fixed sample set keeps
/// the result positively homogeneous in the symbols.
fn local_bloch_norm<T: Scalar>(
    symbols: &SymbolConfig<T>,
    f: &AnalyticFunction<T>,
    w: &Weight<T>,
    center: &GridPoint<T>,
) -> Result<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let spec = OperatorSpec::new(symbols.clone());
    let t0 = crate::operators::apply(&spec, f).eval(zero)?.norm();
    let c = center.z;
    let one = Complex::new(T::one(), T::zero());
    let om_c = center.one_minus_sq();
    let mut best = T::zero();
    for ri in 0..=PATCH_RADII {
        let rad = lit::<T>(PATCH_RADIUS * ri as f64 / PATCH_RADII as f64);
        let angles = if ri == 0 { 1 } else { PATCH_ANGLES };
        for aj in 0..angles {
            let th = lit::<T>(std::f64::consts::TAU * aj as f64 / angles as f64);
            let zeta = Complex::from_polar(rad, th);
            let den = one - c.conj() * zeta;
            let z = (c - zeta) / den;
            let omz = om_c * (T::one() - rad * rad) / den.norm_sqr();
            let r = z.norm();
            let t = omz / (T::one() + r);
            let mu = w.value_rt(r, t);
            let d = match crate::operators::derivative_decomposed(&spec, f, z) {
                Ok(v) => v.norm(),
                Err(e) if skippable(&e) => continue,
                Err(e) => return Err(e),
            };
            best = best.max(mu * d);
        }
    }
    Ok(t0 + best)
}

/// Essential-norm estimates for `T^{m,n} : H-infinity -> B_mu`, both the
/// `m + 1 < n` (four terms) and the `m + 1 = n` (three terms,
/// merged middle coefficient) cases.
///
/// The lower estimate is `max_i ||T f_{i, phi(w)}||_{B_mu}` at the maximizer
/// `w` of the dominant term; the delta-family single-term estimate is
/// reported alongside it.
pub fn essnorm_hinf<T: Scalar>(
    spec: &OperatorSpec<T>,
    w: &Weight<T>,
    grid: &DiskGrid,
    opts: &EssnormOptions,
) -> Result<EstimateReport<T>> {
    if !matches!(spec.kind(), OperatorKind::Tmn { .. }) {
        return Err(Error::WrongOperatorKind(format!(
            "H-infinity estimates need T^(m,n), got {:?}",
            spec.kind()
        )));
    }
    let symbols = spec.effective_symbols();
    let eff = OperatorSpec::new(symbols.clone());
    let orders = e_orders(symbols.kind);
    let exps: Vec<T> = orders.iter().map(|&o| from_usize(o)).collect();
    let bounded = boundedness_suprema(&eff, w, &exps, grid)?;
    let sweep = sweep_terms(&symbols, w, &exps, grid, &opts.limsup)?;
    check_unbounded(&sweep.orders, &sweep.estimates, &bounded)?;

    // delta family: single-term extraction per order
    let mut delta = T::zero();
    let mut lower_terms = BTreeMap::new();
    for (i, &o) in orders.iter().enumerate() {
        let (Some(p), est) = (sweep.args[i], &sweep.estimates[i]) else {
            continue;
        };
        if !(est.value > T::zero()) {
            continue;
        }
        let b = symbols.phi.eval(p.z)?;
        let m = b.norm();
        let fam = build_hinf_delta_family(&orders, Complex::new(m, T::zero()))?;
        let norm = fam.member_sup(i);
        let d = one_minus_sq(b);
        let integrand = w.value_rt(p.r, p.t) * e_values(&symbols, p.z)?[i].norm() / d.powi(o as i32);
        let value = integrand * m.powi(o as i32) / norm;
        delta = delta.max(value);
        lower_terms.insert(
            o,
            LowerTerm {
                family: "delta".into(),
                value,
                point: p.z,
                base_modulus: m,
                test_norm: norm,
                kappa: value / integrand,
            },
        );
    }

    // f_{i,phi(w)} family at the maximizer of the dominant term
    let dominant = (0..orders.len())
        .filter(|&i| sweep.args[i].is_some() && sweep.estimates[i].value > T::zero())
        .fold(None, |acc: Option<usize>, i| match acc {
            Some(j) if sweep.estimates[j].value >= sweep.estimates[i].value => Some(j),
            _ => Some(i),
        });
    let mut lower = T::zero();
    if let Some(i) = dominant {
        let p = sweep.args[i].unwrap();
        let b = symbols.phi.eval(p.z)?;
        let count = if symbols.kind.merged() { 3 } else { 4 };
        for k in 1..=count {
            let fam = build_hinf_test(k, b)?;
            lower = lower.max(local_bloch_norm(&symbols, &fam.function, w, &p)?);
        }
    }
    finish("hinf", sweep, bounded, lower, lower_terms, Some(delta), grid, opts)
}

/// `T^{m,n}` with `m + 1 < n`.
pub fn essnorm_hinf_mn<T: Scalar>(
    spec: &OperatorSpec<T>,
    w: &Weight<T>,
    grid: &DiskGrid,
    opts: &EssnormOptions,
) -> Result<EstimateReport<T>> {
    match spec.kind() {
        OperatorKind::Tmn { m, n } if m + 1 < n => essnorm_hinf(spec, w, grid, opts),
        k => Err(Error::WrongOperatorKind(format!(
            "expected T^(m,n) with m + 1 < n, got {k:?}"
        ))),
    }
}

/// `T^{m,n}` with `m + 1 = n`.
pub fn essnorm_hinf_m1n<T: Scalar>(
    spec: &OperatorSpec<T>,
    w: &Weight<T>,
    grid: &DiskGrid,
    opts: &EssnormOptions,
) -> Result<EstimateReport<T>> {
    match spec.kind() {
        OperatorKind::Tmn { m, n } if m + 1 == n => essnorm_hinf(spec, w, grid, opts),
        k => Err(Error::WrongOperatorKind(format!(
            "expected T^(m,n) with m + 1 = n, got {k:?}"
        ))),
    }
}

/// Source space of a dilation sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpace<T> {
    Qk(SpaceParams<T>, QkOptions),
    Hinf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationPoint<T> {
    pub r: T,
    /// `max_f ||(T - T_r) f||_{B_mu} / ||f||` over the suite.
    pub value: T,
    /// Index of the maximizing suite function.
    pub argmax: usize,
}

/// Monitoring sequence for `||T - T_r||` along `schedule`.
///
/// Each value is a supremum over finitely many unit-normalized test
/// functions, hence a lower bound on the operator-norm difference; it is a
/// heuristic, not a certified upper bound on the essential norm.
pub fn dilation_upper_bound<T: Scalar>(
    spec: &OperatorSpec<T>,
    space: &SourceSpace<T>,
    w: &Weight<T>,
    grid: &DiskGrid,
    schedule: &[T],
    suite: &[AnalyticFunction<T>],
) -> Result<Vec<DilationPoint<T>>> {
    if schedule.windows(2).any(|p| !(p[1] > p[0])) || schedule.iter().any(|&r| !(r > T::zero() && r <= T::one())) {
        return Err(Error::InvalidParameter(
            "dilation schedule must increase inside (0, 1]".into(),
        ));
    }
    if suite.is_empty() {
        return Err(Error::InvalidParameter("dilation sweep needs test functions".into()));
    }
    let symbols = spec.effective_symbols();
    let base = OperatorSpec::new(symbols.clone());
    let norms: Vec<T> = suite
        .iter()
        .map(|f| match space {
            SourceSpace::Qk(params, qo) => crate::norms::qk_norm(f, params, qo).map(|r| r.value),
            SourceSpace::Hinf => hinf_norm(f, grid).map(|r| r.value),
        })
        .collect::<Result<_>>()?;
    let zero = Complex::new(T::zero(), T::zero());
    schedule
        .iter()
        .map(|&r| {
            if r == T::one() {
                return Ok(DilationPoint {
                    r,
                    value: T::zero(),
                    argmax: 0,
                });
            }
            let dil = OperatorSpec::dilated(symbols.clone(), r)?;
            let mut best = (T::zero(), 0);
            for (idx, (f, &nf)) in suite.iter().zip(&norms).enumerate() {
                if !(nf > T::zero()) {
                    continue;
                }
                let a = crate::operators::apply(&base, f);
                let b = crate::operators::apply(&dil, f);
                let at0 = (a.eval(zero)? - b.eval(zero)?).norm();
                let sup = crate::norms::refined_sup(grid, &|p: &GridPoint<T>| {
                    let d = a.derivative(p.z)? - b.derivative(p.z)?;
                    Ok(w.value_rt(p.r, p.t) * d.norm())
                })?;
                let v = (at0 + sup.value) / nf;
                if v > best.0 {
                    best = (v, idx);
                }
            }
            Ok(DilationPoint {
                r,
                value: best.0,
                argmax: best.1,
            })
        })
        .collect()
}
