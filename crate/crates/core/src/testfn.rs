//! Test-function families for the Q_K(p, q) and H-infinity source spaces.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalg::{linear_combine, AnalyticFunction, MobiusPowerSum, MobiusPowerTerm, Polynomial};
use crate::norms::qk::{check_admissible, density_report, sup_inner_density};
use crate::norms::GridPoint;
use crate::norms::{NormReport, QkOptions};
use crate::scalar::{from_usize, lit, real, rising_factorial, to_f64, Scalar};
use crate::weights::SpaceParams;

/// Points approaching the boundary along a few rays.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySequence<T> {
    pub moduli: Vec<T>,
    pub rays: Vec<T>,
}

/// Default moduli of the boundary sequence.
pub const DEFAULT_MODULI: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

impl<T: Scalar> Default for BoundarySequence<T> {
    fn default() -> Self {
        let third = T::PI() * lit(2.0 / 3.0);
        Self {
            moduli: DEFAULT_MODULI.iter().map(|&m| lit(m)).collect(),
            rays: vec![T::zero(), third, -third],
        }
    }
}

impl<T: Scalar> BoundarySequence<T> {
    pub fn new(moduli: Vec<T>, rays: Vec<T>) -> Result<Self> {
        if moduli.is_empty() || rays.is_empty() {
            return Err(Error::InvalidParameter(
                "boundary sequence needs moduli and rays".into(),
            ));
        }
        if moduli.windows(2).any(|w| !(w[1] > w[0])) || moduli[0] < T::zero() || *moduli.last().unwrap() >= T::one() {
            return Err(Error::InvalidParameter(
                "boundary moduli must increase strictly inside [0, 1)".into(),
            ));
        }
        Ok(Self { moduli, rays })
    }

    /// Ray-major list of points.
    pub fn points(&self) -> Vec<Complex<T>> {
        self.rays
            .iter()
            .flat_map(|&th| self.moduli.iter().map(move |&m| Complex::from_polar(m, th)))
            .collect()
    }
}

/// `1 - |z|^2` as `(1 - |z|)(1 + |z|)`.
fn one_minus_sq<T: Scalar>(z: Complex<T>) -> T {
    let r = z.norm();
    (T::one() - r) * (T::one() + r)
}

/// `l_i(z) = (1 - |z_k|^2)^i (1 - conj(z_k) z)^-(gamma + i - 1)`.
pub fn build_l<T: Scalar>(i: usize, z_k: Complex<T>, gamma: T) -> Result<AnalyticFunction<T>> {
    if !(z_k.norm() < T::one()) {
        return Err(Error::OutsideDisk {
            re: to_f64(z_k.re),
            im: to_f64(z_k.im),
        });
    }
    if !(1..=3).contains(&i) {
        return Err(Error::InvalidParameter(format!(
            "l_i is defined for i in 1..=3, got {i}"
        )));
    }
    let beta = gamma + from_usize(i - 1);
    let c = one_minus_sq(z_k).powi(i as i32);
    Ok(MobiusPowerTerm::new(real(c), z_k, beta)?.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    F,
    G,
    H,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [FamilyKind::F, FamilyKind::G, FamilyKind::H];

    /// Offset from `n` of the one derivative that does not vanish at the base point.
    pub fn live_offset(self) -> usize {
        match self {
            Self::F => 0,
            Self::G => 1,
            Self::H => 2,
        }
    }

    /// Offsets from `n` of the two derivatives that vanish at the base point.
    pub fn vanishing_offsets(self) -> [usize; 2] {
        match self {
            Self::F => [1, 2],
            Self::G => [0, 2],
            Self::H => [0, 1],
        }
    }
}

/// A member of the f / g / h families at base point `z_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct QkTestFamily<T> {
    pub kind: FamilyKind,
    pub gamma: T,
    pub n: usize,
    pub base: Complex<T>,
    /// Coefficients on `l_1, l_2, l_3`.
    pub coeffs: [T; 3],
    pub function: AnalyticFunction<T>,
}

/// `prod_{j < n} (gamma + j + a)(gamma + j + b)`; 1 for `n = 0`.
fn pair_product<T: Scalar>(gamma: T, n: usize, a: usize, b: usize) -> T {
    (0..n).fold(T::one(), |acc, j| {
        let g = gamma + from_usize(j);
        acc * (g + from_usize(a)) * (g + from_usize(b))
    })
}

/// `prod_{j < n} (gamma + j)(gamma + j + 1)(gamma + j + 2)`.
fn triple_product<T: Scalar>(gamma: T, n: usize) -> T {
    (0..n).fold(T::one(), |acc, j| {
        let g = gamma + from_usize(j);
        acc * g * (g + T::one()) * (g + lit(2.0))
    })
}

/// Coefficients of `l_1, l_2, l_3` for each family.
pub fn family_coefficients<T: Scalar>(kind: FamilyKind, gamma: T, n: usize) -> [T; 3] {
    let gn = gamma + from_usize(n);
    let p12 = pair_product(gamma, n, 1, 2);
    let p02 = pair_product(gamma, n, 0, 2);
    let p01 = pair_product(gamma, n, 0, 1);
    let two = lit::<T>(2.0);
    match kind {
        FamilyKind::F => [(gn + two) / gn * p12, -two * (gn + two) / (gn + T::one()) * p02, p01],
        FamilyKind::G => [
            (gn + two) / (gn + T::one()) * p12,
            -(two * gn + lit(3.0)) / (gn + T::one()) * p02,
            p01,
        ],
        FamilyKind::H => [p12, -two * p02, p01],
    }
}

pub fn build_qk_test<T: Scalar>(kind: FamilyKind, z_k: Complex<T>, gamma: T, n: usize) -> Result<QkTestFamily<T>> {
    if !(gamma > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "gamma = {} must be positive",
            to_f64(gamma)
        )));
    }
    let coeffs = family_coefficients(kind, gamma, n);
    build_with_coefficients(kind, z_k, gamma, n, coeffs)
}

/// Builds a family member from explicit coefficients (used to inject faults in
/// the certificate harness).
pub fn build_with_coefficients<T: Scalar>(
    kind: FamilyKind,
    z_k: Complex<T>,
    gamma: T,
    n: usize,
    coeffs: [T; 3],
) -> Result<QkTestFamily<T>> {
    let ls = (1..=3).map(|i| build_l(i, z_k, gamma)).collect::<Result<Vec<_>>>()?;
    let cs: Vec<Complex<T>> = coeffs.iter().map(|&c| real(c)).collect();
    let function = linear_combine(&cs, &ls)?;
    Ok(QkTestFamily {
        kind,
        gamma,
        n,
        base: z_k,
        coeffs,
        function,
    })
}

/// Residual of one `= 0` certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderResidual {
    pub order: usize,
    pub value: f64,
    pub scale: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingCertificate {
    pub kind: FamilyKind,
    pub gamma: f64,
    pub n: usize,
    pub base: Complex<f64>,
    pub residuals: [OrderResidual; 2],
    pub tol: f64,
    pub pass: bool,
}

fn residual<T: Scalar>(f: &AnalyticFunction<T>, order: usize, z: Complex<T>) -> Result<OrderResidual> {
    let v = f.eval_derivative(order, z)?.norm();
    let scale = f.term_scale(order, z)?;
    let relative = if scale == T::zero() { v } else { v / scale };
    Ok(OrderResidual {
        order,
        value: to_f64(v),
        scale: to_f64(scale),
        relative: to_f64(relative),
    })
}

/// Certifies the two vanishing derivatives at the base point relative to the
/// largest single-term contribution.
pub fn verify_vanishing<T: Scalar>(family: &QkTestFamily<T>) -> Result<VanishingCertificate> {
    let [a, b] = family.kind.vanishing_offsets();
    let residuals = [
        residual(&family.function, family.n + a, family.base)?,
        residual(&family.function, family.n + b, family.base)?,
    ];
    let tol = to_f64(T::certificate_tol());
    let pass = residuals.iter().all(|r| r.relative <= tol);
    Ok(VanishingCertificate {
        kind: family.kind,
        gamma: to_f64(family.gamma),
        n: family.n,
        base: Complex::new(to_f64(family.base.re), to_f64(family.base.im)),
        residuals,
        tol,
        pass,
    })
}

/// The closed-form value of the live derivative at the base point.
pub fn closed_form_value<T: Scalar>(family: &QkTestFamily<T>) -> Complex<T> {
    let (g, n, z) = (family.gamma, family.n, family.base);
    let gn = g + from_usize(n);
    let p3 = triple_product(g, n);
    let d = one_minus_sq(z);
    let zb = z.conj();
    let two = lit::<T>(2.0);
    match family.kind {
        FamilyKind::F => zb.powu(n as u32) * (two * p3 / (gn * (gn + T::one())) / d.powf(gn - T::one())),
        FamilyKind::G => zb.powu(n as u32 + 1) * (-p3 / (gn + T::one()) / d.powf(gn)),
        FamilyKind::H => zb.powu(n as u32 + 2) * (two * p3 / d.powf(gn + T::one())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormCheck {
    pub kind: FamilyKind,
    pub gamma: f64,
    pub n: usize,
    pub base: Complex<f64>,
    pub order: usize,
    pub closed_form: Complex<f64>,
    pub differentiated: Complex<f64>,
    pub relative: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Compares the closed form with exact differentiation of the combination.
/// The scale is the larger of the two magnitudes, or the term scale when
/// both vanish (base point at the center).
pub fn check_closed_form<T: Scalar>(family: &QkTestFamily<T>) -> Result<ClosedFormCheck> {
    let order = family.n + family.kind.live_offset();
    let cf = closed_form_value(family);
    let ex = family.function.eval_derivative(order, family.base)?;
    let scale = cf.norm().max(ex.norm()).max(if cf.norm() == T::zero() {
        family.function.term_scale(order, family.base)?
    } else {
        T::zero()
    });
    let diff = (cf - ex).norm();
    let relative = if scale == T::zero() { diff } else { diff / scale };
    let tol = to_f64(T::certificate_tol());
    Ok(ClosedFormCheck {
        kind: family.kind,
        gamma: to_f64(family.gamma),
        n: family.n,
        base: Complex::new(to_f64(family.base.re), to_f64(family.base.im)),
        order,
        closed_form: Complex::new(to_f64(cf.re), to_f64(cf.im)),
        differentiated: Complex::new(to_f64(ex.re), to_f64(ex.im)),
        relative: to_f64(relative),
        tol,
        pass: to_f64(relative) <= tol,
    })
}

/// Gammas of the default certificate sweep.
pub const SWEEP_GAMMAS: [f64; 3] = [0.5, 1.0, 2.0];
/// Orders of the default certificate sweep.
pub const SWEEP_ORDERS: [usize; 3] = [0, 1, 2];

/// One case of the certificate sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCase {
    pub vanishing: VanishingCertificate,
    pub closed_form: ClosedFormCheck,
}

impl SweepCase {
    pub fn pass(&self) -> bool {
        self.vanishing.pass && self.closed_form.pass
    }
}

/// Runs both certificates over every (kind, gamma, n, base point) combination.
/// Cases are ordered kind-major, then gamma, n, and base point.
pub fn certificate_sweep<T: Scalar>(
    gammas: &[T],
    orders: &[usize],
    points: &BoundarySequence<T>,
) -> Result<Vec<SweepCase>> {
    use rayon::prelude::*;
    let pts = points.points();
    let mut cases = Vec::new();
    for kind in FamilyKind::ALL {
        for &g in gammas {
            for &n in orders {
                for &z in &pts {
                    cases.push((kind, g, n, z));
                }
            }
        }
    }
    cases
        .into_par_iter()
        .map(|(kind, g, n, z)| {
            let fam = build_qk_test(kind, z, g, n)?;
            Ok(SweepCase {
                vanishing: verify_vanishing(&fam)?,
                closed_form: check_closed_form(&fam)?,
            })
        })
        .collect()
}

/// The default sweep: 3 kinds x 3 gammas x 3 orders x 12 base points.
pub fn default_certificate_sweep() -> Result<Vec<SweepCase>> {
    certificate_sweep(&SWEEP_GAMMAS, &SWEEP_ORDERS, &BoundarySequence::default())
}

/// Q_K(p, q) norm of a family member, computed after composing with the disk
/// automorphism that moves the base point to 0. Depends on `|base|` only.
///
/// With `b = |base|` the pulled-back density is
/// `b^p |sum_i c_i (gamma+i-1) (1-b zeta)^(gamma+i-2)|^p |1-b zeta|^(-2p(gamma-1)) (1-|zeta|^2)^q`,
/// which stays well conditioned as `b -> 1`.
pub fn qk_family_norm<T: Scalar>(
    family: &QkTestFamily<T>,
    params: &SpaceParams<T>,
    opts: &QkOptions,
) -> Result<NormReport<T>> {
    check_admissible(params)?;
    let b = family.base.norm();
    let g = family.gamma;
    let d = one_minus_sq(family.base);
    let f0 = family
        .coeffs
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (k, &c)| acc + c * d.powi(k as i32 + 1))
        .abs();
    if b == T::zero() || params.kernel().is_zero() {
        return Ok(density_report(
            f0,
            T::zero(),
            GridPoint::polar(T::one(), T::zero()),
            true,
            params,
        ));
    }
    let (p, q) = (params.p(), params.q());
    let two = lit::<T>(2.0);
    let jac_exp = -two * p * (g - T::one());
    let weights: Vec<(T, T)> = family
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let beta = g + from_usize(k);
            (c * beta, beta - T::one())
        })
        .collect();
    let one = Complex::new(T::one(), T::zero());
    let dens = move |zeta: Complex<T>, omz: T| -> Result<T> {
        let base = one - zeta * b;
        let ln = base.ln();
        let mut acc = Complex::new(T::zero(), T::zero());
        for &(w, e) in &weights {
            acc += (ln * e).exp() * w;
        }
        let m = acc.norm() * b;
        if m == T::zero() {
            return Ok(T::zero());
        }
        let jac = if jac_exp == T::zero() {
            T::one()
        } else {
            base.norm().powf(jac_exp)
        };
        Ok(m.powf(p) * jac * omz.powf(q))
    };
    let extra: Vec<GridPoint<T>> = [6, 8, 10]
        .iter()
        .map(|&k| GridPoint::polar(two.powi(-k), T::zero()))
        .collect();
    let (best, arg, converged) = sup_inner_density(&dens, params, opts, extra)?;
    Ok(density_report(f0, best, arg, converged, params))
}

/// `f_{i,a}(z) = ((1 - |a|) / (1 - conj(a) z))^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct HinfTestFamily<T> {
    pub i: usize,
    pub a: Complex<T>,
    pub function: AnalyticFunction<T>,
}

pub fn build_hinf_test<T: Scalar>(i: usize, a: Complex<T>) -> Result<HinfTestFamily<T>> {
    if i < 1 {
        return Err(Error::InvalidParameter("H-infinity test index must be >= 1".into()));
    }
    if !(a.norm() < T::one()) {
        return Err(Error::OutsideDisk {
            re: to_f64(a.re),
            im: to_f64(a.im),
        });
    }
    let c = (T::one() - a.norm()).powi(i as i32);
    let function = MobiusPowerTerm::new(real(c), a, from_usize(i))?.into();
    Ok(HinfTestFamily { i, a, function })
}

/// Condition-number limit above which the delta-family solve is retried.
pub const DELTA_MAX_COND: f64 = 1e12;
/// Exponent shift applied per retry.
const DELTA_SHIFT: f64 = 0.5;
const DELTA_RETRIES: usize = 8;

/// Functions `g_i` with `g_i^(j)(a) = conj(a)^j delta_ij / (1 - |a|^2)^j` for
/// `i, j` in the target order set.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaFamily<T> {
    pub orders: Vec<usize>,
    pub a: Complex<T>,
    /// Exponents of the basis `((1 - |a|^2) / (1 - conj(a) z))^beta_t`.
    pub exponents: Vec<T>,
    pub members: Vec<AnalyticFunction<T>>,
    /// Solution weights: `g_i = sum_t weights[i][t] ((1 - |a|^2) / (1 - conj(a) z))^beta_t`.
    pub weights: Vec<Vec<f64>>,
    pub condition: f64,
    /// Largest relative deviation from the delta pattern, by exact differentiation.
    pub residual: f64,
}

/// Realizes the delta pattern by a linear solve over Möbius power bases; the
/// system `sum_t x_t (beta_t)_j = delta_ij` does not depend on `a`.
pub fn build_hinf_delta_family<T: Scalar>(orders: &[usize], a: Complex<T>) -> Result<DeltaFamily<T>> {
    let k = orders.len();
    if k == 0 {
        return Err(Error::InvalidParameter("delta family needs at least one order".into()));
    }
    let mut sorted = orders.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter("delta family orders must be distinct".into()));
    }
    if !(a.norm() < T::one()) {
        return Err(Error::OutsideDisk {
            re: to_f64(a.re),
            im: to_f64(a.im),
        });
    }
    let mut last_cond = f64::INFINITY;
    for attempt in 0..DELTA_RETRIES {
        let shift = DELTA_SHIFT * attempt as f64;
        let betas: Vec<f64> = (0..k).map(|t| t as f64 + 1.0 + shift).collect();
        let m: Vec<Vec<f64>> = orders
            .iter()
            .map(|&j| betas.iter().map(|&b| rising_factorial(b, j)).collect())
            .collect();
        let Some(inv) = invert(&m) else {
            continue;
        };
        let cond = norm1(&m) * norm1(&inv);
        last_cond = cond;
        if !(cond <= DELTA_MAX_COND) {
            continue;
        }
        let d = one_minus_sq(a);
        let members: Vec<AnalyticFunction<T>> = (0..k)
            .map(|i| {
                let terms = betas
                    .iter()
                    .enumerate()
                    .map(|(t, &b)| {
                        let beta = lit::<T>(b);
                        let c = lit::<T>(inv[t][i]) * d.powf(beta);
                        MobiusPowerTerm::new(real(c), a, beta)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnalyticFunction::Mobius(MobiusPowerSum::new(terms)))
            })
            .collect::<Result<_>>()?;
        let mut residual = 0.0f64;
        for (i, g) in members.iter().enumerate() {
            for (jj, &j) in orders.iter().enumerate() {
                let target = if i == jj {
                    a.conj().powu(j as u32) / d.powi(j as i32)
                } else {
                    Complex::new(T::zero(), T::zero())
                };
                let got = g.eval_derivative(j, a)?;
                let scale = g.term_scale(j, a)?.max(target.norm());
                let dev = (got - target).norm();
                let rel = if scale == T::zero() { dev } else { dev / scale };
                residual = residual.max(to_f64(rel));
            }
        }
        if residual > 1e-8 {
            return Err(Error::Certification {
                what: "delta family pattern".into(),
                residual,
                tol: 1e-8,
            });
        }
        return Ok(DeltaFamily {
            orders: orders.to_vec(),
            a,
            exponents: betas.iter().map(|&b| lit(b)).collect(),
            members,
            weights: (0..k).map(|i| (0..k).map(|t| inv[t][i]).collect()).collect(),
            condition: cond,
            residual,
        });
    }
    Err(Error::IllConditioned { cond: last_cond })
}

/// Angular samples of the boundary sweep in [`DeltaFamily::member_sup`].
const CIRCLE_SAMPLES: usize = 2048;

impl<T: Scalar> DeltaFamily<T> {
    /// `sup_D |g_i|`. The map `z -> (1 - |a|^2) / (1 - conj(a) z)` sends the
    /// disk onto `|u - 1| < |a|`, so this is the maximum of
    /// `|sum_t x_t u^beta_t|` over the circle `u = 1 + |a| e^(i theta)`.
    pub fn member_sup(&self, i: usize) -> T {
        let m = to_f64(self.a.norm());
        let x = &self.weights[i];
        let betas: Vec<f64> = self.exponents.iter().map(|&b| to_f64(b)).collect();
        let g = |theta: f64| {
            let u = Complex::new(1.0 + m * theta.cos(), m * theta.sin());
            let ln = u.ln();
            x.iter()
                .zip(&betas)
                .fold(Complex::new(0.0, 0.0), |acc, (&xt, &b)| acc + (ln * b).exp() * xt)
                .norm()
        };
        let h = std::f64::consts::TAU / CIRCLE_SAMPLES as f64;
        let (mut best, mut arg) = (f64::NEG_INFINITY, 0.0);
        for j in 0..CIRCLE_SAMPLES {
            let th = j as f64 * h;
            let v = g(th);
            if v > best {
                best = v;
                arg = th;
            }
        }
        // golden-section refinement around the best sample
        let (mut lo, mut hi) = (arg - h, arg + h);
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        while hi - lo > 1e-12 {
            let a = hi - ratio * (hi - lo);
            let b = lo + ratio * (hi - lo);
            if g(a) >= g(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        lit(best.max(g(0.5 * (lo + hi))))
    }
}

fn norm1(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    (0..n)
        .map(|c| m.iter().map(|row| row[c].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Gauss-Jordan inverse with partial pivoting; `None` when singular.
fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col] == 0.0 {
            return None;
        }
        a.swap(col, piv);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                if f != 0.0 {
                    for c in 0..2 * n {
                        a[row][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A fixed suite of twelve nonconstant test functions: six polynomials and
/// six Möbius combinations with base points inside the disk.
pub fn sample_suite<T: Scalar>() -> Vec<AnalyticFunction<T>> {
    let c = |re: f64, im: f64| Complex::new(lit::<T>(re), lit::<T>(im));
    let poly = |cs: &[(f64, f64)]| -> AnalyticFunction<T> {
        Polynomial::new(cs.iter().map(|&(re, im)| c(re, im)).collect()).into()
    };
    let term = |cc: Complex<T>, a: Complex<T>, beta: f64| {
        MobiusPowerTerm::new(cc, a, lit(beta)).expect("suite parameters are valid")
    };
    let polar = |m: f64, th: f64| Complex::new(lit::<T>(m * th.cos()), lit::<T>(m * th.sin()));
    vec![
        poly(&[(0.0, 0.0), (1.0, 0.0)]),
        poly(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
        poly(&[(0.0, 0.0), (-0.5, 0.0), (0.0, 0.0), (1.0, 0.0)]),
        poly(&[(1.0, 0.0), (2.0, 0.0), (-1.0 / 3.0, 0.0)]),
        poly(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
        poly(&[
            (0.0, 0.0),
            (0.0, 0.0),
            (0.0, 0.0),
            (0.0, 0.0),
            (0.0, 0.0),
            (0.0, 0.0),
            (0.0, 0.0),
            (0.0, 0.0),
            (0.0, 1.0),
        ]),
        term(c(1.0, 0.0), c(0.5, 0.0), 1.0).into(),
        term(c(1.0, 0.0), c(0.0, 0.9), 2.0).into(),
        term(c(0.5, 0.5), polar(0.7, 1.0), 0.5).into(),
        term(c(0.1, 0.0), c(0.3, 0.0), 3.0).into(),
        term(c(1.0, 0.0), polar(0.8, -2.0), 1.5).into(),
        AnalyticFunction::Mobius(MobiusPowerSum::new(vec![
            term(c(1.0, 0.0), c(0.6, 0.0), 1.0),
            term(c(-0.5, 0.0), polar(0.6, 2.5), 2.0),
        ])),
    ]
}
