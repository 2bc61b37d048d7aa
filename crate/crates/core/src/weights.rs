//! Radial weights, kernels, Q_K parameters and their admissibility checks.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{dyadic_unit_integral, neg_log, IntegralStatus};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// Constants (a, b, delta) of the normality conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalityParams<T> {
    pub a: T,
    pub b: T,
    pub delta: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind<T> {
    /// `mu(r) = (1 - r^2)^alpha`.
    Alpha { alpha: T },
    /// Piecewise-linear through `(r_i, mu_i)`; constant before the first
    /// sample and a power law in `1 - r` (fitted to the last two samples)
    /// beyond the last one.
    Tabulated { radii: Vec<T>, values: Vec<T> },
}

/// A positive radial weight on the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight<T> {
    pub kind: WeightKind<T>,
    pub normality: Option<NormalityParams<T>>,
}

impl<T: Scalar> Weight<T> {
    pub fn alpha(alpha: T) -> Result<Self> {
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "weight exponent alpha = {} must be positive",
                to_f64(alpha)
            )));
        }
        Ok(Self {
            kind: WeightKind::Alpha { alpha },
            normality: None,
        })
    }

    pub fn tabulated(radii: Vec<T>, values: Vec<T>) -> Result<Self> {
        if radii.is_empty() || radii.len() != values.len() {
            return Err(Error::InvalidParameter(
                "tabulated weight needs equally many radii and values, at least one".into(),
            ));
        }
        if radii[0] < T::zero() || *radii.last().unwrap() >= T::one() {
            return Err(Error::InvalidParameter("tabulated radii must lie in [0, 1)".into()));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "tabulated radii must be strictly increasing".into(),
            ));
        }
        if let Some((&r, &v)) = radii.iter().zip(&values).find(|(_, v)| !(**v > T::zero())) {
            return Err(Error::NonPositiveWeight {
                r: to_f64(r),
                value: to_f64(v),
            });
        }
        Ok(Self {
            kind: WeightKind::Tabulated { radii, values },
            normality: None,
        })
    }

    pub fn with_normality(mut self, params: NormalityParams<T>) -> Self {
        self.normality = Some(params);
        self
    }

    /// Exponent alpha for power weights.
    pub fn alpha_exponent(&self) -> Option<T> {
        match self.kind {
            WeightKind::Alpha { alpha } => Some(alpha),
            WeightKind::Tabulated { .. } => None,
        }
    }

    /// `mu` at radius `r`, with `t = 1 - r` supplied separately for precision.
    pub fn value_rt(&self, r: T, t: T) -> T {
        match &self.kind {
            WeightKind::Alpha { alpha } => ((T::one() + r) * t).powf(*alpha),
            WeightKind::Tabulated { radii, values } => tabulated_value(radii, values, r, t),
        }
    }

    pub fn value(&self, r: T) -> T {
        self.value_rt(r, T::one() - r)
    }
}

fn tabulated_value<T: Scalar>(radii: &[T], values: &[T], r: T, t: T) -> T {
    let n = radii.len();
    if r <= radii[0] || n == 1 {
        return values[0];
    }
    let last = n - 1;
    if r >= radii[last] {
        let (t0, t1) = (T::one() - radii[last - 1], T::one() - radii[last]);
        let slope = (values[last] / values[last - 1]).ln() / (t1 / t0).ln();
        return values[last] * (t / t1).powf(slope);
    }
    let j = radii.partition_point(|&x| x <= r);
    let (r0, r1) = (radii[j - 1], radii[j]);
    let s = (r - r0) / (r1 - r0);
    values[j - 1] + (values[j] - values[j - 1]) * s
}

/// `mu(z) = mu(|z|)`.
pub fn weight_at<T: Scalar>(w: &Weight<T>, z: Complex<T>) -> T {
    let r = z.norm();
    w.value_rt(r, T::one() - r)
}

/// Nondecreasing continuous kernel `K: [0, inf) -> [0, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel<T> {
    /// `K(t) = t^s`, `s >= 0`.
    Power { s: T },
    /// `K = c`.
    Constant { c: T },
    /// Piecewise-linear through `(t_i, K_i)`, held constant outside the samples.
    Sampled { ts: Vec<T>, ks: Vec<T> },
}

impl<T: Scalar> Kernel<T> {
    pub fn power(s: T) -> Result<Self> {
        if !(s >= T::zero()) || !s.is_finite() {
            return Err(Error::Kernel(format!(
                "kernel power s = {} must be nonnegative",
                to_f64(s)
            )));
        }
        Ok(Self::Power { s })
    }

    pub fn constant(c: T) -> Result<Self> {
        if !(c >= T::zero()) || !c.is_finite() {
            return Err(Error::Kernel(format!(
                "constant kernel {} must be nonnegative",
                to_f64(c)
            )));
        }
        Ok(Self::Constant { c })
    }

    pub fn sampled(ts: Vec<T>, ks: Vec<T>) -> Result<Self> {
        if ts.is_empty() || ts.len() != ks.len() {
            return Err(Error::Kernel("sampled kernel needs matching, nonempty samples".into()));
        }
        if ts[0] < T::zero() || ts.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Kernel(
                "sampled kernel abscissae must be nonnegative and strictly increasing".into(),
            ));
        }
        if ks.iter().any(|k| !(*k >= T::zero())) {
            return Err(Error::Kernel("sampled kernel values must be nonnegative".into()));
        }
        if let Some(i) = ks.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::Kernel(format!(
                "sampled kernel decreases between t = {} and t = {}",
                to_f64(ts[i]),
                to_f64(ts[i + 1])
            )));
        }
        Ok(Self::Sampled { ts, ks })
    }

    pub fn eval(&self, t: T) -> T {
        match self {
            Self::Power { s } => {
                if *s == T::zero() {
                    T::one()
                } else {
                    t.max(T::zero()).powf(*s)
                }
            }
            Self::Constant { c } => *c,
            Self::Sampled { ts, ks } => {
                if t <= ts[0] {
                    return ks[0];
                }
                let last = ts.len() - 1;
                if t >= ts[last] {
                    return ks[last];
                }
                let j = ts.partition_point(|&x| x <= t);
                let s = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
                ks[j - 1] + (ks[j] - ks[j - 1]) * s
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Constant { c } => *c == T::zero(),
            Self::Sampled { ks, .. } => ks.iter().all(|k| *k == T::zero()),
            Self::Power { .. } => false,
        }
    }
}

/// `(p, q, K)` with the derived exponent `gamma = (q + 2) / p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceParams<T> {
    p: T,
    q: T,
    kernel: Kernel<T>,
    gamma: T,
}

impl<T: Scalar> SpaceParams<T> {
    pub fn new(p: T, q: T, kernel: Kernel<T>) -> Result<Self> {
        if !(p > T::zero()) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!("p = {} must be positive", to_f64(p))));
        }
        if !(q > lit(-2.0)) || !q.is_finite() {
            return Err(Error::InvalidParameter(format!("q = {} must exceed -2", to_f64(q))));
        }
        let gamma = (q + lit(2.0)) / p;
        Ok(Self { p, q, kernel, gamma })
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn kernel(&self) -> &Kernel<T> {
        &self.kernel
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }
}

/// Verdict of an integral admissibility condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralVerdict {
    pub ok: bool,
    pub value: f64,
    pub status: IntegralStatus,
    /// Partial sums of the dyadic refinement, as evidence for the verdict.
    pub witness: Vec<f64>,
    pub extrapolated: bool,
}

fn verdict_from<T: Scalar, G: Fn(T, T) -> Result<T>>(g: G) -> Result<IntegralVerdict> {
    let out = dyadic_unit_integral(g)?;
    Ok(IntegralVerdict {
        ok: out.status == IntegralStatus::Finite,
        value: out.value,
        status: out.status,
        witness: out.partial_sums,
        extrapolated: out.extrapolated,
    })
}

fn checked_kernel<T: Scalar>(k: &Kernel<T>, t: T) -> Result<T> {
    let v = k.eval(t);
    if v.is_nan() || v < T::zero() {
        return Err(Error::Kernel(format!(
            "kernel value {} at t = {}",
            to_f64(v),
            to_f64(t)
        )));
    }
    Ok(v)
}

/// Whether `int_0^1 (1 - r^2)^q K(-log r) r dr` is finite.
pub fn check_kernel_integrability<T: Scalar>(params: &SpaceParams<T>) -> Result<IntegralVerdict> {
    let q = params.q;
    let k = &params.kernel;
    verdict_from(|r: T, t: T| {
        let kv = checked_kernel(k, neg_log(r, t))?;
        if kv == T::zero() {
            return Ok(T::zero());
        }
        Ok(((T::one() + r) * t).powf(q) * kv * r)
    })
}

/// Whether `int_0^1 K(-log r) (1 - r)^min(-1, q) (log 1/(1 - r))^chi r dr` is
/// finite, where `chi = 1` exactly when `q = -1`.
pub fn check_boundary_kernel_condition<T: Scalar>(params: &SpaceParams<T>) -> Result<IntegralVerdict> {
    let q = params.q;
    let exponent = q.min(-T::one());
    let log_factor = q == -T::one();
    let k = &params.kernel;
    verdict_from(|r: T, t: T| {
        let kv = checked_kernel(k, neg_log(r, t))?;
        if kv == T::zero() {
            return Ok(T::zero());
        }
        let mut v = kv * t.powf(exponent) * r;
        if log_factor {
            // log 1/(1 - r) = -log t
            v *= neg_log(t, r);
        }
        Ok(v)
    })
}

/// Which normality condition a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalityCondition {
    /// `mu / (1 - r)^a` must be nonincreasing.
    DecreasingA,
    /// `mu / (1 - r)^a` must tend to 0.
    VanishingA,
    /// `mu / (1 - r)^b` must be nondecreasing.
    IncreasingB,
    /// `mu / (1 - r)^b` must tend to infinity.
    UnboundedB,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalityWitness {
    pub condition: NormalityCondition,
    pub r1: f64,
    pub r2: f64,
    pub v1: f64,
    pub v2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalityVerdict {
    pub ok: bool,
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub witness: Option<NormalityWitness>,
}

/// Resolution of the radial normality grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadialResolution {
    /// Samples per octave of `1 - r` at the coarsest level.
    pub per_octave: usize,
    /// Octaves of `1 - r` covered below `1 - delta`.
    pub octaves: usize,
    /// Number of doublings of `per_octave`.
    pub refinements: usize,
}

impl Default for RadialResolution {
    fn default() -> Self {
        Self {
            per_octave: 8,
            octaves: 24,
            refinements: 3,
        }
    }
}

/// Minimal log-slope (in `log(1 - r)`) over the last quarter of the grid that
/// counts as "tends to 0 / infinity".
pub const LIMIT_SLOPE: f64 = 1e-3;

/// Relative slack for the monotonicity comparisons.
const MONOTONE_SLACK: f64 = 1e-12;

/// Checks the normality conditions for `(a, b, delta)` on a refining grid
/// geometric in `1 - r` over `[delta, 1)`; returns the first violation found.
pub fn check_normal<T: Scalar>(
    w: &Weight<T>,
    a: T,
    b: T,
    delta: T,
    grid: RadialResolution,
) -> Result<NormalityVerdict> {
    if !(a > T::zero() && b > a) {
        return Err(Error::InvalidParameter(format!(
            "normality constants need b > a > 0, got a = {}, b = {}",
            to_f64(a),
            to_f64(b)
        )));
    }
    if !(delta >= T::zero() && delta < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "normality delta = {} must lie in [0, 1)",
            to_f64(delta)
        )));
    }
    let verdict = |witness: Option<NormalityWitness>| NormalityVerdict {
        ok: witness.is_none(),
        a: to_f64(a),
        b: to_f64(b),
        delta: to_f64(delta),
        witness,
    };
    let slack = lit::<T>(MONOTONE_SLACK);
    for level in 0..=grid.refinements {
        let per_octave = grid.per_octave << level;
        let count = per_octave * grid.octaves;
        let top = T::one() - delta;
        let mut pts = Vec::with_capacity(count + 1);
        for k in 0..=count {
            let t = top * lit::<T>(2.0).powf(-from_usize::<T>(k) / from_usize::<T>(per_octave));
            let r = T::one() - t;
            let mu = w.value_rt(r, t);
            if !(mu > T::zero()) {
                return Err(Error::NonPositiveWeight {
                    r: to_f64(r),
                    value: to_f64(mu),
                });
            }
            // work with logarithms so deep ratios do not overflow
            let ln_t = t.ln();
            pts.push((r, mu.ln() - a * ln_t, mu.ln() - b * ln_t, ln_t));
        }
        for pair in pts.windows(2) {
            let (r1, la1, lb1, _) = pair[0];
            let (r2, la2, lb2, _) = pair[1];
            if la2 > la1 + slack * la1.abs().max(T::one()) {
                return Ok(verdict(Some(NormalityWitness {
                    condition: NormalityCondition::DecreasingA,
                    r1: to_f64(r1),
                    r2: to_f64(r2),
                    v1: to_f64(la1.exp()),
                    v2: to_f64(la2.exp()),
                })));
            }
            if lb2 < lb1 - slack * lb1.abs().max(T::one()) {
                return Ok(verdict(Some(NormalityWitness {
                    condition: NormalityCondition::IncreasingB,
                    r1: to_f64(r1),
                    r2: to_f64(r2),
                    v1: to_f64(lb1.exp()),
                    v2: to_f64(lb2.exp()),
                })));
            }
        }
        let (r1, la1, lb1, lt1) = pts[count - count / 4];
        let (r2, la2, lb2, lt2) = pts[count];
        let run = lt2 - lt1;
        let limit = lit::<T>(LIMIT_SLOPE);
        if !((la2 - la1) / run >= limit) {
            return Ok(verdict(Some(NormalityWitness {
                condition: NormalityCondition::VanishingA,
                r1: to_f64(r1),
                r2: to_f64(r2),
                v1: to_f64(la1.exp()),
                v2: to_f64(la2.exp()),
            })));
        }
        if !((lb2 - lb1) / run <= -limit) {
            return Ok(verdict(Some(NormalityWitness {
                condition: NormalityCondition::UnboundedB,
                r1: to_f64(r1),
                r2: to_f64(r2),
                v1: to_f64(lb1.exp()),
                v2: to_f64(lb2.exp()),
            })));
        }
    }
    Ok(verdict(None))
}

/// Candidate thresholds tried by [`check_normal_default`].
pub const DELTA_SWEEP: [f64; 7] = [0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999];

/// Normality check with the weight's own constants, or for power weights the
/// sweep `a = alpha / 2`, `b = 2 alpha` over [`DELTA_SWEEP`]; returns the first
/// passing verdict, else the verdict at the last threshold.
pub fn check_normal_default<T: Scalar>(w: &Weight<T>) -> Result<NormalityVerdict> {
    let grid = RadialResolution::default();
    if let Some(np) = w.normality {
        return check_normal(w, np.a, np.b, np.delta, grid);
    }
    let alpha = w
        .alpha_exponent()
        .ok_or_else(|| Error::InvalidParameter("tabulated weight needs explicit normality constants".into()))?;
    let (a, b) = (alpha * lit(0.5), alpha * lit(2.0));
    let mut last = None;
    for d in DELTA_SWEEP {
        let v = check_normal(w, a, b, lit(d), grid)?;
        if v.ok {
            return Ok(v);
        }
        last = Some(v);
    }
    Ok(last.expect("sweep is nonempty"))
}
