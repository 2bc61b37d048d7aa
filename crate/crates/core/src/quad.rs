//! Quadrature building blocks: Gauss-Legendre panels, nested periodic
//! trapezoid, and a dyadic endpoint-refining integrator for (0, 1).

use serde::Serialize;

use crate::error::Result;
use crate::scalar::{from_usize, lit, CompensatedSum, Scalar};

/// Gauss-Legendre rule on [-1, 1]; nodes from Newton iteration on P_n in f64.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(lit(x));
            weights.push(lit(2.0 / ((1.0 - x * x) * dp * dp)));
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * lit(0.5);
        let mid = (a + b) * lit(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F, a: T, b: T) -> T {
        let mut acc = CompensatedSum::new();
        for (x, w) in self.mapped(a, b) {
            acc.add(w * f(x));
        }
        acc.value()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Outcome of [`periodic_trapezoid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicOutcome<T> {
    /// Integral over one period of length 2 pi.
    pub value: T,
    pub nodes: usize,
    pub converged: bool,
}

/// Trapezoid rule on [0, 2 pi) for a periodic integrand, doubling the node
/// count (reusing old nodes) until the relative change drops below `rtol`.
pub fn periodic_trapezoid<T, F>(mut f: F, n0: usize, n_max: usize, rtol: T) -> Result<PeriodicOutcome<T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    let tau = T::PI() * lit(2.0);
    let mut n = n0.max(2);
    let mut sum = CompensatedSum::new();
    for j in 0..n {
        sum.add(f(tau * from_usize::<T>(j) / from_usize::<T>(n))?);
    }
    let mut value = sum.value() * tau / from_usize::<T>(n);
    while n < n_max {
        // odd nodes of the doubled grid
        for j in 0..n {
            let theta = tau * (from_usize::<T>(2 * j + 1)) / from_usize::<T>(2 * n);
            sum.add(f(theta)?);
        }
        n *= 2;
        let next = sum.value() * tau / from_usize::<T>(n);
        let change = (next - value).abs();
        value = next;
        if change <= rtol * value.abs() || value == T::zero() {
            return Ok(PeriodicOutcome {
                value,
                nodes: n,
                converged: true,
            });
        }
    }
    Ok(PeriodicOutcome {
        value,
        nodes: n,
        converged: false,
    })
}

/// Verdict of a dyadic integrability check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralStatus {
    Finite,
    Divergent,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicOutcome {
    pub status: IntegralStatus,
    pub value: f64,
    /// Partial sums after each refinement.
    pub partial_sums: Vec<f64>,
    /// Set when the value includes a geometric tail extrapolation.
    pub extrapolated: bool,
}

/// Relative increment below which a refinement counts as converged.
pub const DYADIC_RTOL: f64 = 1e-12;
/// Growth factor that, sustained over three refinements, signals divergence.
pub const DIVERGENCE_FACTOR: f64 = 1.5;

/// Integral over (0, 1) of an integrand given as `g(r, 1 - r)`.
///
/// The interval is split into dyadic cells `[2^-(l+1), 2^-l]` in `r` toward
/// 0 and in `t = 1 - r` toward 1; passing `t` separately keeps full relative
/// precision in factors like `(1 - r)^s` deep inside the boundary layer.
/// Refinement j covers levels `l <= 8 * 2^j` at both ends. Of the pair,
/// only the smaller member is exact; see [`neg_log`].
pub fn dyadic_unit_integral<T, G>(g: G) -> Result<DyadicOutcome>
where
    T: Scalar,
    G: Fn(T, T) -> Result<T>,
{
    let rule = GaussLegendre::<T>::new(16);
    let depth_cap = (-(T::min_positive_value().log2()) - lit(8.0)).to_usize().unwrap_or(100);
    let cell = |l: usize| -> Result<T> {
        let hi = lit::<T>(0.5).powi(l as i32);
        let lo = hi * lit(0.5);
        let mut acc = CompensatedSum::new();
        for (x, w) in rule.mapped(lo, hi) {
            acc.add(w * g(x, T::one() - x)?);
            acc.add(w * g(T::one() - x, x)?);
        }
        Ok(acc.value())
    };

    let mut total = CompensatedSum::<T>::new();
    let mut partial_sums: Vec<f64> = Vec::new();
    let mut increments: Vec<f64> = Vec::new();
    let mut level = 0usize;
    let mut upto = 8usize;
    loop {
        let before = total.value();
        while level < upto.min(depth_cap) {
            level += 1;
            total.add(cell(level)?);
        }
        let s = total.value().to_f64().unwrap_or(f64::NAN);
        let inc = s - before.to_f64().unwrap_or(f64::NAN);
        if !s.is_finite() {
            return Ok(DyadicOutcome {
                status: IntegralStatus::Divergent,
                value: f64::INFINITY,
                partial_sums,
                extrapolated: false,
            });
        }
        partial_sums.push(s);
        increments.push(inc.abs());
        if partial_sums.len() >= 2 && inc.abs() <= DYADIC_RTOL * s.abs() {
            return Ok(DyadicOutcome {
                status: IntegralStatus::Finite,
                value: s,
                partial_sums,
                extrapolated: false,
            });
        }
        if sustained_growth(&partial_sums) || stalled_increments(&increments) {
            return Ok(DyadicOutcome {
                status: IntegralStatus::Divergent,
                value: f64::INFINITY,
                partial_sums,
                extrapolated: false,
            });
        }
        if level >= depth_cap {
            break;
        }
        upto *= 2;
    }
    // depth exhausted: accept only a clearly geometric tail
    let n = increments.len();
    if n >= 3 {
        let q = increments[n - 1] / increments[n - 2];
        let q_prev = increments[n - 2] / increments[n - 3];
        if q < 0.5 && q_prev < 1.0 {
            let s = partial_sums[n - 1];
            let tail = increments[n - 1] * q / (1.0 - q);
            return Ok(DyadicOutcome {
                status: IntegralStatus::Finite,
                value: s + tail,
                partial_sums,
                extrapolated: true,
            });
        }
    }
    let value = *partial_sums.last().unwrap_or(&f64::NAN);
    Ok(DyadicOutcome {
        status: IntegralStatus::Unresolved,
        value,
        partial_sums,
        extrapolated: false,
    })
}

/// `-log r` from the pair `(r, 1 - r)`, using whichever member is exact.
pub fn neg_log<T: Scalar>(r: T, t: T) -> T {
    if r < lit(0.5) {
        -r.ln()
    } else {
        -(-t).ln_1p()
    }
}

/// Each of the last three refinements grew the partial sum by more than the factor.
fn sustained_growth(sums: &[f64]) -> bool {
    sums.len() >= 4
        && sums[sums.len() - 4..]
            .windows(2)
            .all(|w| w[0] > 0.0 && w[1] > DIVERGENCE_FACTOR * w[0])
}

/// Increments no longer shrinking over the last three refinements while
/// still being a visible fraction of the sum: the hallmark of log-type growth.
fn stalled_increments(inc: &[f64]) -> bool {
    inc.len() >= 4
        && inc[inc.len() - 3..]
            .iter()
            .zip(&inc[inc.len() - 4..inc.len() - 1])
            .all(|(now, prev)| *now > 0.0 && *now >= 0.9 * prev)
}
