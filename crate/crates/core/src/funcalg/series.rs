use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{falling_factorial, from_usize, lit, to_f64, Scalar};

/// Truncated power series `sum_j c_j z^j`, evaluated only on `|z| <= rho_max`.
///
/// The coefficient list is treated as the head of an infinite series. Each
/// evaluation estimates the neglected tail from a geometric fit of the
/// trailing coefficients and refuses to answer when that estimate exceeds
/// `tail_tol * max(1, |value|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<T> {
    coeffs: Vec<Complex<T>>,
    rho_max: T,
    tail_tol: T,
}

/// A series value together with its estimated truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<T> {
    pub value: Complex<T>,
    pub tail_bound: T,
}

/// Number of trailing coefficients used to fit the geometric decay.
const FIT_WINDOW: usize = 6;

impl<T: Scalar> PowerSeries<T> {
    pub fn new(coeffs: Vec<Complex<T>>, rho_max: T) -> Result<Self> {
        if !(rho_max > T::zero() && rho_max < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "series guard radius {} must lie in (0, 1)",
                to_f64(rho_max)
            )));
        }
        Ok(Self {
            coeffs,
            rho_max,
            tail_tol: lit(1e-8),
        })
    }

    pub fn with_tail_tol(mut self, tol: T) -> Self {
        self.tail_tol = tol;
        self
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Truncation order N (number of stored coefficients).
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn rho_max(&self) -> T {
        self.rho_max
    }

    pub fn tail_tol(&self) -> T {
        self.tail_tol
    }

    /// Geometric decay fit `|c_j| ~ C q^j` over the trailing window; `None`
    /// when the trailing coefficients vanish (the series terminates).
    fn decay_fit(&self) -> Option<(T, T)> {
        let n = self.coeffs.len();
        let start = n.saturating_sub(FIT_WINDOW);
        let pts: Vec<(T, T)> = self.coeffs[start..]
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > T::zero())
            .map(|(i, c)| (from_usize::<T>(start + i), c.norm().ln()))
            .collect();
        if self.coeffs[start..].iter().all(|c| c.norm() == T::zero()) {
            return None;
        }
        if pts.len() < 2 {
            // single surviving coefficient: assume no decay information, q = 1
            let (j, lc) = pts[0];
            return Some((lc.exp() / T::one().max(j), T::one()));
        }
        let m = from_usize::<T>(pts.len());
        let mx = pts.iter().map(|p| p.0).sum::<T>() / m;
        let my = pts.iter().map(|p| p.1).sum::<T>() / m;
        let sxx = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<T>();
        let sxy = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<T>();
        let slope = sxy / sxx;
        // envelope through the largest residual so the fit bounds every point
        let lift = pts
            .iter()
            .map(|p| p.1 - (my + slope * (p.0 - mx)))
            .fold(T::zero(), T::max);
        let log_c = my - slope * mx + lift;
        Some((log_c.exp(), slope.exp()))
    }

    /// Estimated modulus of the neglected tail of the k-th derivative at radius r.
    fn tail_estimate(&self, k: usize, r: T) -> T {
        let n = self.coeffs.len();
        let Some((c, q)) = self.decay_fit() else {
            return T::zero();
        };
        let s = q * r;
        if n <= k {
            return if s < T::one() { T::zero() } else { T::infinity() };
        }
        // successive tail terms grow at most by s (j+1)/(j+1-k) <= s (n+1)/(n+1-k)
        let ratio = s * from_usize::<T>(n + 1) / from_usize::<T>(n + 1 - k);
        if ratio >= T::one() {
            return T::infinity();
        }
        let first = c * q.powi(n as i32) * falling_factorial::<T>(n, k) * r.powi((n - k) as i32);
        first / (T::one() - ratio)
    }

    pub fn eval_derivative_with_tail(&self, k: usize, z: Complex<T>) -> Result<SeriesValue<T>> {
        let r = z.norm();
        if r > self.rho_max {
            return Err(Error::GuardRadius {
                modulus: to_f64(r),
                rho_max: to_f64(self.rho_max),
            });
        }
        let zero = Complex::new(T::zero(), T::zero());
        let value = if self.coeffs.len() <= k {
            zero
        } else {
            self.coeffs
                .iter()
                .enumerate()
                .skip(k)
                .rev()
                .fold(zero, |acc, (j, &c)| acc * z + c * falling_factorial::<T>(j, k))
        };
        let tail_bound = self.tail_estimate(k, r);
        Ok(SeriesValue { value, tail_bound })
    }

    pub fn eval_derivative(&self, k: usize, z: Complex<T>) -> Result<Complex<T>> {
        let sv = self.eval_derivative_with_tail(k, z)?;
        let tol = self.tail_tol * T::one().max(sv.value.norm());
        if !(sv.tail_bound <= tol) {
            return Err(Error::SeriesTail {
                bound: to_f64(sv.tail_bound),
                tol: to_f64(tol),
            });
        }
        Ok(sv.value)
    }

    pub fn derivative(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * from_usize::<T>(j))
                .collect(),
            ..*self
        }
    }

    /// `z -> f(r z)`; the guard radius widens to `rho_max / r`, kept below 1.
    pub fn dilate(&self, r: T) -> Self {
        let mut scale = T::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = c * scale;
                scale *= r;
                out
            })
            .collect();
        let widened = (self.rho_max / r).min(T::one() - T::epsilon());
        Self {
            coeffs,
            rho_max: widened,
            tail_tol: self.tail_tol,
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
            ..*self
        }
    }

    pub(crate) fn add_scaled(&mut self, s: Complex<T>, coeffs: &[Complex<T>]) {
        if self.coeffs.len() < coeffs.len() {
            self.coeffs.resize(coeffs.len(), Complex::new(T::zero(), T::zero()));
        }
        for (dst, &c) in self.coeffs.iter_mut().zip(coeffs) {
            *dst += c * s;
        }
    }

    pub(crate) fn tighten(&mut self, rho_max: T, tail_tol: T) {
        self.rho_max = self.rho_max.min(rho_max);
        self.tail_tol = self.tail_tol.min(tail_tol);
    }
}
