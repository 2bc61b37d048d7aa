use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, rising_factorial, to_f64, Scalar};

/// `z -> c (1 - conj(a) z)^(-beta)` on the principal branch.
///
/// For `|a| <= 1` and `|z| < 1` the base `1 - conj(a) z` has positive real
/// part, so the principal power is analytic on the disk. The k-th
/// derivative is `c (beta)_k conj(a)^k (1 - conj(a) z)^(-beta - k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusPowerTerm<T> {
    pub c: Complex<T>,
    pub a: Complex<T>,
    pub beta: T,
}

impl<T: Scalar> MobiusPowerTerm<T> {
    pub fn new(c: Complex<T>, a: Complex<T>, beta: T) -> Result<Self> {
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mobius exponent beta = {} must be positive",
                to_f64(beta)
            )));
        }
        if a.norm() > T::one() + T::epsilon() * lit(8.0) {
            return Err(Error::InvalidParameter(format!(
                "mobius base point modulus {} exceeds 1",
                to_f64(a.norm())
            )));
        }
        Ok(Self { c, a, beta })
    }

    /// Caller guarantees `|z| < 1`.
    pub fn eval_derivative(&self, k: usize, z: Complex<T>) -> Result<Complex<T>> {
        let abar = self.a.conj();
        let base = Complex::new(T::one(), T::zero()) - abar * z;
        if base.re == T::zero() && base.im == T::zero() {
            return Err(Error::PoleContact {
                re: to_f64(z.re),
                im: to_f64(z.im),
            });
        }
        if self.c.re == T::zero() && self.c.im == T::zero() {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        let k_t = T::from_usize(k).expect("order fits scalar");
        let power = base.powf(-(self.beta + k_t));
        Ok(self.c * rising_factorial(self.beta, k) * abar.powu(k as u32) * power)
    }

    /// The derivative as a term of the same shape: `c beta conj(a)`, exponent `beta + 1`.
    pub fn differentiate(&self) -> Self {
        Self {
            c: self.c * self.beta * self.a.conj(),
            a: self.a,
            beta: self.beta + T::one(),
        }
    }

    /// `z -> term(r z)`, which is the same shape with base point `r a`.
    pub fn dilate(&self, r: T) -> Self {
        Self {
            c: self.c,
            a: self.a * r,
            beta: self.beta,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.re == T::zero() && self.c.im == T::zero()
    }
}

/// Finite sum of Möbius power terms; closed under differentiation and
/// linear combination.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MobiusPowerSum<T> {
    pub terms: Vec<MobiusPowerTerm<T>>,
}

impl<T: Scalar> MobiusPowerSum<T> {
    pub fn new(terms: Vec<MobiusPowerTerm<T>>) -> Self {
        Self { terms }
    }

    pub fn eval_derivative(&self, k: usize, z: Complex<T>) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for t in &self.terms {
            acc += t.eval_derivative(k, z)?;
        }
        Ok(acc)
    }

    /// Largest single-term magnitude of the k-th derivative at `z`; the
    /// natural scale for judging cancellation in the sum.
    pub fn term_scale(&self, k: usize, z: Complex<T>) -> Result<T> {
        let mut scale = T::zero();
        for t in &self.terms {
            scale = scale.max(t.eval_derivative(k, z)?.norm());
        }
        Ok(scale)
    }

    pub fn differentiate(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(MobiusPowerTerm::differentiate)
                .filter(|t| !t.is_zero())
                .collect(),
        )
    }

    pub fn dilate(&self, r: T) -> Self {
        Self::new(self.terms.iter().map(|t| t.dilate(r)).collect())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| MobiusPowerTerm { c: t.c * s, ..*t })
                .filter(|t| !t.is_zero())
                .collect(),
        )
    }

    /// Adds `s * other`, merging terms with identical base point and exponent.
    pub(crate) fn add_scaled(&mut self, s: Complex<T>, other: &Self) {
        for t in &other.terms {
            let c = t.c * s;
            match self.terms.iter_mut().find(|u| u.a == t.a && u.beta == t.beta) {
                Some(u) => u.c += c,
                None => self.terms.push(MobiusPowerTerm { c, ..*t }),
            }
        }
        self.terms.retain(|t| !t.is_zero());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn closed_form_values() {
        let t = MobiusPowerTerm::new(c(0.75), c(0.5), 1.0).unwrap();
        assert!((t.eval_derivative(0, c(0.0)).unwrap() - c(0.75)).norm() < 1e-15);
        assert!((t.eval_derivative(0, c(0.5)).unwrap() - c(1.0)).norm() < 1e-15);
        let unit = MobiusPowerTerm::new(c(1.0), c(0.5), 1.0).unwrap();
        assert!((unit.eval_derivative(1, c(0.0)).unwrap() - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn fractional_exponent_uses_principal_branch() {
        let t = MobiusPowerTerm::new(c(1.0), Complex::new(0.0, 0.9), 0.5).unwrap();
        let z = Complex::new(0.0, 0.9);
        // 1 - conj(0.9i) * 0.9i = 1 - 0.81
        let v = t.eval_derivative(0, z).unwrap();
        assert!((v - c(0.19_f64.powf(-0.5))).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MobiusPowerTerm::new(c(1.0), c(0.5), 0.0).is_err());
        assert!(MobiusPowerTerm::new(c(1.0), c(1.5), 1.0).is_err());
        assert!(MobiusPowerTerm::new(c(1.0), c(1.0), 1.0).is_ok());
    }

    #[test]
    fn boundary_base_point_evaluates_inside() {
        let t = MobiusPowerTerm::new(c(1.0), c(1.0), 2.0).unwrap();
        let v = t.eval_derivative(0, c(0.5)).unwrap();
        assert!((v - c(4.0)).norm() < 1e-12);
        assert!(matches!(t.eval_derivative(0, c(1.0)), Err(Error::PoleContact { .. })));
    }

    #[test]
    fn merging_cancels_identical_terms() {
        let t = MobiusPowerTerm::new(c(2.0), c(0.3), 1.5).unwrap();
        let mut s = MobiusPowerSum::new(vec![t]);
        s.add_scaled(c(-1.0), &MobiusPowerSum::new(vec![t]));
        assert!(s.terms.is_empty());
    }
}
