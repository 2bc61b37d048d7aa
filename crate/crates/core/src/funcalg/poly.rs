use num_complex::Complex;

use crate::scalar::{falling_factorial, Scalar};

/// Polynomial with complex coefficients, constant term first.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == T::zero() && c.im == T::zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); k + 1];
        coeffs[k] = Complex::new(T::one(), T::zero());
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.eval_derivative(0, z)
    }

    /// k-th derivative by Horner's rule on the differentiated coefficients.
    pub fn eval_derivative(&self, k: usize, z: Complex<T>) -> Complex<T> {
        let zero = Complex::new(T::zero(), T::zero());
        if self.coeffs.len() <= k {
            return zero;
        }
        self.coeffs
            .iter()
            .enumerate()
            .skip(k)
            .rev()
            .fold(zero, |acc, (j, &c)| acc * z + c * falling_factorial::<T>(j, k))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * falling_factorial::<T>(j, 1))
                .collect(),
        )
    }

    /// `z -> p(r z)`.
    pub fn dilate(&self, r: T) -> Self {
        let mut scale = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            out.push(c * scale);
            scale *= r;
        }
        Self::new(out)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub(crate) fn add_scaled(&mut self, s: Complex<T>, other: &Self) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs
                .resize(other.coeffs.len(), Complex::new(T::zero(), T::zero()));
        }
        for (dst, &c) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *dst += c * s;
        }
        *self = Self::new(std::mem::take(&mut self.coeffs));
    }
}
