//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point type the library computes in: `f32` or `f64`.
///
/// The tolerances quoted throughout the crate (1e-9 certificates, 1e-12
/// linearity, ...) are meaningful for `f64`; `f32` works with every routine
/// but only at single-precision accuracy.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Relative tolerance used for "equals zero" certificates at this precision.
    fn certificate_tol() -> Self {
        let floor = lit::<Self>(1e-9);
        let eps_based = Self::epsilon() * lit(1e4);
        floor.max(eps_based)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Lossy conversion to `f64` for reporting and error messages.
#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `usize` to scalar.
#[inline]
pub fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("integer representable in scalar type")
}

/// Real number promoted to a complex one.
#[inline]
pub fn real<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Rising factorial (beta)_k = beta (beta + 1) ... (beta + k - 1), with (beta)_0 = 1.
pub fn rising_factorial<T: Scalar>(beta: T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, j| acc * (beta + from_usize(j)))
}

/// Falling factorial j (j - 1) ... (j - k + 1); zero when k > j.
pub fn falling_factorial<T: Scalar>(j: usize, k: usize) -> T {
    if k > j {
        return T::zero();
    }
    (0..k).fold(T::one(), |acc, i| acc * from_usize(j - i))
}

/// Neumaier-compensated running sum; summation order is the call order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: Scalar> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
