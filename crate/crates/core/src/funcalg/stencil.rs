//! Contour difference stencil used as an independent derivative oracle.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// Default number of stencil nodes on the circle.
pub const DEFAULT_NODES: usize = 32;

/// k-th derivative of `f` at `z` from `nodes` samples on the circle `|w - z| = h`:
/// `k! / (N h^k) * sum_j f(z + h w^j) w^(-jk)` with `w = exp(2 pi i / N)`.
///
/// The discrete Cauchy formula: aliasing error is `O(h^N)` for analytic `f`,
/// rounding error grows like `eps * max|f| * k! / h^k`.
pub fn contour_derivative<T, F>(f: F, k: usize, z: Complex<T>, h: T, nodes: usize) -> Result<Complex<T>>
where
    T: Scalar,
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    if !(h > T::zero()) || z.norm() + h >= T::one() {
        return Err(Error::StencilOutside {
            modulus: to_f64(z.norm()),
            step: to_f64(h),
        });
    }
    if nodes <= k {
        return Err(Error::InvalidParameter(format!(
            "stencil with {nodes} nodes cannot resolve order {k}"
        )));
    }
    let n_t = from_usize::<T>(nodes);
    let tau = T::PI() * lit(2.0);
    let mut acc = Complex::new(T::zero(), T::zero());
    for j in 0..nodes {
        let theta = tau * from_usize::<T>(j) / n_t;
        let node = Complex::from_polar(T::one(), theta);
        let back = Complex::from_polar(T::one(), -theta * from_usize::<T>(k));
        acc += f(z + node * h)? * back;
    }
    let fact = (1..=k).fold(T::one(), |a, i| a * from_usize::<T>(i));
    Ok(acc * (fact / (n_t * h.powi(k as i32))))
}
