//! Analytic functions on the unit disk with exact higher-order differentiation.

mod mobius;
mod poly;
mod series;
mod stencil;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub use mobius::{MobiusPowerSum, MobiusPowerTerm};
pub use poly::Polynomial;
pub use series::{PowerSeries, SeriesValue};
pub use stencil::{contour_derivative, DEFAULT_NODES};

use crate::error::{Error, Result};
use crate::scalar::{real, to_f64, Scalar};

/// Default cap on derivative orders.
pub const DEFAULT_MAX_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub max_order: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

/// A function analytic on the disk in one of three representations.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFunction<T> {
    Poly(Polynomial<T>),
    Mobius(MobiusPowerSum<T>),
    Series(PowerSeries<T>),
}

impl<T: Scalar> From<Polynomial<T>> for AnalyticFunction<T> {
    fn from(p: Polynomial<T>) -> Self {
        Self::Poly(p)
    }
}

impl<T: Scalar> From<MobiusPowerSum<T>> for AnalyticFunction<T> {
    fn from(m: MobiusPowerSum<T>) -> Self {
        Self::Mobius(m)
    }
}

impl<T: Scalar> From<MobiusPowerTerm<T>> for AnalyticFunction<T> {
    fn from(t: MobiusPowerTerm<T>) -> Self {
        Self::Mobius(MobiusPowerSum::new(vec![t]))
    }
}

impl<T: Scalar> From<PowerSeries<T>> for AnalyticFunction<T> {
    fn from(s: PowerSeries<T>) -> Self {
        Self::Series(s)
    }
}

impl<T: Scalar> AnalyticFunction<T> {
    pub fn constant(c: Complex<T>) -> Self {
        Self::Poly(Polynomial::constant(c))
    }

    /// The identity map `z -> z`.
    pub fn identity() -> Self {
        Self::Poly(Polynomial::monomial(1))
    }

    pub fn zero() -> Self {
        Self::Poly(Polynomial::zero())
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.eval_derivative(0, z)
    }

    pub fn eval_derivative(&self, k: usize, z: Complex<T>) -> Result<Complex<T>> {
        self.eval_derivative_with(k, z, EvalOptions::default())
    }

    pub fn eval_derivative_with(&self, k: usize, z: Complex<T>, opts: EvalOptions) -> Result<Complex<T>> {
        if k > opts.max_order {
            return Err(Error::OrderCap {
                order: k,
                max: opts.max_order,
            });
        }
        self.check_domain(z)?;
        match self {
            Self::Poly(p) => Ok(p.eval_derivative(k, z)),
            Self::Mobius(m) => m.eval_derivative(k, z),
            Self::Series(s) => s.eval_derivative(k, z),
        }
    }

    fn check_domain(&self, z: Complex<T>) -> Result<()> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::OutsideDisk {
                re: to_f64(z.re),
                im: to_f64(z.im),
            });
        }
        if z.norm() < T::one() {
            return Ok(());
        }
        if let Self::Mobius(m) = self {
            if m.terms.iter().any(|t| t.a.conj() * z == real(T::one())) {
                return Err(Error::PoleContact {
                    re: to_f64(z.re),
                    im: to_f64(z.im),
                });
            }
        }
        Err(Error::OutsideDisk {
            re: to_f64(z.re),
            im: to_f64(z.im),
        })
    }

    /// Largest single-term magnitude of the k-th derivative at `z`; equals the
    /// value's modulus for representations without separate terms.
    pub fn term_scale(&self, k: usize, z: Complex<T>) -> Result<T> {
        match self {
            Self::Mobius(m) => {
                self.check_domain(z)?;
                m.term_scale(k, z)
            }
            _ => Ok(self.eval_derivative(k, z)?.norm()),
        }
    }

    pub fn derivative(&self) -> Self {
        match self {
            Self::Poly(p) => Self::Poly(p.derivative()),
            Self::Mobius(m) => Self::Mobius(m.differentiate()),
            Self::Series(s) => Self::Series(s.derivative()),
        }
    }

    /// `z -> f(r z)`.
    pub fn dilate(&self, r: T) -> Self {
        match self {
            Self::Poly(p) => Self::Poly(p.dilate(r)),
            Self::Mobius(m) => Self::Mobius(m.dilate(r)),
            Self::Series(s) => Self::Series(s.dilate(r)),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        match self {
            Self::Poly(p) => Self::Poly(p.scale(s)),
            Self::Mobius(m) => Self::Mobius(m.scale(s)),
            Self::Series(x) => Self::Series(x.scale(s)),
        }
    }

    /// True when the representation is identically zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Self::Poly(p) => p.is_zero(),
            Self::Mobius(m) => m.terms.is_empty(),
            Self::Series(s) => s.coeffs().iter().all(|c| c.norm() == T::zero()),
        }
    }

    /// Whether the k-th derivative is known to vanish identically.
    pub fn derivative_vanishes(&self, k: usize) -> bool {
        match self {
            Self::Poly(p) => p.degree().is_none_or(|d| d < k),
            Self::Mobius(m) => k > 0 && m.terms.iter().all(|t| t.a.norm() == T::zero()) || m.terms.is_empty(),
            Self::Series(s) => s.coeffs().iter().skip(k).all(|c| c.norm() == T::zero()),
        }
    }

    /// Nonnegative radius up to which evaluation is allowed.
    pub fn domain_radius(&self) -> T {
        match self {
            Self::Series(s) => s.rho_max(),
            _ => T::one(),
        }
    }

    fn as_constant(&self) -> Option<Complex<T>> {
        match self {
            Self::Poly(p) if p.degree().is_none_or(|d| d == 0) => {
                Some(p.coeffs().first().copied().unwrap_or_else(|| real(T::zero())))
            }
            _ => None,
        }
    }
}

/// Pointwise `sum_i coeffs[i] * fs[i]`.
///
/// Polynomials combine with series (promoted); constant polynomials also
/// combine with Möbius sums as `a = 0` terms. Other mixtures are rejected.
pub fn linear_combine<T: Scalar>(coeffs: &[Complex<T>], fs: &[AnalyticFunction<T>]) -> Result<AnalyticFunction<T>> {
    if fs.is_empty() {
        return Err(Error::EmptyCombination);
    }
    if coeffs.len() != fs.len() {
        return Err(Error::InvalidParameter(format!(
            "{} coefficients for {} functions",
            coeffs.len(),
            fs.len()
        )));
    }
    let has_series = fs.iter().any(|f| matches!(f, AnalyticFunction::Series(_)));
    let has_mobius = fs.iter().any(|f| matches!(f, AnalyticFunction::Mobius(_)));
    if has_series && has_mobius {
        return Err(Error::IncompatibleRepresentations("mobius", "series"));
    }
    if has_series {
        let (rho, tol) = fs
            .iter()
            .filter_map(|f| match f {
                AnalyticFunction::Series(s) => Some((s.rho_max(), s.tail_tol())),
                _ => None,
            })
            .fold((T::one(), T::infinity()), |(r, t), (r2, t2)| (r.min(r2), t.min(t2)));
        let mut acc = PowerSeries::new(Vec::new(), rho)?;
        acc.tighten(rho, tol);
        for (&c, f) in coeffs.iter().zip(fs) {
            match f {
                AnalyticFunction::Poly(p) => acc.add_scaled(c, p.coeffs()),
                AnalyticFunction::Series(s) => acc.add_scaled(c, s.coeffs()),
                AnalyticFunction::Mobius(_) => unreachable!(),
            }
        }
        return Ok(AnalyticFunction::Series(acc));
    }
    if has_mobius {
        let mut acc = MobiusPowerSum::default();
        for (&c, f) in coeffs.iter().zip(fs) {
            match f {
                AnalyticFunction::Mobius(m) => acc.add_scaled(c, m),
                AnalyticFunction::Poly(_) => {
                    let k = f
                        .as_constant()
                        .ok_or(Error::IncompatibleRepresentations("mobius", "polynomial"))?;
                    let term = MobiusPowerTerm::new(k, real(T::zero()), T::one())?;
                    acc.add_scaled(c, &MobiusPowerSum::new(vec![term]));
                }
                AnalyticFunction::Series(_) => unreachable!(),
            }
        }
        return Ok(AnalyticFunction::Mobius(acc));
    }
    let mut acc = Polynomial::zero();
    for (&c, f) in coeffs.iter().zip(fs) {
        if let AnalyticFunction::Poly(p) = f {
            acc.add_scaled(c, p);
        }
    }
    Ok(AnalyticFunction::Poly(acc))
}

/// Contour-stencil derivative of an [`AnalyticFunction`] with the default node count.
pub fn finite_difference_derivative<T: Scalar>(
    f: &AnalyticFunction<T>,
    k: usize,
    z: Complex<T>,
    h: T,
) -> Result<Complex<T>> {
    contour_derivative(|w| f.eval(w), k, z, h, DEFAULT_NODES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::lit;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn mob(cc: f64, a: f64, beta: f64) -> AnalyticFunction<f64> {
        MobiusPowerTerm::new(c(cc), c(a), beta).unwrap().into()
    }

    #[test]
    fn eval_examples() {
        let id = AnalyticFunction::<f64>::identity();
        assert_eq!(id.eval(c(0.5)).unwrap(), c(0.5));
        let m = mob(0.75, 0.5, 1.0);
        assert!((m.eval(c(0.0)).unwrap() - c(0.75)).norm() < 1e-15);
        assert!((m.eval(c(0.5)).unwrap() - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let sq: AnalyticFunction<f64> = Polynomial::monomial(2).into();
        assert!((sq.eval_derivative(1, c(0.5)).unwrap() - c(1.0)).norm() < 1e-15);
        let m = mob(1.0, 0.5, 1.0);
        assert!((m.eval_derivative(1, c(0.0)).unwrap() - c(0.5)).norm() < 1e-15);
        let z = Complex::new(0.3, -0.2);
        assert_eq!(m.eval_derivative(0, z).unwrap(), m.eval(z).unwrap());
    }

    #[test]
    fn domain_errors() {
        let m = MobiusPowerTerm::new(c(1.0), c(1.0), 2.0).unwrap();
        let f: AnalyticFunction<f64> = m.into();
        assert!(matches!(f.eval(c(1.0)), Err(Error::PoleContact { .. })));
        assert!(matches!(f.eval(c(-1.0)), Err(Error::OutsideDisk { .. })));
        assert!((f.eval(c(0.5)).unwrap() - c(4.0)).norm() < 1e-12);
        assert!(matches!(
            f.eval_derivative(13, c(0.1)),
            Err(Error::OrderCap { order: 13, max: 12 })
        ));
        let wide = EvalOptions { max_order: 20 };
        assert!(f.eval_derivative_with(13, c(0.1), wide).is_ok());
    }

    #[test]
    fn combination_examples() {
        let f = mob(1.0, 0.3, 1.5);
        let g = mob(2.0, -0.4, 0.5);
        let same = linear_combine(&[c(1.0), c(0.0)], &[f.clone(), g]).unwrap();
        let z = Complex::new(0.2, 0.4);
        assert!((same.eval(z).unwrap() - f.eval(z).unwrap()).norm() < 1e-15);
        let zero = linear_combine(&[c(1.0), c(-1.0)], &[f.clone(), f.clone()]).unwrap();
        assert!(zero.is_zero());
        assert!(matches!(linear_combine::<f64>(&[], &[]), Err(Error::EmptyCombination)));
    }

    #[test]
    fn l_family_combination_at_base_point() {
        // l_i = (1-|b|^2)^i (1 - conj(b) z)^-(gamma+i-1), gamma = 1, b = 0.5
        let ls: Vec<_> = (1..=3).map(|i| mob(0.75f64.powi(i), 0.5, i as f64)).collect();
        let f = linear_combine(&[c(3.0), c(-3.0), c(1.0)], &ls).unwrap();
        assert!((f.eval(c(0.5)).unwrap() - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn mixed_representations() {
        let p: AnalyticFunction<f64> = Polynomial::from_real(&[1.0, 2.0]).into();
        let k = AnalyticFunction::constant(c(2.0));
        let m = mob(1.0, 0.5, 1.0);
        let s: AnalyticFunction<f64> = PowerSeries::new(vec![c(1.0); 60], 0.5).unwrap().into();
        let z = c(0.25);
        let ms = linear_combine(&[c(1.0), c(3.0)], &[m.clone(), k]).unwrap();
        assert!((ms.eval(z).unwrap() - (m.eval(z).unwrap() + c(6.0))).norm() < 1e-14);
        let ps = linear_combine(&[c(2.0), c(1.0)], &[p.clone(), s.clone()]).unwrap();
        assert!(matches!(ps, AnalyticFunction::Series(_)));
        let want = p.eval(z).unwrap() * 2.0 + s.eval(z).unwrap();
        assert!((ps.eval(z).unwrap() - want).norm() < 1e-12);
        assert!(matches!(
            linear_combine(&[c(1.0), c(1.0)], &[m.clone(), s]),
            Err(Error::IncompatibleRepresentations(..))
        ));
        assert!(matches!(
            linear_combine(&[c(1.0), c(1.0)], &[m, p]),
            Err(Error::IncompatibleRepresentations(..))
        ));
    }

    #[test]
    fn stencil_examples() {
        let sq: AnalyticFunction<f64> = Polynomial::monomial(2).into();
        let d2 = finite_difference_derivative(&sq, 2, c(0.0), 0.5).unwrap();
        assert!((d2 - c(2.0)).norm() < 1e-6);
        let m = mob(1.0, 0.5, 1.0);
        let d1 = finite_difference_derivative(&m, 1, c(0.0), 0.5).unwrap();
        assert!((d1 - c(0.5)).norm() < 1e-6);
        let k = AnalyticFunction::constant(c(3.0));
        for order in 1..5 {
            let d = finite_difference_derivative(&k, order, c(0.1), 0.4).unwrap();
            assert!(d.norm() < 1e-9);
        }
        assert!(matches!(
            finite_difference_derivative(&sq, 1, c(0.8), 0.3),
            Err(Error::StencilOutside { .. })
        ));
    }

    #[test]
    fn works_in_single_precision() {
        let m = MobiusPowerTerm::<f32>::new(Complex::new(0.75, 0.0), Complex::new(0.5, 0.0), 1.0).unwrap();
        let f: AnalyticFunction<f32> = m.into();
        let v = f.eval(Complex::new(0.5, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < lit::<f32>(1e-6));
    }
}
