//! Weighted Bloch, alpha-Bloch, H-infinity and Q_K(p, q) norms.

pub(crate) mod grid;
pub(crate) mod qk;
mod sup;

use num_complex::Complex;
use serde::Serialize;

pub use grid::{DiskGrid, GridPoint, Ring};
pub use qk::{qk_inner_integral, qk_norm, QkInner, QkOptions, QkQuadrature};
pub(crate) use sup::{grid_sup, polish, skippable};

use crate::error::Result;
use crate::funcalg::AnalyticFunction;
use crate::scalar::{from_usize, lit, Scalar};
use crate::weights::Weight;

/// Relative change between refinement levels that ends a sup-norm refinement.
pub const REFINE_RTOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormFlag {
    /// The outermost ring still carries the largest ring maximum.
    BoundaryAttained,
    /// Some points could not be evaluated (series guard) and were skipped.
    PointsSkipped,
    /// Refinement stopped at the level cap before meeting the tolerance.
    RefinementCap,
    /// An angular quadrature hit its node cap.
    QuadratureUnconverged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport<T> {
    pub value: T,
    pub argmax: Complex<T>,
    pub grid_level: usize,
    pub converged: bool,
    pub flags: Vec<NormFlag>,
}

/// `sup` of `f` over the grid, refined level by level; the reported value is
/// the running maximum, so it never decreases with refinement.
pub(crate) fn refined_sup<T, F>(grid: &DiskGrid, f: &F) -> Result<NormReport<T>>
where
    T: Scalar,
    F: Fn(&GridPoint<T>) -> Result<T> + Sync,
{
    let mut best = T::neg_infinity();
    let mut arg = GridPoint::polar(T::one(), T::zero());
    let mut flags = Vec::new();
    let mut converged = false;
    let mut level = 0;
    let t_min = grid.min_t::<T>();
    loop {
        let out = grid_sup(grid, level, f)?;
        if out.skipped > 0 && !flags.contains(&NormFlag::PointsSkipped) {
            flags.push(NormFlag::PointsSkipped);
        }
        let ds = T::one() / from_usize::<T>(grid.rings_per_octave_at(level));
        let dtheta = grid.ring_through::<T>(level, out.argmax.t).angle_step();
        let (v, p) = if out.value.is_finite() {
            polish(out.argmax, out.value, ds, dtheta, t_min, f)?
        } else {
            (out.value, out.argmax)
        };
        let prev = best;
        if v > best {
            best = v;
            arg = p;
        }
        let boundary = {
            let n = out.ring_max.len();
            n >= 2 && out.ring_max[n - 1] > out.ring_max[n - 2]
        };
        if level > 0 && (best - prev).abs() <= lit::<T>(REFINE_RTOL) * best.abs() {
            converged = true;
        }
        if converged || level >= grid.max_level {
            if boundary {
                flags.push(NormFlag::BoundaryAttained);
            }
            if !converged {
                flags.push(NormFlag::RefinementCap);
            }
            break;
        }
        level += 1;
    }
    Ok(NormReport {
        value: best.max(T::zero()),
        argmax: arg.z,
        grid_level: level,
        converged,
        flags,
    })
}

/// `|f(0)| + sup mu(z) |f'(z)|`.
pub fn bloch_mu_norm<T: Scalar>(f: &AnalyticFunction<T>, w: &Weight<T>, grid: &DiskGrid) -> Result<NormReport<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let f0 = f.eval(zero)?.norm();
    if f.derivative_vanishes(1) {
        return Ok(constant_report(f0));
    }
    let mut rep = refined_sup(grid, &|p: &GridPoint<T>| {
        Ok(w.value_rt(p.r, p.t) * f.eval_derivative(1, p.z)?.norm())
    })?;
    rep.value += f0;
    Ok(rep)
}

/// `|f'(0)| + ... + |f^(n)(0)| + sup (1 - |z|^2)^(alpha + n) |f^(n+1)(z)|`.
///
/// With `n = 0` this is the seminorm `sup (1 - |z|^2)^alpha |f'(z)|`.
pub fn bloch_alpha_equiv_norm<T: Scalar>(
    f: &AnalyticFunction<T>,
    alpha: T,
    n: usize,
    grid: &DiskGrid,
) -> Result<NormReport<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut head = T::zero();
    for j in 1..=n {
        head += f.eval_derivative(j, zero)?.norm();
    }
    let w = Weight::alpha(alpha + from_usize(n))?;
    if f.derivative_vanishes(n + 1) {
        return Ok(constant_report(head));
    }
    let mut rep = refined_sup(grid, &|p: &GridPoint<T>| {
        Ok(w.value_rt(p.r, p.t) * f.eval_derivative(n + 1, p.z)?.norm())
    })?;
    rep.value += head;
    Ok(rep)
}

/// `sup |f(z)|`; flags a supremum that is still growing at the outermost ring.
pub fn hinf_norm<T: Scalar>(f: &AnalyticFunction<T>, grid: &DiskGrid) -> Result<NormReport<T>> {
    if f.derivative_vanishes(1) {
        let c = f.eval(Complex::new(T::zero(), T::zero()))?.norm();
        return Ok(constant_report(c));
    }
    refined_sup(grid, &|p: &GridPoint<T>| Ok(f.eval(p.z)?.norm()))
}

fn constant_report<T: Scalar>(value: T) -> NormReport<T> {
    NormReport {
        value,
        argmax: Complex::new(T::zero(), T::zero()),
        grid_level: 0,
        converged: true,
        flags: Vec::new(),
    }
}
