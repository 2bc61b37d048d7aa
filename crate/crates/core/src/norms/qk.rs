//! The Q_K(p, q) norm via the self-inverse substitution `z = phi_xi(w)`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{DiskGrid, GridPoint};
use super::sup::polish;
use super::{NormFlag, NormReport};
use crate::error::{Error, Result};
use crate::funcalg::AnalyticFunction;
use crate::quad::{neg_log, periodic_trapezoid, GaussLegendre};
use crate::scalar::{from_usize, lit, to_f64, CompensatedSum, Scalar};
use crate::weights::{check_kernel_integrability, SpaceParams};

/// Quadrature resolution for one inner integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QkQuadrature {
    /// Dyadic radial panels toward each of 0 and 1.
    pub panels: usize,
    pub gl_order: usize,
    pub min_angles: usize,
    pub max_angles: usize,
    /// Relative tolerance of the angular trapezoid refinement.
    pub rtol: f64,
}

impl QkQuadrature {
    pub fn accurate() -> Self {
        Self {
            panels: 30,
            gl_order: 8,
            min_angles: 32,
            max_angles: 512,
            rtol: 1e-6,
        }
    }

    pub fn coarse() -> Self {
        Self {
            panels: 20,
            gl_order: 6,
            min_angles: 16,
            max_angles: 128,
            rtol: 1e-3,
        }
    }
}

impl Default for QkQuadrature {
    fn default() -> Self {
        Self::accurate()
    }
}

/// Search strategy for the supremum over `xi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QkOptions {
    /// Candidate `xi` points: level 0 of this grid.
    pub xi_grid: DiskGrid,
    /// Screening quadrature applied to every candidate.
    pub coarse: QkQuadrature,
    /// Quadrature for the best candidates and the polish.
    pub fine: QkQuadrature,
    /// How many screened candidates are re-evaluated finely.
    pub top_k: usize,
    pub polish: bool,
    /// Deepest `log2(1 - |xi|)` the polish may reach.
    pub polish_depth: usize,
}

impl Default for QkOptions {
    fn default() -> Self {
        Self {
            xi_grid: DiskGrid {
                depth: 4,
                rings_per_octave: 2,
                angle_factor: 0.25,
                max_angles: 64,
                max_level: 0,
            },
            coarse: QkQuadrature::coarse(),
            fine: QkQuadrature::accurate(),
            top_k: 3,
            polish: true,
            polish_depth: 24,
        }
    }
}

impl QkOptions {
    /// A lighter search for functions whose mass sits near known base points.
    pub fn local() -> Self {
        Self {
            xi_grid: DiskGrid {
                depth: 1,
                rings_per_octave: 1,
                angle_factor: 0.25,
                max_angles: 8,
                max_level: 0,
            },
            top_k: 2,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QkInner<T> {
    pub value: T,
    /// False when some angular trapezoid hit its node cap.
    pub converged: bool,
}

fn admissible<T: Scalar>(params: &SpaceParams<T>) -> Result<()> {
    let v = check_kernel_integrability(params)?;
    if !v.ok {
        return Err(Error::Divergent(format!(
            "kernel integrability condition fails ({:?})",
            v.status
        )));
    }
    Ok(())
}

/// Radial nodes `(rho, 1 - rho, weight)` on dyadic panels toward 0 and 1.
fn radial_nodes<T: Scalar>(quad: &QkQuadrature) -> Vec<(T, T, T)> {
    let rule = GaussLegendre::<T>::new(quad.gl_order);
    let mut nodes = Vec::with_capacity(2 * quad.panels * quad.gl_order);
    for l in 1..=quad.panels {
        let hi = lit::<T>(0.5).powi(l as i32);
        let lo = hi * lit(0.5);
        for (x, w) in rule.mapped(lo, hi) {
            nodes.push((x, T::one() - x, w));
            nodes.push((T::one() - x, x, w));
        }
    }
    nodes
}

/// Inner integral of a density `d(z, 1 - |z|^2)` against `K(g(z, xi))`, in
/// the coordinates `z = phi_xi(w)`.
fn inner_density<T, D>(dens: &D, params: &SpaceParams<T>, xi: &GridPoint<T>, quad: &QkQuadrature) -> Result<QkInner<T>>
where
    T: Scalar,
    D: Fn(Complex<T>, T) -> Result<T>,
{
    let kernel = params.kernel();
    let xi_c = xi.z;
    let xi_bar = xi_c.conj();
    let one_xi = xi.one_minus_sq();
    let one = Complex::new(T::one(), T::zero());
    let inside = T::one() - T::epsilon();
    let mut total = CompensatedSum::new();
    let mut converged = true;
    for (rho, t, wr) in radial_nodes::<T>(quad) {
        let kv = kernel.eval(neg_log(rho, t));
        if kv == T::zero() {
            continue;
        }
        let one_w = (T::one() + rho) * t;
        let angular = periodic_trapezoid(
            |theta: T| {
                let w = Complex::from_polar(rho, theta);
                let d = one - xi_bar * w;
                let d2 = d.norm_sqr();
                let mut z = (xi_c - w) / d;
                let omz = one_xi * one_w / d2;
                let zn = z.norm();
                if zn >= inside {
                    // rounding pushed z onto the circle; pull it back inside
                    z *= (T::one() - omz * lit(0.5)).min(inside) / zn;
                }
                let jac = one_xi / d2;
                let v = dens(z, omz)?;
                if v == T::zero() {
                    return Ok(T::zero());
                }
                Ok(v * jac * jac)
            },
            quad.min_angles,
            quad.max_angles,
            lit(quad.rtol),
        )?;
        converged &= angular.converged;
        total.add(wr * kv * rho * angular.value);
    }
    let value = total.value() / T::PI();
    if !value.is_finite() {
        return Err(Error::Divergent(format!(
            "inner integral at xi = ({}, {}) is not finite",
            to_f64(xi_c.re),
            to_f64(xi_c.im)
        )));
    }
    Ok(QkInner { value, converged })
}

fn derivative_density<'a, T: Scalar>(
    f: &'a AnalyticFunction<T>,
    params: &SpaceParams<T>,
) -> impl Fn(Complex<T>, T) -> Result<T> + Sync + 'a {
    let (p, q) = (params.p(), params.q());
    move |z, omz| {
        let fp = f.eval_derivative(1, z)?.norm();
        Ok(if fp == T::zero() {
            T::zero()
        } else {
            fp.powf(p) * omz.powf(q)
        })
    }
}

fn inner_at<T: Scalar>(
    f: &AnalyticFunction<T>,
    params: &SpaceParams<T>,
    xi: &GridPoint<T>,
    quad: &QkQuadrature,
) -> Result<QkInner<T>> {
    inner_density(&derivative_density(f, params), params, xi, quad)
}

/// `int_D |f'(z)|^p (1 - |z|^2)^q K(g(z, xi)) dA(z)` with normalized area measure.
pub fn qk_inner_integral<T: Scalar>(
    f: &AnalyticFunction<T>,
    params: &SpaceParams<T>,
    xi: Complex<T>,
    quad: &QkQuadrature,
) -> Result<QkInner<T>> {
    if !(xi.norm() < T::one()) {
        return Err(Error::OutsideDisk {
            re: to_f64(xi.re),
            im: to_f64(xi.im),
        });
    }
    admissible(params)?;
    if f.derivative_vanishes(1) || params.kernel().is_zero() {
        return Ok(QkInner {
            value: T::zero(),
            converged: true,
        });
    }
    inner_at(f, params, &GridPoint::from_point(xi), quad)
}

/// Candidate points near Möbius base points, where test functions carry their mass.
fn base_point_candidates<T: Scalar>(f: &AnalyticFunction<T>) -> Vec<GridPoint<T>> {
    let mut out = Vec::new();
    if let AnalyticFunction::Mobius(m) = f {
        for term in &m.terms {
            let modulus = term.a.norm();
            if modulus == T::zero() || modulus >= T::one() {
                continue;
            }
            let theta = term.a.im.atan2(term.a.re);
            let gap = T::one() - modulus;
            for c in [0.5, 1.0, 2.0, 4.0, 8.0] {
                let t = gap * lit(c);
                if t < T::one() {
                    out.push(GridPoint::polar(t, theta));
                }
            }
        }
    }
    out
}

/// Supremum over `xi` of the inner integral of a density: coarse screening of
/// the candidates, fine re-evaluation of the best few, then a coarse polish
/// whose end point is evaluated finely.
pub(crate) fn sup_inner_density<T, D>(
    dens: &D,
    params: &SpaceParams<T>,
    opts: &QkOptions,
    extra: Vec<GridPoint<T>>,
) -> Result<(T, GridPoint<T>, bool)>
where
    T: Scalar,
    D: Fn(Complex<T>, T) -> Result<T> + Sync,
{
    let mut candidates: Vec<GridPoint<T>> = opts
        .xi_grid
        .rings::<T>(0)
        .iter()
        .flat_map(|ring| ring.points().collect::<Vec<_>>())
        .collect();
    candidates.extend(extra);

    let screened: Vec<T> = candidates
        .par_iter()
        .map(|xi| inner_density(dens, params, xi, &opts.coarse).map(|r| r.value))
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| {
        screened[j]
            .partial_cmp(&screened[i])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    order.truncate(opts.top_k.max(1));

    let fine: Vec<QkInner<T>> = order
        .par_iter()
        .map(|&i| inner_density(dens, params, &candidates[i], &opts.fine))
        .collect::<Result<_>>()?;
    let mut converged = fine.iter().all(|r| r.converged);
    let mut k_best = 0;
    let mut best = T::neg_infinity();
    for (k, r) in fine.iter().enumerate() {
        if r.value > best {
            best = r.value;
            k_best = k;
        }
    }
    let mut arg = candidates[order[k_best]];
    if opts.polish {
        let ring = opts.xi_grid.ring_through::<T>(0, arg.t);
        let ds = T::one() / from_usize::<T>(opts.xi_grid.rings_per_octave.max(1));
        let t_min = lit::<T>(2.0).powi(-(opts.polish_depth as i32));
        let (_, p) = polish(
            arg,
            screened[order[k_best]],
            ds,
            ring.angle_step(),
            t_min,
            &|xi: &GridPoint<T>| inner_density(dens, params, xi, &opts.coarse).map(|r| r.value),
        )?;
        if p != arg {
            let r = inner_density(dens, params, &p, &opts.fine)?;
            if r.value > best {
                best = r.value;
                arg = p;
                converged = converged && r.converged;
            }
        }
    }
    Ok((best, arg, converged))
}

/// `|f(0)| + (sup_xi inner integral)^(1/p)`, maximizing over a candidate set
/// (grid points and base points) screened coarsely, with the best few
/// re-evaluated finely and polished.
pub fn qk_norm<T: Scalar>(f: &AnalyticFunction<T>, params: &SpaceParams<T>, opts: &QkOptions) -> Result<NormReport<T>> {
    admissible(params)?;
    let f0 = f.eval(Complex::new(T::zero(), T::zero()))?.norm();
    if f.derivative_vanishes(1) || params.kernel().is_zero() {
        return Ok(NormReport {
            value: f0,
            argmax: Complex::new(T::zero(), T::zero()),
            grid_level: 0,
            converged: true,
            flags: Vec::new(),
        });
    }
    let dens = derivative_density(f, params);
    let (best, arg, converged) = sup_inner_density(&dens, params, opts, base_point_candidates(f))?;
    Ok(density_report(f0, best, arg, converged, params))
}

pub(crate) fn density_report<T: Scalar>(
    f0: T,
    best: T,
    arg: GridPoint<T>,
    converged: bool,
    params: &SpaceParams<T>,
) -> NormReport<T> {
    let mut flags = Vec::new();
    if !converged {
        flags.push(NormFlag::QuadratureUnconverged);
    }
    NormReport {
        value: f0 + best.max(T::zero()).powf(T::one() / params.p()),
        argmax: arg.z,
        grid_level: 0,
        converged,
        flags,
    }
}

pub(crate) fn check_admissible<T: Scalar>(params: &SpaceParams<T>) -> Result<()> {
    admissible(params)
}
