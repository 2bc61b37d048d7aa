//! Stević–Sharma type operators `T^n` and `T^{m,n}` and their derivative decomposition.

use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalg::AnalyticFunction;
use crate::norms::{hinf_norm, DiskGrid, GridPoint, NormFlag};
use crate::scalar::{lit, to_f64, Scalar};
use crate::weights::Weight;

/// Slack allowed in the numerical self-map test `sup |phi| <= 1`.
pub const SELF_MAP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum OperatorKind {
    /// `psi1 f^(n)(phi) + psi2 f^(n+1)(phi)`.
    Tn { n: usize },
    /// `psi1 f^(m)(phi) + psi2 f^(n)(phi)`, `m < n`.
    Tmn { m: usize, n: usize },
}

impl OperatorKind {
    /// The two derivative orders applied to `f`.
    pub fn orders(&self) -> (usize, usize) {
        match *self {
            Self::Tn { n } => (n, n + 1),
            Self::Tmn { m, n } => (m, n),
        }
    }

    /// Whether the middle E-coefficients merge (`T^n`, or `T^{m,n}` with `m + 1 = n`).
    pub fn merged(&self) -> bool {
        let (a, b) = self.orders();
        b == a + 1
    }

    fn validate(&self) -> Result<()> {
        if let Self::Tmn { m, n } = *self {
            if n < 1 || m >= n {
                return Err(Error::InvalidParameter(format!(
                    "T^(m,n) needs n >= 1 and m < n, got m = {m}, n = {n}"
                )));
            }
        }
        Ok(())
    }
}

/// The symbols `(psi1, psi2, phi)` together with the operator orders.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolConfig<T> {
    pub psi1: AnalyticFunction<T>,
    pub psi2: AnalyticFunction<T>,
    pub phi: AnalyticFunction<T>,
    pub kind: OperatorKind,
}

impl<T: Scalar> SymbolConfig<T> {
    /// Validates the orders and that `phi` maps the grid into the closed disk.
    pub fn new(
        psi1: AnalyticFunction<T>,
        psi2: AnalyticFunction<T>,
        phi: AnalyticFunction<T>,
        kind: OperatorKind,
        grid: &DiskGrid,
    ) -> Result<Self> {
        kind.validate()?;
        let cfg = Self { psi1, psi2, phi, kind };
        let rho = rho_of(&cfg.phi, grid)?;
        if rho.rho > T::one() + lit(SELF_MAP_SLACK) {
            return Err(Error::NotSelfMap { sup: to_f64(rho.rho) });
        }
        Ok(cfg)
    }

    /// Scales both weight symbols by `s`.
    pub fn scaled(&self, s: Complex<T>) -> Self {
        Self {
            psi1: self.psi1.scale(s),
            psi2: self.psi2.scale(s),
            ..self.clone()
        }
    }
}

/// An operator together with an optional dilation `f -> f(r .)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec<T> {
    pub symbols: SymbolConfig<T>,
    pub dilation: Option<T>,
}

impl<T: Scalar> OperatorSpec<T> {
    pub fn new(symbols: SymbolConfig<T>) -> Self {
        Self {
            symbols,
            dilation: None,
        }
    }

    pub fn dilated(symbols: SymbolConfig<T>, r: T) -> Result<Self> {
        if !(r > T::zero() && r <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "dilation r = {} must lie in (0, 1]",
                to_f64(r)
            )));
        }
        Ok(Self {
            symbols,
            dilation: if r == T::one() { None } else { Some(r) },
        })
    }

    pub fn kind(&self) -> OperatorKind {
        self.symbols.kind
    }

    /// Symbols of the undilated operator equal to this one, `(r^a psi1, r^b psi2, r phi)`.
    pub fn effective_symbols(&self) -> SymbolConfig<T> {
        match self.dilation {
            None => self.symbols.clone(),
            Some(r) => {
                let (a, b) = self.symbols.kind.orders();
                let s = &self.symbols;
                SymbolConfig {
                    psi1: s.psi1.scale(Complex::new(r.powi(a as i32), T::zero())),
                    psi2: s.psi2.scale(Complex::new(r.powi(b as i32), T::zero())),
                    phi: s.phi.scale(Complex::new(r, T::zero())),
                    kind: s.kind,
                }
            }
        }
    }

    /// `f_r^(k)(w) = r^k f^(k)(r w)`.
    fn source_derivative(&self, f: &AnalyticFunction<T>, k: usize, w: Complex<T>) -> Result<Complex<T>> {
        match self.dilation {
            None => f.eval_derivative(k, w),
            Some(r) => Ok(f.eval_derivative(k, w * r)? * r.powi(k as i32)),
        }
    }
}

/// Pointwise evaluator of `T f`.
pub struct Applied<'a, T> {
    spec: &'a OperatorSpec<T>,
    f: &'a AnalyticFunction<T>,
}

impl<'a, T: Scalar> Applied<'a, T> {
    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        let s = &self.spec.symbols;
        let (a, b) = s.kind.orders();
        let w = s.phi.eval(z)?;
        let mut out = Complex::new(T::zero(), T::zero());
        if !s.psi1.is_zero() {
            out += s.psi1.eval(z)? * self.spec.source_derivative(self.f, a, w)?;
        }
        if !s.psi2.is_zero() {
            out += s.psi2.eval(z)? * self.spec.source_derivative(self.f, b, w)?;
        }
        Ok(out)
    }

    /// `(T f)'(z)` through the E-decomposition.
    pub fn derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        derivative_decomposed(self.spec, self.f, z)
    }
}

pub fn apply<'a, T: Scalar>(spec: &'a OperatorSpec<T>, f: &'a AnalyticFunction<T>) -> Applied<'a, T> {
    Applied { spec, f }
}

/// Coefficients `E_i` with `(T f)' = sum_i E_i f^(i)(phi)`, keyed by order `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ECoefficients<T> {
    pub terms: BTreeMap<usize, Complex<T>>,
}

impl<T: Scalar> ECoefficients<T> {
    pub fn get(&self, order: usize) -> Complex<T> {
        self.terms
            .get(&order)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }
}

/// Orders carrying an E-coefficient, ascending.
pub fn e_orders(kind: OperatorKind) -> Vec<usize> {
    let (a, b) = kind.orders();
    if kind.merged() {
        vec![a, a + 1, a + 2]
    } else {
        vec![a, a + 1, b, b + 1]
    }
}

/// Values `[psi1', psi1 phi', psi2', psi2 phi']` at `z`, skipping work for zero symbols.
fn symbol_parts<T: Scalar>(s: &SymbolConfig<T>, z: Complex<T>) -> Result<[Complex<T>; 4]> {
    let zero = Complex::new(T::zero(), T::zero());
    let needs_phi = !s.psi1.is_zero() || !s.psi2.is_zero();
    let dphi = if needs_phi { s.phi.eval_derivative(1, z)? } else { zero };
    let (p1d, p1phi) = if s.psi1.is_zero() {
        (zero, zero)
    } else {
        (s.psi1.eval_derivative(1, z)?, s.psi1.eval(z)? * dphi)
    };
    let (p2d, p2phi) = if s.psi2.is_zero() {
        (zero, zero)
    } else {
        (s.psi2.eval_derivative(1, z)?, s.psi2.eval(z)? * dphi)
    };
    Ok([p1d, p1phi, p2d, p2phi])
}

/// E-coefficient values in the order of [`e_orders`].
pub(crate) fn e_values<T: Scalar>(s: &SymbolConfig<T>, z: Complex<T>) -> Result<Vec<Complex<T>>> {
    let [p1d, p1phi, p2d, p2phi] = symbol_parts(s, z)?;
    Ok(if s.kind.merged() {
        vec![p1d, p1phi + p2d, p2phi]
    } else {
        vec![p1d, p1phi, p2d, p2phi]
    })
}

pub fn e_coefficients<T: Scalar>(spec: &OperatorSpec<T>, z: Complex<T>) -> Result<ECoefficients<T>> {
    let orders = e_orders(spec.kind());
    let values = e_values(&spec.symbols, z)?;
    Ok(ECoefficients {
        terms: orders.into_iter().zip(values).collect(),
    })
}

pub fn derivative_decomposed<T: Scalar>(
    spec: &OperatorSpec<T>,
    f: &AnalyticFunction<T>,
    z: Complex<T>,
) -> Result<Complex<T>> {
    let s = &spec.symbols;
    let orders = e_orders(s.kind);
    let values = e_values(s, z)?;
    let w = s.phi.eval(z)?;
    let mut out = Complex::new(T::zero(), T::zero());
    for (k, e) in orders.into_iter().zip(values) {
        if e.re == T::zero() && e.im == T::zero() {
            continue;
        }
        out += e * spec.source_derivative(f, k, w)?;
    }
    Ok(out)
}

/// `rho = sup |phi|` over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryMeasure<T> {
    pub rho: T,
    /// Set when the supremum is still growing at the outermost ring.
    pub boundary_flag: bool,
}

fn rho_of<T: Scalar>(phi: &AnalyticFunction<T>, grid: &DiskGrid) -> Result<BoundaryMeasure<T>> {
    let rep = hinf_norm(phi, grid)?;
    Ok(BoundaryMeasure {
        rho: rep.value,
        boundary_flag: rep.flags.contains(&NormFlag::BoundaryAttained),
    })
}

pub fn rho<T: Scalar>(spec: &OperatorSpec<T>, grid: &DiskGrid) -> Result<BoundaryMeasure<T>> {
    let phi = match spec.dilation {
        None => spec.symbols.phi.clone(),
        Some(r) => spec.symbols.phi.scale(Complex::new(r, T::zero())),
    };
    rho_of(&phi, grid)
}

/// Per-term maxima of a vector-valued sample function over one grid level.
#[derive(Debug, Clone)]
pub(crate) struct TermSweep<T> {
    pub max: Vec<T>,
    pub argmax: Vec<GridPoint<T>>,
}

pub(crate) fn term_sweep<T, F>(grid: &DiskGrid, level: usize, terms: usize, f: &F) -> Result<TermSweep<T>>
where
    T: Scalar,
    F: Fn(&GridPoint<T>) -> Result<Vec<T>> + Sync,
{
    let rings = grid.rings::<T>(level);
    let per_ring: Vec<TermSweep<T>> = rings
        .par_iter()
        .map(|ring| {
            let mut acc = TermSweep {
                max: vec![T::neg_infinity(); terms],
                argmax: vec![ring.point(0); terms],
            };
            for p in ring.points() {
                let v = f(&p)?;
                for (i, x) in v.into_iter().enumerate() {
                    if x > acc.max[i] {
                        acc.max[i] = x;
                        acc.argmax[i] = p;
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut out = TermSweep {
        max: vec![T::neg_infinity(); terms],
        argmax: vec![GridPoint::polar(T::one(), T::zero()); terms],
    };
    for ring in per_ring {
        for i in 0..terms {
            if ring.max[i] > out.max[i] {
                out.max[i] = ring.max[i];
                out.argmax[i] = ring.argmax[i];
            }
        }
    }
    Ok(out)
}

/// `sup mu |E_i|` and `sup mu |E_i| / (1 - |phi|^2)^e_i` per order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessReport<T> {
    pub suprema: BTreeMap<usize, T>,
    pub weighted_suprema: BTreeMap<usize, T>,
    pub exponents: BTreeMap<usize, T>,
}

impl<T: Scalar> BoundednessReport<T> {
    /// Largest of the plain suprema; the scale used by compactness tolerances.
    pub fn scale(&self) -> T {
        self.suprema.values().fold(T::zero(), |a, &b| a.max(b))
    }

    pub fn all_finite(&self) -> bool {
        self.suprema
            .values()
            .chain(self.weighted_suprema.values())
            .all(|v| v.is_finite())
    }
}

/// `1 - |w|^2` computed as `(1 - |w|)(1 + |w|)`.
pub(crate) fn one_minus_sq<T: Scalar>(w: Complex<T>) -> T {
    let r = w.norm();
    (T::one() - r) * (T::one() + r)
}

/// Grid suprema of `mu |E_i|` and of the weighted forms with the given exponents
/// (one per E-order, in the order of [`e_orders`]).
pub fn boundedness_suprema<T: Scalar>(
    spec: &OperatorSpec<T>,
    w: &Weight<T>,
    exponents: &[T],
    grid: &DiskGrid,
) -> Result<BoundednessReport<T>> {
    let orders = e_orders(spec.kind());
    if exponents.len() != orders.len() {
        return Err(Error::InvalidParameter(format!(
            "{} exponents for {} E-coefficients",
            exponents.len(),
            orders.len()
        )));
    }
    let k = orders.len();
    let phi = &spec.symbols.phi;
    let sweep = term_sweep(grid, 0, 2 * k, &|p: &GridPoint<T>| {
        let mu = w.value_rt(p.r, p.t);
        let e = e_values(&spec.symbols, p.z)?;
        let d = one_minus_sq(phi.eval(p.z)?);
        let mut out = Vec::with_capacity(2 * k);
        for v in &e {
            out.push(mu * v.norm());
        }
        for (v, &x) in e.iter().zip(exponents) {
            let m = mu * v.norm();
            out.push(if m == T::zero() { T::zero() } else { m / d.powf(x) });
        }
        Ok(out)
    })?;
    let mut rep = BoundednessReport {
        suprema: BTreeMap::new(),
        weighted_suprema: BTreeMap::new(),
        exponents: BTreeMap::new(),
    };
    for (i, &o) in orders.iter().enumerate() {
        rep.suprema.insert(o, sweep.max[i].max(T::zero()));
        rep.weighted_suprema.insert(o, sweep.max[k + i].max(T::zero()));
        rep.exponents.insert(o, exponents[i]);
    }
    Ok(rep)
}
