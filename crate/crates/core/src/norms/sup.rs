//! Grid maximization with deterministic reductions and a local polish.

use rayon::prelude::*;

use super::grid::{DiskGrid, GridPoint};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

#[derive(Debug, Clone)]
pub(crate) struct SupOutcome<T> {
    pub value: T,
    pub argmax: GridPoint<T>,
    /// Largest value on each ring, `-inf` for rings without usable points.
    pub ring_max: Vec<T>,
    pub skipped: usize,
}

/// Errors that mean "this point cannot be evaluated" rather than "the input is broken".
pub(crate) fn skippable(e: &Error) -> bool {
    matches!(e, Error::GuardRadius { .. } | Error::SeriesTail { .. })
}

fn checked<T: Scalar>(v: T, p: &GridPoint<T>) -> Result<T> {
    if v.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "non-finite value at ({}, {})",
            to_f64(p.z.re),
            to_f64(p.z.im)
        )));
    }
    Ok(v)
}

/// Maximum of `f` over one grid level; ties resolve to the first point in
/// ring-then-angle order.
pub(crate) fn grid_sup<T, F>(grid: &DiskGrid, level: usize, f: &F) -> Result<SupOutcome<T>>
where
    T: Scalar,
    F: Fn(&GridPoint<T>) -> Result<T> + Sync,
{
    let rings = grid.rings::<T>(level);
    let per_ring: Vec<(T, GridPoint<T>, usize)> = rings
        .par_iter()
        .map(|ring| {
            let mut best = T::neg_infinity();
            let mut arg = ring.point(0);
            let mut skipped = 0;
            for p in ring.points() {
                match f(&p) {
                    Ok(v) => {
                        let v = checked(v, &p)?;
                        if v > best {
                            best = v;
                            arg = p;
                        }
                    }
                    Err(e) if skippable(&e) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok((best, arg, skipped))
        })
        .collect::<Result<_>>()?;
    let mut value = T::neg_infinity();
    let mut argmax = GridPoint::polar(T::one(), T::zero());
    let mut skipped = 0;
    for &(v, p, s) in &per_ring {
        skipped += s;
        if v > value {
            value = v;
            argmax = p;
        }
    }
    Ok(SupOutcome {
        value,
        argmax,
        ring_max: per_ring.iter().map(|x| x.0).collect(),
        skipped,
    })
}

/// Pattern search in `(log2(1 - |z|), arg z)` starting from a grid maximizer;
/// never leaves `1 - |z| >= t_min` and only ever returns values `>= start`.
pub(crate) fn polish<T, F>(
    start: GridPoint<T>,
    start_value: T,
    ds: T,
    dtheta: T,
    t_min: T,
    f: &F,
) -> Result<(T, GridPoint<T>)>
where
    T: Scalar,
    F: Fn(&GridPoint<T>) -> Result<T>,
{
    let s_min = t_min.log2();
    let mut s = start.t.log2();
    let mut theta = start.z.im.atan2(start.z.re);
    let mut best = start_value;
    let mut arg = start;
    let (mut ds, mut dt) = (ds, dtheta);
    let floor = lit::<T>(1e-7);
    let mut evals = 0;
    while (ds > floor || dt > floor) && evals < 160 {
        let mut moved = false;
        for (a, b) in [(ds, T::zero()), (-ds, T::zero()), (T::zero(), dt), (T::zero(), -dt)] {
            let s2 = (s + a).max(s_min).min(T::zero());
            if s2 == s && b == T::zero() {
                continue;
            }
            let p = GridPoint::polar(lit::<T>(2.0).powf(s2), theta + b);
            evals += 1;
            let v = match f(&p) {
                Ok(v) => checked(v, &p)?,
                Err(e) if skippable(&e) => continue,
                Err(e) => return Err(e),
            };
            if v > best {
                best = v;
                arg = p;
                s = s2;
                theta += b;
                moved = true;
                break;
            }
        }
        if !moved {
            ds *= lit(0.5);
            dt *= lit(0.5);
        }
    }
    Ok((best, arg))
}
