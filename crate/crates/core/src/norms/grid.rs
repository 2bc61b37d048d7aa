use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::{from_usize, lit, Scalar};

/// Polar sampling of the disk with rings geometrically approaching the boundary.
///
/// At refinement level `l` ring `m` sits at `1 - r = 2^(-m / R_l)`, with
/// `R_l = rings_per_octave * 2^l` and `m = 0 ..= R_l * depth`; the deepest
/// ring therefore has `1 - r = 2^-depth` at every level. Ring `m` carries
/// `next_pow2(max(8, ceil(2 pi f_l / (1 - r))))` equally spaced angles
/// (`f_l = angle_factor * 2^l`), capped at `max_angles * 2^l`. Powers of two
/// keep the angular sets of successive levels nested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    pub depth: usize,
    pub rings_per_octave: usize,
    pub angle_factor: f64,
    pub max_angles: usize,
    /// Highest refinement level sup-norm routines may use.
    pub max_level: usize,
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self {
            depth: 24,
            rings_per_octave: 2,
            angle_factor: 1.0,
            max_angles: 4096,
            max_level: 2,
        }
    }
}

/// A sample point with `t = 1 - |z|` kept separately for precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint<T> {
    pub z: Complex<T>,
    pub r: T,
    pub t: T,
}

impl<T: Scalar> GridPoint<T> {
    pub fn polar(t: T, theta: T) -> Self {
        let r = T::one() - t;
        Self {
            z: Complex::from_polar(r, theta),
            r,
            t,
        }
    }

    pub fn from_point(z: Complex<T>) -> Self {
        let r = z.norm();
        Self { z, r, t: T::one() - r }
    }

    /// `1 - |z|^2`.
    pub fn one_minus_sq(&self) -> T {
        (T::one() + self.r) * self.t
    }
}

/// One ring of a [`DiskGrid`] level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ring<T> {
    pub index: usize,
    pub t: T,
    pub angles: usize,
}

impl<T: Scalar> Ring<T> {
    pub fn point(&self, j: usize) -> GridPoint<T> {
        let theta = T::PI() * lit(2.0) * from_usize::<T>(j) / from_usize::<T>(self.angles);
        GridPoint::polar(self.t, theta)
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint<T>> + '_ {
        (0..self.angles).map(move |j| self.point(j))
    }

    pub fn angle_step(&self) -> T {
        T::PI() * lit(2.0) / from_usize::<T>(self.angles)
    }
}

impl DiskGrid {
    pub fn with_depth(depth: usize) -> Self {
        Self {
            depth,
            ..Self::default()
        }
    }

    pub fn rings_per_octave_at(&self, level: usize) -> usize {
        self.rings_per_octave << level
    }

    pub fn ring_count(&self, level: usize) -> usize {
        self.rings_per_octave_at(level) * self.depth + 1
    }

    pub fn ring<T: Scalar>(&self, level: usize, m: usize) -> Ring<T> {
        let per = self.rings_per_octave_at(level);
        let t = lit::<T>(2.0).powf(-from_usize::<T>(m) / from_usize::<T>(per));
        let factor = self.angle_factor * (1u64 << level) as f64;
        let cap = (self.max_angles << level).next_power_of_two();
        let t64 = t.to_f64().unwrap_or(1.0);
        let want = (2.0 * std::f64::consts::PI * factor / t64).ceil().max(8.0) as usize;
        Ring {
            index: m,
            t,
            angles: want.next_power_of_two().min(cap).max(8),
        }
    }

    /// The ring of `level` closest to `1 - |z| = t`.
    pub fn ring_through<T: Scalar>(&self, level: usize, t: T) -> Ring<T> {
        let per = self.rings_per_octave_at(level) as f64;
        let m = (-t.to_f64().unwrap_or(1.0).log2() * per).round().max(0.0) as usize;
        self.ring(level, m.min(self.ring_count(level) - 1))
    }

    pub fn rings<T: Scalar>(&self, level: usize) -> Vec<Ring<T>> {
        (0..self.ring_count(level)).map(|m| self.ring(level, m)).collect()
    }

    pub fn point_count(&self, level: usize) -> usize {
        self.rings::<f64>(level).iter().map(|r| r.angles).sum()
    }

    /// Deepest `1 - |z|` on the grid.
    pub fn min_t<T: Scalar>(&self) -> T {
        lit::<T>(2.0).powi(-(self.depth as i32))
    }
}
