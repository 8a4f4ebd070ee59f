//! Möbius geometry of the unit disk.
//!
//! Points are plain [`Complex64`] values. Every function that needs a point
//! strictly inside the disk checks `|w| < 1` and returns
//! [`Error::OutsideDisk`] otherwise.
//!
//! Quantities that degenerate near the boundary (`1 - |φ_z(x)|`, the distance
//! and the weight `T_z`) are computed from the identity
//! `1 - |φ_z(x)|² = (1 - |z|²)(1 - |x|²) / |1 - z̄x|²`, which keeps full
//! relative precision for points within `1e-12` of the circle.

use num_complex::Complex64;
// Needed without std; redundant when another crate in the build links std.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// A point of the unit disk, `w = re + i im`.
pub type DiskPoint = Complex64;

/// Returns `Ok(())` when `|w| < 1`.
pub fn check_in_disk(w: DiskPoint) -> Result<()> {
    if w.re.is_finite() && w.im.is_finite() && w.norm_sqr() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisk { re: w.re, im: w.im })
    }
}

/// `1 - |w|²`, factored to avoid cancellation when `|w|` is close to 1.
#[inline]
pub fn one_minus_abs_sq(w: DiskPoint) -> f64 {
    let r = w.norm();
    (1.0 - r) * (1.0 + r)
}

/// The disk automorphism `φ_z(x) = (z - x) / (1 - z̄ x)`.
///
/// `φ_z` is an involution exchanging `z` and `0`.
pub fn mobius_phi(z: DiskPoint, x: DiskPoint) -> Result<DiskPoint> {
    check_in_disk(z)?;
    check_in_disk(x)?;
    Ok(phi_unchecked(z, x))
}

#[inline]
pub(crate) fn phi_unchecked(z: DiskPoint, x: DiskPoint) -> DiskPoint {
    (z - x) / (Complex64::new(1.0, 0.0) - z.conj() * x)
}

/// `(|φ_z(x)|, 1 - |φ_z(x)|²)`, with the second component computed without
/// subtracting nearly equal numbers.
#[inline]
pub(crate) fn pseudo_distance_parts(z: DiskPoint, x: DiskPoint) -> (f64, f64) {
    let denom = (Complex64::new(1.0, 0.0) - z.conj() * x).norm_sqr();
    let a = (z - x).norm_sqr().sqrt() / denom.sqrt();
    let q = one_minus_abs_sq(z) * one_minus_abs_sq(x) / denom;
    (a.min(1.0), q)
}

/// Hyperbolic distance `d_h(z, x) = log((1 + |φ_z(x)|) / (1 - |φ_z(x)|))`.
pub fn hyperbolic_distance(z: DiskPoint, x: DiskPoint) -> Result<f64> {
    check_in_disk(z)?;
    check_in_disk(x)?;
    Ok(distance_unchecked(z, x))
}

#[inline]
pub(crate) fn distance_unchecked(z: DiskPoint, x: DiskPoint) -> f64 {
    let (a, q) = pseudo_distance_parts(z, x);
    // (1 + a) / (1 - a) = 1 + 2a(1 + a) / (1 - a²)
    (2.0 * a * (1.0 + a) / q).ln_1p()
}

/// The weight `T_z(x) = e^{-d_h(z, x)} = (1 - |φ_z(x)|) / (1 + |φ_z(x)|)`.
pub fn weight_t(z: DiskPoint, x: DiskPoint) -> Result<f64> {
    check_in_disk(z)?;
    check_in_disk(x)?;
    Ok(weight_unchecked(z, x))
}

#[inline]
pub(crate) fn weight_unchecked(z: DiskPoint, x: DiskPoint) -> f64 {
    let (a, q) = pseudo_distance_parts(z, x);
    q / ((1.0 + a) * (1.0 + a))
}

/// Euclidean radius `r_N = (e^N - 1) / (e^N + 1) = tanh(N / 2)` of the
/// hyperbolic disk of radius `N` centred at the origin. Expects `n >= 0`.
pub fn shell_radius(n: f64) -> f64 {
    (0.5 * n).tanh()
}

/// `1 - r_N = 2 / (e^N + 1)`, exact where `1 - tanh(N/2)` would cancel.
pub fn shell_radius_complement(n: f64) -> f64 {
    2.0 / (n.exp() + 1.0)
}

/// Index `k` of the shell `k <= d_h(z, x) < k + 1` containing `x`.
pub fn shell_index(z: DiskPoint, x: DiskPoint) -> Result<u32> {
    Ok(shell_of_distance(hyperbolic_distance(z, x)?))
}

#[inline]
pub(crate) fn shell_of_distance(d: f64) -> u32 {
    // Distances are bounded by ~75 for points representable inside the disk.
    d.floor() as u32
}

/// Euclidean radius of the smallest origin-centred disk containing the
/// hyperbolic disk `U_N(z)`, i.e. `tanh((d_h(0, z) + N) / 2)`.
pub fn covering_radius(z: DiskPoint, n: f64) -> Result<f64> {
    let d0 = hyperbolic_distance(Complex64::new(0.0, 0.0), z)?;
    Ok(shell_radius(d0 + n))
}

/// The triple `(s, z, N)` indexing the statistic `Θ_N^{(s,z)}`.
///
/// `N = 0` is accepted and describes the empty statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StatisticParams {
    s: f64,
    z: DiskPoint,
    n: u32,
}

impl StatisticParams {
    pub fn new(s: f64, z: DiskPoint, n: u32) -> Result<Self> {
        if !(s > 1.0 && s < 1.5) {
            return Err(Error::ExponentOutOfRange(s));
        }
        check_in_disk(z)?;
        Ok(Self { s, z, n })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn z(&self) -> DiskPoint {
        self.z
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Same `(s, z)` with a different shell count.
    pub fn with_n(&self, n: u32) -> Self {
        Self { n, ..*self }
    }

    /// `r_N` for this shell count.
    pub fn radius(&self) -> f64 {
        shell_radius(f64::from(self.n))
    }

    /// `|z|⁴ + 4|z|² + 1`, the centre-dependent numerator shared by the
    /// expectation asymptotics.
    pub fn centre_polynomial(&self) -> f64 {
        let a2 = self.z.norm_sqr();
        a2 * a2 + 4.0 * a2 + 1.0
    }

    /// `(1 - |z|²)²`.
    pub fn centre_denominator(&self) -> f64 {
        let q = one_minus_abs_sq(self.z);
        q * q
    }
}
