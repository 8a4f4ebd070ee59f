//! Aberth–Ehrlich simultaneous iteration for all roots of a complex
//! polynomial.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Zero;
// Needed without std; redundant when another crate in the build links std.
#[allow(unused_imports)]
use num_traits::Float;

use super::poly::newton_ratio;
use crate::error::{Error, Result};

/// Iteration controls for [`aberth_roots`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AberthOptions {
    pub max_iterations: usize,
    /// A root stops moving once its correction is below `tol * |w|`.
    pub relative_tol: f64,
}

impl Default for AberthOptions {
    fn default() -> Self {
        Self { max_iterations: 200, relative_tol: 1e-13 }
    }
}

/// All roots of `Σ a_k w^k` (lowest degree first), with multiplicity.
///
/// Exact zero coefficients at either end are deflated first: trailing zeros
/// of `a` contribute roots at the origin, leading zeros lower the degree.
/// Returns [`Error::RootsNotConverged`] if some root is still moving after
/// `max_iterations` sweeps.
pub fn aberth_roots(coeffs: &[Complex64], opts: AberthOptions) -> Result<Vec<Complex64>> {
    let top = match coeffs.iter().rposition(|a| !a.is_zero()) {
        Some(t) => t,
        None => return Err(Error::InvalidArgument("zero polynomial has no well-defined roots")),
    };
    let low = coeffs.iter().position(|a| !a.is_zero()).unwrap_or(0);
    let mut roots = alloc::vec![Complex64::zero(); low];
    let poly = &coeffs[low..=top];
    let degree = poly.len() - 1;
    match degree {
        0 => return Ok(roots),
        1 => {
            roots.push(-poly[0] / poly[1]);
            return Ok(roots);
        }
        _ => {}
    }

    let mut w = initial_guesses(poly);
    let mut done = alloc::vec![false; degree];
    // Backward-error floor: |p(w)| at or below this many ulps of Σ|a_k||w|^k
    // is indistinguishable from zero.
    let noise = 4.0 * (degree as f64 + 1.0) * f64::EPSILON;
    let mut pending = degree;
    for _ in 0..opts.max_iterations {
        for i in 0..degree {
            if done[i] {
                continue;
            }
            let wi = w[i];
            let (ratio, backward) = newton_ratio(poly, wi);
            if backward <= noise || !ratio.is_finite() {
                done[i] = true;
                pending -= 1;
                continue;
            }
            let mut repulsion = Complex64::zero();
            for (j, &wj) in w.iter().enumerate() {
                if j != i {
                    let d = wi - wj;
                    repulsion += d.conj() / d.norm_sqr();
                }
            }
            let corr = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if corr.is_finite() {
                w[i] = wi - corr;
            }
            if corr.norm() <= opts.relative_tol * w[i].norm() {
                done[i] = true;
                pending -= 1;
            }
        }
        if pending == 0 {
            roots.extend_from_slice(&w);
            return Ok(roots);
        }
    }
    Err(Error::RootsNotConverged { iterations: opts.max_iterations, unconverged: pending })
}

/// Starting points on circles given by the upper convex hull (Newton
/// polygon) of `(k, log|a_k|)`; each hull edge spanning `m` indices puts `m`
/// points on a circle of radius `(|a_i| / |a_j|)^{1/m}`.
fn initial_guesses(poly: &[Complex64]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = poly
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(k, a)| (k, a.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while hull.len() >= 2 {
            let (k1, l1) = hull[hull.len() - 2];
            let (k2, l2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly above the chord
            let cross = (k2 as f64 - k1 as f64) * (p.1 - l1) - (l2 - l1) * (p.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(poly.len() - 1);
    for (edge, pair) in hull.windows(2).enumerate() {
        let (i, li) = pair[0];
        let (j, lj) = pair[1];
        let m = j - i;
        let radius = ((li - lj) / m as f64).exp();
        let offset = 0.7 + 1.3 * edge as f64;
        for t in 0..m {
            let theta = TAU * t as f64 / m as f64 + offset;
            guesses.push(Complex64::from_polar(radius, theta));
        }
    }
    guesses
}
