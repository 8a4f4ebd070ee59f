//! Zero counting by the argument principle.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use num_complex::Complex64;
use num_traits::Zero;
// Needed without std; redundant when another crate in the build links std.
#[allow(unused_imports)]
use num_traits::Float;

use super::poly::eval;
use crate::error::{Error, Result};

/// Deepest bisection of a single contour step.
const MAX_REFINEMENT_DEPTH: u32 = 40;

/// Number of zeros of `Σ a_k w^k` in `|w| < radius`, as the winding number
/// of `p(radius e^{iθ})` around the origin.
///
/// The phase is tracked on an initial grid of `max(64, 8·degree)` angles;
/// any step whose phase increment exceeds π/4 is bisected until it does not.
/// A step still above π/2 after [`MAX_REFINEMENT_DEPTH`] bisections, or an
/// exact zero on the contour, yields [`Error::ContourTooClose`].
pub fn winding_count(coeffs: &[Complex64], radius: f64) -> Result<usize> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument("contour radius must be positive"));
    }
    let degree = coeffs.len().saturating_sub(1);
    let n = (8 * degree).max(64);
    let at = |theta: f64| eval(coeffs, Complex64::from_polar(radius, theta));
    let too_close = Error::ContourTooClose { radius };

    let mut total = 0.0;
    let mut theta0 = 0.0;
    let mut p0 = at(theta0);
    if p0.is_zero() {
        return Err(too_close);
    }
    for k in 1..=n {
        let theta1 = TAU * k as f64 / n as f64;
        let p1 = at(theta1);
        if p1.is_zero() {
            return Err(too_close);
        }
        total += phase_increment(&at, theta0, p0, theta1, p1, 0).ok_or(too_close.clone())?;
        theta0 = theta1;
        p0 = p1;
    }
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.25 || rounded < 0.0 {
        return Err(too_close);
    }
    Ok(rounded as usize)
}

fn phase_increment(
    at: &impl Fn(f64) -> Complex64,
    t0: f64,
    p0: Complex64,
    t1: f64,
    p1: Complex64,
    depth: u32,
) -> Option<f64> {
    let step = (p1 * p0.conj()).arg();
    if step.abs() <= FRAC_PI_4 {
        return Some(step);
    }
    if depth >= MAX_REFINEMENT_DEPTH {
        return (step.abs() <= FRAC_PI_2).then_some(step);
    }
    let tm = 0.5 * (t0 + t1);
    let pm = at(tm);
    if pm.is_zero() {
        return None;
    }
    Some(phase_increment(at, t0, p0, tm, pm, depth + 1)? + phase_increment(at, tm, pm, t1, p1, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_counts() {
        let p = [c(-0.25, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(winding_count(&p, 0.9).unwrap(), 2);
        assert_eq!(winding_count(&p, 0.4).unwrap(), 0);
    }

    #[test]
    fn monomial_counts_all_at_origin() {
        let mut p = alloc::vec![c(0.0, 0.0); 41];
        p[40] = c(1.0, 0.0);
        assert_eq!(winding_count(&p, 0.5).unwrap(), 40);
    }

    #[test]
    fn root_on_contour_is_reported() {
        let p = [c(-0.5, 0.0), c(1.0, 0.0)];
        assert!(matches!(winding_count(&p, 0.5), Err(Error::ContourTooClose { .. })));
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(winding_count(&[c(1.0, 0.0)], 0.0).is_err());
    }
}
