//! Horner-type evaluation of complex polynomials `Σ a_k w^k`, coefficients
//! stored lowest degree first.

use num_complex::Complex64;
use num_traits::Zero;

/// Degree above which [`eval`] switches to compensated Horner.
pub const COMPENSATED_DEGREE: usize = 2000;

/// Plain Horner evaluation.
#[inline]
pub fn horner(coeffs: &[Complex64], w: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::zero(), |acc, &a| acc * w + a)
}

/// `(p(w), p'(w))` in one Horner pass.
#[inline]
pub fn horner_with_derivative(coeffs: &[Complex64], w: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in coeffs.iter().rev() {
        dp = dp * w + p;
        p = p * w + a;
    }
    (p, dp)
}

/// `Σ |a_k| r^k`, the natural scale of `|p(w)|` on `|w| = r`.
#[inline]
pub fn abs_horner(coeffs: &[Complex64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, libm::fma(a, b, -p))
}

/// Compensated Horner scheme: the result is as accurate as if computed in
/// twice the working precision, then rounded.
pub fn compensated_horner(coeffs: &[Complex64], w: Complex64) -> Complex64 {
    let mut s = Complex64::zero();
    let mut c = Complex64::zero();
    for &a in coeffs.iter().rev() {
        let (p1, e1) = two_prod(s.re, w.re);
        let (p2, e2) = two_prod(s.im, w.im);
        let (p3, e3) = two_prod(s.re, w.im);
        let (p4, e4) = two_prod(s.im, w.re);
        let (re, e5) = two_sum(p1, -p2);
        let (im, e6) = two_sum(p3, p4);
        let (sr, f1) = two_sum(re, a.re);
        let (si, f2) = two_sum(im, a.im);
        let err = Complex64::new(e1 - e2 + e5 + f1, e3 + e4 + e6 + f2);
        c = c * w + err;
        s = Complex64::new(sr, si);
    }
    s + c
}

/// `p(w)`, compensated when the degree exceeds [`COMPENSATED_DEGREE`].
#[inline]
pub fn eval(coeffs: &[Complex64], w: Complex64) -> Complex64 {
    if coeffs.len() > COMPENSATED_DEGREE + 1 {
        compensated_horner(coeffs, w)
    } else {
        horner(coeffs, w)
    }
}

/// Newton correction `p(w) / p'(w)` together with the backward-error test
/// value `|p(w)| / Σ |a_k| |w|^k`.
///
/// Outside the unit circle the reversed polynomial `w^M p(1/w)` is used so
/// that large `|w|` cannot overflow.
pub fn newton_ratio(coeffs: &[Complex64], w: Complex64) -> (Complex64, f64) {
    let m = coeffs.len() - 1;
    let compensated = coeffs.len() > COMPENSATED_DEGREE + 1;
    let r = w.norm();
    if r <= 1.0 {
        let (mut p, dp) = horner_with_derivative(coeffs, w);
        if compensated {
            p = compensated_horner(coeffs, w);
        }
        let scale = abs_horner(coeffs, r);
        (p / dp, p.norm() / scale)
    } else {
        // q(v) = Σ a_{M-k} v^k = v^M p(1/v);  p'/p (w) = v (M - v q'(v)/q(v))
        let v = w.inv();
        let mut q = Complex64::zero();
        let mut dq = Complex64::zero();
        for &a in coeffs.iter() {
            dq = dq * v + q;
            q = q * v + a;
        }
        if compensated {
            q = reversed_compensated(coeffs, v);
        }
        let scale = coeffs.iter().fold(0.0, |acc, a| acc * v.norm() + a.norm());
        let ratio_inv = v * (Complex64::new(m as f64, 0.0) - v * dq / q);
        (ratio_inv.inv(), q.norm() / scale)
    }
}

fn reversed_compensated(coeffs: &[Complex64], v: Complex64) -> Complex64 {
    let rev: alloc::vec::Vec<Complex64> = coeffs.iter().rev().copied().collect();
    compensated_horner(&rev, v)
}
